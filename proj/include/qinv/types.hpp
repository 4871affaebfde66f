#pragma once

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qinv {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thrown when matrix or tap dimensions do not conform.
class DimensionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when I - GK (or a homotopy resolvent) is numerically singular.
/// Carries the singular-value ratio that triggered the rejection.
class SingularResolventError : public std::runtime_error {
  public:
    SingularResolventError(const std::string& msg, double smin, double smax)
        : std::runtime_error(msg + " (sigma_min=" + std::to_string(smin) +
                             ", sigma_max=" + std::to_string(smax) + ")"),
          sigma_min(smin),
          sigma_max(smax) {}

    double sigma_min;
    double sigma_max;
};

/// Thrown when a FIR subspace fails the inertness requirement, i.e. the
/// lag-0 loop gain has spectral radius >= 1 for some controller.
class InertnessError : public std::runtime_error {
  public:
    InertnessError(const std::string& msg, double radius)
        : std::runtime_error(msg + " (spectral_radius=" + std::to_string(radius) + ")"),
          spectral_radius(radius) {}

    double spectral_radius;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw DimensionError(msg);
}

}  // namespace qinv
