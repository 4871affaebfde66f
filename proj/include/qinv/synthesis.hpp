#pragma once

#include "qinv/fir.hpp"
#include "qinv/static_core.hpp"
#include "qinv/types.hpp"

#include <utility>
#include <vector>

namespace qinv {

/// Four-block FIR plant on a shared truncation horizon.
struct FirPlant {
    FirTransferMatrix p11;  // n_z x n_w
    FirTransferMatrix p12;  // n_z x n_u
    FirTransferMatrix p21;  // n_y x n_w
    FirTransferMatrix g;    // n_y x n_u

    void validate() const;
};

/// Invertibility-side assumptions: left-invertibility of P12 and
/// right-invertibility of P21, decided from singular values, plus the
/// lag-0 (D-matrix) rank checks for FIR plants.
struct AssumptionReport {
    bool p12_left_invertible = false;
    bool p21_right_invertible = false;
    bool d12_full_column_rank = false;
    bool d21_full_row_rank = false;
    // (frequency, smallest singular value) samples per block; static plants
    // record the single entry at frequency 0.
    std::vector<std::pair<double, double>> p12_frequency_samples;
    std::vector<std::pair<double, double>> p21_frequency_samples;
    double tolerance = 0.0;
};

AssumptionReport rank_checks(const StaticPlant& p, double tol = 1e-9);
AssumptionReport rank_checks(const FirPlant& p, int freq_count = 64, double tol = 1e-9);

/// Result of the convex model-matching solve over the feedback parameter.
struct SynthesisResult {
    FirTransferMatrix q_opt;       // optimal parameter, a member of S
    double objective = 0.0;        // ||P11 - P12 Q* P21||_{H2, horizon}
    FirTransferMatrix controller;  // recovered K with h_G(K) = Q*
    double q_membership_residual = 0.0;
    double normal_equation_residual = 0.0;
};

/// Thrown when synthesis is requested for a subspace that is not
/// quadratically invariant under the plant's G; carries the witness.
class QiRefusalError : public std::runtime_error {
  public:
    QiRefusalError(const std::string& msg, FirQiReport report_in)
        : std::runtime_error(msg), report(std::move(report_in)) {}

    FirQiReport report;
};

/// H2 model matching min_{Q in S} ||P11 - P12 Q P21|| on the horizon,
/// solved as a linear least-squares problem in the basis coefficients
/// (minimum-norm solution when rank deficient). Requires S quadratically
/// invariant under P.g; refuses with QiRefusalError otherwise. The
/// controller achieving the optimal closed loop is recovered as h_G(Q*).
SynthesisResult h2_model_match(const FirPlant& p, const FirSubspace& s, int horizon,
                               double qi_tol = 1e-9);

/// Inverts the parameterization: K = h_G(Q), so that h_G(K) = Q.
FirTransferMatrix recover_controller(const FirTransferMatrix& g, const FirTransferMatrix& q,
                                     int horizon);

}  // namespace qinv
