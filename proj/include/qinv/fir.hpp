#pragma once

#include "qinv/types.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace qinv {

/// Causal discrete-time LTI map truncated to a finite horizon, stored as
/// impulse-response taps [X(0), X(1), ..., X(N)]. Acting on a signal u,
/// (Xu)(t) = sum_{k=0..min(t,N)} X(k) u(t-k).
struct FirTransferMatrix {
    FirTransferMatrix() = default;
    explicit FirTransferMatrix(std::vector<Matrix> taps_in);

    /// All-zero system with the given shape and horizon.
    static FirTransferMatrix zero(int rows, int cols, int horizon);
    /// Identity at lag 0, zero elsewhere.
    static FirTransferMatrix identity(int n, int horizon);
    /// Single-tap (constant) system.
    static FirTransferMatrix constant(const Matrix& m);

    int horizon() const { return static_cast<int>(taps.size()) - 1; }
    int rows() const { return taps.empty() ? 0 : static_cast<int>(taps[0].rows()); }
    int cols() const { return taps.empty() ? 0 : static_cast<int>(taps[0].cols()); }

    const Matrix& tap(int k) const { return taps[static_cast<std::size_t>(k)]; }
    Matrix& tap(int k) { return taps[static_cast<std::size_t>(k)]; }

    /// Copy truncated or zero-padded to the given horizon.
    FirTransferMatrix with_horizon(int horizon) const;

    /// True iff the lag-0 tap is zero (the map is strictly causal).
    bool strictly_causal(double tol = 0.0) const;

    /// Transfer-matrix value sum_k X(k) e^{-i omega k}.
    Eigen::MatrixXcd at_frequency(double omega) const;

    FirTransferMatrix& operator+=(const FirTransferMatrix& other);
    FirTransferMatrix& operator-=(const FirTransferMatrix& other);
    FirTransferMatrix& operator*=(double s);

    std::vector<Matrix> taps;
};

FirTransferMatrix operator+(FirTransferMatrix a, const FirTransferMatrix& b);
FirTransferMatrix operator-(FirTransferMatrix a, const FirTransferMatrix& b);
FirTransferMatrix operator*(double s, FirTransferMatrix a);

/// Largest tap-wise difference ||A(k) - B(k)||_inf over the shared horizon
/// (shorter operand zero-padded).
double tap_distance(const FirTransferMatrix& a, const FirTransferMatrix& b);

/// Convolution product truncated to out_horizon:
/// (AB)(k) = sum_{j=0..k} A(j) B(k-j), taps beyond either horizon are zero.
FirTransferMatrix fir_mul(const FirTransferMatrix& a, const FirTransferMatrix& b,
                          int out_horizon);

/// Causal inverse of (I - X) on the horizon: returns Y with
/// ((I - X) Y)(0) = I and ((I - X) Y)(k) = 0 for 1 <= k <= out_horizon.
/// Throws SingularResolventError when I - X(0) is singular.
FirTransferMatrix fir_causal_inverse(const FirTransferMatrix& x, int out_horizon);

/// sqrt(sum_k ||X(k)||_F^2): the H2 norm of the truncated impulse response.
double fir_h2_norm(const FirTransferMatrix& x);

/// Finite basis of a FIR controller subspace on a shared horizon.
/// Orthonormalized tap-wise under the Frobenius inner product.
struct FirSubspace {
    FirSubspace() = default;
    explicit FirSubspace(std::vector<FirTransferMatrix> raw_elements);

    std::size_t size() const { return elements.size(); }
    bool empty() const { return elements.empty(); }
    int horizon() const { return elements.empty() ? 0 : elements[0].horizon(); }
    int rows() const { return elements.empty() ? 0 : elements[0].rows(); }
    int cols() const { return elements.empty() ? 0 : elements[0].cols(); }

    FirTransferMatrix combine(const Vector& coeffs) const;

    /// Projection of X onto span(elements), taps compared up to the subspace
    /// horizon and beyond it against zero. Returns projection and residual.
    std::pair<FirTransferMatrix, double> project(const FirTransferMatrix& x) const;

    std::vector<FirTransferMatrix> elements;
    bool orthonormalized = false;
};

/// How an inertness verdict was certified. Structural certification means
/// G(0) B(0) = 0 for every basis element, which covers the whole subspace;
/// otherwise only the basis and sampled combinations were checked.
enum class InertnessCertificate { structural, sampled };

struct InertnessReport {
    bool inert = true;
    InertnessCertificate certificate = InertnessCertificate::structural;
    double worst_radius = 0.0;
    int offending_element = -1;  // -1: none, or a sampled combination
    std::string detail;
};

/// Checks r((G K)(0)) < 1 - margin for every basis element of S and for
/// random_combinations seeded random unit combinations.
InertnessReport inertness_check(const FirTransferMatrix& g, const FirSubspace& s,
                                double margin = 1e-9, int random_combinations = 32,
                                std::uint64_t seed = 42);

/// Feedback map on FIR systems: -K * (I - GK)^{-1} truncated to out_horizon.
/// Throws InertnessError when r((GK)(0)) >= 1.
FirTransferMatrix fir_hmap(const FirTransferMatrix& g, const FirTransferMatrix& k,
                           int out_horizon);

/// Quadratic-invariance verdict for a FIR subspace, with a FIR witness.
struct FirQiReport {
    bool qi = true;
    std::optional<FirTransferMatrix> witness_controller;
    double witness_residual = 0.0;
    std::vector<int> witness_indices;
    std::string detail;
};

/// QI test over the truncated subspace: every symmetrized basis product
/// B_i G B_j + B_j G B_i, computed up to the subspace horizon, must lie in
/// span(S) within tol * (1 + ||product||). Requires inertness_check to pass.
FirQiReport fir_subspace_qi_check(const FirSubspace& s, const FirTransferMatrix& g,
                                  double tol = 1e-9);

/// Spectral radius of a (small) square matrix via its eigenvalues.
double spectral_radius(const Matrix& m);

}  // namespace qinv
