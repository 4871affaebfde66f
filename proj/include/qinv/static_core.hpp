#pragma once

#include "qinv/types.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace qinv {

/// Four-block plant. G is the measurement-to-input block (P22 in the usual
/// partition); the closed loop maps disturbances (n_w) to regulated outputs
/// (n_z) through a controller K : n_y -> n_u.
struct StaticPlant {
    Matrix p11;  // n_z x n_w
    Matrix p12;  // n_z x n_u
    Matrix p21;  // n_y x n_w
    Matrix g;    // n_y x n_u

    int nz() const { return static_cast<int>(p11.rows()); }
    int nw() const { return static_cast<int>(p11.cols()); }
    int nu() const { return static_cast<int>(p12.cols()); }
    int ny() const { return static_cast<int>(p21.rows()); }

    /// Throws DimensionError unless the four blocks share consistent shapes.
    void validate() const;
};

/// Finite basis of an n_u x n_y controller subspace. Construction runs
/// modified Gram-Schmidt under the Frobenius inner product, dropping
/// near-dependent elements, so projections are well conditioned.
struct SubspaceBasis {
    SubspaceBasis() = default;
    explicit SubspaceBasis(std::vector<Matrix> raw_elements);

    std::size_t size() const { return elements.size(); }
    bool empty() const { return elements.empty(); }
    int rows() const { return elements.empty() ? 0 : static_cast<int>(elements[0].rows()); }
    int cols() const { return elements.empty() ? 0 : static_cast<int>(elements[0].cols()); }

    /// Linear combination sum_m coeffs[m] * elements[m].
    Matrix combine(const Vector& coeffs) const;

    std::vector<Matrix> elements;
    bool orthonormalized = false;
};

/// Verdict of a quadratic-invariance test, with a concrete witness when the
/// answer is no.
struct QiReport {
    bool qi = true;
    std::optional<Matrix> witness_controller;
    double witness_residual = 0.0;        // ||KGK - proj_S(KGK)||_F / ||KGK||_F
    std::vector<int> witness_indices;     // pattern check: (i,l,j,k); basis check: (i,j)
    std::string detail;
};

/// True iff I - GK is numerically invertible: smallest singular value
/// >= cond_tol * largest.
bool in_domain_m(const Matrix& g, const Matrix& k, double cond_tol = 1e-12);

/// The feedback map h_G(K) = -K (I - GK)^{-1}. Involutive on its domain.
/// Throws SingularResolventError when I - GK fails the cond_tol test.
Matrix hmap(const Matrix& g, const Matrix& k, double cond_tol = 1e-12);

/// Closed-loop map P11 - P12 h_G(K) P21 == P11 + P12 K (I-GK)^{-1} P21.
Matrix closed_loop(const StaticPlant& p, const Matrix& k, double cond_tol = 1e-12);

/// Homotopy g(alpha) = -K (I - (1-alpha) GK)^{-1} connecting h_G(K) at
/// alpha=0 to -K at alpha=1.
Matrix homotopy_g(const Matrix& g, const Matrix& k, double alpha, double cond_tol = 1e-12);

/// Orthogonal projection of X onto span(basis) under the Frobenius inner
/// product. Returns the projection and the residual ||X - proj||_F.
/// An empty basis projects to zero.
std::pair<Matrix, double> project_onto_subspace(const SubspaceBasis& basis, const Matrix& x);

/// Quadratic-invariance test for a subspace given by an arbitrary basis:
/// checks every symmetrized product B_i G B_j + B_j G B_i (and B_i G B_i)
/// for membership in span(basis) within tol * (1 + ||product||_F).
QiReport subspace_qi_check(const SubspaceBasis& basis, const Matrix& g, double tol = 1e-9);

}  // namespace qinv
