#pragma once

#include "qinv/fir.hpp"
#include "qinv/static_core.hpp"
#include "qinv/types.hpp"

#include <vector>

namespace qinv {

/// Boolean sparsity pattern. entry(i,j) == true means the (i,j) entry of a
/// controller (or plant block) is allowed to be nonzero.
struct Pattern {
    Pattern() = default;
    Pattern(int rows, int cols, bool fill = false)
        : rows(rows), cols(cols), entries(static_cast<std::size_t>(rows) * cols, fill) {}

    static Pattern from_rows(const std::vector<std::vector<int>>& rows);

    bool at(int i, int j) const { return entries[static_cast<std::size_t>(i) * cols + j]; }
    void set(int i, int j, bool v) { entries[static_cast<std::size_t>(i) * cols + j] = v; }
    int count() const;

    bool operator==(const Pattern& other) const = default;

    int rows = 0;
    int cols = 0;
    std::vector<bool> entries;  // row-major
};

/// Support of a matrix product: result(i,k) = OR_j A(i,j) AND B(j,k).
/// Over-approximates the support of any numeric product with these supports.
Pattern bool_product(const Pattern& a, const Pattern& b);

/// Pattern-level quadratic invariance: S is QI under G iff the support of
/// S*G*S is contained in S. Decided generically; a measure-zero set of
/// numeric plants supported on G could cancel the flagged entries.
///
/// On failure the report carries the first violating index quadruple
/// (i,l,j,k) -- S(i,l), G(l,j), S(j,k) allowed but S(i,k) forbidden -- and
/// the unit witness controller E_il + E_jk.
QiReport pattern_qi_check(const Pattern& s, const Pattern& g);

/// One unit-matrix basis element per allowed entry, in row-major order.
SubspaceBasis pattern_to_basis(const Pattern& s);

/// FIR subspace with the sparsity pattern applied at every lag 0..horizon:
/// one single-tap unit basis element per (allowed entry, lag) pair.
FirSubspace pattern_to_fir_basis(const Pattern& s, int horizon);

/// Support pattern of a numeric matrix (|x| > tol).
Pattern support_of(const Matrix& m, double tol = 0.0);

}  // namespace qinv
