#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qinv/pattern.hpp"
#include "qinv/rng.hpp"

using namespace qinv;

namespace {

Pattern identity_pattern(int n) {
    Pattern p(n, n);
    for (int i = 0; i < n; ++i) p.set(i, i, true);
    return p;
}

// All patterns of the given shape, by bitmask. Only used up to 3x3.
std::vector<Pattern> all_patterns(int rows, int cols) {
    std::vector<Pattern> out;
    const int cells = rows * cols;
    for (unsigned mask = 0; mask < (1u << cells); ++mask) {
        Pattern p(rows, cols);
        for (int c = 0; c < cells; ++c) {
            if (mask & (1u << c)) p.set(c / cols, c % cols, true);
        }
        out.push_back(std::move(p));
    }
    return out;
}

// Random numeric matrix with positive entries exactly on the support of g.
Matrix positive_instance(const Pattern& g, Rng& rng) {
    Matrix m = Matrix::Zero(g.rows, g.cols);
    for (int i = 0; i < g.rows; ++i) {
        for (int j = 0; j < g.cols; ++j) {
            if (g.at(i, j)) m(i, j) = 0.5 + rng.uniform();
        }
    }
    return m;
}

}  // namespace

TEST_CASE("bool_product basics") {
    const Pattern full = Pattern::from_rows({{1, 1}, {1, 1}});
    const Pattern lower = Pattern::from_rows({{1, 0}, {1, 1}});

    CHECK(bool_product(identity_pattern(2), full) == full);
    CHECK(bool_product(identity_pattern(2), lower) == lower);
    CHECK(bool_product(Pattern::from_rows({{1, 0}, {0, 1}}), full) == full);
    // lower-triangular support is closed under products
    CHECK(bool_product(lower, lower) == lower);

    CHECK_THROWS_AS(bool_product(Pattern(2, 3), Pattern(2, 2)), DimensionError);
}

TEST_CASE("bool_product is associative up to 3x3") {
    // exhaustive over random conformable triples would be 2^27; sample instead
    Rng rng(7);
    for (int trial = 0; trial < 500; ++trial) {
        const int a = 1 + static_cast<int>(rng.below(3));
        const int b = 1 + static_cast<int>(rng.below(3));
        const int c = 1 + static_cast<int>(rng.below(3));
        const int d = 1 + static_cast<int>(rng.below(3));
        Pattern A(a, b), B(b, c), C(c, d);
        for (auto* p : {&A, &B, &C}) {
            for (int i = 0; i < p->rows; ++i) {
                for (int j = 0; j < p->cols; ++j) p->set(i, j, rng.uniform() < 0.5);
            }
        }
        CHECK(bool_product(bool_product(A, B), C) == bool_product(A, bool_product(B, C)));
    }
}

TEST_CASE("pattern_qi_check on known instances") {
    const Pattern lower = Pattern::from_rows({{1, 0}, {1, 1}});
    CHECK(pattern_qi_check(lower, lower).qi);

    const QiReport bad =
        pattern_qi_check(Pattern::from_rows({{1, 0}, {0, 1}}), Pattern::from_rows({{1, 1}, {1, 1}}));
    CHECK_FALSE(bad.qi);
    REQUIRE(bad.witness_controller.has_value());
    REQUIRE(bad.witness_indices.size() == 4);

    // S = {0} is QI under anything
    CHECK(pattern_qi_check(Pattern(2, 2), Pattern::from_rows({{1, 1}, {1, 1}})).qi);
}

TEST_CASE("pattern witness exposes the violation for generic positive plants") {
    Rng rng(11);
    int found = 0;
    for (const auto& s : all_patterns(2, 2)) {
        for (const auto& g : all_patterns(2, 2)) {
            const QiReport r = pattern_qi_check(s, g);
            if (r.qi) continue;
            ++found;
            const Matrix k = *r.witness_controller;
            const Matrix gn = positive_instance(g, rng);
            const Matrix kgk = k * gn * k;
            // support of KGK must exceed S somewhere
            bool exceeds = false;
            for (int i = 0; i < s.rows; ++i) {
                for (int j = 0; j < s.cols; ++j) {
                    if (!s.at(i, j) && std::abs(kgk(i, j)) > 1e-12) exceeds = true;
                }
            }
            CHECK(exceeds);
        }
    }
    CHECK(found > 0);
}

TEST_CASE("pattern_to_basis produces canonical units") {
    CHECK(pattern_to_basis(Pattern(2, 2)).empty());

    const SubspaceBasis diag = pattern_to_basis(Pattern::from_rows({{1, 0}, {0, 1}}));
    REQUIRE(diag.size() == 2);
    CHECK(diag.elements[0](0, 0) == 1.0);
    CHECK(diag.elements[1](1, 1) == 1.0);

    const SubspaceBasis row = pattern_to_basis(Pattern::from_rows({{1, 1}, {0, 0}}));
    REQUIRE(row.size() == 2);
    CHECK(row.elements[0](0, 0) == 1.0);
    CHECK(row.elements[1](0, 1) == 1.0);
}

TEST_CASE("pattern test agrees with the numeric subspace test, all patterns up to 3x3") {
    Rng rng(13);
    int checked = 0;
    for (int rows = 1; rows <= 3; ++rows) {
        for (int cols = 1; cols <= 3; ++cols) {
            if (rows * cols > 6) continue;  // keep the sweep affordable
            const auto ss = all_patterns(rows, cols);
            const auto gs = all_patterns(cols, rows);
            for (const auto& s : ss) {
                // thin out the G sweep for the bigger shapes
                for (std::size_t gi = 0; gi < gs.size(); gi += (rows * cols >= 6 ? 7 : 1)) {
                    const auto& g = gs[gi];
                    const bool structural = pattern_qi_check(s, g).qi;
                    const Matrix gn = positive_instance(g, rng);
                    const bool numeric =
                        subspace_qi_check(pattern_to_basis(s), gn, 1e-9).qi;
                    CHECK(structural == numeric);
                    ++checked;
                }
            }
        }
    }
    CHECK(checked > 1000);
}

TEST_CASE("pattern_to_fir_basis spans the pattern at every lag") {
    const Pattern lower = Pattern::from_rows({{1, 0}, {1, 1}});
    const FirSubspace s = pattern_to_fir_basis(lower, 3);
    CHECK(s.size() == 3u * 4u);
    CHECK(s.horizon() == 3);
    // a lower-triangular FIR system must project onto itself
    FirTransferMatrix x = FirTransferMatrix::zero(2, 2, 3);
    x.tap(0)(1, 0) = 2.0;
    x.tap(2)(0, 0) = -1.5;
    x.tap(3)(1, 1) = 0.25;
    CHECK(s.project(x).second == doctest::Approx(0.0).epsilon(1e-12));
}
