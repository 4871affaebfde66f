#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qinv/pattern.hpp"
#include "qinv/rng.hpp"
#include "qinv/synthesis.hpp"

#include <cmath>

using namespace qinv;

namespace {

FirTransferMatrix scalar_fir(std::initializer_list<double> taps) {
    std::vector<Matrix> ms;
    for (double v : taps) ms.push_back(Matrix::Constant(1, 1, v));
    return FirTransferMatrix(std::move(ms));
}

Matrix random_matrix(int rows, int cols, Rng& rng) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) m(i, j) = rng.normal();
    }
    return m;
}

FirTransferMatrix random_fir(int rows, int cols, int horizon, Rng& rng, bool strictly_causal,
                             double scale) {
    FirTransferMatrix x = FirTransferMatrix::zero(rows, cols, horizon);
    for (int k = strictly_causal ? 1 : 0; k <= horizon; ++k) {
        x.tap(k) = scale * random_matrix(rows, cols, rng);
    }
    return x;
}

}  // namespace

TEST_CASE("rank_checks on static blocks") {
    Rng rng(41);

    StaticPlant p;
    p.p11 = Matrix::Zero(2, 1);
    p.p12 = Matrix::Identity(2, 2);
    p.p21 = random_matrix(2, 1, rng);
    p.g = Matrix::Zero(2, 2);
    const AssumptionReport ok = rank_checks(p);
    CHECK(ok.p12_left_invertible);

    // wide P12 (2x4) cannot have full column rank; tall P21 (4x1) cannot
    // have full row rank
    StaticPlant wide;
    wide.p11 = Matrix::Zero(2, 1);
    wide.p12 = random_matrix(2, 4, rng);
    wide.p21 = random_matrix(4, 1, rng);
    wide.g = random_matrix(4, 4, rng);
    const AssumptionReport r = rank_checks(wide);
    CHECK_FALSE(r.p12_left_invertible);
    CHECK_FALSE(r.p21_right_invertible);
    CHECK(r.p12_frequency_samples.size() == 1);

    // tall Gaussian block: full column rank almost surely
    StaticPlant tall;
    tall.p11 = Matrix::Zero(4, 2);
    tall.p12 = random_matrix(4, 2, rng);
    tall.p21 = random_matrix(2, 2, rng);
    tall.g = random_matrix(2, 2, rng);
    const AssumptionReport t = rank_checks(tall);
    CHECK(t.p12_left_invertible);
    CHECK(t.p12_frequency_samples[0].second > 0.0);
}

TEST_CASE("rank_checks on FIR plants samples frequencies") {
    Rng rng(42);
    FirPlant p;
    p.p11 = random_fir(2, 2, 4, rng, false, 1.0);
    p.p12 = random_fir(2, 2, 4, rng, false, 1.0);
    p.p21 = random_fir(2, 2, 4, rng, false, 1.0);
    p.g = random_fir(2, 2, 4, rng, true, 0.5);
    const AssumptionReport r = rank_checks(p, 32);
    CHECK(r.p12_frequency_samples.size() == 32);
    CHECK(r.p21_frequency_samples.size() == 32);
    CHECK(r.p12_left_invertible);  // random square blocks: generically invertible
    CHECK(r.d12_full_column_rank);

    // a pure delay block has full rank at every frequency but a singular
    // lag-0 tap
    FirPlant d = p;
    d.p12 = FirTransferMatrix::zero(2, 2, 2);
    d.p12.tap(1) = Matrix::Identity(2, 2);
    const AssumptionReport rd = rank_checks(d, 16);
    CHECK(rd.p12_left_invertible);
    CHECK_FALSE(rd.d12_full_column_rank);
}

TEST_CASE("h2_model_match: exact matching when S is everything") {
    Rng rng(43);
    const int h = 6;
    FirPlant p;
    p.p11 = random_fir(2, 2, h, rng, false, 1.0);
    p.p12 = FirTransferMatrix::identity(2, 0);
    p.p21 = FirTransferMatrix::identity(2, 0);
    p.g = random_fir(2, 2, h, rng, true, 0.3);
    const FirSubspace s = pattern_to_fir_basis(Pattern::from_rows({{1, 1}, {1, 1}}), h);

    const SynthesisResult r = h2_model_match(p, s, h);
    CHECK(tap_distance(r.q_opt, p.p11) <= 1e-9);
    CHECK(r.objective <= 1e-9);
    CHECK(r.q_membership_residual <= 1e-9);
    CHECK(r.normal_equation_residual <= 1e-8);

    // recovered controller reproduces Q under h_G
    const FirTransferMatrix q_back = fir_hmap(p.g, r.controller, h);
    CHECK(tap_distance(q_back, r.q_opt) <= 1e-9);
}

TEST_CASE("h2_model_match: separable diagonal instance") {
    Rng rng(44);
    const int h = 5;
    FirPlant p;
    p.p11 = random_fir(2, 2, h, rng, false, 1.0);
    p.p12 = FirTransferMatrix::identity(2, 0);
    p.p21 = FirTransferMatrix::identity(2, 0);
    p.g = random_fir(2, 2, h, rng, true, 0.3);
    // make G diagonal so the diagonal subspace is QI under it
    for (int k = 0; k <= h; ++k) {
        p.g.tap(k)(0, 1) = p.g.tap(k)(1, 0) = 0.0;
    }
    const FirSubspace s = pattern_to_fir_basis(Pattern::from_rows({{1, 0}, {0, 1}}), h);

    const SynthesisResult r = h2_model_match(p, s, h);
    // Q* is the diagonal part of P11; objective is the off-diagonal H2 mass
    double off = 0.0;
    for (int k = 0; k <= h; ++k) {
        CHECK(std::abs(r.q_opt.tap(k)(0, 0) - p.p11.tap(k)(0, 0)) <= 1e-8);
        CHECK(std::abs(r.q_opt.tap(k)(1, 1) - p.p11.tap(k)(1, 1)) <= 1e-8);
        CHECK(std::abs(r.q_opt.tap(k)(0, 1)) <= 1e-10);
        off += p.p11.tap(k)(0, 1) * p.p11.tap(k)(0, 1) +
               p.p11.tap(k)(1, 0) * p.p11.tap(k)(1, 0);
    }
    CHECK(r.objective == doctest::Approx(std::sqrt(off)).epsilon(1e-8));
}

TEST_CASE("h2_model_match: P12 = 0 yields the minimum-norm zero parameter") {
    Rng rng(45);
    const int h = 4;
    FirPlant p;
    p.p11 = random_fir(1, 1, h, rng, false, 1.0);
    p.p12 = FirTransferMatrix::zero(1, 1, 0);
    p.p21 = FirTransferMatrix::identity(1, 0);
    p.g = random_fir(1, 1, h, rng, true, 0.3);
    const FirSubspace s = pattern_to_fir_basis(Pattern::from_rows({{1}}), h);

    const SynthesisResult r = h2_model_match(p, s, h);
    CHECK(fir_h2_norm(r.q_opt) <= 1e-12);
    CHECK(r.objective == doctest::Approx(fir_h2_norm(p.p11.with_horizon(h))));
}

TEST_CASE("h2_model_match refuses non-QI subspaces with a witness") {
    Rng rng(46);
    const int h = 4;
    FirPlant p;
    p.p11 = random_fir(2, 2, h, rng, false, 1.0);
    p.p12 = FirTransferMatrix::identity(2, 0);
    p.p21 = FirTransferMatrix::identity(2, 0);
    p.g = random_fir(2, 2, h, rng, true, 0.5);  // full strictly causal
    const FirSubspace s = pattern_to_fir_basis(Pattern::from_rows({{1, 0}, {0, 1}}), h);

    try {
        h2_model_match(p, s, h);
        FAIL("expected QiRefusalError");
    } catch (const QiRefusalError& e) {
        CHECK_FALSE(e.report.qi);
        CHECK(e.report.witness_controller.has_value());
        CHECK(std::string(e.what()).find("not quadratically invariant") != std::string::npos);
    }
}

TEST_CASE("no random feasible parameter beats the reported optimum") {
    Rng rng(47);
    const int h = 5;
    FirPlant p;
    p.p11 = random_fir(2, 2, h, rng, false, 1.0);
    p.p12 = random_fir(2, 2, 2, rng, false, 0.8);
    p.p21 = random_fir(2, 2, 2, rng, false, 0.8);
    p.g = random_fir(2, 2, h, rng, true, 0.3);
    for (int k = 0; k <= h; ++k) p.g.tap(k)(0, 1) = p.g.tap(k)(1, 0) = 0.0;
    const FirSubspace s = pattern_to_fir_basis(Pattern::from_rows({{1, 0}, {0, 1}}), h);

    const SynthesisResult r = h2_model_match(p, s, h);
    auto objective_of = [&](const FirTransferMatrix& q) {
        const FirTransferMatrix t = fir_mul(fir_mul(p.p12, q, h), p.p21, h);
        return fir_h2_norm(p.p11.with_horizon(h) - t);
    };
    CHECK(objective_of(r.q_opt) == doctest::Approx(r.objective).epsilon(1e-10));
    for (int trial = 0; trial < 2000; ++trial) {
        Vector c(s.size());
        for (Eigen::Index m = 0; m < c.size(); ++m) c[m] = 3.0 * rng.normal();
        CHECK(objective_of(s.combine(c)) >= r.objective - 1e-9);
    }
}

TEST_CASE("recover_controller") {
    // Q = 0 -> K = 0
    Rng rng(48);
    const FirTransferMatrix g = random_fir(2, 2, 6, rng, true, 0.4);
    CHECK(fir_h2_norm(recover_controller(g, FirTransferMatrix::zero(2, 2, 6), 6)) == 0.0);

    // scalar geometric series
    const double gv = 0.5, qv = 0.7;
    const FirTransferMatrix k = recover_controller(scalar_fir({0.0, gv}), scalar_fir({qv}), 5);
    for (int m = 0; m <= 5; ++m) {
        CHECK(k.tap(m)(0, 0) ==
              doctest::Approx(-std::pow(qv, m + 1) * std::pow(gv, m)).epsilon(1e-12));
    }

    // round trip: h_G(recover_controller(G, Q)) = Q
    for (int trial = 0; trial < 20; ++trial) {
        const FirTransferMatrix q = random_fir(2, 2, 6, rng, false, 0.4);
        const FirTransferMatrix rec = recover_controller(g, q, 6);
        CHECK(tap_distance(fir_hmap(g, rec, 6), q) <= 1e-9);
    }
}
