#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qinv/examples.hpp"
#include "qinv/pattern.hpp"
#include "qinv/rng.hpp"
#include "qinv/static_core.hpp"

using namespace qinv;

namespace {

Matrix random_matrix(int rows, int cols, Rng& rng) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) m(i, j) = rng.normal();
    }
    return m;
}

// Draws (G, K) until I - GK is comfortably invertible.
std::pair<Matrix, Matrix> random_domain_pair(int dim, Rng& rng) {
    while (true) {
        Matrix g = random_matrix(dim, dim, rng);
        Matrix k = random_matrix(dim, dim, rng);
        if (in_domain_m(g, k, 1e-6)) return {g, k};
    }
}

}  // namespace

TEST_CASE("in_domain_m") {
    const Matrix g = Matrix::Constant(1, 1, 1.0);
    CHECK(in_domain_m(g, Matrix::Zero(1, 1)));
    CHECK_FALSE(in_domain_m(g, Matrix::Constant(1, 1, 1.0)));  // I - GK = 0

    // tied controller from the bundled example: t = 1, s = 0
    Matrix k = Matrix::Zero(4, 4);
    k(0, 0) = k(1, 1) = 1.0;
    CHECK(in_domain_m(example_plant_a().g, k));

    CHECK_THROWS_AS(in_domain_m(Matrix::Zero(2, 3), Matrix::Zero(2, 3)), DimensionError);
}

TEST_CASE("hmap scalar and zero cases") {
    const Matrix g = Matrix::Constant(1, 1, 1.0);
    CHECK(hmap(g, Matrix::Zero(1, 1)).isZero());

    const Matrix k = Matrix::Constant(1, 1, 0.5);
    const Matrix h = hmap(g, k);
    CHECK(h(0, 0) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(hmap(g, h)(0, 0) == doctest::Approx(0.5).epsilon(1e-14));

    CHECK_THROWS_AS(hmap(g, Matrix::Constant(1, 1, 1.0)), SingularResolventError);
}

TEST_CASE("hmap block example: tied controller at t=1, s=0") {
    Matrix k = Matrix::Zero(4, 4);
    k(0, 0) = k(1, 1) = 1.0;
    const Matrix h = hmap(example_plant_a().g, k);

    Matrix expected = Matrix::Zero(4, 4);
    expected.row(0) << -0.5, -0.5, 0, 0;
    expected.row(1) << 0.5, -0.5, 0, 0;
    CHECK((h - expected).cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("hmap involution on random pairs") {
    Rng rng(21);
    for (int dim = 1; dim <= 6; ++dim) {
        for (int trial = 0; trial < 60; ++trial) {
            const auto [g, k] = random_domain_pair(dim, rng);
            const Matrix back = hmap(g, hmap(g, k));
            CHECK((back - k).norm() <= 1e-8 * (1.0 + k.norm()));
        }
    }
}

TEST_CASE("closed_loop agrees with the direct formula") {
    Rng rng(22);
    for (int trial = 0; trial < 50; ++trial) {
        StaticPlant p;
        p.p11 = random_matrix(2, 3, rng);
        p.p12 = random_matrix(2, 4, rng);
        p.p21 = random_matrix(5, 3, rng);
        p.g = random_matrix(5, 4, rng);
        Matrix k = 0.2 * random_matrix(4, 5, rng);
        const Matrix via_hmap = closed_loop(p, k);
        const Matrix direct =
            p.p11 + p.p12 * k *
                        (Matrix::Identity(5, 5) - p.g * k).partialPivLu().solve(p.p21);
        CHECK((via_hmap - direct).norm() <= 1e-10 * (1.0 + direct.norm()));
    }
    // K = 0 gives the open loop
    StaticPlant p;
    p.p11 = random_matrix(2, 2, rng);
    p.p12 = random_matrix(2, 3, rng);
    p.p21 = random_matrix(3, 2, rng);
    p.g = random_matrix(3, 3, rng);
    CHECK((closed_loop(p, Matrix::Zero(3, 3)) - p.p11).isZero(0.0));
}

TEST_CASE("closed_loop reproduces the bundled closed forms") {
    const StaticPlant pa = example_plant_a();
    const StaticPlant pb = example_plant_b();
    for (auto [t, s] : {std::pair{0.0, 1.0}, std::pair{1.0, 0.0}, std::pair{0.5, -0.3},
                        std::pair{2.0, 1.5}}) {
        Matrix k = Matrix::Zero(4, 4);
        k(0, 0) = k(1, 1) = t;
        k(2, 2) = k(3, 3) = s;
        CHECK((closed_loop(pa, k) - example_closed_form_a(t, s)).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((closed_loop(pb, k) - example_closed_form_b(t, s)).cwiseAbs().maxCoeff() <= 1e-12);
    }
    // spot values: (t,s) = (0,1) lands on (0,1); (1,0) lands on (1,0)
    Matrix k01 = Matrix::Zero(4, 4);
    k01(2, 2) = k01(3, 3) = 1.0;
    const Matrix c01 = closed_loop(pa, k01);
    CHECK(c01(0, 0) == doctest::Approx(0.0));
    CHECK(c01(1, 0) == doctest::Approx(1.0));
    const Matrix cb01 = closed_loop(pb, k01);
    CHECK(cb01(0, 0) == doctest::Approx(0.0));
    CHECK(cb01(1, 0) == doctest::Approx(0.5));
}

TEST_CASE("homotopy_g endpoints and scalar value") {
    Rng rng(23);
    const auto [g, k] = random_domain_pair(4, rng);
    CHECK((homotopy_g(g, k, 0.0) - hmap(g, k)).norm() <= 1e-12);
    CHECK((homotopy_g(g, k, 1.0) + k).norm() <= 1e-12);

    const Matrix gs = Matrix::Constant(1, 1, 1.0);
    const Matrix ks = Matrix::Constant(1, 1, 0.5);
    CHECK(homotopy_g(gs, ks, 0.5)(0, 0) == doctest::Approx(-2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("project_onto_subspace") {
    const SubspaceBasis e11 = pattern_to_basis(Pattern::from_rows({{1, 0}, {0, 0}}));
    Matrix x = Matrix::Zero(2, 2);
    x(0, 1) = 1.0;
    auto [proj, res] = project_onto_subspace(e11, x);
    CHECK(proj.isZero());
    CHECK(res == doctest::Approx(1.0));

    const SubspaceBasis diag = pattern_to_basis(Pattern::from_rows({{1, 0}, {0, 1}}));
    auto [proj2, res2] = project_onto_subspace(diag, Matrix::Ones(2, 2));
    CHECK((proj2 - Matrix::Identity(2, 2)).isZero(1e-14));
    CHECK(res2 == doctest::Approx(std::sqrt(2.0)));

    // member of the span projects to itself
    auto [proj3, res3] = project_onto_subspace(diag, 3.0 * Matrix::Identity(2, 2));
    CHECK(res3 <= 1e-12);

    // empty basis projects to zero
    auto [proj4, res4] = project_onto_subspace(SubspaceBasis{}, x);
    CHECK(proj4.isZero());
    CHECK(res4 == doctest::Approx(1.0));
}

TEST_CASE("basis orthonormalization drops dependent elements") {
    Matrix a = Matrix::Identity(2, 2);
    Matrix b = 2.0 * Matrix::Identity(2, 2);
    Matrix c = Matrix::Zero(2, 2);
    c(0, 1) = 1.0;
    const SubspaceBasis basis({a, b, c});
    CHECK(basis.size() == 2);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = 0; j < basis.size(); ++j) {
            const double ip = (basis.elements[i].array() * basis.elements[j].array()).sum();
            CHECK(ip == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("subspace_qi_check on the bundled instances") {
    // empty basis: S = {0}
    CHECK(subspace_qi_check(SubspaceBasis{}, Matrix::Ones(2, 2)).qi);

    // tied diag(t,t,s,s) set is not QI under the bundled 4x4 loop matrix
    const QiReport tied = subspace_qi_check(example_tied_basis(), example_plant_a().g);
    CHECK_FALSE(tied.qi);
    REQUIRE(tied.witness_controller.has_value());
    CHECK(tied.witness_residual >= 1e-3);

    // triangular set under triangular plant block is QI
    const SubspaceBasis tri =
        pattern_to_basis(Pattern::from_rows({{1, 0}, {1, 1}}));
    Matrix gt(2, 2);
    gt << 0.7, 0.0, -1.3, 0.4;
    CHECK(subspace_qi_check(tri, gt).qi);
}

TEST_CASE("closure under hmap and the homotopy path on QI instances") {
    Rng rng(29);
    int qi_instances = 0;
    for (int trial = 0; trial < 200 && qi_instances < 20; ++trial) {
        const int nu = 2 + static_cast<int>(rng.below(2));
        const int ny = 2 + static_cast<int>(rng.below(2));
        Pattern s(nu, ny);
        for (int i = 0; i < nu; ++i) {
            for (int j = 0; j < ny; ++j) s.set(i, j, rng.uniform() < 0.5);
        }
        if (s.count() == 0) continue;
        Matrix g = random_matrix(ny, nu, rng);
        const SubspaceBasis basis = pattern_to_basis(s);
        if (!subspace_qi_check(basis, g).qi) continue;
        ++qi_instances;
        for (int sample = 0; sample < 20; ++sample) {
            Vector c(basis.size());
            for (Eigen::Index m = 0; m < c.size(); ++m) c[m] = rng.normal();
            Matrix k = basis.combine(c);
            // keep the loop gain small so the resolvent stays tame
            const double gain = (g * k).norm();
            if (gain > 0.5) k *= 0.5 / gain;
            const Matrix h = hmap(g, k);
            const double res = project_onto_subspace(basis, h).second;
            CHECK(res <= 1e-8 * (1.0 + h.norm()));
            for (int a = 0; a <= 20; ++a) {
                const Matrix ga = homotopy_g(g, k, a / 20.0);
                CHECK(project_onto_subspace(basis, ga).second <= 1e-8 * (1.0 + ga.norm()));
            }
        }
    }
    CHECK(qi_instances >= 10);
}
