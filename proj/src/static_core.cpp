#include "qinv/static_core.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace qinv {

void StaticPlant::validate() const {
    require(p11.rows() == p12.rows(), "StaticPlant: P11 and P12 must share n_z");
    require(p11.cols() == p21.cols(), "StaticPlant: P11 and P21 must share n_w");
    require(g.rows() == p21.rows(), "StaticPlant: G and P21 must share n_y");
    require(g.cols() == p12.cols(), "StaticPlant: G and P12 must share n_u");
}

SubspaceBasis::SubspaceBasis(std::vector<Matrix> raw_elements) {
    if (raw_elements.empty()) {
        orthonormalized = true;
        return;
    }
    const auto r = raw_elements[0].rows();
    const auto c = raw_elements[0].cols();
    double max_norm = 0.0;
    for (const auto& e : raw_elements) {
        require(e.rows() == r && e.cols() == c, "SubspaceBasis: elements must share dimensions");
        max_norm = std::max(max_norm, e.norm());
    }
    // modified Gram-Schmidt, dropping elements that are numerically dependent
    for (auto& e : raw_elements) {
        Matrix v = e;
        for (const auto& b : elements) {
            v -= (b.array() * v.array()).sum() * b;
        }
        const double n = v.norm();
        if (n > 1e-12 * (1.0 + max_norm)) {
            elements.push_back(v / n);
        }
    }
    orthonormalized = true;
}

Matrix SubspaceBasis::combine(const Vector& coeffs) const {
    require(static_cast<std::size_t>(coeffs.size()) == elements.size(),
            "SubspaceBasis::combine: coefficient count mismatch");
    Matrix out = Matrix::Zero(rows(), cols());
    for (Eigen::Index m = 0; m < coeffs.size(); ++m) {
        out += coeffs[m] * elements[static_cast<std::size_t>(m)];
    }
    return out;
}

namespace {

// Smallest/largest singular values of I - GK.
std::pair<double, double> resolvent_extremes(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& s = svd.singularValues();
    return {s(s.size() - 1), s(0)};
}

}  // namespace

bool in_domain_m(const Matrix& g, const Matrix& k, double cond_tol) {
    require(g.cols() == k.rows() && g.rows() == k.cols(),
            "in_domain_m: G (ny x nu) and K (nu x ny) must conform");
    const Matrix m = Matrix::Identity(g.rows(), g.rows()) - g * k;
    const auto [smin, smax] = resolvent_extremes(m);
    return smin >= cond_tol * smax && smax > 0.0;
}

Matrix hmap(const Matrix& g, const Matrix& k, double cond_tol) {
    require(g.cols() == k.rows() && g.rows() == k.cols(),
            "hmap: G (ny x nu) and K (nu x ny) must conform");
    const Matrix m = Matrix::Identity(g.rows(), g.rows()) - g * k;
    const auto [smin, smax] = resolvent_extremes(m);
    if (!(smin >= cond_tol * smax) || smax == 0.0) {
        throw SingularResolventError("hmap: I - GK is numerically singular", smin, smax);
    }
    // -K (I-GK)^{-1} via a solve on the transposed system
    return -(m.transpose().partialPivLu().solve(k.transpose())).transpose();
}

Matrix closed_loop(const StaticPlant& p, const Matrix& k, double cond_tol) {
    p.validate();
    require(k.rows() == p.nu() && k.cols() == p.ny(),
            "closed_loop: controller must be n_u x n_y");
    return p.p11 - p.p12 * hmap(p.g, k, cond_tol) * p.p21;
}

Matrix homotopy_g(const Matrix& g, const Matrix& k, double alpha, double cond_tol) {
    require(g.cols() == k.rows() && g.rows() == k.cols(),
            "homotopy_g: G and K must conform");
    const Matrix m = Matrix::Identity(g.rows(), g.rows()) - (1.0 - alpha) * (g * k);
    const auto [smin, smax] = resolvent_extremes(m);
    if (!(smin >= cond_tol * smax) || smax == 0.0) {
        throw SingularResolventError("homotopy_g: resolvent singular at alpha=" +
                                         std::to_string(alpha),
                                     smin, smax);
    }
    return -(m.transpose().partialPivLu().solve(k.transpose())).transpose();
}

std::pair<Matrix, double> project_onto_subspace(const SubspaceBasis& basis, const Matrix& x) {
    if (basis.empty()) {
        return {Matrix::Zero(x.rows(), x.cols()), x.norm()};
    }
    require(basis.rows() == x.rows() && basis.cols() == x.cols(),
            "project_onto_subspace: dimension mismatch");
    Matrix proj = Matrix::Zero(x.rows(), x.cols());
    for (const auto& b : basis.elements) {
        proj += (b.array() * x.array()).sum() * b;
    }
    return {proj, (x - proj).norm()};
}

namespace {

double normalized_membership_residual(const SubspaceBasis& basis, const Matrix& x) {
    const double nx = x.norm();
    if (nx == 0.0) return 0.0;
    return project_onto_subspace(basis, x).second / nx;
}

}  // namespace

QiReport subspace_qi_check(const SubspaceBasis& basis, const Matrix& g, double tol) {
    QiReport report;
    if (basis.empty()) {
        report.detail = "empty basis: S = {0} is quadratically invariant";
        return report;
    }
    require(g.rows() == basis.cols() && g.cols() == basis.rows(),
            "subspace_qi_check: G must be n_y x n_u for an n_u x n_y basis");

    const int n = static_cast<int>(basis.size());
    double worst = 0.0;
    int worst_i = -1, worst_j = -1;
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const Matrix& bi = basis.elements[static_cast<std::size_t>(i)];
            const Matrix& bj = basis.elements[static_cast<std::size_t>(j)];
            const Matrix prod =
                (i == j) ? Matrix(bi * g * bi) : Matrix(bi * g * bj + bj * g * bi);
            const double res = project_onto_subspace(basis, prod).second;
            const double scaled = res / (1.0 + prod.norm());
            if (scaled > worst) {
                worst = scaled;
                worst_i = i;
                worst_j = j;
            }
        }
    }
    if (worst <= tol) {
        report.detail = "all symmetrized basis products lie in span(S)";
        return report;
    }

    report.qi = false;
    report.witness_indices = {worst_i, worst_j};
    const Matrix& bi = basis.elements[static_cast<std::size_t>(worst_i)];
    const Matrix& bj = basis.elements[static_cast<std::size_t>(worst_j)];
    if (worst_i == worst_j) {
        report.witness_controller = bi;
    } else {
        // Either B_i + B_j or B_i - B_j carries at least the symmetrized
        // residual; take the larger of the two.
        const Matrix kp = bi + bj;
        const Matrix km = bi - bj;
        const double rp = normalized_membership_residual(basis, kp * g * kp);
        const double rm = normalized_membership_residual(basis, km * g * km);
        report.witness_controller = (rp >= rm) ? kp : km;
    }
    const Matrix kgk = *report.witness_controller * g * *report.witness_controller;
    report.witness_residual = normalized_membership_residual(basis, kgk);
    report.detail = "KGK leaves span(S) for the witness controller";
    return report;
}

}  // namespace qinv
