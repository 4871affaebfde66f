#include "qinv/fir.hpp"

#include "qinv/rng.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <cmath>

namespace qinv {

FirTransferMatrix::FirTransferMatrix(std::vector<Matrix> taps_in) : taps(std::move(taps_in)) {
    require(!taps.empty(), "FirTransferMatrix: at least one tap required");
    for (const auto& t : taps) {
        require(t.rows() == taps[0].rows() && t.cols() == taps[0].cols(),
                "FirTransferMatrix: all taps must share one shape");
    }
}

FirTransferMatrix FirTransferMatrix::zero(int rows, int cols, int horizon) {
    FirTransferMatrix x;
    x.taps.assign(static_cast<std::size_t>(horizon) + 1, Matrix::Zero(rows, cols));
    return x;
}

FirTransferMatrix FirTransferMatrix::identity(int n, int horizon) {
    FirTransferMatrix x = zero(n, n, horizon);
    x.taps[0] = Matrix::Identity(n, n);
    return x;
}

FirTransferMatrix FirTransferMatrix::constant(const Matrix& m) {
    FirTransferMatrix x;
    x.taps.push_back(m);
    return x;
}

FirTransferMatrix FirTransferMatrix::with_horizon(int horizon) const {
    FirTransferMatrix out = zero(rows(), cols(), horizon);
    const int n = std::min(horizon, this->horizon());
    for (int k = 0; k <= n; ++k) out.taps[static_cast<std::size_t>(k)] = tap(k);
    return out;
}

bool FirTransferMatrix::strictly_causal(double tol) const {
    return taps.empty() || taps[0].cwiseAbs().maxCoeff() <= tol;
}

Eigen::MatrixXcd FirTransferMatrix::at_frequency(double omega) const {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rows(), cols());
    for (int k = 0; k <= horizon(); ++k) {
        out += tap(k) * std::exp(std::complex<double>(0.0, -omega * k));
    }
    return out;
}

FirTransferMatrix& FirTransferMatrix::operator+=(const FirTransferMatrix& other) {
    require(rows() == other.rows() && cols() == other.cols(), "FIR add: shape mismatch");
    if (other.horizon() > horizon()) *this = with_horizon(other.horizon());
    for (int k = 0; k <= other.horizon(); ++k) tap(k) += other.tap(k);
    return *this;
}

FirTransferMatrix& FirTransferMatrix::operator-=(const FirTransferMatrix& other) {
    require(rows() == other.rows() && cols() == other.cols(), "FIR sub: shape mismatch");
    if (other.horizon() > horizon()) *this = with_horizon(other.horizon());
    for (int k = 0; k <= other.horizon(); ++k) tap(k) -= other.tap(k);
    return *this;
}

FirTransferMatrix& FirTransferMatrix::operator*=(double s) {
    for (auto& t : taps) t *= s;
    return *this;
}

FirTransferMatrix operator+(FirTransferMatrix a, const FirTransferMatrix& b) { return a += b; }
FirTransferMatrix operator-(FirTransferMatrix a, const FirTransferMatrix& b) { return a -= b; }
FirTransferMatrix operator*(double s, FirTransferMatrix a) { return a *= s; }

double tap_distance(const FirTransferMatrix& a, const FirTransferMatrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "tap_distance: shape mismatch");
    double d = 0.0;
    const int n = std::max(a.horizon(), b.horizon());
    for (int k = 0; k <= n; ++k) {
        if (k <= a.horizon() && k <= b.horizon()) {
            d = std::max(d, (a.tap(k) - b.tap(k)).cwiseAbs().maxCoeff());
        } else if (k <= a.horizon()) {
            d = std::max(d, a.tap(k).cwiseAbs().maxCoeff());
        } else {
            d = std::max(d, b.tap(k).cwiseAbs().maxCoeff());
        }
    }
    return d;
}

FirTransferMatrix fir_mul(const FirTransferMatrix& a, const FirTransferMatrix& b,
                          int out_horizon) {
    require(a.cols() == b.rows(), "fir_mul: inner dimensions must agree");
    FirTransferMatrix out = FirTransferMatrix::zero(a.rows(), b.cols(), out_horizon);
    for (int k = 0; k <= out_horizon; ++k) {
        const int jmax = std::min(k, a.horizon());
        for (int j = std::max(0, k - b.horizon()); j <= jmax; ++j) {
            out.tap(k) += a.tap(j) * b.tap(k - j);
        }
    }
    return out;
}

FirTransferMatrix fir_causal_inverse(const FirTransferMatrix& x, int out_horizon) {
    require(x.rows() == x.cols(), "fir_causal_inverse: X must be square");
    const int n = x.rows();
    const Matrix head = Matrix::Identity(n, n) - x.tap(0);
    Eigen::FullPivLU<Matrix> lu(head);
    if (!lu.isInvertible()) {
        Eigen::JacobiSVD<Matrix> svd(head);
        const auto& s = svd.singularValues();
        throw SingularResolventError("fir_causal_inverse: I - X(0) is singular",
                                     s(s.size() - 1), s(0));
    }
    FirTransferMatrix y = FirTransferMatrix::zero(n, n, out_horizon);
    y.tap(0) = lu.solve(Matrix::Identity(n, n));
    for (int k = 1; k <= out_horizon; ++k) {
        Matrix rhs = Matrix::Zero(n, n);
        const int jmax = std::min(k, x.horizon());
        for (int j = 1; j <= jmax; ++j) rhs += x.tap(j) * y.tap(k - j);
        y.tap(k) = lu.solve(rhs);
    }
    return y;
}

double fir_h2_norm(const FirTransferMatrix& x) {
    double s = 0.0;
    for (const auto& t : x.taps) s += t.squaredNorm();
    return std::sqrt(s);
}

FirSubspace::FirSubspace(std::vector<FirTransferMatrix> raw_elements) {
    if (raw_elements.empty()) {
        orthonormalized = true;
        return;
    }
    const int r = raw_elements[0].rows();
    const int c = raw_elements[0].cols();
    int h = 0;
    double max_norm = 0.0;
    for (const auto& e : raw_elements) {
        require(e.rows() == r && e.cols() == c, "FirSubspace: elements must share shape");
        h = std::max(h, e.horizon());
        max_norm = std::max(max_norm, fir_h2_norm(e));
    }
    for (auto& e : raw_elements) {
        FirTransferMatrix v = e.with_horizon(h);
        for (const auto& b : elements) {
            double ip = 0.0;
            for (int k = 0; k <= h; ++k) ip += (b.tap(k).array() * v.tap(k).array()).sum();
            for (int k = 0; k <= h; ++k) v.tap(k) -= ip * b.tap(k);
        }
        const double n = fir_h2_norm(v);
        if (n > 1e-12 * (1.0 + max_norm)) {
            v *= 1.0 / n;
            elements.push_back(std::move(v));
        }
    }
    orthonormalized = true;
}

FirTransferMatrix FirSubspace::combine(const Vector& coeffs) const {
    require(static_cast<std::size_t>(coeffs.size()) == elements.size(),
            "FirSubspace::combine: coefficient count mismatch");
    FirTransferMatrix out = FirTransferMatrix::zero(rows(), cols(), horizon());
    for (Eigen::Index m = 0; m < coeffs.size(); ++m) {
        const auto& e = elements[static_cast<std::size_t>(m)];
        for (int k = 0; k <= horizon(); ++k) out.tap(k) += coeffs[m] * e.tap(k);
    }
    return out;
}

std::pair<FirTransferMatrix, double> FirSubspace::project(const FirTransferMatrix& x) const {
    if (empty()) {
        return {FirTransferMatrix::zero(x.rows(), x.cols(), x.horizon()), fir_h2_norm(x)};
    }
    require(x.rows() == rows() && x.cols() == cols(), "FirSubspace::project: shape mismatch");
    const int h = horizon();
    FirTransferMatrix proj = FirTransferMatrix::zero(rows(), cols(), x.horizon());
    for (const auto& b : elements) {
        double ip = 0.0;
        for (int k = 0; k <= std::min(h, x.horizon()); ++k) {
            ip += (b.tap(k).array() * x.tap(k).array()).sum();
        }
        for (int k = 0; k <= std::min(h, x.horizon()); ++k) proj.tap(k) += ip * b.tap(k);
    }
    return {proj, fir_h2_norm(x - proj)};
}

double spectral_radius(const Matrix& m) {
    if (m.rows() == 0) return 0.0;
    Eigen::EigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

InertnessReport inertness_check(const FirTransferMatrix& g, const FirSubspace& s,
                                double margin, int random_combinations, std::uint64_t seed) {
    InertnessReport report;
    if (s.empty()) {
        report.detail = "empty subspace: trivially inert";
        return report;
    }
    require(g.cols() == s.rows() && g.rows() == s.cols(),
            "inertness_check: G and the subspace must conform");

    // Structural case: G(0) B(0) = 0 for all basis elements implies
    // (GK)(0) = 0 for every K in span(S).
    bool structural = true;
    for (const auto& b : s.elements) {
        if ((g.tap(0) * b.tap(0)).cwiseAbs().maxCoeff() > 0.0) {
            structural = false;
            break;
        }
    }
    if (structural) {
        report.certificate = InertnessCertificate::structural;
        report.worst_radius = 0.0;
        report.detail = "G(0) B(0) = 0 for every basis element; certified for all of S";
        return report;
    }

    report.certificate = InertnessCertificate::sampled;
    const int m = static_cast<int>(s.size());
    auto check = [&](const Matrix& k0, int index) {
        const double r = spectral_radius(g.tap(0) * k0);
        if (r > report.worst_radius) {
            report.worst_radius = r;
            report.offending_element = index;
        }
        return r < 1.0 - margin;
    };
    for (int i = 0; i < m; ++i) {
        if (!check(s.elements[static_cast<std::size_t>(i)].tap(0), i)) {
            report.inert = false;
            report.detail = "basis element " + std::to_string(i) +
                            " has lag-0 loop spectral radius >= 1";
            return report;
        }
    }
    Rng rng(seed);
    for (int t = 0; t < random_combinations; ++t) {
        Vector c(m);
        for (int i = 0; i < m; ++i) c[i] = rng.normal();
        c /= c.norm();
        Matrix k0 = Matrix::Zero(s.rows(), s.cols());
        for (int i = 0; i < m; ++i) k0 += c[i] * s.elements[static_cast<std::size_t>(i)].tap(0);
        if (!check(k0, -1)) {
            report.inert = false;
            report.detail = "sampled unit combination has lag-0 loop spectral radius >= 1";
            return report;
        }
    }
    report.detail = "certified for basis elements and " +
                    std::to_string(random_combinations) + " sampled unit combinations";
    return report;
}

FirTransferMatrix fir_hmap(const FirTransferMatrix& g, const FirTransferMatrix& k,
                           int out_horizon) {
    require(g.cols() == k.rows() && g.rows() == k.cols(), "fir_hmap: G and K must conform");
    const FirTransferMatrix gk = fir_mul(g, k, out_horizon);
    const double r = spectral_radius(gk.tap(0));
    if (r >= 1.0) {
        throw InertnessError("fir_hmap: spectral radius of (GK)(0) is not below 1", r);
    }
    const FirTransferMatrix inv = fir_causal_inverse(gk, out_horizon);
    FirTransferMatrix out = fir_mul(k, inv, out_horizon);
    out *= -1.0;
    return out;
}

FirQiReport fir_subspace_qi_check(const FirSubspace& s, const FirTransferMatrix& g,
                                  double tol) {
    FirQiReport report;
    if (s.empty()) {
        report.detail = "empty basis: S = {0} is quadratically invariant";
        return report;
    }
    require(g.rows() == s.cols() && g.cols() == s.rows(),
            "fir_subspace_qi_check: G must map controller outputs back to inputs");

    const auto inert = inertness_check(g, s);
    if (!inert.inert) {
        throw InertnessError("fir_subspace_qi_check: subspace is not inert under G; " +
                                 inert.detail,
                             inert.worst_radius);
    }

    const int h = s.horizon();
    const int n = static_cast<int>(s.size());
    auto normalized_residual = [&](const FirTransferMatrix& x) {
        const double nx = fir_h2_norm(x);
        return nx == 0.0 ? 0.0 : s.project(x).second / nx;
    };

    double worst = 0.0;
    int worst_i = -1, worst_j = -1;
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const auto& bi = s.elements[static_cast<std::size_t>(i)];
            const auto& bj = s.elements[static_cast<std::size_t>(j)];
            FirTransferMatrix prod = fir_mul(fir_mul(bi, g, h), bj, h);
            if (i != j) prod += fir_mul(fir_mul(bj, g, h), bi, h);
            const double res = s.project(prod).second;
            const double scaled = res / (1.0 + fir_h2_norm(prod));
            if (scaled > worst) {
                worst = scaled;
                worst_i = i;
                worst_j = j;
            }
        }
    }
    if (worst <= tol) {
        report.detail = "all symmetrized basis products lie in span(S) up to the horizon";
        return report;
    }

    report.qi = false;
    report.witness_indices = {worst_i, worst_j};
    const auto& bi = s.elements[static_cast<std::size_t>(worst_i)];
    const auto& bj = s.elements[static_cast<std::size_t>(worst_j)];
    if (worst_i == worst_j) {
        report.witness_controller = bi;
    } else {
        const FirTransferMatrix kp = bi + bj;
        const FirTransferMatrix km = bi - bj;
        const double rp = normalized_residual(fir_mul(fir_mul(kp, g, h), kp, h));
        const double rm = normalized_residual(fir_mul(fir_mul(km, g, h), km, h));
        report.witness_controller = (rp >= rm) ? kp : km;
    }
    const auto& w = *report.witness_controller;
    report.witness_residual = normalized_residual(fir_mul(fir_mul(w, g, h), w, h));
    report.detail = "KGK leaves span(S) for the witness controller (truncated test)";
    return report;
}

}  // namespace qinv
