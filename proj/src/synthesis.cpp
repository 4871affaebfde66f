#include "qinv/synthesis.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <numbers>

namespace qinv {

void FirPlant::validate() const {
    require(p11.rows() == p12.rows(), "FirPlant: P11 and P12 must share n_z");
    require(p11.cols() == p21.cols(), "FirPlant: P11 and P21 must share n_w");
    require(g.rows() == p21.rows(), "FirPlant: G and P21 must share n_y");
    require(g.cols() == p12.cols(), "FirPlant: G and P12 must share n_u");
}

namespace {

// smallest and largest singular values
std::pair<double, double> sv_extremes(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& s = svd.singularValues();
    return {s(s.size() - 1), s(0)};
}

std::pair<double, double> sv_extremes_cplx(const Eigen::MatrixXcd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& s = svd.singularValues();
    return {s(s.size() - 1), s(0)};
}

bool full_column_rank(double smin, double smax, Eigen::Index rows, Eigen::Index cols,
                      double tol) {
    return rows >= cols && smax > 0.0 && smin >= tol * smax;
}

}  // namespace

AssumptionReport rank_checks(const StaticPlant& p, double tol) {
    p.validate();
    AssumptionReport report;
    report.tolerance = tol;

    const auto [s12min, s12max] = sv_extremes(p.p12);
    report.p12_left_invertible = full_column_rank(s12min, s12max, p.p12.rows(), p.p12.cols(), tol);
    report.p12_frequency_samples.emplace_back(0.0, s12min);

    const auto [s21min, s21max] = sv_extremes(p.p21);
    report.p21_right_invertible =
        full_column_rank(s21min, s21max, p.p21.cols(), p.p21.rows(), tol);
    report.p21_frequency_samples.emplace_back(0.0, s21min);

    report.d12_full_column_rank = report.p12_left_invertible;
    report.d21_full_row_rank = report.p21_right_invertible;
    return report;
}

AssumptionReport rank_checks(const FirPlant& p, int freq_count, double tol) {
    p.validate();
    require(freq_count >= 2, "rank_checks: freq_count must be at least 2");
    AssumptionReport report;
    report.tolerance = tol;
    report.p12_left_invertible = true;
    report.p21_right_invertible = true;

    for (int j = 0; j < freq_count; ++j) {
        const double omega = std::numbers::pi * j / (freq_count - 1);
        const auto [s12min, s12max] = sv_extremes_cplx(p.p12.at_frequency(omega));
        report.p12_frequency_samples.emplace_back(omega, s12min);
        if (!full_column_rank(s12min, s12max, p.p12.rows(), p.p12.cols(), tol)) {
            report.p12_left_invertible = false;
        }
        const auto [s21min, s21max] = sv_extremes_cplx(p.p21.at_frequency(omega));
        report.p21_frequency_samples.emplace_back(omega, s21min);
        if (!full_column_rank(s21min, s21max, p.p21.cols(), p.p21.rows(), tol)) {
            report.p21_right_invertible = false;
        }
    }

    const auto [d12min, d12max] = sv_extremes(p.p12.tap(0));
    report.d12_full_column_rank =
        full_column_rank(d12min, d12max, p.p12.rows(), p.p12.cols(), tol);
    const auto [d21min, d21max] = sv_extremes(p.p21.tap(0));
    report.d21_full_row_rank = full_column_rank(d21min, d21max, p.p21.cols(), p.p21.rows(), tol);
    return report;
}

SynthesisResult h2_model_match(const FirPlant& p, const FirSubspace& s, int horizon,
                               double qi_tol) {
    p.validate();
    require(!s.empty(), "h2_model_match: subspace basis must be nonempty");
    require(s.rows() == p.p12.cols() && s.cols() == p.p21.rows(),
            "h2_model_match: subspace elements must be n_u x n_y");

    const FirQiReport qi = fir_subspace_qi_check(s, p.g, qi_tol);
    if (!qi.qi) {
        throw QiRefusalError(
            "h2_model_match: S is not quadratically invariant under G "
            "(witness residual " +
                std::to_string(qi.witness_residual) +
                "); the parameterization over S is exact only under quadratic invariance",
            qi);
    }

    // Stack taps of P12 * B_m * P21 as columns of a dense least-squares system.
    const int m = static_cast<int>(s.size());
    const int nz = p.p11.rows();
    const int nw = p.p11.cols();
    const Eigen::Index rows = static_cast<Eigen::Index>(horizon + 1) * nz * nw;
    Matrix a(rows, m);
    for (int c = 0; c < m; ++c) {
        const FirTransferMatrix t =
            fir_mul(fir_mul(p.p12, s.elements[static_cast<std::size_t>(c)], horizon), p.p21,
                    horizon);
        for (int k = 0; k <= horizon; ++k) {
            a.block(static_cast<Eigen::Index>(k) * nz * nw, c, nz * nw, 1) =
                t.tap(k).reshaped();
        }
    }
    Vector rhs(rows);
    const FirTransferMatrix p11h = p.p11.with_horizon(horizon);
    for (int k = 0; k <= horizon; ++k) {
        rhs.segment(static_cast<Eigen::Index>(k) * nz * nw, nz * nw) = p11h.tap(k).reshaped();
    }

    // Minimum-norm least-squares solution via complete orthogonal decomposition.
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a);
    const Vector coeffs = cod.solve(rhs);

    SynthesisResult result;
    result.q_opt = s.combine(coeffs).with_horizon(horizon);
    const Vector residual = rhs - a * coeffs;
    result.objective = residual.norm();
    result.normal_equation_residual =
        (a.transpose() * residual).norm() / (1.0 + (a.transpose() * rhs).norm());
    result.q_membership_residual = s.project(result.q_opt).second;
    result.controller = recover_controller(p.g, result.q_opt, horizon);
    return result;
}

FirTransferMatrix recover_controller(const FirTransferMatrix& g, const FirTransferMatrix& q,
                                     int horizon) {
    return fir_hmap(g, q, horizon);
}

}  // namespace qinv
