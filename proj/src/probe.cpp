#include "qinv/probe.hpp"

#include "qinv/kdtree.hpp"
#include "qinv/rng.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

namespace qinv {

namespace {

std::vector<std::pair<double, double>> broadcast_ranges(
    const std::vector<std::pair<double, double>>& ranges, std::size_t dim) {
    require(!ranges.empty(), "sample_subspace: ranges must be nonempty");
    if (ranges.size() == 1) {
        return std::vector<std::pair<double, double>>(dim, ranges[0]);
    }
    require(ranges.size() == dim, "sample_subspace: one range per basis element required");
    return ranges;
}

Vector flatten_row_major(const Matrix& m) {
    Vector v(m.size());
    Eigen::Index idx = 0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) v[idx++] = m(i, j);
    }
    return v;
}

}  // namespace

SampleSet sample_subspace(const SubspaceBasis& basis, const Matrix& g, SampleScheme scheme,
                          const std::vector<std::pair<double, double>>& ranges, int count,
                          std::uint64_t seed, double cond_tol) {
    SampleSet out;
    out.meta.scheme = scheme;
    out.meta.seed = seed;
    out.meta.requested = count;

    if (basis.empty()) {
        // The trivial subspace has a single member.
        out.controllers.push_back(Matrix::Zero(g.cols(), g.rows()));
        out.coefficients = Matrix::Zero(1, 0);
        out.meta.description = "trivial subspace {0}";
        return out;
    }

    const std::size_t dim = basis.size();
    const auto rg = broadcast_ranges(ranges, dim);
    out.meta.ranges = rg;

    std::vector<Vector> coeff_list;
    if (scheme == SampleScheme::grid) {
        require(count >= 1, "sample_subspace: grid needs at least one point per dimension");
        double total = 1.0;
        for (std::size_t k = 0; k < dim; ++k) total *= count;
        require(total <= 1e7, "sample_subspace: grid would exceed 1e7 points");
        std::vector<int> idx(dim, 0);
        while (true) {
            Vector c(dim);
            for (std::size_t k = 0; k < dim; ++k) {
                const auto [lo, hi] = rg[k];
                c[static_cast<Eigen::Index>(k)] =
                    count == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * idx[k] / (count - 1);
            }
            coeff_list.push_back(std::move(c));
            std::size_t k = 0;
            for (; k < dim; ++k) {
                if (++idx[k] < count) break;
                idx[k] = 0;
            }
            if (k == dim) break;
        }
        out.meta.description = "grid, " + std::to_string(count) + " points per dimension";
    } else {
        Rng rng(seed);
        for (int i = 0; i < count; ++i) {
            Vector c(dim);
            for (std::size_t k = 0; k < dim; ++k) {
                const auto [lo, hi] = rg[k];
                c[static_cast<Eigen::Index>(k)] = rng.uniform(lo, hi);
            }
            coeff_list.push_back(std::move(c));
        }
        out.meta.description = "uniform random, " + std::to_string(count) + " samples";
    }

    std::vector<Vector> kept;
    for (const auto& c : coeff_list) {
        Matrix k = basis.combine(c);
        if (in_domain_m(g, k, cond_tol)) {
            out.controllers.push_back(std::move(k));
            kept.push_back(c);
        } else {
            ++out.meta.excluded;
        }
    }
    out.coefficients.resize(static_cast<Eigen::Index>(kept.size()),
                            static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < kept.size(); ++i) {
        out.coefficients.row(static_cast<Eigen::Index>(i)) = kept[i].transpose();
    }
    return out;
}

PointCloud probe_image(const StaticPlant& p, const SampleSet& samples) {
    p.validate();
    PointCloud cloud;
    cloud.meta = samples.meta;
    const Eigen::Index n = static_cast<Eigen::Index>(samples.controllers.size());
    cloud.points.resize(n, static_cast<Eigen::Index>(p.nz()) * p.nw());
    cloud.params = samples.coefficients;
    for (Eigen::Index i = 0; i < n; ++i) {
        cloud.points.row(i) =
            flatten_row_major(closed_loop(p, samples.controllers[static_cast<std::size_t>(i)]))
                .transpose();
    }
    return cloud;
}

namespace {

double max_nn_spacing(const Matrix& points, const KdTree& tree) {
    if (points.rows() <= 1) return 0.0;
    double cov = 0.0;
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        cov = std::max(cov, tree.nearest(points.row(i).transpose(), i).distance);
    }
    return cov;
}

// One representative point index per occupied cell of a spatial hash,
// coarsened until at most `cap` cells are occupied. Deterministic.
std::vector<Eigen::Index> hash_representatives(const Matrix& points, int cap) {
    const Eigen::Index n = points.rows();
    const Eigen::Index d = points.cols();
    const Vector lo = points.colwise().minCoeff().transpose();
    const Vector hi = points.colwise().maxCoeff().transpose();
    int div = 64;
    while (div >= 1) {
        std::map<std::vector<long>, Eigen::Index> cells;
        for (Eigen::Index i = 0; i < n; ++i) {
            std::vector<long> key(static_cast<std::size_t>(d));
            for (Eigen::Index j = 0; j < d; ++j) {
                const double w = hi[j] - lo[j];
                key[static_cast<std::size_t>(j)] =
                    w <= 0.0 ? 0
                             : std::min<long>(div - 1, static_cast<long>(
                                                           (points(i, j) - lo[j]) / w * div));
            }
            cells.try_emplace(std::move(key), i);
            if (static_cast<int>(cells.size()) > 4 * cap) break;  // too fine, coarsen
        }
        if (static_cast<int>(cells.size()) <= cap || div == 1) {
            std::vector<Eigen::Index> reps;
            reps.reserve(cells.size());
            for (const auto& [key, idx] : cells) reps.push_back(idx);
            std::sort(reps.begin(), reps.end());
            return reps;
        }
        div /= 2;
    }
    return {};
}

}  // namespace

ProbeReport convexity_probe(const PointCloud& cloud, double reject_tol,
                            const ConvexityProbeOptions& options) {
    ProbeReport report;
    report.reject_tol = reject_tol;
    const Eigen::Index n = cloud.size();
    if (n <= 1) {
        report.detail = "fewer than two points; trivially pass";
        return report;
    }
    const Matrix& pts = cloud.points;
    const Eigen::Index d = cloud.dim();
    KdTree tree(pts);
    report.coverage_radius = max_nn_spacing(pts, tree);
    const Vector lo = pts.colwise().minCoeff().transpose();
    const Vector hi = pts.colwise().maxCoeff().transpose();
    report.bbox_diagonal = (hi - lo).norm();
    report.hull_margin = options.hull_margin_frac * report.bbox_diagonal;

    // Support directions for the interior test: principal axes of a
    // deterministic subsample plus seeded random unit directions.
    std::vector<Vector> dirs;
    {
        const Eigen::Index stride = std::max<Eigen::Index>(1, n / 2000);
        const Eigen::Index m = (n + stride - 1) / stride;
        Matrix sub(m, d);
        for (Eigen::Index i = 0; i < m; ++i) sub.row(i) = pts.row(i * stride);
        const Vector mean = sub.colwise().mean().transpose();
        sub.rowwise() -= mean.transpose();
        Eigen::JacobiSVD<Matrix> svd(sub, Eigen::ComputeThinV);
        for (Eigen::Index k = 0; k < svd.matrixV().cols(); ++k) {
            if (svd.singularValues()[k] > 1e-12 * svd.singularValues()[0]) {
                dirs.push_back(svd.matrixV().col(k));
                dirs.push_back(-svd.matrixV().col(k));
            }
        }
        Rng rng(options.seed);
        for (int k = 0; k < options.support_directions; ++k) {
            Vector u(d);
            for (Eigen::Index j = 0; j < d; ++j) u[j] = rng.normal();
            const double un = u.norm();
            if (un > 0.0) dirs.push_back(u / un);
        }
    }
    Vector support(static_cast<Eigen::Index>(dirs.size()));
    for (std::size_t k = 0; k < dirs.size(); ++k) {
        support[static_cast<Eigen::Index>(k)] = (pts * dirs[k]).maxCoeff();
    }
    auto interior = [&](const Vector& m) {
        for (std::size_t k = 0; k < dirs.size(); ++k) {
            if (m.dot(dirs[k]) > support[static_cast<Eigen::Index>(k)] - report.hull_margin) {
                return false;
            }
        }
        return true;
    };

    // A gap no larger than the cloud's own worst nearest-neighbour spacing
    // is indistinguishable from sampling sparseness, so witnesses must clear
    // both thresholds.
    const double gap_floor = std::max(reject_tol, report.coverage_radius);
    auto consider = [&](Eigen::Index a, Eigen::Index b, bool check_interior) {
        const Vector mid = 0.5 * (pts.row(a) + pts.row(b)).transpose();
        const double gap = tree.nearest(mid).distance;
        if (gap <= gap_floor) return;
        if (check_interior && !interior(mid)) return;
        if (!report.witness || gap > report.witness->gap) {
            report.witness = ProbeWitness{a, b, mid, gap};
        }
    };

    // Antithetic pairs are symmetric about the origin by construction, so
    // their midpoints cannot be boundary artifacts; skip the margin test.
    if (cloud.meta.antithetic) {
        for (Eigen::Index i = 0; i + 1 < n; i += 2) consider(i, i + 1, false);
    }
    std::vector<Eigen::Index> reps = hash_representatives(pts, options.representative_cap);
    for (Eigen::Index j = 0; j < d; ++j) {
        Eigen::Index imin = 0, imax = 0;
        pts.col(j).minCoeff(&imin);
        pts.col(j).maxCoeff(&imax);
        reps.push_back(imin);
        reps.push_back(imax);
    }
    std::sort(reps.begin(), reps.end());
    reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
    for (std::size_t a = 0; a < reps.size(); ++a) {
        for (std::size_t b = a + 1; b < reps.size(); ++b) {
            consider(reps[a], reps[b], true);
        }
    }

    if (report.witness) {
        report.verdict = ProbeVerdict::nonconvex_witness;
        report.detail = "midpoint of two cloud members is farther than reject_tol "
                        "from every cloud point";
    } else if (report.coverage_radius > reject_tol) {
        report.verdict = ProbeVerdict::inconclusive;
        report.detail = "no witness found but sampling is too sparse to decide "
                        "(coverage_radius > reject_tol)";
    } else {
        report.verdict = ProbeVerdict::pass;
        report.detail = "no midpoint gap beyond reject_tol at the achieved coverage";
    }
    return report;
}

ProbeReport star_shape_probe(const PointCloud& cloud, const std::vector<double>& alphas,
                             double tol) {
    ProbeReport report;
    report.reject_tol = tol;
    const Eigen::Index n = cloud.size();
    if (n == 0) {
        report.detail = "empty cloud";
        return report;
    }
    const Matrix& pts = cloud.points;
    KdTree tree(pts);
    report.coverage_radius = max_nn_spacing(pts, tree);
    const Vector lo = pts.colwise().minCoeff().transpose();
    const Vector hi = pts.colwise().maxCoeff().transpose();
    report.bbox_diagonal = (hi - lo).norm();

    for (Eigen::Index i = 0; i < n; ++i) {
        for (double alpha : alphas) {
            const Vector scaled = alpha * pts.row(i).transpose();
            const double gap = tree.nearest(scaled).distance;
            if (gap > tol && (!report.witness || gap > report.witness->gap)) {
                report.witness = ProbeWitness{i, -1, scaled, gap};
                report.detail = "alpha * v leaves the sampled set at alpha=" +
                                std::to_string(alpha);
            }
        }
    }
    if (report.witness) {
        report.verdict = ProbeVerdict::nonconvex_witness;
    } else if (report.coverage_radius > tol) {
        report.verdict = ProbeVerdict::inconclusive;
        report.detail = "no violation found but coverage_radius exceeds tol";
    } else {
        report.verdict = ProbeVerdict::pass;
        report.detail = "all scaled points are within tol of the sampled set";
    }
    return report;
}

EqualityReport set_equality_probe(const PointCloud& a, const PointCloud& b, double tol,
                                  bool matched) {
    require(a.dim() == b.dim(), "set_equality_probe: point dimensions must agree");
    EqualityReport report;
    report.tol = tol;
    KdTree ta(a.points), tb(b.points);
    double h = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        h = std::max(h, tb.nearest(a.points.row(i).transpose()).distance);
    }
    for (Eigen::Index i = 0; i < b.size(); ++i) {
        h = std::max(h, ta.nearest(b.points.row(i).transpose()).distance);
    }
    report.hausdorff = h;
    if (matched) {
        require(a.size() == b.size(),
                "set_equality_probe: matched mode needs equally many points");
        double mp = 0.0;
        for (Eigen::Index i = 0; i < a.size(); ++i) {
            mp = std::max(mp, (a.points.row(i) - b.points.row(i)).norm());
        }
        report.max_pointwise = mp;
        report.equal = mp <= tol;
        report.detail = "matched-parameter comparison";
    } else {
        report.equal = h <= tol;
        report.detail = "symmetric nearest-neighbour comparison";
    }
    return report;
}

}  // namespace qinv
