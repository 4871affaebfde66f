#include "qinv/examples.hpp"

#include "qinv/rng.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace qinv {

namespace {

Matrix loop_matrix_g() {
    Matrix g(4, 4);
    g << 0, 1, 0, 0,
        -1, 0, 1, 0,
         0, 0, 0, 1,
         1, 0, -1, 0;
    return g;
}

}  // namespace

StaticPlant example_plant_a() {
    StaticPlant p;
    p.p11 = Matrix::Zero(2, 1);
    p.p12.resize(2, 4);
    p.p12 << 0, 2, 0, 0,
             0, 0, 0, -2;
    p.p21.resize(4, 1);
    p.p21 << 0, 1, 0, -1;
    p.g = loop_matrix_g();
    return p;
}

StaticPlant example_plant_b() {
    StaticPlant p;
    p.p11 = Matrix::Zero(2, 1);
    p.p12.resize(2, 4);
    p.p12 << 1, 0, 0, 0,
             0, 0, -1, 0;
    p.p21.resize(4, 1);
    p.p21 << 0, 2, 0, -1;
    p.g = loop_matrix_g();
    return p;
}

SubspaceBasis example_tied_basis() {
    Matrix b1 = Matrix::Zero(4, 4);
    b1(0, 0) = b1(1, 1) = 1.0;
    Matrix b2 = Matrix::Zero(4, 4);
    b2(2, 2) = b2(3, 3) = 1.0;
    return SubspaceBasis({b1, b2});
}

Vector example_closed_form_a(double t, double s) {
    const double d = 1.0 + t * t + s * s;
    Vector v(2);
    v << 2.0 * t / d, 2.0 * s / d;
    return v;
}

Vector example_closed_form_b(double t, double s) {
    const double d = 1.0 + t * t + s * s;
    Vector v(2);
    v << (s * s + 2.0) * t * t / d, s * s * (1.0 - t * t) / d;
    return v;
}

Matrix AffineExampleInstance::closed_loop_full(const Vector& k) const {
    Matrix K = Matrix::Zero(3, 3);
    K(0, 0) = k[0];
    K(1, 1) = k[1];
    K(2, 2) = k[2];
    return closed_loop(plant, K);
}

Matrix AffineExampleInstance::closed_loop_reduced(const Vector& k) const {
    Matrix K = Matrix::Zero(2, 2);
    K(0, 0) = k[0];
    K(1, 0) = k[1];
    K(1, 1) = k[2];
    return closed_loop(reduced_plant, K);
}

AffineExampleInstance make_affine_example(std::uint64_t seed) {
    Rng rng(seed);
    auto draw = [&] { return rng.uniform(-2.0, 2.0); };
    auto draw_away_from_zero = [&] {
        double v = 0.0;
        do {
            v = draw();
        } while (std::abs(v) < 0.3);
        return v;
    };

    AffineExampleInstance ex;
    ex.a = draw();
    ex.b1 = draw_away_from_zero();
    ex.b2 = draw_away_from_zero();
    ex.c1 = draw_away_from_zero();
    ex.c2 = draw_away_from_zero();
    ex.g1 = draw_away_from_zero();
    ex.g2 = draw_away_from_zero();
    ex.g3 = draw_away_from_zero();

    ex.plant.p11 = Matrix::Constant(1, 1, ex.a);
    ex.plant.p12.resize(1, 3);
    ex.plant.p12 << ex.b1, ex.b2, ex.b2;
    ex.plant.p21.resize(3, 1);
    ex.plant.p21 << ex.c1, ex.c1, ex.c2;
    ex.plant.g.resize(3, 3);
    ex.plant.g << ex.g1, 0, 0,
                  ex.g1, 0, 0,
                  ex.g2, ex.g3, ex.g3;

    ex.reduced_plant.p11 = Matrix::Constant(1, 1, ex.a);
    ex.reduced_plant.p12.resize(1, 2);
    ex.reduced_plant.p12 << ex.b1, ex.b2;
    ex.reduced_plant.p21.resize(2, 1);
    ex.reduced_plant.p21 << ex.c1, ex.c2;
    ex.reduced_plant.g.resize(2, 2);
    ex.reduced_plant.g << ex.g1, 0,
                          ex.g2, ex.g3;

    std::vector<Matrix> diag;
    for (int i = 0; i < 3; ++i) {
        Matrix e = Matrix::Zero(3, 3);
        e(i, i) = 1.0;
        diag.push_back(e);
    }
    ex.s_diag = SubspaceBasis(diag);

    std::vector<Matrix> tri;
    for (auto [i, j] : {std::pair{0, 0}, std::pair{1, 0}, std::pair{1, 1}}) {
        Matrix e = Matrix::Zero(2, 2);
        e(i, j) = 1.0;
        tri.push_back(e);
    }
    ex.s_tri = SubspaceBasis(tri);
    return ex;
}

void ExampleReport::add(const std::string& name, bool pass, const std::string& detail) {
    checks.push_back({name, pass, detail});
    all_pass = all_pass && pass;
}

namespace {

// Grid over (t, s) plus a polar ring on t^2 + s^2 = 1, evaluated through the
// closed-loop map. Parameters are recorded as (t, s) pairs.
PointCloud tied_grid_cloud(const StaticPlant& plant, const ReproduceOptions& opt) {
    std::vector<std::pair<double, double>> params;
    const int n = opt.grid_points;
    for (int i = 0; i < n; ++i) {
        const double t = -opt.grid_limit + 2.0 * opt.grid_limit * i / (n - 1);
        for (int j = 0; j < n; ++j) {
            const double s = -opt.grid_limit + 2.0 * opt.grid_limit * j / (n - 1);
            params.emplace_back(t, s);
        }
    }
    for (int i = 0; i < opt.polar_points; ++i) {
        const double th = 2.0 * std::numbers::pi * i / opt.polar_points;
        params.emplace_back(std::cos(th), std::sin(th));
    }

    PointCloud cloud;
    cloud.meta.description = "tied diag(t,t,s,s) grid with unit-circle refinement";
    cloud.meta.scheme = SampleScheme::grid;
    cloud.meta.ranges = {{-opt.grid_limit, opt.grid_limit}};
    cloud.meta.requested = static_cast<int>(params.size());
    std::vector<Vector> pts;
    std::vector<std::pair<double, double>> kept;
    pts.reserve(params.size());
    for (const auto& [t, s] : params) {
        Matrix k = Matrix::Zero(4, 4);
        k(0, 0) = k(1, 1) = t;
        k(2, 2) = k(3, 3) = s;
        if (!in_domain_m(plant.g, k, 1e-9)) {
            ++cloud.meta.excluded;
            continue;
        }
        const Matrix c = closed_loop(plant, k);
        Vector v(c.size());
        Eigen::Index idx = 0;
        for (Eigen::Index r = 0; r < c.rows(); ++r) {
            for (Eigen::Index cc = 0; cc < c.cols(); ++cc) v[idx++] = c(r, cc);
        }
        pts.push_back(v);
        kept.emplace_back(t, s);
    }
    cloud.points.resize(static_cast<Eigen::Index>(pts.size()), pts[0].size());
    cloud.params.resize(static_cast<Eigen::Index>(pts.size()), 2);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        cloud.points.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
        cloud.params(static_cast<Eigen::Index>(i), 0) = kept[i].first;
        cloud.params(static_cast<Eigen::Index>(i), 1) = kept[i].second;
    }
    return cloud;
}

// Per-cloud reject tolerance: at least 1% of the bounding-box diagonal and
// comfortably above the achieved sampling resolution.
double example_reject_tol(const ProbeReport& stats) {
    return std::max(0.01 * stats.bbox_diagonal, 1.5 * stats.coverage_radius);
}

ProbeReport cloud_stats(const PointCloud& cloud) {
    // A probe run with an infinite threshold reports coverage and bbox only.
    return convexity_probe(cloud, std::numeric_limits<double>::infinity());
}

void run_example_ab(ExampleReport& report, const std::string& id,
                    const ReproduceOptions& opt) {
    const bool is_a = id == "a";
    const StaticPlant plant = is_a ? example_plant_a() : example_plant_b();
    const PointCloud cloud = tied_grid_cloud(plant, opt);

    double form_err = 0.0;
    double max_norm = 0.0;
    bool boundary = false;
    for (Eigen::Index i = 0; i < cloud.size(); ++i) {
        const double t = cloud.params(i, 0);
        const double s = cloud.params(i, 1);
        const Vector expect =
            is_a ? example_closed_form_a(t, s) : example_closed_form_b(t, s);
        form_err = std::max(form_err,
                            (cloud.points.row(i).transpose() - expect).cwiseAbs().maxCoeff());
        const double norm = cloud.points.row(i).norm();
        max_norm = std::max(max_norm, norm);
        boundary = boundary || norm >= 1.0 - 1e-6;
    }
    {
        std::ostringstream os;
        os << "max |point - closed form| = " << form_err;
        report.add("closed_form_match", form_err <= opt.tol, os.str());
    }

    const ProbeReport stats = cloud_stats(cloud);
    const double reject = example_reject_tol(stats);
    const ProbeReport probe = convexity_probe(cloud, reject);

    if (is_a) {
        report.add("norms_at_most_one", max_norm <= 1.0 + 1e-9,
                   "max closed-loop norm = " + std::to_string(max_norm));
        report.add("boundary_attained", boundary,
                   "a sampled point reaches norm >= 1 - 1e-6");
        report.add("convexity_pass", probe.verdict == ProbeVerdict::pass,
                   probe.detail + " (coverage_radius=" + std::to_string(probe.coverage_radius) +
                       ", reject_tol=" + std::to_string(reject) + ")");
    } else {
        const bool witnessed = probe.verdict == ProbeVerdict::nonconvex_witness &&
                               probe.witness &&
                               probe.witness->gap >= 0.01 * stats.bbox_diagonal;
        std::ostringstream os;
        if (probe.witness) {
            os << "midpoint gap = " << probe.witness->gap << " ("
               << probe.witness->gap / stats.bbox_diagonal * 100.0 << "% of cloud diameter)";
        } else {
            os << probe.detail;
        }
        report.add("nonconvexity_witness", witnessed, os.str());
    }
}

void run_example_affine(ExampleReport& report, const ReproduceOptions& opt) {
    double worst_gap = 0.0;
    bool qi_full_always_false = true;
    bool qi_reduced_always_true = true;
    for (int d = 0; d < opt.draws; ++d) {
        const AffineExampleInstance ex = make_affine_example(opt.seed + 1000 + d);
        const QiReport qi_full = subspace_qi_check(ex.s_diag, ex.plant.g);
        const QiReport qi_red = subspace_qi_check(ex.s_tri, ex.reduced_plant.g);
        qi_full_always_false = qi_full_always_false && !qi_full.qi;
        qi_reduced_always_true = qi_reduced_always_true && qi_red.qi;

        Rng rng(opt.seed + 5000 + d);
        Matrix pa(opt.triples, 1), pb(opt.triples, 1);
        Matrix params(opt.triples, 3);
        for (int t = 0; t < opt.triples; ++t) {
            Vector k(3);
            do {
                for (int i = 0; i < 3; ++i) k[i] = rng.uniform(-2.0, 2.0);
            } while (std::abs(1.0 - ex.g1 * k[0]) < 0.2 ||
                     std::abs(1.0 - ex.g3 * k[2]) < 0.2);
            pa(t, 0) = ex.closed_loop_full(k)(0, 0);
            pb(t, 0) = ex.closed_loop_reduced(k)(0, 0);
            params.row(t) = k.transpose();
        }
        PointCloud ca{pa, params, {}};
        PointCloud cb{pb, params, {}};
        const EqualityReport eq = set_equality_probe(ca, cb, opt.tol, /*matched=*/true);
        worst_gap = std::max(worst_gap, eq.max_pointwise.value_or(eq.hausdorff));
    }
    report.add("diagonal_set_not_qi", qi_full_always_false,
               "S = diag(k1,k2,k3) fails the QI test in every draw");
    report.add("triangular_set_qi", qi_reduced_always_true,
               "reduced triangular set passes the QI test in every draw");
    report.add("closed_loop_sets_equal", worst_gap <= opt.tol,
               "max matched-parameter |C - C~| = " + std::to_string(worst_gap));
}

}  // namespace

ExampleReport reproduce_example(const std::string& id, const ReproduceOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    ExampleReport report;
    report.id = id;
    if (id == "a" || id == "b") {
        run_example_ab(report, id, options);
    } else if (id == "affine") {
        run_example_affine(report, options);
    } else {
        throw std::invalid_argument("reproduce_example: unknown id '" + id +
                                    "' (expected a, b, or affine)");
    }
    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace qinv
