#pragma once

#include "qinv/static_core.hpp"
#include "qinv/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qinv {

/// Sampling scheme for controller subspaces.
enum class SampleScheme { grid, random };

/// How a point cloud was generated; serialized with the cloud so a report
/// can be reproduced exactly.
struct CloudMeta {
    std::string description;
    SampleScheme scheme = SampleScheme::grid;
    std::vector<std::pair<double, double>> ranges;
    std::uint64_t seed = 42;
    int requested = 0;
    int excluded = 0;
    /// True when samples come in (K, -K) pairs stored at indices (2i, 2i+1);
    /// probes then test those midpoints explicitly.
    bool antithetic = false;
};

/// Sampled image of a controller set: one point per controller, plus the
/// generating parameters (basis coefficients) for each point.
struct PointCloud {
    Matrix points;  // n x point_dim, row per sample
    Matrix params;  // n x param_dim
    CloudMeta meta;

    Eigen::Index size() const { return points.rows(); }
    Eigen::Index dim() const { return points.cols(); }
};

/// Coefficient samples over a subspace basis, with controllers outside the
/// domain of h_G already excluded.
struct SampleSet {
    std::vector<Matrix> controllers;
    Matrix coefficients;  // n x basis_size
    CloudMeta meta;
};

/// Deterministic sampling of K = sum_m c_m B_m with c in the given ranges.
/// For the grid scheme, count is the number of points per dimension; for
/// the random scheme it is the total sample count. Controllers for which
/// I - GK fails the conditioning test are excluded and counted in meta.
SampleSet sample_subspace(const SubspaceBasis& basis, const Matrix& g, SampleScheme scheme,
                          const std::vector<std::pair<double, double>>& ranges, int count,
                          std::uint64_t seed, double cond_tol = 1e-9);

/// One point per sample: the row-major flattening of closed_loop(P, K).
PointCloud probe_image(const StaticPlant& p, const SampleSet& samples);

enum class ProbeVerdict { pass, nonconvex_witness, inconclusive };

struct ProbeWitness {
    Eigen::Index index_a = -1;
    Eigen::Index index_b = -1;
    Vector midpoint;
    double gap = 0.0;  // distance from the midpoint to the nearest cloud point
};

struct ProbeReport {
    ProbeVerdict verdict = ProbeVerdict::pass;
    std::optional<ProbeWitness> witness;
    double coverage_radius = 0.0;  // max nearest-neighbour spacing among samples
    double reject_tol = 0.0;
    double bbox_diagonal = 0.0;    // conservative cloud diameter (bounding box)
    double hull_margin = 0.0;
    std::string detail;
};

struct ConvexityProbeOptions {
    int representative_cap = 512;   // spatial-hash representatives for pair search
    double hull_margin_frac = 1e-3; // interior margin as a fraction of bbox diagonal
    int support_directions = 64;    // random support directions for the interior test
    std::uint64_t seed = 42;
};

/// Heuristic convexity check: searches midpoints of sampled point pairs that
/// are farther than reject_tol from every cloud point while lying inside the
/// cloud's convex hull (support-function test with an inward margin).
/// A pass is evidence, not proof; the report carries the achieved coverage
/// radius so the verdict is interpretable, and turns into `inconclusive`
/// when coverage_radius > reject_tol and no witness was found.
ProbeReport convexity_probe(const PointCloud& cloud, double reject_tol,
                            const ConvexityProbeOptions& options = {});

/// Checks closure under scaling toward the origin: for each cloud point v
/// and each alpha, alpha*v must be within tol of some cloud point.
ProbeReport star_shape_probe(const PointCloud& cloud, const std::vector<double>& alphas,
                             double tol);

struct EqualityReport {
    bool equal = false;
    double hausdorff = 0.0;  // max of the two one-sided nearest-neighbour extremes
    std::optional<double> max_pointwise;  // matched-parameter mode only
    double tol = 0.0;
    std::string detail;
};

/// Discrete symmetric-Hausdorff comparison of two clouds; when matched is
/// true the clouds must be parameter-aligned and points are also compared
/// one-to-one.
EqualityReport set_equality_probe(const PointCloud& a, const PointCloud& b, double tol,
                                  bool matched = false);

}  // namespace qinv
