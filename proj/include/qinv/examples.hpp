#pragma once

#include "qinv/probe.hpp"
#include "qinv/static_core.hpp"

#include <string>
#include <vector>

namespace qinv {

/// The shared 4x4 loop matrix of the bundled non-affine case studies and
/// the pair of P12/P21 choices that make the closed-loop set a unit disc
/// ("a") or a nonconvex region ("b").
StaticPlant example_plant_a();
StaticPlant example_plant_b();

/// Tied two-parameter controller set diag(t, t, s, s) used by both cases.
SubspaceBasis example_tied_basis();

/// Closed-form closed-loop point for case "a" at controller diag(t,t,s,s).
/// Written as [2t; 2s] / (1 + t^2 + s^2): the components of the published
/// form appear swapped relative to direct evaluation, so the identification
/// here follows the matrix arithmetic (case "b" matches as published).
Vector example_closed_form_a(double t, double s);

/// Closed-form closed-loop point for case "b": [(s^2+2) t^2; s^2 (1-t^2)]
/// / (1 + s^2 + t^2).
Vector example_closed_form_b(double t, double s);

/// Instance of the diagonal-vs-triangular equivalence example: a plant P
/// with a diagonal (non-QI) controller set whose closed-loop set coincides
/// with that of a reduced plant P~ under a triangular (QI) controller set.
struct AffineExampleInstance {
    StaticPlant plant;          // 1x1 / 1x3 / 3x1 / 3x3 blocks
    SubspaceBasis s_diag;       // diag(k1, k2, k3)
    StaticPlant reduced_plant;  // 1x1 / 1x2 / 2x1 / 2x2 blocks
    SubspaceBasis s_tri;        // [k1 0; k2 k3]
    double a, b1, b2, c1, c2, g1, g2, g3;

    /// Closed-loop values of both parameterizations at matched (k1,k2,k3).
    Matrix closed_loop_full(const Vector& k) const;
    Matrix closed_loop_reduced(const Vector& k) const;
};

/// Draws a, b_i, c_i, g_i from a seeded generator, bounded away from the
/// singular configurations so every draw admits a wide controller range.
AffineExampleInstance make_affine_example(std::uint64_t seed);

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ExampleReport {
    std::string id;
    std::vector<CheckResult> checks;
    bool all_pass = true;
    double elapsed_seconds = 0.0;

    void add(const std::string& name, bool pass, const std::string& detail = "");
};

struct ReproduceOptions {
    int grid_points = 301;      // per parameter axis
    double grid_limit = 6.0;    // (t,s) in [-limit, limit]^2
    int polar_points = 720;     // extra samples on t^2 + s^2 = 1
    std::uint64_t seed = 42;
    int draws = 20;             // affine example: plant draws
    int triples = 100;          // affine example: (k1,k2,k3) samples per draw
    double tol = 1e-9;
};

/// Runs one of the bundled case studies end to end:
///   "a"      -- unit-disc closed-loop set: closed form, norm bound,
///               boundary attainment, convexity probe pass;
///   "b"      -- nonconvex closed-loop set: closed form and a nonconvexity
///               witness with gap >= 1% of the cloud diameter;
///   "affine" -- equivalence of the diagonal and triangular
///               parameterizations plus the QI verdicts on both.
ExampleReport reproduce_example(const std::string& id, const ReproduceOptions& options = {});

}  // namespace qinv
