#include "qinv/cli.hpp"

#include "qinv/json_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace qinv {

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write output file: " + path);
    out << content;
}

void emit_report(const Json& report, const RunConfig& config, std::ostream& out) {
    out << report.dump(2) << "\n";
    if (!config.out_path.empty()) write_file(config.out_path, report.dump(2) + "\n");
}

bool looks_like_fir(const Json& j) { return j.is_object() && j.contains("taps"); }

const Json& subspace_spec(const Json& input) {
    if (input.contains("subspace")) return input.at("subspace");
    return input;  // allow "pattern"/"basis" at the top level
}

int run_qi_check(const RunConfig& config, std::ostream& out) {
    const Json input = load_json_file(config.input_path);
    const Json& sub = subspace_spec(input);

    // Pattern-level test: both the controller set and the plant block given
    // as sparsity patterns.
    if (sub.contains("pattern") && input.contains("G_pattern")) {
        const Pattern s = pattern_from_json(sub.at("pattern"), "subspace.pattern");
        const Pattern g = pattern_from_json(input.at("G_pattern"), "G_pattern");
        const QiReport report = pattern_qi_check(s, g);
        emit_report(to_json(report), config, out);
        return report.qi ? 0 : 1;
    }

    if (!input.contains("G")) {
        throw InputError("qi-check: input needs \"G\" (matrix or FIR) or \"G_pattern\"");
    }
    const Json& gj = input.at("G");

    if (looks_like_fir(gj)) {
        const FirTransferMatrix g = fir_from_json(gj, "G");
        FirSubspace s;
        if (sub.contains("pattern")) {
            const Pattern p = pattern_from_json(sub.at("pattern"), "subspace.pattern");
            const int h = sub.value("horizon", config.horizon);
            s = pattern_to_fir_basis(p, h);
        } else {
            s = fir_subspace_from_json(sub);
        }
        const FirQiReport report = fir_subspace_qi_check(s, g, config.tol);
        emit_report(to_json(report), config, out);
        return report.qi ? 0 : 1;
    }

    const Matrix g = matrix_from_json(gj, "G");
    SubspaceBasis basis;
    if (sub.contains("pattern")) {
        basis = pattern_to_basis(pattern_from_json(sub.at("pattern"), "subspace.pattern"));
    } else {
        basis = basis_from_json(sub);
    }
    const QiReport report = subspace_qi_check(basis, g, config.tol);
    emit_report(to_json(report), config, out);
    return report.qi ? 0 : 1;
}

int run_probe(const RunConfig& config, std::ostream& out) {
    const Json input = load_json_file(config.input_path);
    if (!input.contains("plant")) throw InputError("probe: input needs a \"plant\" object");
    const StaticPlant plant = static_plant_from_json(input.at("plant"));
    const Json& sub = subspace_spec(input);
    SubspaceBasis basis;
    if (sub.contains("pattern")) {
        basis = pattern_to_basis(pattern_from_json(sub.at("pattern"), "subspace.pattern"));
    } else {
        basis = basis_from_json(sub);
    }

    SampleScheme scheme = SampleScheme::grid;
    if (input.value("scheme", "grid") == std::string("random")) scheme = SampleScheme::random;

    std::vector<std::pair<double, double>> ranges{{-1.0, 1.0}};
    if (input.contains("ranges")) {
        ranges.clear();
        for (const auto& r : input.at("ranges")) {
            if (!r.is_array() || r.size() != 2) {
                throw InputError("ranges: expected pairs [lo, hi]");
            }
            ranges.emplace_back(r[0].get<double>(), r[1].get<double>());
        }
    }

    int count = config.samples;
    if (scheme == SampleScheme::grid && !basis.empty()) {
        count = std::max(
            2, static_cast<int>(std::floor(std::pow(static_cast<double>(config.samples),
                                                    1.0 / static_cast<double>(basis.size())))));
    }

    out << "# seed " << config.seed << "\n";
    const SampleSet samples =
        sample_subspace(basis, plant.g, scheme, ranges, count, config.seed);
    const PointCloud cloud = probe_image(plant, samples);

    double reject = config.reject_tol;
    if (reject <= 0.0) {
        const ProbeReport stats =
            convexity_probe(cloud, std::numeric_limits<double>::infinity());
        reject = std::max(0.01 * stats.bbox_diagonal, 1.5 * stats.coverage_radius);
    }
    ProbeReport report = convexity_probe(cloud, reject);

    Json j = to_json(report);
    j["seed"] = config.seed;
    j["samples_kept"] = cloud.size();
    j["samples_excluded"] = cloud.meta.excluded;
    if (input.contains("alphas")) {
        std::vector<double> alphas = input.at("alphas").get<std::vector<double>>();
        j["star_shape"] = to_json(star_shape_probe(cloud, alphas, reject));
    }

    const std::string base = config.out_path.empty() ? "probe_out" : config.out_path;
    write_file(base + ".csv", cloud_to_csv(cloud));
    write_file(base + ".json", j.dump(2) + "\n");
    out << j.dump(2) << "\n";
    return report.verdict == ProbeVerdict::pass ? 0 : 1;
}

int run_synth(const RunConfig& config, std::ostream& out) {
    const Json input = load_json_file(config.input_path);
    if (!input.contains("plant")) throw InputError("synth: input needs a \"plant\" object");
    const Json& pj = input.at("plant");

    FirPlant plant;
    if (looks_like_fir(pj.value("G", Json()))) {
        plant = fir_plant_from_json(pj);
    } else {
        // static plant promoted to single-tap FIR blocks
        const StaticPlant sp = static_plant_from_json(pj);
        plant.p11 = FirTransferMatrix::constant(sp.p11);
        plant.p12 = FirTransferMatrix::constant(sp.p12);
        plant.p21 = FirTransferMatrix::constant(sp.p21);
        plant.g = FirTransferMatrix::constant(sp.g);
    }

    const Json& sub = subspace_spec(input);
    FirSubspace s;
    if (sub.contains("pattern")) {
        const Pattern p = pattern_from_json(sub.at("pattern"), "subspace.pattern");
        const int h = sub.value("horizon", config.horizon);
        s = pattern_to_fir_basis(p, h);
    } else {
        s = fir_subspace_from_json(sub);
    }

    try {
        const SynthesisResult result = h2_model_match(plant, s, config.horizon, config.tol);
        emit_report(to_json(result), config, out);
        return 0;
    } catch (const QiRefusalError& e) {
        Json j{{"error", e.what()}, {"qi_report", to_json(e.report)}};
        emit_report(j, config, out);
        return 1;
    }
}

int run_reproduce(const RunConfig& config, std::ostream& out) {
    if (config.example_id.empty()) {
        throw InputError("reproduce: --example {a|b|affine} is required");
    }
    ReproduceOptions opt;
    opt.seed = config.seed;
    opt.tol = config.tol;
    out << "# seed " << config.seed << "\n";
    ExampleReport report;
    try {
        report = reproduce_example(config.example_id, opt);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    for (const auto& c : report.checks) {
        out << (c.pass ? "[PASS] " : "[FAIL] ") << config.example_id << ": " << c.name
            << (c.detail.empty() ? "" : " — " + c.detail) << "\n";
    }
    out << (report.all_pass ? "all checks passed" : "some checks FAILED") << " ("
        << report.elapsed_seconds << " s)\n";
    if (!config.out_path.empty()) write_file(config.out_path, to_json(report).dump(2) + "\n");
    return report.all_pass ? 0 : 1;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        if (config.command == "qi-check") return run_qi_check(config, out);
        if (config.command == "probe") return run_probe(config, out);
        if (config.command == "synth") return run_synth(config, out);
        if (config.command == "reproduce") return run_reproduce(config, out);
        err << "unknown command: " << config.command << "\n";
        return 2;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << "\n";
        return 2;
    } catch (const DimensionError& e) {
        err << "dimension error: " << e.what() << "\n";
        return 2;
    } catch (const InertnessError& e) {
        err << "check failed: " << e.what() << "\n";
        return 1;
    } catch (const SingularResolventError& e) {
        err << "check failed: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace qinv
