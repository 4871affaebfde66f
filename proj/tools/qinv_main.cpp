#include "qinv/cli.hpp"

#include <CLI11.hpp>

int main(int argc, char** argv) {
    CLI::App app{"qinv: quadratic-invariance tests, closed-loop set probes, and "
                 "H2 model-matching synthesis for structured controller sets"};
    app.require_subcommand(1);

    qinv::RunConfig config;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--tol", config.tol, "membership / residual tolerance")
            ->capture_default_str();
        cmd->add_option("--horizon", config.horizon, "FIR truncation horizon")
            ->capture_default_str();
        cmd->add_option("--samples", config.samples, "sample budget for probes")
            ->capture_default_str();
        cmd->add_option("--seed", config.seed, "seed for randomized operations")
            ->capture_default_str();
        cmd->add_option("--out", config.out_path, "output path (probe: base for .json/.csv)");
    };

    auto* qi = app.add_subcommand("qi-check", "test quadratic invariance of a controller set");
    qi->add_option("input", config.input_path, "input JSON file")->required();
    add_common(qi);

    auto* probe = app.add_subcommand(
        "probe", "sample a closed-loop set and probe it for convexity");
    probe->add_option("input", config.input_path, "input JSON file")->required();
    probe->add_option("--reject-tol", config.reject_tol,
                      "midpoint gap threshold (0 = adaptive)");
    add_common(probe);

    auto* synth = app.add_subcommand(
        "synth", "H2 model-matching synthesis over a quadratically invariant set");
    synth->add_option("input", config.input_path, "input JSON file")->required();
    add_common(synth);

    auto* rep = app.add_subcommand("reproduce", "run a bundled case study end to end");
    rep->add_option("--example", config.example_id, "case study id: a, b, or affine")
        ->required();
    add_common(rep);

    CLI11_PARSE(app, argc, argv);

    if (qi->parsed()) config.command = "qi-check";
    if (probe->parsed()) config.command = "probe";
    if (synth->parsed()) config.command = "synth";
    if (rep->parsed()) config.command = "reproduce";

    return qinv::run(config);
}
