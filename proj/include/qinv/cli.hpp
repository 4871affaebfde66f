#pragma once

#include <cstdint>
#include <iostream>
#include <string>

namespace qinv {

/// One CLI invocation. Defaults match the documented interface:
/// tol 1e-9, horizon 32, samples 10000, seed 42.
struct RunConfig {
    std::string command;     // qi-check | probe | synth | reproduce
    std::string input_path;  // JSON input (not used by reproduce)
    double tol = 1e-9;
    int horizon = 32;
    int samples = 10000;
    std::uint64_t seed = 42;
    std::string out_path;    // optional; probe writes <out>.json and <out>.csv
    std::string example_id;  // reproduce: a | b | affine
    double reject_tol = 0.0; // probe: 0 selects the adaptive default
};

/// Executes the command. Exit code 0: all checks pass / QI true / probe
/// pass; 1: witness found or a check failed (witness serialized in the
/// report); 2: unreadable input, schema violation, or dimension mismatch.
int run(const RunConfig& config, std::ostream& out = std::cout,
        std::ostream& err = std::cerr);

}  // namespace qinv
