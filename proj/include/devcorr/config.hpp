#pragma once

#include <cstdint>
#include <string>

namespace devcorr {

// Run configuration shared by all CLI commands. Defaults are the
// experimental constants of the reference sodium/SDS data set.
// Stored as a flat key=value text file; command-line flags win.
struct RunConfig {
    double C = 12e9;         // s^-2
    double J0 = 17e-9;       // s
    double J1 = 3.0e-9;      // s
    double J2 = 3.4e-9;      // s
    double epsilon = 1e-5;   // dimensionless
    double alpha = 1.0;      // pseudopure deviation scale
    double dt = 1.5e-3;      // s
    int n_steps = 40;
    std::uint64_t seed = 17;             // default x-random seed (K > Q regime)
    double opt_tol = 1e-9;               // optimizer objective tolerance
    double fit_consistency = 0.25;       // warn threshold on the J1/J2 gap

    void validate() const;
};

RunConfig parse_config(const std::string& text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});
std::string serialize_config(const RunConfig& c);

}  // namespace devcorr
