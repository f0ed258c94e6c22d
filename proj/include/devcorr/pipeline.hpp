#pragma once

#include <optional>
#include <string>
#include <vector>

#include "devcorr/config.hpp"
#include "devcorr/correlations.hpp"
#include "devcorr/fitting.hpp"
#include "devcorr/states.hpp"

namespace devcorr {

// Command cores shared by the CLI front end and the acceptance suite.
// All file outputs are written atomically and are byte-identical across
// reruns and thread counts for fixed inputs.

// state_name: psi+, psi-, phi+, phi-, x-random, computational:ij, equilibrium.
DeviationMatrix make_named_state(const std::string& state_name, double alpha,
                                 std::uint64_t seed);

void run_prepare(const std::string& state_name, const RunConfig& cfg,
                 const std::string& out_path);

void run_evolve(const std::string& in_path, const RunConfig& cfg,
                const std::string& out_path);

struct CorrelationRow {
    double t;
    CorrelationReport report;
    // Exact-path columns (bits), present when requested.
    std::optional<double> I_exact, C_exact, D_exact;
};

// Accepts either a deviation-matrix file (one row at t = 0) or a
// time-series CSV (one row per time point).
std::vector<CorrelationRow> correlation_rows(const std::string& in_path,
                                             const RunConfig& cfg, bool exact);

void run_correlations(const std::string& in_path, const RunConfig& cfg, bool exact,
                      bool bits, const std::string& out_path);

void run_fit(const std::string& in_path, const RunConfig& cfg, double noise_sigma,
             std::uint64_t noise_seed, const std::string& out_path,
             const std::string& curves_path = {});

struct ReproduceSummaryRow {
    std::string state;
    double I0, K0, Q0;
    // First grid time with Q < 5% of Q0; negative if never reached.
    double t_q_below_5pct;
    bool monotone_I, monotone_K, monotone_Q;
};

// For each of the five initial states (x-random and the four Bell
// pseudopures): prepare, evolve on the configured grid, evaluate
// correlations per point, write one CSV per state plus summary.txt.
std::vector<ReproduceSummaryRow> run_reproduce(const RunConfig& cfg,
                                               const std::string& out_dir);

}  // namespace devcorr
