#include "devcorr/pipeline.hpp"

#include <cmath>
#include <filesystem>

#include "devcorr/errors.hpp"
#include "devcorr/relaxation.hpp"

namespace devcorr {

namespace fs = std::filesystem;

DeviationMatrix make_named_state(const std::string& state_name, double alpha,
                                 std::uint64_t seed) {
    if (state_name == "psi+") return bell_pseudopure(BellState::PsiPlus, alpha);
    if (state_name == "psi-") return bell_pseudopure(BellState::PsiMinus, alpha);
    if (state_name == "phi+") return bell_pseudopure(BellState::PhiPlus, alpha);
    if (state_name == "phi-") return bell_pseudopure(BellState::PhiMinus, alpha);
    if (state_name == "x-random") return random_x(seed, alpha);
    if (state_name == "equilibrium") return equilibrium_deviation();
    if (state_name.rfind("computational:", 0) == 0) {
        const std::string labels = state_name.substr(14);
        if (labels.size() == 2 && (labels[0] == '0' || labels[0] == '1') &&
            (labels[1] == '0' || labels[1] == '1')) {
            return computational_pseudopure(labels[0] - '0', labels[1] - '0', alpha);
        }
    }
    throw InvalidInput("unknown state '" + state_name +
                       "' (expected psi+, psi-, phi+, phi-, x-random, "
                       "computational:ij, equilibrium)");
}

void run_prepare(const std::string& state_name, const RunConfig& cfg,
                 const std::string& out_path) {
    save_deviation(make_named_state(state_name, cfg.alpha, cfg.seed), out_path);
}

namespace {

RelaxationParams relax_params(const RunConfig& cfg) {
    return {cfg.C, cfg.J0, cfg.J1, cfg.J2};
}

OptimizerConfig optimizer_config(const RunConfig& cfg) {
    OptimizerConfig opt;
    opt.objective_tol = cfg.opt_tol;
    return opt;
}

bool looks_like_series(const std::string& text) {
    return text.rfind("t_s,", 0) == 0;
}

}  // namespace

void run_evolve(const std::string& in_path, const RunConfig& cfg,
                const std::string& out_path) {
    cfg.validate();
    const DeviationMatrix d0 = load_deviation(in_path);
    save_time_series(time_series(d0, relax_params(cfg), cfg.dt, cfg.n_steps), out_path);
}

std::vector<CorrelationRow> correlation_rows(const std::string& in_path,
                                             const RunConfig& cfg, bool exact) {
    cfg.validate();
    const std::string text = read_text(in_path);
    std::vector<TimePoint> points;
    if (looks_like_series(text)) {
        points = parse_time_series(text);
    } else {
        points.push_back({0.0, parse_deviation(text)});
    }

    const OptimizerConfig opt = optimizer_config(cfg);
    std::vector<CorrelationRow> rows;
    rows.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        CorrelationRow row;
        row.t = points[i].t;
        try {
            row.report = quantum_correlation_Q(points[i].state, opt);
            if (exact) {
                const ThermalState ts(cfg.epsilon, points[i].state);
                row.I_exact = mutual_information_exact(ts);
                row.D_exact = discord_exact(ts, Party::B, opt);
                row.C_exact = *row.I_exact - *row.D_exact;
            }
        } catch (const OptimizerFailure& e) {
            throw OptimizerFailure("row " + std::to_string(i) + ": " + e.what());
        }
        rows.push_back(row);
    }
    return rows;
}

void run_correlations(const std::string& in_path, const RunConfig& cfg, bool exact,
                      bool bits, const std::string& out_path) {
    const std::vector<CorrelationRow> rows = correlation_rows(in_path, cfg, exact);

    std::string out = bits ? "# units: I,K,Q in bits (epsilon = " +
                                 format_double(cfg.epsilon) + "); angles in radians\n"
                           : "# units: I,K,Q in eps^2/ln2 (epsilon-independent); "
                             "angles in radians\n";
    out += "t_s,I,K,Q,theta_A,phi_A,theta_B,phi_B";
    if (exact) out += ",I_exact_bits,C_exact_bits,D_exact_bits";
    out += '\n';

    for (const CorrelationRow& row : rows) {
        const double scale = bits ? cfg.epsilon * cfg.epsilon / M_LN2 : 1.0;
        const CorrelationReport& r = row.report;
        out += format_double(row.t);
        for (double v : {scale * r.total_I, scale * r.classical_K, scale * r.quantum_Q,
                         r.optimal_basis.theta_A, r.optimal_basis.phi_A,
                         r.optimal_basis.theta_B, r.optimal_basis.phi_B}) {
            out += ',';
            out += format_double(v);
        }
        if (exact) {
            for (double v : {*row.I_exact, *row.C_exact, *row.D_exact}) {
                out += ',';
                out += format_double(v);
            }
        }
        out += '\n';
    }
    write_text_atomic(out_path, out);
}

void run_fit(const std::string& in_path, const RunConfig& cfg, double noise_sigma,
             std::uint64_t noise_seed, const std::string& out_path,
             const std::string& curves_path) {
    cfg.validate();
    std::vector<TimePoint> series = load_time_series(in_path);
    if (noise_sigma > 0.0) series = add_noise(series, noise_sigma, noise_seed);

    const FitReport report = estimate_parameters(series, cfg.C, cfg.fit_consistency);
    write_text_atomic(out_path, serialize_fit_report(report, cfg.C, cfg.fit_consistency));

    if (!curves_path.empty()) {
        const CombinationSeries c = combinations(series);
        std::string out =
            "t_s,coh0123_re,coh0123_im,coh0123_fit,coh0213_re,coh0213_im,coh0213_fit,"
            "coh12_re,coh12_im,coh12_fit,popR2,popR2_fit,popR1,popR1_fit,popR3,popR3_fit\n";
        const double twoC = 2.0 * cfg.C;
        // Magnitude curves anchored at the first sample.
        const double t0 = c.t.front();
        const double rate_a = cfg.C * (report.J0 + report.J1);
        const double rate_b = cfg.C * (report.J0 + report.J2);
        const double rate_c = cfg.C * (report.J1 + report.J2);
        const double amp_a = std::abs(c.coh_01_23.front()) * std::exp(rate_a * t0);
        const double amp_b = std::abs(c.coh_02_13.front()) * std::exp(rate_b * t0);
        const double amp_c = std::abs(c.coh_12.front()) * std::exp(rate_c * t0);
        for (std::size_t i = 0; i < c.t.size(); ++i) {
            const double t = c.t[i];
            const double fit_a = amp_a * std::exp(-rate_a * t);
            const double fit_b = amp_b * std::exp(-rate_b * t);
            const double fit_c = amp_c * std::exp(-rate_c * t);
            const double fit_2 = 8.0 + report.R2 * std::exp(-twoC * report.J2_populations * t);
            const double fit_1 = report.R1 * std::exp(-twoC * (report.J1_populations +
                                                               report.J2_populations) * t);
            const double fit_3 = 4.0 + report.R3 * std::exp(-twoC * report.J1_populations * t);
            out += format_double(t);
            for (double v : {c.coh_01_23[i].real(), c.coh_01_23[i].imag(), fit_a,
                             c.coh_02_13[i].real(), c.coh_02_13[i].imag(), fit_b,
                             c.coh_12[i].real(), c.coh_12[i].imag(), fit_c,
                             c.pop_r2[i], fit_2, c.pop_r1[i], fit_1, c.pop_r3[i], fit_3}) {
                out += ',';
                out += format_double(v);
            }
            out += '\n';
        }
        write_text_atomic(curves_path, out);
    }
}

std::vector<ReproduceSummaryRow> run_reproduce(const RunConfig& cfg,
                                               const std::string& out_dir) {
    cfg.validate();
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + out_dir);

    const std::pair<std::string, std::string> states[] = {
        {"x-random", "x_random"}, {"psi+", "psi_plus"},   {"psi-", "psi_minus"},
        {"phi+", "phi_plus"},     {"phi-", "phi_minus"},
    };

    std::vector<ReproduceSummaryRow> summary;
    for (const auto& [name, stem] : states) {
        const std::string dm_path = out_dir + "/" + stem + ".dm";
        const std::string series_path = out_dir + "/" + stem + "_series.csv";
        const std::string corr_path = out_dir + "/" + stem + "_correlations.csv";

        run_prepare(name, cfg, dm_path);
        run_evolve(dm_path, cfg, series_path);
        run_correlations(series_path, cfg, /*exact=*/false, /*bits=*/false, corr_path);

        const OptimizerConfig opt = optimizer_config(cfg);
        const CorrelationReport initial =
            quantum_correlation_Q(make_named_state(name, cfg.alpha, cfg.seed), opt);
        const std::vector<CorrelationRow> rows = correlation_rows(series_path, cfg, false);

        ReproduceSummaryRow s;
        s.state = name;
        s.I0 = initial.total_I;
        s.K0 = initial.classical_K;
        s.Q0 = initial.quantum_Q;
        s.t_q_below_5pct = -1.0;
        s.monotone_I = s.monotone_K = s.monotone_Q = true;

        double prev_i = initial.total_I, prev_k = initial.classical_K,
               prev_q = initial.quantum_Q;
        for (const CorrelationRow& row : rows) {
            const CorrelationReport& r = row.report;
            if (r.total_I > prev_i + 1e-10) s.monotone_I = false;
            if (r.classical_K > prev_k + 1e-10) s.monotone_K = false;
            if (r.quantum_Q > prev_q + 1e-10) s.monotone_Q = false;
            if (s.t_q_below_5pct < 0.0 && r.quantum_Q < 0.05 * s.Q0) {
                s.t_q_below_5pct = row.t;
            }
            prev_i = r.total_I;
            prev_k = r.classical_K;
            prev_q = r.quantum_Q;
        }
        summary.push_back(s);
    }

    std::string out =
        "# initial correlations (eps^2/ln2 units), time for Q to drop below 5% of its "
        "initial value, and per-step monotonicity flags\n"
        "state,I0,K0,Q0,t_q_below_5pct_s,monotone_I,monotone_K,monotone_Q\n";
    for (const ReproduceSummaryRow& s : summary) {
        out += s.state;
        for (double v : {s.I0, s.K0, s.Q0, s.t_q_below_5pct}) {
            out += ',';
            out += format_double(v);
        }
        for (bool b : {s.monotone_I, s.monotone_K, s.monotone_Q}) {
            out += ',';
            out += b ? '1' : '0';
        }
        out += '\n';
    }
    write_text_atomic(out_dir + "/summary.csv", out);
    return summary;
}

}  // namespace devcorr
