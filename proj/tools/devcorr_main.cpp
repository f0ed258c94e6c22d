#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "devcorr/errors.hpp"
#include "devcorr/pipeline.hpp"

// Exit codes: 0 ok, 2 bad input, 3 I/O failure, 4 optimizer failure, 5 fit failure.
namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitIo = 3;
constexpr int kExitOptimizer = 4;
constexpr int kExitFit = 5;

struct ConfigFlags {
    std::string config_path;
    double C = -1, J0 = -1, J1 = -1, J2 = -1;
    double epsilon = -1, alpha_flag = 0, dt = -1, opt_tol = -1, fit_consistency = -1;
    int n_steps = -1;
    long long seed = -1;
    bool alpha_set = false;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& f) {
    cmd->add_option("--config", f.config_path, "key=value config file (flags win)");
    cmd->add_option("--C", f.C, "coupling constant, s^-2");
    cmd->add_option("--J0", f.J0, "reduced spectral density J0, s");
    cmd->add_option("--J1", f.J1, "reduced spectral density J1, s");
    cmd->add_option("--J2", f.J2, "reduced spectral density J2, s");
    cmd->add_option("--epsilon", f.epsilon, "thermal small parameter");
    cmd->add_option("--alpha", f.alpha_flag, "pseudopure deviation scale")
        ->each([&f](const std::string&) { f.alpha_set = true; });
    cmd->add_option("--dt", f.dt, "evolution step, s");
    cmd->add_option("--steps", f.n_steps, "number of evolution steps");
    cmd->add_option("--seed", f.seed, "random seed");
    cmd->add_option("--opt-tol", f.opt_tol, "optimizer objective tolerance");
    cmd->add_option("--fit-consistency", f.fit_consistency, "fit consistency warn threshold");
}

devcorr::RunConfig resolve_config(const ConfigFlags& f) {
    devcorr::RunConfig cfg;
    if (!f.config_path.empty()) {
        cfg = devcorr::load_config(f.config_path, cfg);
    } else if (const char* env = std::getenv("DEVCORR_CONFIG")) {
        if (*env) cfg = devcorr::load_config(env, cfg);
    }
    if (f.C > 0) cfg.C = f.C;
    if (f.J0 >= 0) cfg.J0 = f.J0;
    if (f.J1 >= 0) cfg.J1 = f.J1;
    if (f.J2 >= 0) cfg.J2 = f.J2;
    if (f.epsilon > 0) cfg.epsilon = f.epsilon;
    if (f.alpha_set) cfg.alpha = f.alpha_flag;
    if (f.dt > 0) cfg.dt = f.dt;
    if (f.n_steps > 0) cfg.n_steps = f.n_steps;
    if (f.seed >= 0) cfg.seed = static_cast<std::uint64_t>(f.seed);
    if (f.opt_tol > 0) cfg.opt_tol = f.opt_tol;
    if (f.fit_consistency > 0) cfg.fit_consistency = f.fit_consistency;
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"devcorr: correlations and relaxation of two-qubit NMR deviation matrices"};
    app.require_subcommand(1);

    ConfigFlags flags;

    std::string state_name, in_path, out_path = "-", out_dir = "reproduce_out";
    std::string curves_path;
    bool exact = false, bits = false;
    double noise_sigma = 0.0;
    long long noise_seed = 1;

    CLI::App* prepare = app.add_subcommand(
        "prepare", "Write an initial deviation matrix (psi+, psi-, phi+, phi-, "
                   "x-random, computational:ij, equilibrium)");
    prepare->add_option("state", state_name, "state name")->required();
    prepare->add_option("-o,--out", out_path, "output file ('-' for stdout)");
    add_config_flags(prepare, flags);

    CLI::App* evolve = app.add_subcommand(
        "evolve", "Relax a deviation matrix on the configured time grid");
    evolve->add_option("input", in_path, "deviation-matrix file")->required();
    evolve->add_option("-o,--out", out_path, "output CSV ('-' for stdout)");
    add_config_flags(evolve, flags);

    CLI::App* correlations = app.add_subcommand(
        "correlations", "Correlations I, K, Q per time point (expansion units)");
    correlations->add_option("input", in_path, "deviation-matrix file or time-series CSV")
        ->required();
    correlations->add_option("-o,--out", out_path, "output CSV ('-' for stdout)");
    correlations->add_flag("--exact", exact, "append exact-path columns (bits)");
    correlations->add_flag("--bits", bits, "report I,K,Q in bits using epsilon");
    add_config_flags(correlations, flags);

    CLI::App* fit = app.add_subcommand(
        "fit", "Recover spectral densities and R amplitudes from a time series");
    fit->add_option("input", in_path, "time-series CSV")->required();
    fit->add_option("-o,--out", out_path, "report file ('-' for stdout)");
    fit->add_option("--curves", curves_path, "also write fitted-vs-observed CSV");
    fit->add_option("--noise", noise_sigma, "add Gaussian noise of this sigma first");
    fit->add_option("--noise-seed", noise_seed, "seed for --noise");
    add_config_flags(fit, flags);

    CLI::App* reproduce = app.add_subcommand(
        "reproduce", "Full pipeline for the five initial states; per-state CSVs + summary");
    reproduce->add_option("--outdir", out_dir, "output directory");
    add_config_flags(reproduce, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    auto emit = [&](const std::string& path, auto writer) {
        if (path == "-") {
            writer("/dev/stdout");
        } else {
            writer(path);
        }
    };

    try {
        const devcorr::RunConfig cfg = resolve_config(flags);
        if (prepare->parsed()) {
            emit(out_path, [&](const std::string& p) { devcorr::run_prepare(state_name, cfg, p); });
        } else if (evolve->parsed()) {
            emit(out_path, [&](const std::string& p) { devcorr::run_evolve(in_path, cfg, p); });
        } else if (correlations->parsed()) {
            emit(out_path, [&](const std::string& p) {
                devcorr::run_correlations(in_path, cfg, exact, bits, p);
            });
        } else if (fit->parsed()) {
            emit(out_path, [&](const std::string& p) {
                devcorr::run_fit(in_path, cfg, noise_sigma,
                                 static_cast<std::uint64_t>(noise_seed), p, curves_path);
            });
        } else if (reproduce->parsed()) {
            devcorr::run_reproduce(cfg, out_dir);
            std::cout << "wrote " << out_dir << "/summary.csv\n";
        }
    } catch (const devcorr::OptimizerFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitOptimizer;
    } catch (const devcorr::FitDivergence& e) {
        std::cerr << "error: FitDivergence: " << e.what() << '\n';
        return kExitFit;
    } catch (const devcorr::DegenerateSignal& e) {
        std::cerr << "error: DegenerateSignal: " << e.what() << '\n';
        return kExitFit;
    } catch (const devcorr::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const devcorr::InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const devcorr::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitOk;
}
