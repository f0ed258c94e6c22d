#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "devcorr/config.hpp"
#include "devcorr/errors.hpp"
#include "devcorr/formats.hpp"
#include "devcorr/pipeline.hpp"
#include "devcorr/relaxation.hpp"
#include "devcorr/states.hpp"
#include "support/test_rand.hpp"

using namespace devcorr;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code;
    std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args, const std::string& workdir,
                  const std::string& env = {}) {
    const std::string log = workdir + "/cli_log.txt";
    const std::string cmd = std::string("cd ") + workdir + " && " +
                            (env.empty() ? "" : env + " ") + DEVCORR_CLI_PATH + " " + args +
                            " > " + log + " 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.output = read_text(log);
    return r;
}

std::string fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("devcorr_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir.string();
}

}  // namespace

TEST_CASE("config file parsing") {
    RunConfig cfg = parse_config("C = 9e9\nJ0=16e-9  # comment\n\nn_steps = 10\n");
    CHECK(cfg.C == 9e9);
    CHECK(cfg.J0 == 16e-9);
    CHECK(cfg.n_steps == 10);
    CHECK(cfg.J1 == 3.0e-9);  // untouched default

    CHECK_THROWS_AS(parse_config("bogus_key = 1\n"), InvalidInput);
    CHECK_THROWS_AS(parse_config("C = fast\n"), InvalidInput);
    CHECK_THROWS_AS(parse_config("dt = -1\n"), InvalidInput);

    const RunConfig roundtrip = parse_config(serialize_config(cfg));
    CHECK(roundtrip.C == cfg.C);
    CHECK(roundtrip.seed == cfg.seed);
}

TEST_CASE("prepare writes the expected states") {
    const std::string dir = fresh_dir("prepare");

    CHECK(run_cli("prepare psi+ -o psi.dm", dir).exit_code == 0);
    const DeviationMatrix psi = load_deviation(dir + "/psi.dm");
    CHECK(psi.mat().max_abs_diff(bell_pseudopure(BellState::PsiPlus, 1.0).mat()) == 0.0);

    CHECK(run_cli("prepare equilibrium -o eq.dm", dir).exit_code == 0);
    const DeviationMatrix eq = load_deviation(dir + "/eq.dm");
    CHECK(eq.mat().max_abs_diff(equilibrium_deviation().mat()) == 0.0);

    CHECK(run_cli("prepare computational:10 -o c10.dm", dir).exit_code == 0);
    const DeviationMatrix c10 = load_deviation(dir + "/c10.dm");
    CHECK(c10(2, 2).real() == doctest::Approx(0.75));

    CHECK(run_cli("prepare x-random --seed 7 -o x1.dm", dir).exit_code == 0);
    CHECK(run_cli("prepare x-random --seed 7 -o x2.dm", dir).exit_code == 0);
    CHECK(read_text(dir + "/x1.dm") == read_text(dir + "/x2.dm"));

    const RunResult bad = run_cli("prepare bogus -o b.dm", dir);
    CHECK(bad.exit_code == 2);
    CHECK(bad.output.find("unknown state") != std::string::npos);
}

TEST_CASE("evolve writes the configured grid") {
    const std::string dir = fresh_dir("evolve");
    REQUIRE(run_cli("prepare psi+ -o psi.dm", dir).exit_code == 0);

    CHECK(run_cli("evolve psi.dm -o series.csv", dir).exit_code == 0);
    const auto series = load_time_series(dir + "/series.csv");
    CHECK(series.size() == 40);
    CHECK(series.back().t == doctest::Approx(60e-3));

    CHECK(run_cli("evolve psi.dm --steps 1 -o one.csv", dir).exit_code == 0);
    CHECK(load_time_series(dir + "/one.csv").size() == 1);

    REQUIRE(run_cli("prepare equilibrium -o eq.dm", dir).exit_code == 0);
    CHECK(run_cli("evolve eq.dm -o eq_series.csv", dir).exit_code == 0);
    const auto eq_series = load_time_series(dir + "/eq_series.csv");
    for (const TimePoint& p : eq_series) {
        CHECK(p.state.mat().max_abs_diff(equilibrium_deviation().mat()) < 1e-10);
    }

    std::ofstream(dir + "/broken.dm") << "# deviation 4x4\n1 2 3\n";
    const RunResult bad = run_cli("evolve broken.dm -o x.csv", dir);
    CHECK(bad.exit_code == 2);
    CHECK(bad.output.find("32 numeric fields") != std::string::npos);

    std::ofstream(dir + "/nonherm.dm")
        << "# deviation 4x4\n"
        << "0 0 1 0 0 0 0 0\n0 0 0 0 0 0 0 0\n0 0 0 0 0 0 0 0\n0 0 0 0 0 0 0 0\n";
    const RunResult bad2 = run_cli("evolve nonherm.dm -o x.csv", dir);
    CHECK(bad2.exit_code == 2);
    CHECK(bad2.output.find("hermiticity") != std::string::npos);
}

TEST_CASE("correlations command") {
    const std::string dir = fresh_dir("correlations");
    REQUIRE(run_cli("prepare psi+ -o psi.dm", dir).exit_code == 0);

    CHECK(run_cli("correlations psi.dm -o corr.csv", dir).exit_code == 0);
    const std::string csv = read_text(dir + "/corr.csv");
    CHECK(csv.find("# units: I,K,Q in eps^2/ln2") != std::string::npos);
    CHECK(csv.find("t_s,I,K,Q,theta_A,phi_A,theta_B,phi_B") != std::string::npos);

    // row 0 of the Bell matrix: I = 1.5, K = 0.5, Q = 1.0
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);  // comment
    std::getline(in, line);  // header
    std::getline(in, line);
    for (char& c : line)
        if (c == ',') c = ' ';
    std::istringstream row(line);
    double t, i, k, q;
    row >> t >> i >> k >> q;
    CHECK(t == 0.0);
    CHECK(i == doctest::Approx(1.5));
    CHECK(k == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(q == doctest::Approx(1.0).epsilon(1e-6));

    // deterministic: rerun is byte-identical, also with a single thread
    CHECK(run_cli("correlations psi.dm -o corr2.csv", dir).exit_code == 0);
    CHECK(read_text(dir + "/corr.csv") == read_text(dir + "/corr2.csv"));
    CHECK(run_cli("correlations psi.dm -o corr3.csv", dir, "OMP_NUM_THREADS=1").exit_code ==
          0);
    CHECK(read_text(dir + "/corr.csv") == read_text(dir + "/corr3.csv"));

    // an equilibrium series carries no correlations at all
    REQUIRE(run_cli("prepare equilibrium -o eq.dm", dir).exit_code == 0);
    REQUIRE(run_cli("evolve eq.dm --steps 3 -o eq_series.csv", dir).exit_code == 0);
    CHECK(run_cli("correlations eq_series.csv -o eq_corr.csv", dir).exit_code == 0);
    std::istringstream eq_in(read_text(dir + "/eq_corr.csv"));
    std::getline(eq_in, line);
    std::getline(eq_in, line);
    while (std::getline(eq_in, line)) {
        for (char& c : line)
            if (c == ',') c = ' ';
        std::istringstream eq_row(line);
        double et, ei, ek, eq_q;
        eq_row >> et >> ei >> ek >> eq_q;
        CHECK(std::abs(ei) < 1e-9);
        CHECK(std::abs(ek) < 1e-9);
        CHECK(std::abs(eq_q) < 1e-9);
    }

    // exact columns track the expansion values at small epsilon
    REQUIRE(run_cli("evolve psi.dm --steps 2 -o short.csv", dir).exit_code == 0);
    CHECK(run_cli("correlations short.csv --exact -o exact.csv", dir).exit_code == 0);
    const std::string exact_csv = read_text(dir + "/exact.csv");
    CHECK(exact_csv.find("I_exact_bits,C_exact_bits,D_exact_bits") != std::string::npos);
    std::istringstream in2(exact_csv);
    std::getline(in2, line);
    std::getline(in2, line);
    std::getline(in2, line);
    for (char& c : line)
        if (c == ',') c = ' ';
    std::istringstream row2(line);
    double cols[11];
    for (double& c : cols) row2 >> c;
    const double eps = 1e-5;
    const double scale = eps * eps / M_LN2;
    CHECK(cols[8] == doctest::Approx(cols[1] * scale).epsilon(1e-3));   // I
    CHECK(cols[9] == doctest::Approx(cols[2] * scale).epsilon(1e-2));   // C vs K
    CHECK(cols[10] == doctest::Approx(cols[3] * scale).epsilon(1e-2));  // D vs Q
}

TEST_CASE("fit command") {
    const std::string dir = fresh_dir("fit");
    save_deviation(testsup::full_superposition_state(), dir + "/super.dm");
    REQUIRE(run_cli("evolve super.dm -o series.csv", dir).exit_code == 0);

    CHECK(run_cli("fit series.csv -o report.txt --curves curves.csv", dir).exit_code == 0);
    const std::string report = read_text(dir + "/report.txt");

    auto value_of = [&report](const std::string& key) {
        const auto pos = report.find(key + " = ");
        REQUIRE(pos != std::string::npos);
        return std::strtod(report.c_str() + pos + key.size() + 3, nullptr);
    };
    CHECK(value_of("J0") == doctest::Approx(17e-9).epsilon(1e-6));
    CHECK(value_of("J1") == doctest::Approx(3.0e-9).epsilon(1e-6));
    CHECK(value_of("J2") == doctest::Approx(3.4e-9).epsilon(1e-6));
    CHECK(value_of("consistency_ok") == 1.0);
    CHECK(read_text(dir + "/curves.csv").find("popR2_fit") != std::string::npos);

    // noisy fit still reports, with nonzero uncertainties
    CHECK(run_cli("fit series.csv --noise 0.01 --noise-seed 1 -o noisy.txt", dir).exit_code ==
          0);
    const std::string noisy = read_text(dir + "/noisy.txt");
    const auto pos = noisy.find("J0_sigma = ");
    REQUIRE(pos != std::string::npos);
    CHECK(std::strtod(noisy.c_str() + pos + 11, nullptr) > 0.0);

    // X states have no 01/23 coherences: degenerate, exit 5
    REQUIRE(run_cli("prepare psi+ -o psi.dm", dir).exit_code == 0);
    REQUIRE(run_cli("evolve psi.dm -o bell_series.csv", dir).exit_code == 0);
    const RunResult bad = run_cli("fit bell_series.csv -o r.txt", dir);
    CHECK(bad.exit_code == 5);
    CHECK(bad.output.find("DegenerateSignal") != std::string::npos);
}

TEST_CASE("reproduce pipeline on a short grid") {
    const std::string dir = fresh_dir("reproduce");
    CHECK(run_cli("reproduce --steps 3 --outdir out", dir).exit_code == 0);
    for (const char* stem : {"x_random", "psi_plus", "psi_minus", "phi_plus", "phi_minus"}) {
        CHECK(fs::exists(dir + "/out/" + stem + ".dm"));
        CHECK(fs::exists(dir + "/out/" + stem + "_series.csv"));
        CHECK(fs::exists(dir + "/out/" + stem + "_correlations.csv"));
    }
    const std::string summary = read_text(dir + "/out/summary.csv");
    CHECK(summary.find("state,I0,K0,Q0") != std::string::npos);
    CHECK(summary.find("psi+") != std::string::npos);
}

TEST_CASE("config file plus flag override") {
    const std::string dir = fresh_dir("config");
    std::ofstream(dir + "/cfg.txt") << "n_steps = 5\ndt = 2e-3\n";
    REQUIRE(run_cli("prepare psi+ -o psi.dm", dir).exit_code == 0);
    CHECK(run_cli("evolve psi.dm --config cfg.txt -o a.csv", dir).exit_code == 0);
    CHECK(load_time_series(dir + "/a.csv").size() == 5);
    // flags win over the file
    CHECK(run_cli("evolve psi.dm --config cfg.txt --steps 2 -o b.csv", dir).exit_code == 0);
    CHECK(load_time_series(dir + "/b.csv").size() == 2);

    const RunResult missing = run_cli("evolve nope.dm -o c.csv", dir);
    CHECK(missing.exit_code == 3);

    const RunResult unwritable = run_cli("prepare psi+ -o /nonexistent_dir/x.dm", dir);
    CHECK(unwritable.exit_code == 3);

    // DEVCORR_CONFIG provides defaults when --config is absent
    const RunResult env_run =
        run_cli("evolve psi.dm -o d.csv", dir, "DEVCORR_CONFIG=" + dir + "/cfg.txt");
    CHECK(env_run.exit_code == 0);
    CHECK(load_time_series(dir + "/d.csv").size() == 5);
}
