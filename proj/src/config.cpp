#include "devcorr/config.hpp"

#include <cstdlib>
#include <sstream>

#include "devcorr/errors.hpp"
#include "devcorr/formats.hpp"

namespace devcorr {

void RunConfig::validate() const {
    if (!(C > 0.0)) throw InvalidInput("config: C must be positive");
    if (J0 < 0.0 || J1 < 0.0 || J2 < 0.0) {
        throw InvalidInput("config: spectral densities must be nonnegative");
    }
    if (!(epsilon > 0.0)) throw InvalidInput("config: epsilon must be positive");
    if (alpha == 0.0) throw InvalidInput("config: alpha must be nonzero");
    if (!(dt > 0.0)) throw InvalidInput("config: dt must be positive");
    if (n_steps < 1) throw InvalidInput("config: n_steps must be >= 1");
    if (!(opt_tol > 0.0)) throw InvalidInput("config: opt_tol must be positive");
    if (!(fit_consistency > 0.0)) throw InvalidInput("config: fit_consistency must be positive");
}

RunConfig parse_config(const std::string& text, RunConfig base) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // trim
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InvalidInput("config line " + std::to_string(lineno) + ": expected key=value");
        }
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            const auto b2 = s.find_first_not_of(" \t");
            const auto e2 = s.find_last_not_of(" \t");
            s = (b2 == std::string::npos) ? std::string() : s.substr(b2, e2 - b2 + 1);
        };
        trim(key);
        trim(value);

        char* end = nullptr;
        if (key == "seed") {  // integer parse: doubles lose precision past 2^53
            base.seed = std::strtoull(value.c_str(), &end, 10);
            if (end == value.c_str() || *end != '\0') {
                throw InvalidInput("config key 'seed': non-integer value '" + value + "'");
            }
            continue;
        }
        const double num = std::strtod(value.c_str(), &end);
        if (end == value.c_str() || *end != '\0') {
            throw InvalidInput("config key '" + key + "': non-numeric value '" + value + "'");
        }

        if (key == "C") base.C = num;
        else if (key == "J0") base.J0 = num;
        else if (key == "J1") base.J1 = num;
        else if (key == "J2") base.J2 = num;
        else if (key == "epsilon") base.epsilon = num;
        else if (key == "alpha") base.alpha = num;
        else if (key == "dt") base.dt = num;
        else if (key == "n_steps") base.n_steps = static_cast<int>(num);
        else if (key == "opt_tol") base.opt_tol = num;
        else if (key == "fit_consistency") base.fit_consistency = num;
        else throw InvalidInput("config: unknown key '" + key + "'");
    }
    base.validate();
    return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
    return parse_config(read_text(path), base);
}

std::string serialize_config(const RunConfig& c) {
    std::string s;
    auto kv = [&s](const char* key, const std::string& v) {
        s += key;
        s += " = ";
        s += v;
        s += '\n';
    };
    kv("C", format_double(c.C));
    kv("J0", format_double(c.J0));
    kv("J1", format_double(c.J1));
    kv("J2", format_double(c.J2));
    kv("epsilon", format_double(c.epsilon));
    kv("alpha", format_double(c.alpha));
    kv("dt", format_double(c.dt));
    kv("n_steps", std::to_string(c.n_steps));
    kv("seed", std::to_string(c.seed));
    kv("opt_tol", format_double(c.opt_tol));
    kv("fit_consistency", format_double(c.fit_consistency));
    return s;
}

}  // namespace devcorr
