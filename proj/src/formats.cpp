#include "devcorr/formats.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "devcorr/errors.hpp"

namespace devcorr {

namespace fs = std::filesystem;

std::string format_double(double x) {
    if (x == 0.0) return "0";  // also flushes negative zero
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_text_atomic(const std::string& path, const std::string& content) {
    if (path.rfind("/dev/", 0) == 0) {  // character devices cannot be renamed onto
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot open for writing: " + path);
        out << content;
        return;
    }
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + tmp.string());
        out << content;
        if (!out) throw IoError("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw IoError("rename failed: " + target.string() + ": " + ec.message());
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string serialize_deviation(const DeviationMatrix& d) {
    std::string out = "# deviation 4x4\n";
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (j) out += ' ';
            out += format_double(d(i, j).real());
            out += ' ';
            out += format_double(d(i, j).imag());
        }
        out += '\n';
    }
    return out;
}

namespace {

std::string first_line(const std::string& text) {
    const auto pos = text.find('\n');
    std::string line = (pos == std::string::npos) ? text : text.substr(0, pos);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    return line;
}

}  // namespace

DeviationMatrix parse_deviation(const std::string& text) {
    if (first_line(text) != "# deviation 4x4") {
        throw InvalidInput("deviation file: missing '# deviation 4x4' header");
    }
    const auto body_pos = text.find('\n');
    std::istringstream in(body_pos == std::string::npos ? "" : text.substr(body_pos + 1));

    ComplexMatrix m(4);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            double re, im;
            if (!(in >> re >> im)) {
                throw InvalidInput("deviation file: expected 32 numeric fields");
            }
            m(i, j) = cplx(re, im);
        }
    }
    std::string extra;
    if (in >> extra) {
        throw InvalidInput("deviation file: trailing content after 32 fields");
    }
    if (!m.is_hermitian(kHermiticityTol)) {
        throw InvalidInput("deviation file: matrix violates hermiticity (1e-12)");
    }
    if (std::abs(m.trace()) > kTraceTol) {
        throw TraceViolation("deviation file: matrix violates tracelessness (1e-10)");
    }
    return DeviationMatrix(m);
}

void save_deviation(const DeviationMatrix& d, const std::string& path) {
    write_text_atomic(path, serialize_deviation(d));
}

DeviationMatrix load_deviation(const std::string& path) {
    return parse_deviation(read_text(path));
}

std::string serialize_time_series(const std::vector<TimePoint>& series) {
    std::string out = "t_s";
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            out += ",re_" + std::to_string(i) + std::to_string(j);
            out += ",im_" + std::to_string(i) + std::to_string(j);
        }
    out += '\n';
    for (const TimePoint& p : series) {
        out += format_double(p.t);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                out += ',';
                out += format_double(p.state(i, j).real());
                out += ',';
                out += format_double(p.state(i, j).imag());
            }
        out += '\n';
    }
    return out;
}

std::vector<TimePoint> parse_time_series(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw InvalidInput("time-series file is empty");
    if (line.rfind("t_s,", 0) != 0) {
        throw InvalidInput("time-series file: header must start with 't_s,'");
    }
    std::vector<TimePoint> series;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        for (char& c : line)
            if (c == ',') c = ' ';
        std::istringstream row(line);
        double t;
        if (!(row >> t)) {
            throw InvalidInput("time-series row " + std::to_string(lineno) + ": bad time");
        }
        ComplexMatrix m(4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                double re, im;
                if (!(row >> re >> im)) {
                    throw InvalidInput("time-series row " + std::to_string(lineno) +
                                       ": expected 32 matrix fields");
                }
                m(i, j) = cplx(re, im);
            }
        series.push_back({t, DeviationMatrix(m)});
    }
    if (series.empty()) throw EmptySeries("time-series file has no rows");
    return series;
}

void save_time_series(const std::vector<TimePoint>& series, const std::string& path) {
    write_text_atomic(path, serialize_time_series(series));
}

std::vector<TimePoint> load_time_series(const std::string& path) {
    return parse_time_series(read_text(path));
}

}  // namespace devcorr
