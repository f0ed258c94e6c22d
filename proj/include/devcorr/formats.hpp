#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "devcorr/deviation.hpp"

namespace devcorr {

// All numbers are serialized with 17 significant digits so doubles
// round-trip exactly through the text formats.
std::string format_double(double x);

// Write `content` to `path` atomically (temp file in the same directory,
// then rename). Throws IoError on failure.
void write_text_atomic(const std::string& path, const std::string& content);

std::string read_text(const std::string& path);

// ---- Deviation-matrix text format ----------------------------------------
// Line 1:   "# deviation 4x4"
// Lines 2-5: 8 whitespace-separated floats each (re im pairs, row-major).
// The parser enforces hermiticity (1e-12) and tracelessness (1e-10).

std::string serialize_deviation(const DeviationMatrix& d);
DeviationMatrix parse_deviation(const std::string& text);

void save_deviation(const DeviationMatrix& d, const std::string& path);
DeviationMatrix load_deviation(const std::string& path);

// ---- Time-series CSV -------------------------------------------------------
// Header "t_s,re_00,im_00,...,im_33" (33 columns, full matrix row-major),
// one row per time point.

struct TimePoint {
    double t;
    DeviationMatrix state;
};

std::string serialize_time_series(const std::vector<TimePoint>& series);
std::vector<TimePoint> parse_time_series(const std::string& text);

void save_time_series(const std::vector<TimePoint>& series, const std::string& path);
std::vector<TimePoint> load_time_series(const std::string& path);

}  // namespace devcorr
