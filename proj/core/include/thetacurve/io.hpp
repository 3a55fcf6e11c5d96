#pragma once

// Plain-text serialization shared by the curve-producing modules.
//
// Curve CSV: header `s,x,y,theta,kappa`, one row per sample, 17 significant digits.
// The s column must be a uniform grid; readers reject anything else.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "thetacurve/geometry.hpp"

namespace thetacurve {

/// Shortest-looking fixed-precision text for a double ("%.<digits>g" without locale).
std::string format_double(double value, int significant_digits = 17);

void write_curve_csv(std::ostream& out, const PlanarCurve& c);
PlanarCurve read_curve_csv(std::istream& in);

namespace detail {

/// Splits one CSV line on commas; no quoting is supported (none of the formats need it).
std::vector<std::string_view> split_csv_line(std::string_view line);
double parse_double(std::string_view field, std::size_t line_no);
/// Recovers (s0, h) from a column that must be uniform to 1e-9 relative; throws InvalidInput.
std::pair<double, double> uniform_grid(const std::vector<double>& s, std::string_view column);

}  // namespace detail

}  // namespace thetacurve
