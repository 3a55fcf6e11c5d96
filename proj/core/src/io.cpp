#include "thetacurve/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "thetacurve/error.hpp"

namespace thetacurve {

std::string format_double(double value, int significant_digits) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general,
                                 significant_digits);
  if (ec != std::errc()) throw IoError("could not format number");
  return std::string(buf, end);
}

namespace detail {

std::vector<std::string_view> split_csv_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

double parse_double(std::string_view field, std::size_t line_no) {
  while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
  while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw InvalidInput("line " + std::to_string(line_no) + ": not a number: '" + std::string(field) + "'");
  }
  return value;
}

std::pair<double, double> uniform_grid(const std::vector<double>& s, std::string_view column) {
  if (s.size() < 2) throw InvalidInput("need at least 2 rows");
  const double s0 = s.front();
  const double h = (s.back() - s0) / static_cast<double>(s.size() - 1);
  if (!(h > 0.0)) throw InvalidInput(std::string(column) + " column must be strictly increasing");
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double expected = s0 + static_cast<double>(i) * h;
    const double scale = std::max({1.0, std::abs(s0), std::abs(s.back())});
    if (std::abs(s[i] - expected) > 1e-9 * scale) {
      throw InvalidInput(std::string(column) + " column is not a uniform grid (row " + std::to_string(i + 2) + ")");
    }
  }
  return {s0, h};
}

}  // namespace detail

void write_curve_csv(std::ostream& out, const PlanarCurve& c) {
  out << "s,x,y,theta,kappa\n";
  for (std::size_t i = 0; i < c.size(); ++i) {
    out << format_double(c.s(i)) << ',' << format_double(c.points()[i].x) << ','
        << format_double(c.points()[i].y) << ',' << format_double(c.theta()[i]) << ','
        << format_double(c.kappa()[i]) << '\n';
  }
  if (!out) throw IoError("failed writing curve CSV");
}

PlanarCurve read_curve_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("curve CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "s,x,y,theta,kappa") {
    throw InvalidInput("curve CSV header must be 's,x,y,theta,kappa', got '" + line + "'");
  }
  std::vector<double> s, theta, kappa;
  std::vector<Vec2> pts;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != 5) {
      throw InvalidInput("line " + std::to_string(line_no) + ": expected 5 fields, got " +
                         std::to_string(fields.size()));
    }
    s.push_back(detail::parse_double(fields[0], line_no));
    pts.push_back({detail::parse_double(fields[1], line_no), detail::parse_double(fields[2], line_no)});
    theta.push_back(detail::parse_double(fields[3], line_no));
    kappa.push_back(detail::parse_double(fields[4], line_no));
  }
  const auto [s0, h] = detail::uniform_grid(s, "s");
  return PlanarCurve(s0, h, std::move(pts), std::move(theta), std::move(kappa));
}

}  // namespace thetacurve
