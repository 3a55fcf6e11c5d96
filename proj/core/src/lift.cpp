#include "thetacurve/lift.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <string>

#include "thetacurve/error.hpp"
#include "thetacurve/io.hpp"

namespace thetacurve {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void require_regular(std::span<const Vec2> xy) {
  for (std::size_t i = 1; i < xy.size(); ++i) {
    if (xy[i] == xy[i - 1]) throw InvalidInput("planar samples " + std::to_string(i - 1) + " and " + std::to_string(i) + " coincide");
  }
}

}  // namespace

LiftedCurve::LiftedCurve(std::vector<double> t, std::vector<Vec2> xy, std::vector<double> theta)
    : t_(std::move(t)), xy_(std::move(xy)), theta_(std::move(theta)) {
  if (t_.size() < 2) throw InvalidInput("lifted curve needs at least 2 samples");
  if (xy_.size() != t_.size() || theta_.size() != t_.size()) {
    throw InvalidInput("lifted curve sample arrays differ in length");
  }
  for (std::size_t i = 0; i < t_.size(); ++i) {
    if (!std::isfinite(t_[i]) || !std::isfinite(xy_[i].x) || !std::isfinite(xy_[i].y) || !std::isfinite(theta_[i])) {
      throw InvalidInput("lifted curve sample " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && !(t_[i] > t_[i - 1])) throw InvalidInput("lifted curve parameter must be strictly increasing");
  }
}

LiftedCurve lift(const PlanarCurve& c) {
  require_regular(c.points());
  return LiftedCurve(c.arclengths(), {c.points().begin(), c.points().end()}, {c.theta().begin(), c.theta().end()});
}

PlanarCurve project(const LiftedCurve& l) {
  if (l.size() < 5) throw InvalidInput("projection needs at least 5 samples");
  require_regular(l.xy());
  const auto [t0, h] = detail::uniform_grid({l.t().begin(), l.t().end()}, "t");
  std::vector<double> theta(l.theta().begin(), l.theta().end());
  auto kappa = finite_diff(theta, h, Derivative::First);
  return PlanarCurve(t0, h, {l.xy().begin(), l.xy().end()}, std::move(theta), std::move(kappa));
}

double horizontality_residual(const LiftedCurve& l) {
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < l.size(); ++i) {
    const double m = 0.5 * (l.theta()[i] + l.theta()[i + 1]);
    const Vec2 d = l.xy()[i + 1] - l.xy()[i];
    const double dt = l.t()[i + 1] - l.t()[i];
    worst = std::max(worst, std::abs(std::sin(m) * d.x - std::cos(m) * d.y) / dt);
  }
  return worst;
}

double sr_length(const LiftedCurve& l, double a) {
  if (!std::isfinite(a) || !(a > 0.0)) throw InvalidInput("sub-Riemannian length needs a > 0");
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < l.size(); ++i) {
    const double planar = norm(l.xy()[i + 1] - l.xy()[i]);
    total += std::hypot(a * planar, l.theta()[i + 1] - l.theta()[i]);
  }
  return total;
}

LiftWinding winding_of(const LiftedCurve& l) {
  LiftWinding w;
  w.first_turn = static_cast<long>(std::floor(l.theta().front() / two_pi));
  w.winding = static_cast<long>(std::trunc((l.theta().back() - l.theta().front()) / two_pi));
  return w;
}

void write_lifted_csv(std::ostream& out, const LiftedCurve& l) {
  out << "t,x,y,theta\n";
  for (std::size_t i = 0; i < l.size(); ++i) {
    double reduced = l.theta()[i] - two_pi * std::floor(l.theta()[i] / two_pi);
    if (reduced >= two_pi) reduced = 0.0;
    out << format_double(l.t()[i]) << ',' << format_double(l.xy()[i].x) << ',' << format_double(l.xy()[i].y) << ','
        << format_double(reduced) << '\n';
  }
  if (!out) throw IoError("failed writing lifted CSV");
}

LiftedCurve read_lifted_csv(std::istream& in, long first_turn) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("lifted CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,x,y,theta") throw InvalidInput("lifted CSV header must be 't,x,y,theta', got '" + line + "'");
  std::vector<double> t, theta;
  std::vector<Vec2> xy;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != 4) throw InvalidInput("line " + std::to_string(line_no) + ": expected 4 fields");
    t.push_back(detail::parse_double(fields[0], line_no));
    xy.push_back({detail::parse_double(fields[1], line_no), detail::parse_double(fields[2], line_no)});
    theta.push_back(detail::parse_double(fields[3], line_no));
  }
  auto unwrapped = unwrap_angles(theta);
  for (double& v : unwrapped) v += two_pi * static_cast<double>(first_turn);
  return LiftedCurve(std::move(t), std::move(xy), std::move(unwrapped));
}

}  // namespace thetacurve
