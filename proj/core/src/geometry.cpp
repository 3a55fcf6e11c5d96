#include "thetacurve/geometry.hpp"

#include <algorithm>
#include <numbers>
#include <string>

#include "thetacurve/error.hpp"

namespace thetacurve {

namespace {

void require_step(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw InvalidInput("step must be positive and finite, got " + std::to_string(h));
  }
}

std::vector<double> component(std::span<const Vec2> pts, double Vec2::*field) {
  std::vector<double> out(pts.size());
  std::transform(pts.begin(), pts.end(), out.begin(), [field](const Vec2& p) { return p.*field; });
  return out;
}

}  // namespace

Polyline::Polyline(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 2) {
    throw InvalidInput("polyline needs at least 2 vertices, got " + std::to_string(vertices_.size()));
  }
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (!std::isfinite(vertices_[i].x) || !std::isfinite(vertices_[i].y)) {
      throw InvalidInput("polyline vertex " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && vertices_[i] == vertices_[i - 1]) {
      throw InvalidInput("polyline segment " + std::to_string(i - 1) + " has zero length");
    }
  }
}

double Polyline::total_length() const {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < vertices_.size(); ++i) total += segment_length(i);
  return total;
}

std::vector<double> Polyline::cumulative_lengths() const {
  std::vector<double> out(vertices_.size(), 0.0);
  for (std::size_t i = 1; i < vertices_.size(); ++i) out[i] = out[i - 1] + segment_length(i - 1);
  return out;
}

PlanarCurve::PlanarCurve(double s0, double h, std::vector<Vec2> points, std::vector<double> theta,
                         std::vector<double> kappa)
    : s0_(s0), h_(h), points_(std::move(points)), theta_(std::move(theta)), kappa_(std::move(kappa)) {
  require_step(h_);
  if (!std::isfinite(s0_)) throw InvalidInput("curve start parameter is not finite");
  if (points_.size() < 2) throw InvalidInput("curve needs at least 2 samples");
  if (theta_.size() != points_.size() || kappa_.size() != points_.size()) {
    throw InvalidInput("curve sample arrays differ in length");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i].x) || !std::isfinite(points_[i].y) || !std::isfinite(theta_[i]) ||
        !std::isfinite(kappa_[i])) {
      throw InvalidInput("curve sample " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && std::abs(theta_[i] - theta_[i - 1]) >= std::numbers::pi) {
      throw InvalidInput("tangent angle jumps by pi or more at sample " + std::to_string(i));
    }
  }
}

std::vector<double> PlanarCurve::arclengths() const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = s(i);
  return out;
}

std::vector<double> integrate_samples(std::span<const double> values, double h) {
  if (values.size() < 2) {
    throw InvalidInput("integration needs at least 2 samples, got " + std::to_string(values.size()));
  }
  require_step(h);
  std::vector<double> out(values.size());
  out[0] = 0.0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    out[i] = out[i - 1] + 0.5 * h * (values[i - 1] + values[i]);
  }
  return out;
}

std::vector<double> finite_diff(std::span<const double> f, double h, Derivative order) {
  if (f.size() < 5) {
    throw InvalidInput("finite differences need at least 5 samples, got " + std::to_string(f.size()));
  }
  require_step(h);
  const std::size_t n = f.size();
  std::vector<double> out(n);
  if (order == Derivative::First) {
    const double inv = 1.0 / (2.0 * h);
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv;
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (f[i + 1] - f[i - 1]) * inv;
    out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv;
  } else {
    const double inv = 1.0 / (h * h);
    out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) * inv;
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) * inv;
    out[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) * inv;
  }
  return out;
}

Polyline resample_arclength(const Polyline& p, std::size_t n) {
  if (n < 3) throw InvalidInput("resampling needs n >= 3, got " + std::to_string(n));
  const std::vector<double> cum = p.cumulative_lengths();
  const double total = cum.back();
  if (!(total > 0.0)) throw InvalidInput("cannot resample a polyline of zero length");

  std::vector<Vec2> out;
  out.reserve(n);
  out.push_back(p.front());
  std::size_t seg = 0;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double target = total * static_cast<double>(k) / static_cast<double>(n - 1);
    while (seg + 2 < cum.size() && cum[seg + 1] < target) ++seg;
    const double t = (target - cum[seg]) / (cum[seg + 1] - cum[seg]);
    out.push_back(p[seg] + t * (p[seg + 1] - p[seg]));
  }
  out.push_back(p.back());
  return Polyline(std::move(out));
}

std::vector<double> unwrap_angles(std::span<const double> angles) {
  std::vector<double> out(angles.begin(), angles.end());
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double offset = 0.0;
  for (std::size_t i = 1; i < out.size(); ++i) {
    const double jump = angles[i] - angles[i - 1];
    offset -= two_pi * std::round(jump / two_pi);
    out[i] = angles[i] + offset;
  }
  return out;
}

std::vector<double> tangent_angles(std::span<const Vec2> points, double h) {
  const auto dx = finite_diff(component(points, &Vec2::x), h, Derivative::First);
  const auto dy = finite_diff(component(points, &Vec2::y), h, Derivative::First);
  std::vector<double> raw(points.size());
  for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = std::atan2(dy[i], dx[i]);
  return unwrap_angles(raw);
}

std::vector<double> curvature_from_points(std::span<const Vec2> points, double h) {
  const auto x = component(points, &Vec2::x);
  const auto y = component(points, &Vec2::y);
  const auto dx = finite_diff(x, h, Derivative::First);
  const auto dy = finite_diff(y, h, Derivative::First);
  const auto ddx = finite_diff(x, h, Derivative::Second);
  const auto ddy = finite_diff(y, h, Derivative::Second);
  std::vector<double> out(points.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double speed2 = dx[i] * dx[i] + dy[i] * dy[i];
    if (!(speed2 > 0.0)) throw InvalidInput("curve is not regular at sample " + std::to_string(i));
    out[i] = (dx[i] * ddy[i] - dy[i] * ddx[i]) / (speed2 * std::sqrt(speed2));
  }
  return out;
}

double unit_speed_residual(const PlanarCurve& c) {
  const auto dx = finite_diff(component(c.points(), &Vec2::x), c.step(), Derivative::First);
  const auto dy = finite_diff(component(c.points(), &Vec2::y), c.step(), Derivative::First);
  double worst = 0.0;
  for (std::size_t i = 0; i < dx.size(); ++i) {
    worst = std::max(worst, std::abs(dx[i] * dx[i] + dy[i] * dy[i] - 1.0));
  }
  return worst;
}

PlanarCurve curve_from_points(std::vector<Vec2> points, double s0, double h) {
  auto theta = tangent_angles(points, h);
  auto kappa = curvature_from_points(points, h);
  return PlanarCurve(s0, h, std::move(points), std::move(theta), std::move(kappa));
}

}  // namespace thetacurve
