#pragma once

// Numeric primitives and the planar curve types shared by every module.
//
// All sampled quantities live on uniform grids: a curve is described by its first
// parameter value s0 and a constant step h, never by an explicit list of abscissae.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace thetacurve {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(const Vec2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  friend constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
  friend constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
  friend constexpr Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double k, const Vec2& a) { return {k * a.x, k * a.y}; }
  friend constexpr Vec2 operator*(const Vec2& a, double k) { return {k * a.x, k * a.y}; }
  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }
inline Vec2 unit_vector(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// Signed angle in (-pi, pi] that rotates direction `in` onto direction `out`.
inline double turning_angle(const Vec2& in, const Vec2& out) {
  return std::atan2(cross(in, out), dot(in, out));
}

/// Ordered vertex list with strictly positive segment lengths.
class Polyline {
 public:
  /// Throws InvalidInput for fewer than two vertices, non-finite coordinates or
  /// repeated consecutive vertices.
  explicit Polyline(std::vector<Vec2> vertices);

  std::size_t size() const { return vertices_.size(); }
  std::span<const Vec2> vertices() const { return vertices_; }
  const Vec2& operator[](std::size_t i) const { return vertices_[i]; }
  const Vec2& front() const { return vertices_.front(); }
  const Vec2& back() const { return vertices_.back(); }

  std::size_t segment_count() const { return vertices_.size() - 1; }
  double segment_length(std::size_t i) const { return norm(vertices_[i + 1] - vertices_[i]); }
  double total_length() const;
  double mean_segment_length() const { return total_length() / static_cast<double>(segment_count()); }
  /// Cumulative chord length at each vertex, starting at 0.
  std::vector<double> cumulative_lengths() const;

 private:
  std::vector<Vec2> vertices_;
};

/// Sampled planar curve on a uniform arc-length grid s_i = s0 + i*h.
///
/// theta is the tangent angle as a continuous real lift (no 2*pi jumps between
/// consecutive samples); kappa is the signed curvature.
class PlanarCurve {
 public:
  PlanarCurve(double s0, double h, std::vector<Vec2> points, std::vector<double> theta,
              std::vector<double> kappa);

  std::size_t size() const { return points_.size(); }
  double s0() const { return s0_; }
  double step() const { return h_; }
  double s(std::size_t i) const { return s0_ + static_cast<double>(i) * h_; }
  double length() const { return static_cast<double>(size() - 1) * h_; }
  std::vector<double> arclengths() const;

  std::span<const Vec2> points() const { return points_; }
  std::span<const double> theta() const { return theta_; }
  std::span<const double> kappa() const { return kappa_; }

  Polyline polyline() const { return Polyline(points_); }

 private:
  double s0_;
  double h_;
  std::vector<Vec2> points_;
  std::vector<double> theta_;
  std::vector<double> kappa_;
};

enum class Derivative { First, Second };

/// Cumulative composite-trapezoid integral; result[0] == 0.
std::vector<double> integrate_samples(std::span<const double> values, double h);

/// Second-order finite differences: central in the interior, one-sided at the ends.
/// Requires at least five samples.
std::vector<double> finite_diff(std::span<const double> values, double h, Derivative order);

/// Places n vertices at uniform arc length along the input polyline (both ends kept).
Polyline resample_arclength(const Polyline& p, std::size_t n);

/// Removes 2*pi jumps so that consecutive angles differ by at most pi.
std::vector<double> unwrap_angles(std::span<const double> angles);

/// Tangent angle of sampled positions, from finite-difference derivatives, unwrapped.
std::vector<double> tangent_angles(std::span<const Vec2> points, double h);

/// Signed curvature (x'y'' - y'x'') / |r'|^3 of sampled positions by finite differences.
std::vector<double> curvature_from_points(std::span<const Vec2> points, double h);

/// max_i |x'(s_i)^2 + y'(s_i)^2 - 1| with finite-difference derivatives.
double unit_speed_residual(const PlanarCurve& c);

/// Builds a curve whose theta and kappa are recomputed from the positions.
PlanarCurve curve_from_points(std::vector<Vec2> points, double s0, double h);

}  // namespace thetacurve
