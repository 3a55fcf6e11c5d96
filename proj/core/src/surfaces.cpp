#include "thetacurve/surfaces.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "thetacurve/error.hpp"
#include "thetacurve/io.hpp"

namespace thetacurve {

std::string_view to_string(SurfaceType t) {
  switch (t) {
    case SurfaceType::ConicType: return "conic";
    case SurfaceType::HyperbolicType: return "hyperbolic";
    case SurfaceType::Pseudosphere: return "pseudosphere";
  }
  return "?";
}

SurfaceType classify(const ExtremalSpec& spec) {
  validate(spec);
  switch (spec.family) {
    case Family::Sinh: return SurfaceType::ConicType;
    case Family::Cosh: return SurfaceType::HyperbolicType;
    case Family::Exp: return SurfaceType::Pseudosphere;
  }
  return SurfaceType::ConicType;
}

std::vector<double> binormal_speed(const CurvatureProfile& profile) {
  auto u = bounded_curvature(profile.samples.kappa, profile.a());
  for (double& v : u) v = std::abs(v);
  return u;
}

std::size_t RevolutionSurface::face_count() const {
  const std::size_t columns = closed ? angle_count() : angle_count() - 1;
  return 2 * (profile_size() - 1) * columns;
}

Vec3 RevolutionSurface::vertex(std::size_t i, std::size_t j) const {
  const Vec2 p = profile.points()[i];
  return {p.x * std::cos(angles[j]), p.x * std::sin(angles[j]), p.y};
}

RevolutionSurface revolve(PlanarCurve profile, std::size_t n_angle, double sweep) {
  constexpr double full = 2.0 * std::numbers::pi;
  if (n_angle < 3) throw InvalidInput("need at least 3 rotation angles, got " + std::to_string(n_angle));
  if (!(sweep > 0.0) || sweep > full) throw InvalidInput("sweep must lie in (0, 2pi], got " + format_double(sweep));
  RevolutionSurface s{std::move(profile), {}, sweep == full, std::nullopt, 0.0, 0.0};
  s.angles.resize(n_angle);
  const double step = s.closed ? full / static_cast<double>(n_angle) : sweep / static_cast<double>(n_angle - 1);
  for (std::size_t j = 0; j < n_angle; ++j) s.angles[j] = static_cast<double>(j) * step;
  return s;
}

RevolutionSurface evolve(const ExtremalSpec& spec, std::size_t n_s, std::size_t n_angle, double margin, double sweep) {
  validate(spec);
  if (n_s < 32) throw InvalidInput("surface needs at least 32 profile samples, got " + std::to_string(n_s));
  if (n_angle < 8) throw InvalidInput("surface needs at least 8 rotation angles, got " + std::to_string(n_angle));
  const CurvatureProfile p = curvature_profile(spec, n_s, margin);
  RevolutionSurface s = revolve(curve_from_quadrature(p), n_angle, sweep);
  s.spec = spec;
  s.delta = p.delta;
  s.angular_rate = std::sqrt(p.delta);
  return s;
}

std::vector<double> gaussian_curvature(const RevolutionSurface& surface) {
  const std::size_t n = surface.profile_size();
  if (n < 32) throw InvalidInput("Gaussian curvature needs at least 32 profile samples, got " + std::to_string(n));
  const double h = surface.profile.step();
  std::vector<double> r(n);
  double rmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = surface.profile.points()[i].x;
    rmax = std::max(rmax, std::abs(r[i]));
  }
  const auto d1 = finite_diff(r, h, Derivative::First);
  const auto d2 = finite_diff(r, h, Derivative::Second);
  const auto d3 = finite_diff(d2, h, Derivative::First);
  double d1max = 0.0;
  for (double v : d1) d1max = std::max(d1max, std::abs(v));

  std::vector<double> K(n - 2);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    double k;
    if (std::abs(r[i]) > 1e-6 * rmax) {
      k = -d2[i] / r[i];
    } else if (std::abs(d1[i]) > 1e-12 * d1max) {
      k = -d3[i] / d1[i];
    } else {
      throw InvalidInput("profile touches the axis with zero slope at sample " + std::to_string(i));
    }
    if (!std::isfinite(k)) throw InvalidInput("Gaussian curvature is not finite at sample " + std::to_string(i));
    K[i - 1] = k;
  }
  return K;
}

double relative_curvature_error(const std::vector<double>& K, double target) {
  double worst = 0.0;
  const double scale = std::abs(target);
  for (double k : K) worst = std::max(worst, std::abs(k - target) / scale);
  return worst;
}

double verify_profile_el(const PlanarCurve& curve, double K) {
  if (!std::isfinite(K) || !(K < 0.0)) throw InvalidInput("profile check needs K < 0, got " + format_double(K));
  double kmax = 0.0;
  for (double v : curve.kappa()) kmax = std::max(kmax, std::abs(v));
  if (kmax <= 1e-6) throw NotApplicable("profile is a geodesic");
  CurvatureSamples k{curve.s0(), curve.step(), {curve.kappa().begin(), curve.kappa().end()}};
  return el_residual(k, std::sqrt(-K));
}

void export_obj(std::ostream& out, const RevolutionSurface& surface) {
  const std::size_t ns = surface.profile_size();
  const std::size_t na = surface.angle_count();
  for (std::size_t i = 0; i < ns; ++i) {
    for (std::size_t j = 0; j < na; ++j) {
      const Vec3 v = surface.vertex(i, j);
      out << "v " << format_double(v.x, 9) << ' ' << format_double(v.y, 9) << ' ' << format_double(v.z, 9) << '\n';
    }
  }
  const std::size_t columns = surface.closed ? na : na - 1;
  auto index = [na](std::size_t i, std::size_t j) { return i * na + j + 1; };
  for (std::size_t i = 0; i + 1 < ns; ++i) {
    for (std::size_t j = 0; j < columns; ++j) {
      const std::size_t jn = (j + 1) % na;
      const std::size_t v00 = index(i, j), v10 = index(i + 1, j), v11 = index(i + 1, jn), v01 = index(i, jn);
      out << "f " << v00 << ' ' << v10 << ' ' << v11 << '\n';
      out << "f " << v00 << ' ' << v11 << ' ' << v01 << '\n';
    }
  }
  if (!out) throw IoError("failed writing OBJ stream");
}

}  // namespace thetacurve
