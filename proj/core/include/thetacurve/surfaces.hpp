#pragma once

// Rotational surfaces swept by the critical curves of the energy.
//
// The profile (r, z) of a closed-form extremal, rotated about the z axis, gives a surface of
// constant Gaussian curvature -a^2. The binormal Killing field extends to a rotation whose
// angular rate is sqrt(delta), so that sqrt(delta) * |r| equals the binormal speed
// |kappa| / sqrt(kappa^2 + a^2) along the profile.
//
// r is signed: the sinh profile passes through the axis, and its two halves sweep the same
// surface from opposite sides.

#include <cstddef>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <string_view>
#include <vector>

#include "thetacurve/extremal.hpp"
#include "thetacurve/geometry.hpp"

namespace thetacurve {

enum class SurfaceType { ConicType, HyperbolicType, Pseudosphere };

std::string_view to_string(SurfaceType t);

/// Sinh -> ConicType, Cosh -> HyperbolicType, Exp -> Pseudosphere. Validates the spec first.
SurfaceType classify(const ExtremalSpec& spec);

/// |I| = |kappa| / sqrt(kappa^2 + a^2) for each profile sample.
std::vector<double> binormal_speed(const CurvatureProfile& profile);

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct RevolutionSurface {
  PlanarCurve profile;         ///< points are (r, z)
  std::vector<double> angles;  ///< rotation angles of the mesh columns
  bool closed = true;          ///< last column connects back to the first
  std::optional<ExtremalSpec> spec;
  double delta = 0.0;
  double angular_rate = 0.0;

  std::size_t profile_size() const { return profile.size(); }
  std::size_t angle_count() const { return angles.size(); }
  std::size_t vertex_count() const { return profile_size() * angle_count(); }
  std::size_t face_count() const;
  Vec3 vertex(std::size_t i, std::size_t j) const;
};

/// Rotates an arbitrary profile. sweep == 2pi gives a closed seam with n_angle columns at
/// j * 2pi / n_angle; a smaller sweep gives an open sector with columns at j * sweep / (n_angle - 1).
/// Requires n_angle >= 3 and 0 < sweep <= 2pi.
RevolutionSurface revolve(PlanarCurve profile, std::size_t n_angle, double sweep = 2.0 * std::numbers::pi);

/// Surface swept by the quadrature profile of spec. Requires n_s >= 32 and n_angle >= 8.
RevolutionSurface evolve(const ExtremalSpec& spec, std::size_t n_s, std::size_t n_angle, double margin,
                         double sweep = 2.0 * std::numbers::pi);

/// K_i = -r''/r at interior profile samples 1..n-2, r'' by finite differences. Where |r| is at
/// roundoff level relative to max |r| the limit -r'''/r' is used instead. Needs >= 32 samples;
/// throws InvalidInput where neither form is defined.
std::vector<double> gaussian_curvature(const RevolutionSurface& surface);

/// max_i |K_i - target| / |target|.
double relative_curvature_error(const std::vector<double>& K, double target);

/// el_residual of the curve's curvature with a = sqrt(-K). Throws InvalidInput for K >= 0 and
/// NotApplicable for geodesics (max |kappa| <= 1e-6).
double verify_profile_el(const PlanarCurve& curve, double K);

/// Wavefront OBJ: `v x y z` in profile-major order with 9 significant digits, then two triangles
/// per quad with 1-based indices.
void export_obj(std::ostream& out, const RevolutionSurface& surface);

}  // namespace thetacurve
