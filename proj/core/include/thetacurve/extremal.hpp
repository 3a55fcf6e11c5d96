#pragma once

// Closed-form critical curves of the energy  Theta_a(gamma) = integral of sqrt(kappa^2 + a^2) ds.
//
// Non-geodesic critical curves have squared curvature
//
//     kappa^2(s) = a^2 c f^2(a s) / (a^2 - c f^2(a s)),   c = d - a^2 > 0,
//
// with f one of sinh, cosh, exp. Everything here is organised around the bounded
// quantity u = kappa / sqrt(kappa^2 + a^2) = sqrt(c) f(a s) / a, which satisfies u'' = a^2 u
// and stays smooth up to the ends of the domain where kappa itself blows up.
// Residuals therefore differentiate u, not kappa.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "thetacurve/geometry.hpp"

namespace thetacurve {

enum class Family { Sinh, Cosh, Exp };

std::string_view to_string(Family f);
/// Accepts "sinh", "cosh", "exp" (case-insensitive); throws InvalidInput otherwise.
Family parse_family(std::string_view name);

struct ExtremalSpec {
  double a = 1.0;
  double d = 2.0;
  Family family = Family::Sinh;
};

/// Throws InvariantViolation naming the first violated bound: a > 0, d > a^2, and for
/// the cosh family d < 2a^2.
void validate(const ExtremalSpec& spec);

/// Open arc-length interval; lower is -infinity for the exp family.
struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  bool lower_unbounded() const;
};

Interval domain(const ExtremalSpec& spec);

/// Squared norm of the translational Killing field, i.e. the constant of the first integral:
/// d for sinh, 2a^2 - d for cosh, a^2 for exp.
double killing_norm_sq(const ExtremalSpec& spec);

/// Length of the sampled window for the exp family, chosen so |kappa| at its lower end is
/// 5e-4 * a (the curvature has effectively decayed there).
double exp_lower_window(const ExtremalSpec& spec);

/// Width used for margin defaults and bounds: domain width, or the exp window.
double sampling_width(const ExtremalSpec& spec);
double default_margin(const ExtremalSpec& spec);

/// Closed-form signed curvature (odd branch for sinh, positive for cosh/exp).
double curvature_at(const ExtremalSpec& spec, double s);
/// Closed-form u = kappa / sqrt(kappa^2 + a^2) and its arc-length derivative.
double bounded_curvature_at(const ExtremalSpec& spec, double s);
double bounded_curvature_derivative_at(const ExtremalSpec& spec, double s);

/// Uniformly sampled curvature, independent of where it came from.
struct CurvatureSamples {
  double s0 = 0.0;
  double h = 1.0;
  std::vector<double> kappa;

  std::size_t size() const { return kappa.size(); }
  double s(std::size_t i) const { return s0 + static_cast<double>(i) * h; }
};

/// Curvature of one closed-form extremal on the margin-shrunk domain.
struct CurvatureProfile {
  ExtremalSpec spec;
  Interval domain;
  CurvatureSamples samples;
  double delta = 0.0;
  double margin = 0.0;

  double a() const { return spec.a; }
  std::size_t size() const { return samples.size(); }
};

/// n >= 16 samples, 0 < margin < width/2. For exp the margin trims the upper end only.
CurvatureProfile curvature_profile(const ExtremalSpec& spec, std::size_t n, double margin);
CurvatureProfile curvature_profile(const ExtremalSpec& spec, std::size_t n);

/// u_i = kappa_i / sqrt(kappa_i^2 + a^2).
std::vector<double> bounded_curvature(std::span<const double> kappa, double a);

/// d(kappa)/ds recovered through u = kappa/sqrt(kappa^2 + a^2):
/// kappa' = u' (kappa^2 + a^2)^{3/2} / a^2, with u' by finite differences.
std::vector<double> curvature_derivative(const CurvatureSamples& k, double a);

/// max over interior samples of |kappa'^2 - RHS| / (1 + kappa'^2), where
/// RHS = (kappa^2+a^2)^2 / a^4 * (delta (kappa^2+a^2) - a^4).
double first_integral_residual(const CurvatureSamples& k, double a, double delta);
double first_integral_residual(const CurvatureProfile& p);

/// max over interior samples of |u'' - a^2 u|.
double el_residual(const CurvatureSamples& k, double a);
double el_residual(const CurvatureProfile& p);

struct KillingField {
  std::vector<double> tangential;  ///< -a^2 / sqrt(kappa^2 + a^2)
  std::vector<double> normal;      ///< d/ds (kappa / sqrt(kappa^2 + a^2))

  double norm_sq(std::size_t i) const { return tangential[i] * tangential[i] + normal[i] * normal[i]; }
};

KillingField killing_field_J(const CurvatureSamples& k, double a);
KillingField killing_field_J(const CurvatureProfile& p);

/// max over all samples of | |J|^2 - delta |.
double killing_norm_residual(const CurvatureSamples& k, double a, double delta);
double killing_norm_residual(const CurvatureProfile& p);

/// Profile-plane reconstruction: r = kappa / sqrt(delta (kappa^2+a^2)) (signed, so the
/// sinh branch crosses the axis smoothly) and z = -integral a^2 / sqrt(delta (kappa^2+a^2)).
/// Points are (r, z); kappa carries the generating samples, theta = atan2(z', r').
PlanarCurve curve_from_quadrature(const CurvatureProfile& p);
PlanarCurve curve_from_quadrature(const ExtremalSpec& spec, std::size_t n, double margin);

/// theta = integral kappa from 0, points = (integral cos theta, integral sin theta) from the origin.
PlanarCurve curve_from_turning_angle(const CurvatureSamples& k);
PlanarCurve curve_from_turning_angle(const CurvatureProfile& p);

/// Profile CSV `s,kappa`.
void write_profile_csv(std::ostream& out, const CurvatureSamples& k);
CurvatureSamples read_profile_csv(std::istream& in);

}  // namespace thetacurve
