#pragma once

// Boundary-value completion: minimise the discrete energy over planar curves joining p to q
// with prescribed tangent angles at both ends.
//
// The solver works in angle space. A curve with m equal segments of length l is described by
// its segment directions psi_0..psi_{m-1}; l follows from the chord condition p + l*sum(e^{i psi}) = q.
// The prescribed angles act as virtual directions before the first and after the last segment,
// so the boundary vertices carry a half-cell turning term:
//
//     E(psi) = sum_{i=0..m} sqrt(phi_i^2 + a^2 c_i^2),   phi = diff(theta0, psi..., theta1),
//     c_i = l, except c_0 = c_m = l/2.
//
// Descent uses the analytic gradient, a tridiagonal Sobolev preconditioner and projection onto
// the chord constraint, with a backtracking line search that only accepts energy decreases.

#include <cstddef>
#include <optional>
#include <vector>

#include "thetacurve/extremal.hpp"
#include "thetacurve/geometry.hpp"

namespace thetacurve {

/// sum over vertices of sqrt(kappa_i^2 + a^2) ds_i. Interior vertices use the turning angle over
/// the mean adjacent segment length; the endpoints contribute a times half their segment.
/// Requires at least three vertices.
double discrete_energy(const Polyline& p, double a);

/// Central-difference gradient of discrete_energy per vertex, with displacement
/// 1e-7 * mean segment length. Both endpoints and their neighbours report exactly zero.
std::vector<Vec2> discrete_gradient(const Polyline& p, double a);

/// Sum of signed turning angles at interior vertices.
double total_turning(const Polyline& p);

struct FirstIntegralFit {
  double delta = 0.0;
  double residual = 0.0;
};

/// Least-squares constant of the first integral over interior samples. The residual is the
/// larger of the relative first-integral defect at the fitted constant and the relative
/// Euler-Lagrange defect |u'' - a^2 u| / (1 + |u''|), so non-critical curves such as circles
/// cannot pass. Throws NotApplicable for geodesics (max |kappa| <= 1e-6).
FirstIntegralFit fit_first_integral(const CurvatureSamples& k, double a);
FirstIntegralFit fit_first_integral(const PlanarCurve& curve, double a);

struct CompletionProblem {
  Vec2 p{0.0, 0.0};
  Vec2 q{1.0, 0.0};
  double theta0 = 0.0;
  double theta1 = 0.0;
  double a = 1.0;
  std::size_t nodes = 128;
  std::size_t max_iters = 2000;
  double step0 = 1.0;
  double tol = 1e-8;
};

/// Throws InvariantViolation for p == q, nodes < 8, a < 0 or tol <= 0 and for non-finite fields.
void validate(const CompletionProblem& problem);

struct SolverReport {
  std::size_t iterations = 0;
  std::vector<double> energy_history;
  double final_energy = 0.0;
  double gradient_norm = 0.0;
  bool converged = false;
  /// Empty when the solution is a geodesic.
  std::optional<double> fitted_delta;
  std::optional<double> first_integral_residual;
  std::optional<double> el_residual;
};

struct CompletionResult {
  PlanarCurve curve;
  SolverReport report;
};

/// Vertices are uniform in arc length with the end vertices exactly at p and q. theta holds the
/// prescribed angles at the ends and mean segment directions inside; kappa is the turning angle
/// over the segment length inside and is extrapolated from the interior at the two ends.
/// Throws TrivialProblem for a == 0. A run that stops before reaching tol returns its best
/// iterate with converged == false.
CompletionResult complete(const CompletionProblem& problem);

}  // namespace thetacurve
