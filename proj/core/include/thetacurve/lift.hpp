#pragma once

// Horizontal curves in R^2 x S^1. A planar curve lifts by adjoining its tangent angle as the
// fiber coordinate; the lift lies in the kernel of sin(theta) dx - cos(theta) dy.
//
// The length structure upstairs weights planar motion by a and fiber motion by 1, so the
// length of a lift equals the energy of its projection:
//
//     sr_length = sum sqrt(a^2 |dP|^2 + dtheta^2).

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "thetacurve/geometry.hpp"

namespace thetacurve {

/// Samples of (x(t), y(t), theta(t)). theta is a continuous real lift, never reduced mod 2*pi.
/// Regularity of the planar part is checked by the operations that need it, so curves that only
/// move along the fiber are representable.
class LiftedCurve {
 public:
  /// Throws InvalidInput on mismatched lengths, fewer than 2 samples, non-finite values or a
  /// parameter that is not strictly increasing.
  LiftedCurve(std::vector<double> t, std::vector<Vec2> xy, std::vector<double> theta);

  std::size_t size() const { return t_.size(); }
  std::span<const double> t() const { return t_; }
  std::span<const Vec2> xy() const { return xy_; }
  std::span<const double> theta() const { return theta_; }

 private:
  std::vector<double> t_;
  std::vector<Vec2> xy_;
  std::vector<double> theta_;
};

/// t = s, positions copied, theta = the curve's tangent angle. Throws InvalidInput when two
/// consecutive samples coincide.
LiftedCurve lift(const PlanarCurve& c);

/// Planar curve with the fiber angle as theta and kappa = d(theta)/dt by finite differences.
/// Requires a uniform parameter (1e-9 relative), at least 5 samples and a regular projection.
PlanarCurve project(const LiftedCurve& l);

/// max_i |sin(m_i) dx_i - cos(m_i) dy_i| / dt_i with m_i the mean of the two endpoint angles.
double horizontality_residual(const LiftedCurve& l);

/// Requires a > 0.
double sr_length(const LiftedCurve& l, double a);

/// Sheet bookkeeping for serialisation: first_turn = floor(theta_0 / 2pi), winding is the
/// number of whole turns between the first and last sample (truncated toward zero).
struct LiftWinding {
  long first_turn = 0;
  long winding = 0;
};

LiftWinding winding_of(const LiftedCurve& l);

/// CSV `t,x,y,theta` with theta reduced to [0, 2pi).
void write_lifted_csv(std::ostream& out, const LiftedCurve& l);
/// Unwraps the reduced angles and shifts them onto the sheet given by first_turn.
LiftedCurve read_lifted_csv(std::istream& in, long first_turn = 0);

}  // namespace thetacurve
