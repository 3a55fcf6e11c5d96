#include "thetacurve/completion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "thetacurve/error.hpp"
#include "thetacurve/io.hpp"

namespace thetacurve {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void require_vertices(const Polyline& p) {
  if (p.size() < 3) throw InvalidInput("need at least 3 vertices, got " + std::to_string(p.size()));
}

void require_weight(double a) {
  if (!std::isfinite(a) || a < 0.0) throw InvalidInput("energy parameter a must be finite and >= 0");
}

// Contribution of vertex k to discrete_energy.
double vertex_term(std::span<const Vec2> v, std::size_t k, double a) {
  const std::size_t last = v.size() - 1;
  if (k == 0) return 0.5 * a * norm(v[1] - v[0]);
  if (k == last) return 0.5 * a * norm(v[last] - v[last - 1]);
  const Vec2 in = v[k] - v[k - 1];
  const Vec2 out = v[k + 1] - v[k];
  const double ds = 0.5 * (norm(in) + norm(out));
  return std::hypot(turning_angle(in, out), a * ds);
}

// Symmetric tridiagonal system: diag[j] on the diagonal, -off[j] coupling j and j+1.
std::vector<double> solve_tridiagonal(const std::vector<double>& diag, const std::vector<double>& off,
                                      const std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  std::vector<double> c(n, 0.0), x(n);
  double denom = diag[0];
  x[0] = rhs[0] / denom;
  for (std::size_t j = 1; j < n; ++j) {
    c[j - 1] = -off[j - 1] / denom;
    denom = diag[j] + off[j - 1] * c[j - 1];
    x[j] = (rhs[j] + off[j - 1] * x[j - 1]) / denom;
  }
  for (std::size_t j = n - 1; j-- > 0;) x[j] -= c[j] * x[j + 1];
  return x;
}

double dot(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

class AngleProblem {
 public:
  AngleProblem(Vec2 chord, double theta0, double theta1, double a) : Q_(chord), t0_(theta0), t1_(theta1), a_(a) {}

  void set_final_angle(double theta1) { t1_ = theta1; }
  double final_angle() const { return t1_; }

  Vec2 direction_sum(const std::vector<double>& psi) const {
    Vec2 c;
    for (double t : psi) c += unit_vector(t);
    return c;
  }

  // Segment length implied by the chord condition; NaN when the directions point away from q.
  double segment_length(const std::vector<double>& psi) const {
    const double cq = thetacurve::dot(direction_sum(psi), Q_);
    if (!(cq > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return thetacurve::dot(Q_, Q_) / cq;
  }

  double constraint(const std::vector<double>& psi) const { return cross(direction_sum(psi), Q_); }

  std::vector<double> constraint_gradient(const std::vector<double>& psi) const {
    std::vector<double> g(psi.size());
    for (std::size_t j = 0; j < psi.size(); ++j) g[j] = cross({-std::sin(psi[j]), std::cos(psi[j])}, Q_);
    return g;
  }

  double cell(std::size_t i, std::size_t m, double l) const { return (i == 0 || i == m) ? 0.5 * l : l; }

  double turn(const std::vector<double>& psi, std::size_t i) const {
    const std::size_t m = psi.size();
    const double before = i == 0 ? t0_ : psi[i - 1];
    const double after = i == m ? t1_ : psi[i];
    return after - before;
  }

  double energy(const std::vector<double>& psi) const {
    const double l = segment_length(psi);
    if (!std::isfinite(l)) return std::numeric_limits<double>::infinity();
    const std::size_t m = psi.size();
    double e = 0.0;
    for (std::size_t i = 0; i <= m; ++i) e += std::hypot(turn(psi, i), a_ * cell(i, m, l));
    return e;
  }

  // Energy gradient and the preconditioner weights w_i = (a c_i)^2 / F_i^3.
  void gradient(const std::vector<double>& psi, std::vector<double>& g, std::vector<double>& w) const {
    const std::size_t m = psi.size();
    const double l = segment_length(psi);
    std::vector<double> u(m + 1);
    w.assign(m + 1, 0.0);
    double dE_dl = 0.0;
    for (std::size_t i = 0; i <= m; ++i) {
      const double c = cell(i, m, l);
      const double F = std::hypot(turn(psi, i), a_ * c);
      u[i] = turn(psi, i) / F;
      dE_dl += a_ * a_ * c * (c / l) / F;
      w[i] = (a_ * c) * (a_ * c) / (F * F * F);
    }
    const double cq = thetacurve::dot(direction_sum(psi), Q_);
    const double scale = -thetacurve::dot(Q_, Q_) / (cq * cq);
    g.assign(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      const double dl = scale * thetacurve::dot({-std::sin(psi[j]), std::cos(psi[j])}, Q_);
      g[j] = u[j] - u[j + 1] + dE_dl * dl;
    }
  }

  static std::vector<double> precondition(const std::vector<double>& w, const std::vector<double>& r) {
    const std::size_t m = r.size();
    std::vector<double> diag(m), off(m > 0 ? m - 1 : 0);
    for (std::size_t j = 0; j < m; ++j) diag[j] = w[j] + w[j + 1];
    for (std::size_t j = 0; j + 1 < m; ++j) off[j] = w[j + 1];
    return solve_tridiagonal(diag, off, r);
  }

  // Newton steps along the preconditioned constraint gradient until the chord condition holds.
  void restore(std::vector<double>& psi, const std::vector<double>& w) const {
    const double tolerance = 1e-14 * static_cast<double>(psi.size()) * norm(Q_);
    for (int k = 0; k < 50; ++k) {
      const double gc = constraint(psi);
      if (std::abs(gc) <= tolerance) return;
      const auto dg = constraint_gradient(psi);
      const auto z = precondition(w, dg);
      const double slope = dot(dg, z);
      if (!(std::abs(slope) > 0.0)) return;
      for (std::size_t j = 0; j < psi.size(); ++j) psi[j] -= gc / slope * z[j];
    }
  }

 private:
  Vec2 Q_;
  double t0_;
  double t1_;
  double a_;
};

struct Descent {
  std::vector<double> direction;
  double gradient_norm = 0.0;
  std::vector<double> weights;
};

Descent projected_descent(const AngleProblem& ap, const std::vector<double>& psi) {
  Descent d;
  std::vector<double> g;
  ap.gradient(psi, g, d.weights);
  const auto dg = ap.constraint_gradient(psi);
  const auto z1 = AngleProblem::precondition(d.weights, g);
  const auto z2 = AngleProblem::precondition(d.weights, dg);
  const double lambda = dot(dg, z1) / dot(dg, z2);
  d.direction.resize(psi.size());
  for (std::size_t j = 0; j < psi.size(); ++j) {
    d.direction[j] = z1[j] - lambda * z2[j];
    d.gradient_norm = std::max(d.gradient_norm, std::abs(g[j] - lambda * dg[j]));
  }
  return d;
}

// Cubic Hermite blend between the endpoint rays, resampled to uniform arc length.
std::vector<double> initial_directions(const CompletionProblem& pr) {
  const Vec2 Q = pr.q - pr.p;
  const double D = norm(Q);
  const Vec2 m0 = D * unit_vector(pr.theta0);
  const Vec2 m1 = D * unit_vector(pr.theta1);
  const std::size_t dense = 4 * pr.nodes;
  std::vector<Vec2> pts(dense);
  for (std::size_t i = 0; i < dense; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(dense - 1);
    const double t2 = t * t, t3 = t2 * t;
    pts[i] = (2 * t3 - 3 * t2 + 1) * pr.p + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * pr.q + (t3 - t2) * m1;
  }
  const Polyline uniform = resample_arclength(Polyline(std::move(pts)), pr.nodes);
  std::vector<double> psi(uniform.segment_count());
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const Vec2 e = uniform[j + 1] - uniform[j];
    psi[j] = std::atan2(e.y, e.x);
  }
  psi = unwrap_angles(psi);
  const double shift = two_pi * std::round((psi[0] - pr.theta0) / two_pi);
  for (double& t : psi) t -= shift;
  return psi;
}

PlanarCurve assemble_curve(const CompletionProblem& pr, const AngleProblem& ap, const std::vector<double>& psi) {
  const std::size_t m = psi.size();
  const double l = ap.segment_length(psi);
  std::vector<Vec2> pts(m + 1);
  pts[0] = pr.p;
  Vec2 sum;
  for (std::size_t k = 1; k < m; ++k) {
    sum += unit_vector(psi[k - 1]);
    pts[k] = pr.p + l * sum;
  }
  pts[m] = pr.q;

  std::vector<double> theta(m + 1), kappa(m + 1);
  theta[0] = pr.theta0;
  theta[m] = ap.final_angle();
  for (std::size_t k = 1; k < m; ++k) {
    theta[k] = 0.5 * (psi[k - 1] + psi[k]);
    kappa[k] = (psi[k] - psi[k - 1]) / l;
  }
  const auto u = bounded_curvature(kappa, pr.a);
  auto end_value = [&](double u1, double u2, double u3, double u4) {
    double ue = 4.0 * u1 - 6.0 * u2 + 4.0 * u3 - u4;
    ue = std::clamp(ue, -1.0 + 1e-12, 1.0 - 1e-12);
    return pr.a * ue / std::sqrt(1.0 - ue * ue);
  };
  kappa[0] = end_value(u[1], u[2], u[3], u[4]);
  kappa[m] = end_value(u[m - 1], u[m - 2], u[m - 3], u[m - 4]);
  return PlanarCurve(0.0, l, std::move(pts), std::move(theta), std::move(kappa));
}

}  // namespace

double discrete_energy(const Polyline& p, double a) {
  require_vertices(p);
  require_weight(a);
  double e = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) e += vertex_term(p.vertices(), k, a);
  return e;
}

std::vector<Vec2> discrete_gradient(const Polyline& p, double a) {
  require_vertices(p);
  require_weight(a);
  const std::size_t n = p.size();
  std::vector<Vec2> v(p.vertices().begin(), p.vertices().end());
  std::vector<Vec2> grad(n);
  const double eps = 1e-7 * p.mean_segment_length();
  auto local = [&](std::size_t j) {
    double e = 0.0;
    for (std::size_t k = j - 1; k <= j + 1; ++k) e += vertex_term(v, k, a);
    return e;
  };
  for (std::size_t j = 2; j + 2 < n; ++j) {
    for (double Vec2::*field : {&Vec2::x, &Vec2::y}) {
      const double saved = v[j].*field;
      v[j].*field = saved + eps;
      const double plus = local(j);
      v[j].*field = saved - eps;
      const double minus = local(j);
      v[j].*field = saved;
      grad[j].*field = (plus - minus) / (2.0 * eps);
    }
  }
  return grad;
}

double total_turning(const Polyline& p) {
  require_vertices(p);
  double total = 0.0;
  for (std::size_t k = 1; k + 1 < p.size(); ++k) total += turning_angle(p[k] - p[k - 1], p[k + 1] - p[k]);
  return total;
}

FirstIntegralFit fit_first_integral(const CurvatureSamples& k, double a) {
  if (k.size() < 32) throw InvalidInput("first-integral fit needs at least 32 samples, got " + std::to_string(k.size()));
  if (!std::isfinite(a) || !(a > 0.0)) throw InvalidInput("first-integral fit needs a > 0");
  double kmax = 0.0;
  for (double v : k.kappa) kmax = std::max(kmax, std::abs(v));
  if (kmax <= 1e-6) throw NotApplicable("curve is a geodesic (max |kappa| = " + format_double(kmax, 6) + ")");

  const auto dk = curvature_derivative(k, a);
  const auto u = bounded_curvature(k.kappa, a);
  const auto d2u = finite_diff(u, k.h, Derivative::Second);
  const double a4 = a * a * a * a;
  const std::size_t n = k.size();
  std::vector<double> A(n), B(n);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double w = k.kappa[i] * k.kappa[i] + a * a;
    A[i] = w * w * w / a4;
    B[i] = w * w;
    num += A[i] * (dk[i] * dk[i] + B[i]);
    den += A[i] * A[i];
  }
  FirstIntegralFit fit;
  fit.delta = num / den;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double lhs = dk[i] * dk[i];
    const double fi = std::abs(lhs - (A[i] * fit.delta - B[i])) / (1.0 + lhs);
    const double el = std::abs(d2u[i] - a * a * u[i]) / (1.0 + std::abs(d2u[i]));
    fit.residual = std::max({fit.residual, fi, el});
  }
  return fit;
}

FirstIntegralFit fit_first_integral(const PlanarCurve& curve, double a) {
  CurvatureSamples k;
  k.s0 = curve.s0();
  k.h = curve.step();
  k.kappa.assign(curve.kappa().begin(), curve.kappa().end());
  return fit_first_integral(k, a);
}

void validate(const CompletionProblem& pr) {
  for (double v : {pr.p.x, pr.p.y, pr.q.x, pr.q.y, pr.theta0, pr.theta1, pr.a, pr.step0, pr.tol}) {
    if (!std::isfinite(v)) throw InvariantViolation("completion problem fields must be finite");
  }
  if (pr.p == pr.q) throw InvariantViolation("p != q violated");
  if (pr.nodes < 8) throw InvariantViolation("nodes >= 8 violated (nodes = " + std::to_string(pr.nodes) + ")");
  if (pr.a < 0.0) throw InvariantViolation("a >= 0 violated");
  if (!(pr.tol > 0.0)) throw InvariantViolation("tol > 0 violated");
  if (!(pr.step0 > 0.0)) throw InvariantViolation("step0 > 0 violated");
}

CompletionResult complete(const CompletionProblem& pr) {
  validate(pr);
  if (pr.a == 0.0) {
    throw TrivialProblem("a = 0 reduces the energy to total absolute curvature; any curve with the prescribed "
                         "total turning is optimal");
  }
  std::vector<double> psi = initial_directions(pr);
  AngleProblem ap(pr.q - pr.p, pr.theta0, pr.theta1, pr.a);
  ap.set_final_angle(pr.theta1 + two_pi * std::round((psi.back() - pr.theta1) / two_pi));

  SolverReport report;
  {
    std::vector<double> g, w;
    ap.gradient(psi, g, w);
    ap.restore(psi, w);
  }
  double energy = ap.energy(psi);
  report.energy_history.push_back(energy);

  double step = pr.step0;
  Descent d = projected_descent(ap, psi);
  while (report.iterations < pr.max_iters) {
    if (d.gradient_norm < pr.tol) {
      report.converged = true;
      break;
    }
    step = std::min(pr.step0, 2.0 * step);
    std::vector<double> trial(psi.size());
    bool accepted = false;
    while (step > 1e-14) {
      for (std::size_t j = 0; j < psi.size(); ++j) trial[j] = psi[j] - step * d.direction[j];
      ap.restore(trial, d.weights);
      const double e = ap.energy(trial);
      if (e < energy) {
        accepted = true;
        energy = e;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    psi.swap(trial);
    report.energy_history.push_back(energy);
    ++report.iterations;
    d = projected_descent(ap, psi);
  }
  if (!report.converged && d.gradient_norm < pr.tol) report.converged = true;
  report.gradient_norm = d.gradient_norm;
  report.final_energy = energy;

  PlanarCurve curve = assemble_curve(pr, ap, psi);
  try {
    const auto fit = fit_first_integral(curve, pr.a);
    report.fitted_delta = fit.delta;
    report.first_integral_residual = fit.residual;
  } catch (const NotApplicable&) {
  }
  CurvatureSamples samples{curve.s0(), curve.step(), {curve.kappa().begin(), curve.kappa().end()}};
  if (samples.size() >= 16) report.el_residual = el_residual(samples, pr.a);
  return {std::move(curve), std::move(report)};
}

}  // namespace thetacurve
