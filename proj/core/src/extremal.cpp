#include "thetacurve/extremal.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

#include "thetacurve/error.hpp"
#include "thetacurve/io.hpp"

namespace thetacurve {

namespace {

double family_value(Family f, double z) {
  switch (f) {
    case Family::Sinh: return std::sinh(z);
    case Family::Cosh: return std::cosh(z);
    case Family::Exp: return std::exp(z);
  }
  return 0.0;
}

double family_derivative(Family f, double z) {
  switch (f) {
    case Family::Sinh: return std::cosh(z);
    case Family::Cosh: return std::sinh(z);
    case Family::Exp: return std::exp(z);
  }
  return 0.0;
}

void require_interior_samples(std::size_t n, std::size_t minimum, const char* what) {
  if (n < minimum) {
    throw InvalidInput(std::string(what) + " needs at least " + std::to_string(minimum) + " samples, got " +
                       std::to_string(n));
  }
}

}  // namespace

std::string_view to_string(Family f) {
  switch (f) {
    case Family::Sinh: return "sinh";
    case Family::Cosh: return "cosh";
    case Family::Exp: return "exp";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "sinh") return Family::Sinh;
  if (lower == "cosh") return Family::Cosh;
  if (lower == "exp") return Family::Exp;
  throw InvalidInput("unknown family '" + std::string(name) + "' (expected sinh, cosh or exp)");
}

void validate(const ExtremalSpec& spec) {
  if (!std::isfinite(spec.a) || !(spec.a > 0.0)) {
    throw InvariantViolation("a > 0 violated (a = " + format_double(spec.a) + ")");
  }
  if (!std::isfinite(spec.d)) throw InvariantViolation("d must be finite");
  const double a2 = spec.a * spec.a;
  if (!(spec.d > a2)) {
    throw InvariantViolation("d > a^2 violated (d = " + format_double(spec.d) + ", a^2 = " + format_double(a2) + ")");
  }
  if (spec.family == Family::Cosh && !(spec.d < 2.0 * a2)) {
    throw InvariantViolation("d < 2a^2 violated for the cosh family (d = " + format_double(spec.d) +
                             ", 2a^2 = " + format_double(2.0 * a2) + ")");
  }
}

bool Interval::lower_unbounded() const { return std::isinf(lower) && lower < 0.0; }

Interval domain(const ExtremalSpec& spec) {
  validate(spec);
  const double a = spec.a;
  const double ratio = std::sqrt(a * a / (spec.d - a * a));
  switch (spec.family) {
    case Family::Sinh: {
      const double half = std::asinh(ratio) / a;
      return {-half, half};
    }
    case Family::Cosh: {
      const double half = std::acosh(ratio) / a;
      return {-half, half};
    }
    case Family::Exp:
      return {-std::numeric_limits<double>::infinity(), std::log(ratio) / a};
  }
  return {};
}

double killing_norm_sq(const ExtremalSpec& spec) {
  validate(spec);
  const double a2 = spec.a * spec.a;
  switch (spec.family) {
    case Family::Sinh: return spec.d;
    case Family::Cosh: return 2.0 * a2 - spec.d;
    case Family::Exp: return a2;
  }
  return 0.0;
}

double exp_lower_window(const ExtremalSpec& spec) {
  validate(spec);
  // On the exp branch u(s) = exp(a (s - s_max)); pick u where kappa = a u / sqrt(1-u^2) = 5e-4 a.
  constexpr double kappa_over_a = 5e-4;
  const double u = kappa_over_a / std::sqrt(1.0 + kappa_over_a * kappa_over_a);
  return -std::log(u) / spec.a;
}

double sampling_width(const ExtremalSpec& spec) {
  if (spec.family == Family::Exp) return exp_lower_window(spec);
  const Interval dom = domain(spec);
  return dom.upper - dom.lower;
}

double default_margin(const ExtremalSpec& spec) { return 1e-3 * sampling_width(spec); }

double curvature_at(const ExtremalSpec& spec, double s) {
  const double a = spec.a;
  const double c = spec.d - a * a;
  const double f = family_value(spec.family, a * s);
  const double denom = a * a - c * f * f;
  if (!(denom > 0.0)) throw InvalidInput("s = " + format_double(s) + " lies outside the curvature domain");
  const double k = std::sqrt(a * a * c * f * f / denom);
  return f < 0.0 ? -k : k;
}

double bounded_curvature_at(const ExtremalSpec& spec, double s) {
  return std::sqrt(spec.d - spec.a * spec.a) * family_value(spec.family, spec.a * s) / spec.a;
}

double bounded_curvature_derivative_at(const ExtremalSpec& spec, double s) {
  return std::sqrt(spec.d - spec.a * spec.a) * family_derivative(spec.family, spec.a * s);
}

CurvatureProfile curvature_profile(const ExtremalSpec& spec, std::size_t n, double margin) {
  validate(spec);
  require_interior_samples(n, 16, "curvature profile");
  const double width = sampling_width(spec);
  if (!(margin > 0.0) || !(margin < 0.5 * width)) {
    throw InvalidInput("margin must lie in (0, " + format_double(0.5 * width) + "), got " + format_double(margin));
  }
  CurvatureProfile p;
  p.spec = spec;
  p.domain = domain(spec);
  p.delta = killing_norm_sq(spec);
  p.margin = margin;
  const double lo = spec.family == Family::Exp ? p.domain.upper - width : p.domain.lower + margin;
  const double hi = p.domain.upper - margin;
  p.samples.s0 = lo;
  p.samples.h = (hi - lo) / static_cast<double>(n - 1);
  p.samples.kappa.resize(n);
  for (std::size_t i = 0; i < n; ++i) p.samples.kappa[i] = curvature_at(spec, p.samples.s(i));
  return p;
}

CurvatureProfile curvature_profile(const ExtremalSpec& spec, std::size_t n) {
  return curvature_profile(spec, n, default_margin(spec));
}

std::vector<double> bounded_curvature(std::span<const double> kappa, double a) {
  std::vector<double> u(kappa.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = kappa[i] / std::sqrt(kappa[i] * kappa[i] + a * a);
  return u;
}

std::vector<double> curvature_derivative(const CurvatureSamples& k, double a) {
  const auto u = bounded_curvature(k.kappa, a);
  auto du = finite_diff(u, k.h, Derivative::First);
  for (std::size_t i = 0; i < du.size(); ++i) {
    const double w = k.kappa[i] * k.kappa[i] + a * a;
    du[i] *= w * std::sqrt(w) / (a * a);
  }
  return du;
}

double first_integral_residual(const CurvatureSamples& k, double a, double delta) {
  require_interior_samples(k.size(), 16, "first-integral residual");
  const auto dk = curvature_derivative(k, a);
  const double a4 = a * a * a * a;
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < k.size(); ++i) {
    const double w = k.kappa[i] * k.kappa[i] + a * a;
    const double rhs = w * w / a4 * (delta * w - a4);
    const double lhs = dk[i] * dk[i];
    worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(lhs)));
  }
  return worst;
}

double first_integral_residual(const CurvatureProfile& p) {
  return first_integral_residual(p.samples, p.a(), p.delta);
}

double el_residual(const CurvatureSamples& k, double a) {
  require_interior_samples(k.size(), 16, "Euler-Lagrange residual");
  const auto u = bounded_curvature(k.kappa, a);
  const auto d2u = finite_diff(u, k.h, Derivative::Second);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < u.size(); ++i) worst = std::max(worst, std::abs(d2u[i] - a * a * u[i]));
  return worst;
}

double el_residual(const CurvatureProfile& p) { return el_residual(p.samples, p.a()); }

KillingField killing_field_J(const CurvatureSamples& k, double a) {
  require_interior_samples(k.size(), 16, "Killing field");
  KillingField J;
  J.normal = finite_diff(bounded_curvature(k.kappa, a), k.h, Derivative::First);
  J.tangential.resize(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    J.tangential[i] = -a * a / std::sqrt(k.kappa[i] * k.kappa[i] + a * a);
  }
  return J;
}

KillingField killing_field_J(const CurvatureProfile& p) { return killing_field_J(p.samples, p.a()); }

double killing_norm_residual(const CurvatureSamples& k, double a, double delta) {
  const KillingField J = killing_field_J(k, a);
  double worst = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) worst = std::max(worst, std::abs(J.norm_sq(i) - delta));
  return worst;
}

double killing_norm_residual(const CurvatureProfile& p) { return killing_norm_residual(p.samples, p.a(), p.delta); }

PlanarCurve curve_from_quadrature(const CurvatureProfile& p) {
  const std::size_t n = p.size();
  const double a = p.a();
  const double delta = p.delta;
  if (!(delta > 0.0)) throw InvalidInput("Killing norm must be positive");
  std::vector<double> r(n), dz(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double k = p.samples.kappa[i];
    const double scale = std::sqrt(delta * (k * k + a * a));
    r[i] = k / scale;
    dz[i] = -a * a / scale;
  }
  const auto z = integrate_samples(dz, p.samples.h);
  const auto dr = finite_diff(r, p.samples.h, Derivative::First);
  std::vector<Vec2> pts(n);
  std::vector<double> theta(n);
  for (std::size_t i = 0; i < n; ++i) {
    pts[i] = {r[i], z[i]};
    theta[i] = std::atan2(dz[i], dr[i]);
  }
  return PlanarCurve(p.samples.s0, p.samples.h, std::move(pts), unwrap_angles(theta), p.samples.kappa);
}

PlanarCurve curve_from_quadrature(const ExtremalSpec& spec, std::size_t n, double margin) {
  return curve_from_quadrature(curvature_profile(spec, n, margin));
}

PlanarCurve curve_from_turning_angle(const CurvatureSamples& k) {
  require_interior_samples(k.size(), 16, "turning-angle reconstruction");
  auto theta = integrate_samples(k.kappa, k.h);
  std::vector<double> c(theta.size()), s(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    c[i] = std::cos(theta[i]);
    s[i] = std::sin(theta[i]);
  }
  const auto x = integrate_samples(c, k.h);
  const auto y = integrate_samples(s, k.h);
  std::vector<Vec2> pts(theta.size());
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = {x[i], y[i]};
  return PlanarCurve(k.s0, k.h, std::move(pts), std::move(theta), k.kappa);
}

PlanarCurve curve_from_turning_angle(const CurvatureProfile& p) { return curve_from_turning_angle(p.samples); }

void write_profile_csv(std::ostream& out, const CurvatureSamples& k) {
  out << "s,kappa\n";
  for (std::size_t i = 0; i < k.size(); ++i) out << format_double(k.s(i)) << ',' << format_double(k.kappa[i]) << '\n';
  if (!out) throw IoError("failed writing profile CSV");
}

CurvatureSamples read_profile_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("profile CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "s,kappa") throw InvalidInput("profile CSV header must be 's,kappa', got '" + line + "'");
  std::vector<double> s;
  CurvatureSamples k;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != 2) throw InvalidInput("line " + std::to_string(line_no) + ": expected 2 fields");
    s.push_back(detail::parse_double(fields[0], line_no));
    k.kappa.push_back(detail::parse_double(fields[1], line_no));
  }
  std::tie(k.s0, k.h) = detail::uniform_grid(s, "s");
  return k;
}

}  // namespace thetacurve
