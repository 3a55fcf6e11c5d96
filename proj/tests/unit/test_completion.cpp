#include <cmath>
#include <numbers>

#include "doctest.h"
#include "thetacurve/completion.hpp"
#include "thetacurve/error.hpp"
#include "thetacurve/extremal.hpp"

using namespace thetacurve;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;

Polyline straight(std::size_t n, double length) {
  std::vector<Vec2> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = {length * static_cast<double>(i) / static_cast<double>(n - 1), 0.0};
  return Polyline(std::move(v));
}

Vec2 rotate(Vec2 v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

CompletionProblem problem(Vec2 q, double t0, double t1, double a, std::size_t nodes = 128) {
  CompletionProblem pr;
  pr.q = q;
  pr.theta0 = t0;
  pr.theta1 = t1;
  pr.a = a;
  pr.nodes = nodes;
  return pr;
}

bool monotone(const std::vector<double>& h) {
  for (std::size_t i = 1; i < h.size(); ++i) {
    if (h[i] > h[i - 1] + 1e-12) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("discrete energy") {
  for (double a : {0.0, 0.5, 3.0}) CHECK(discrete_energy(straight(20, 2.5), a) == Approx(a * 2.5).epsilon(1e-12));

  const Polyline zig({{0, 0}, {1, 0}, {1, 1}, {2, 1}, {2, 3}});
  CHECK(discrete_energy(zig, 0.0) == Approx(3 * pi / 2).epsilon(1e-14));

  const std::size_t n = 256;
  std::vector<Vec2> gon(n + 1);
  for (std::size_t i = 0; i <= n; ++i) gon[i] = unit_vector(2 * pi * static_cast<double>(i) / static_cast<double>(n));
  CHECK(discrete_energy(Polyline(gon), 1.0) == Approx(2 * pi * std::sqrt(2.0)).epsilon(1e-2));

  CHECK_THROWS_AS(discrete_energy(Polyline({{0, 0}, {1, 0}}), 1.0), InvalidInput);
  CHECK_THROWS_AS(discrete_energy(zig, -1.0), InvalidInput);
}

TEST_CASE("discrete gradient") {
  const auto g = discrete_gradient(straight(12, 1.0), 1.0);
  for (const auto& v : g) CHECK(norm(v) < 1e-8);

  std::vector<Vec2> v(11);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = {0.1 * static_cast<double>(i), 0.0};
  const Vec2 offset{0.0, 0.02};
  v[5] += offset;
  const Polyline bumped(v);
  const auto gb = discrete_gradient(bumped, 1.0);
  CHECK(dot(gb[5], offset) > 0.0);
  const double e0 = discrete_energy(bumped, 1.0);
  v[5] -= 1e-3 * gb[5];
  CHECK(discrete_energy(Polyline(v), 1.0) < e0);

  for (std::size_t i : {std::size_t{0}, std::size_t{1}, gb.size() - 2, gb.size() - 1}) {
    CHECK(gb[i].x == 0.0);
    CHECK(gb[i].y == 0.0);
  }
}

TEST_CASE("total turning") {
  CHECK(total_turning(straight(9, 3.0)) == 0.0);
  const Polyline square({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}, {1, 0}});
  CHECK(total_turning(square) == Approx(2 * pi).epsilon(1e-12));
  std::vector<Vec2> v{{0, 0}, {1, 0.2}, {2, -0.1}, {3, 0.5}, {4, 0.4}, {5, 0}};
  const double before = total_turning(Polyline(v));
  v[3] += Vec2{1e-3, -1e-3};
  CHECK(std::abs(total_turning(Polyline(v)) - before) < 1e-2);
}

TEST_CASE("first-integral fit") {
  const auto sinh = curvature_profile({1.0, 2.0, Family::Sinh}, 2048);
  const auto fs = fit_first_integral(sinh.samples, 1.0);
  CHECK(fs.delta == Approx(2.0).epsilon(1e-3));
  CHECK(fs.residual < 1e-3);

  const auto ex = curvature_profile({1.0, 1.5, Family::Exp}, 2048);
  CHECK(fit_first_integral(ex.samples, 1.0).delta == Approx(1.0).epsilon(1e-3));

  const CurvatureSamples circle{0.0, 0.01, std::vector<double>(100, 1.0)};
  CHECK(fit_first_integral(circle, 1.0).residual > 0.1);

  CHECK_THROWS_AS(fit_first_integral(CurvatureSamples{0.0, 0.01, std::vector<double>(100, 0.0)}, 1.0), NotApplicable);
  CHECK_THROWS_AS(fit_first_integral(CurvatureSamples{0.0, 0.01, std::vector<double>(31, 1.0)}, 1.0), InvalidInput);
}

TEST_CASE("problem validation") {
  CHECK_THROWS_AS(validate(problem({0, 0}, 0, 0, 1)), InvariantViolation);
  CHECK_THROWS_AS(validate(problem({1, 0}, 0, 0, 1, 7)), InvariantViolation);
  CHECK_THROWS_AS(validate(problem({1, 0}, 0, 0, -1)), InvariantViolation);
  auto bad_tol = problem({1, 0}, 0, 0, 1);
  bad_tol.tol = 0.0;
  CHECK_THROWS_AS(validate(bad_tol), InvariantViolation);
  CHECK_THROWS_AS(complete(problem({1, 0}, 0.3, 0.1, 0.0)), TrivialProblem);
}

TEST_CASE("straight completion") {
  const auto r = complete(problem({1, 0}, 0, 0, 1));
  CHECK(r.report.converged);
  CHECK(r.report.final_energy == Approx(1.0).epsilon(1e-6));
  CHECK_FALSE(r.report.fitted_delta.has_value());
  CHECK(r.curve.points().front() == Vec2{0, 0});
  CHECK(r.curve.points().back() == Vec2{1, 0});
}

TEST_CASE("generic completion") {
  const auto pr = problem({1, 0.3}, 1.0, 0.2, 2.0);
  const auto r = complete(pr);
  CHECK(r.report.converged);
  CHECK(monotone(r.report.energy_history));
  CHECK(r.report.energy_history.back() == r.report.final_energy);
  CHECK(norm(r.curve.points().front() - pr.p) < 1e-12);
  CHECK(norm(r.curve.points().back() - pr.q) < 1e-12);
  CHECK(std::abs(r.curve.theta().front() - pr.theta0) < 1e-6);
  CHECK(std::abs(r.curve.theta().back() - pr.theta1) < 1e-6);
  REQUIRE(r.report.first_integral_residual.has_value());
  CHECK(*r.report.first_integral_residual < 1e-2);

  // The end segments are half a cell away from the boundary tangent.
  const auto pts = r.curve.points();
  const double h = r.curve.step();
  const std::size_t m = pts.size() - 1;
  double kmax = 0.0;
  for (double k : r.curve.kappa()) kmax = std::max(kmax, std::abs(k));
  const Vec2 t0 = pts[1] - pts[0], t1 = pts[m] - pts[m - 1];
  CHECK(std::abs(std::atan2(t0.y, t0.x) - pr.theta0) < h * kmax);
  CHECK(std::abs(std::atan2(t1.y, t1.x) - pr.theta1) < h * kmax);

  CHECK(discrete_energy(r.curve.polyline(), pr.a) == Approx(r.report.final_energy).epsilon(1e-2));
}

TEST_CASE("mirror symmetry") {
  const auto r = complete(problem({1, 0}, pi / 4, -pi / 4, 1.0));
  CHECK(r.report.converged);
  const auto pts = r.curve.points();
  const std::size_t m = pts.size() - 1;
  for (std::size_t i = 0; i <= m; ++i) {
    CHECK(std::abs(pts[i].x + pts[m - i].x - 1.0) < 1e-4);
    CHECK(std::abs(pts[i].y - pts[m - i].y) < 1e-4);
  }
}

TEST_CASE("Euler-Lagrange residual improves with resolution") {
  const auto pr = problem({1, 0}, 0.6, -0.3, 1.0);
  double previous = 0.0;
  for (std::size_t nodes : {64u, 128u, 256u}) {
    auto p = pr;
    p.nodes = nodes;
    const auto r = complete(p);
    REQUIRE(r.report.el_residual.has_value());
    if (previous > 0.0) CHECK(*r.report.el_residual <= 0.5 * previous);
    previous = *r.report.el_residual;
  }
}

TEST_CASE("rigid motion and scaling equivariance") {
  const auto base = problem({1, 0.3}, 0.8, -0.2, 1.5);
  const auto r0 = complete(base);

  const double angle = 0.7;
  const Vec2 shift{2.0, -1.0};
  auto moved = base;
  moved.p = rotate(base.p, angle) + shift;
  moved.q = rotate(base.q, angle) + shift;
  moved.theta0 += angle;
  moved.theta1 += angle;
  const auto r1 = complete(moved);
  REQUIRE(r1.curve.size() == r0.curve.size());
  for (std::size_t i = 0; i < r0.curve.size(); ++i) {
    CHECK(norm(r1.curve.points()[i] - (rotate(r0.curve.points()[i], angle) + shift)) < 1e-6);
  }

  const double lambda = 3.0;
  auto scaled = base;
  scaled.p = lambda * base.p;
  scaled.q = lambda * base.q;
  scaled.a = base.a / lambda;
  const auto r2 = complete(scaled);
  for (std::size_t i = 0; i < r0.curve.size(); ++i) {
    CHECK(norm(r2.curve.points()[i] - lambda * r0.curve.points()[i]) < 1e-6);
  }
}

TEST_CASE("iteration limit reports non-convergence") {
  auto pr = problem({1, 0}, 0.6, -0.3, 1.0);
  pr.max_iters = 1;
  const auto r = complete(pr);
  CHECK_FALSE(r.report.converged);
  CHECK(r.report.iterations == 1);
  CHECK(r.report.energy_history.size() == 2);
}
