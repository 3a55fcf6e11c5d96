#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "thetacurve/error.hpp"
#include "thetacurve/extremal.hpp"
#include "thetacurve/lift.hpp"

using namespace thetacurve;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;

PlanarCurve circle(std::size_t n, double turns) {
  const double h = 2 * pi * turns / static_cast<double>(n - 1);
  std::vector<Vec2> pts(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = static_cast<double>(i) * h;
    pts[i] = {std::cos(s), std::sin(s)};
  }
  return curve_from_points(std::move(pts), 0.0, h);
}

}  // namespace

TEST_CASE("lift of a segment has constant fiber") {
  const auto c = curve_from_turning_angle(CurvatureSamples{0.0, 0.1, std::vector<double>(21, 0.0)});
  const auto l = lift(c);
  for (double th : l.theta()) CHECK(th == 0.0);
  CHECK(horizontality_residual(l) < 1e-14);
  CHECK(sr_length(l, 2.0) == Approx(4.0).epsilon(1e-12));
}

TEST_CASE("lift of the unit circle") {
  const auto l = lift(circle(801, 1.0));
  for (std::size_t i = 0; i < l.size(); i += 50) CHECK(std::abs(l.theta()[i] - (l.t()[i] + pi / 2)) < 1e-4);
  CHECK(horizontality_residual(l) < 1e-4);
  CHECK(sr_length(l, 1.0) == Approx(2 * pi * std::sqrt(2.0)).epsilon(1e-4));
  CHECK(winding_of(l).winding == 0);
  CHECK(winding_of(lift(circle(1001, 1.25))).winding == 1);
}

TEST_CASE("project inverts lift") {
  const auto c = curve_from_turning_angle(curvature_profile({1.0, 1.5, Family::Cosh}, 512));
  const auto back = project(lift(c));
  REQUIRE(back.size() == c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    CHECK(back.points()[i] == c.points()[i]);
    CHECK(back.theta()[i] == c.theta()[i]);
  }
  CHECK(back.s0() == Approx(c.s0()).epsilon(1e-14));

  const auto l = lift(c);
  const auto again = lift(project(l));
  for (std::size_t i = 0; i < l.size(); ++i) {
    CHECK(again.xy()[i] == l.xy()[i]);
    CHECK(std::abs(again.theta()[i] - l.theta()[i]) < 1e-12);
  }
}

TEST_CASE("projected curvature of a sinh extremal") {
  const ExtremalSpec spec{1.0, 2.0, Family::Sinh};
  const oracle::Closed ref{1.0, 2.0, oracle::Branch::Sinh};
  const auto c = curve_from_quadrature(curvature_profile(spec, 2048, 0.05 * sampling_width(spec)));
  const auto p = project(lift(c));
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(std::abs(p.kappa()[i] - ref.kappa(p.s(i))) < 1e-3);
}

TEST_CASE("horizontality detects fiber drift") {
  std::vector<double> t{0.0, 0.5, 1.0};
  std::vector<Vec2> xy{{0, 0}, {0.5, 0}, {1, 0}};
  CHECK(horizontality_residual(LiftedCurve(t, xy, {0.0, 0.0, 0.0})) == 0.0);
  CHECK(horizontality_residual(LiftedCurve(t, xy, {pi / 2, pi / 2, pi / 2})) == Approx(1.0));
  CHECK(horizontality_residual(LiftedCurve(t, xy, {2 * pi, 2 * pi, 2 * pi})) < 1e-12);
}

TEST_CASE("sub-Riemannian length") {
  const std::vector<double> t{0.0, 1.0};
  CHECK(sr_length(LiftedCurve(t, {{0, 0}, {3, 4}}, {0.0, 0.0}), 2.0) == Approx(10.0));
  CHECK(sr_length(LiftedCurve(t, {{0, 0}, {0, 0}}, {0.0, 1.5}), 7.0) == Approx(1.5));
  CHECK_THROWS_AS(sr_length(LiftedCurve(t, {{0, 0}, {1, 0}}, {0.0, 0.0}), 0.0), InvalidInput);
}

TEST_CASE("lifted curve validation") {
  CHECK_THROWS_AS(LiftedCurve({0.0}, {{0, 0}}, {0.0}), InvalidInput);
  CHECK_THROWS_AS(LiftedCurve({0.0, 1.0}, {{0, 0}}, {0.0, 0.0}), InvalidInput);
  CHECK_THROWS_AS(LiftedCurve({0.0, 0.0}, {{0, 0}, {1, 0}}, {0.0, 0.0}), InvalidInput);
  CHECK_THROWS_AS(LiftedCurve({0.0, 1.0}, {{0, 0}, {1, 0}}, {0.0, INFINITY}), InvalidInput);
  const LiftedCurve stuck({0, 1, 2, 3, 4}, {{0, 0}, {1, 0}, {1, 0}, {2, 0}, {3, 0}}, {0, 0, 0, 0, 0});
  CHECK_THROWS_AS(project(stuck), InvalidInput);
  const LiftedCurve uneven({0, 1, 2, 3, 5}, {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}}, {0, 0, 0, 0, 0});
  CHECK_THROWS_AS(project(uneven), InvalidInput);
}

TEST_CASE("CSV keeps the sheet through the winding record") {
  const auto base = lift(circle(1201, 2.5));
  std::vector<double> shifted(base.theta().begin(), base.theta().end());
  for (double& v : shifted) v -= 4 * pi;
  const LiftedCurve l({base.t().begin(), base.t().end()}, {base.xy().begin(), base.xy().end()}, shifted);

  const auto w = winding_of(l);
  CHECK(w.first_turn == -2);
  CHECK(w.winding == 2);

  std::stringstream ss;
  write_lifted_csv(ss, l);
  std::string header;
  std::getline(ss, header);
  CHECK(header == "t,x,y,theta");
  ss.seekg(0);
  const auto back = read_lifted_csv(ss, w.first_turn);
  REQUIRE(back.size() == l.size());
  for (std::size_t i = 0; i < l.size(); ++i) CHECK(back.theta()[i] == Approx(l.theta()[i]).epsilon(1e-12));
  CHECK(winding_of(back).winding == w.winding);
  CHECK(sr_length(back, 1.3) == Approx(sr_length(l, 1.3)).epsilon(1e-12));
}
