#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "thetacurve/error.hpp"
#include "thetacurve/extremal.hpp"

using namespace thetacurve;
using doctest::Approx;

namespace {

oracle::Closed reference(const ExtremalSpec& s) {
  const auto b = s.family == Family::Sinh ? oracle::Branch::Sinh
                 : s.family == Family::Cosh ? oracle::Branch::Cosh
                                            : oracle::Branch::Exp;
  return {s.a, s.d, b};
}

CurvatureSamples constant_samples(double value, std::size_t n, double h) {
  return {0.0, h, std::vector<double>(n, value)};
}

int sign_changes(const std::vector<double>& v) {
  int changes = 0;
  int last = 0;
  for (double x : v) {
    const int s = x > 0 ? 1 : (x < 0 ? -1 : 0);
    if (s != 0 && last != 0 && s != last) ++changes;
    if (s != 0) last = s;
  }
  return changes;
}

const ExtremalSpec grid[] = {
    {0.5, 0.5, Family::Sinh}, {1.0, 2.0, Family::Sinh}, {2.0, 8.0, Family::Sinh},
    {0.5, 0.375, Family::Cosh}, {1.0, 1.5, Family::Cosh}, {2.0, 6.0, Family::Cosh},
    {0.5, 0.375, Family::Exp},  {1.0, 1.5, Family::Exp},  {2.0, 6.0, Family::Exp},
};

}  // namespace

TEST_CASE("spec validation names the bound") {
  auto message = [](ExtremalSpec s) {
    try {
      validate(s);
    } catch (const InvariantViolation& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message({0.0, 2.0, Family::Sinh}).find("a > 0") != std::string::npos);
  CHECK(message({1.0, 1.0, Family::Sinh}).find("d > a^2") != std::string::npos);
  CHECK(message({1.0, 0.5, Family::Exp}).find("d > a^2") != std::string::npos);
  CHECK(message({1.0, 2.5, Family::Cosh}).find("d < 2a^2") != std::string::npos);
  CHECK(message({1.0, 2.0, Family::Cosh}).find("d < 2a^2") != std::string::npos);
  CHECK(message({1.0, 2.5, Family::Sinh}).empty());
  CHECK(parse_family("COSH") == Family::Cosh);
  CHECK_THROWS_AS(parse_family("tanh"), InvalidInput);
}

TEST_CASE("domain") {
  const double L = std::log(1.0 + std::sqrt(2.0));
  const auto sinh_dom = domain({1.0, 2.0, Family::Sinh});
  CHECK(sinh_dom.lower == Approx(-L).epsilon(1e-14));
  CHECK(sinh_dom.upper == Approx(L).epsilon(1e-14));
  const auto cosh_dom = domain({1.0, 1.5, Family::Cosh});
  CHECK(cosh_dom.upper == Approx(L).epsilon(1e-14));
  CHECK(cosh_dom.lower == Approx(-L).epsilon(1e-14));
  const auto exp_dom = domain({1.0, 2.0, Family::Exp});
  CHECK(exp_dom.upper == 0.0);
  CHECK(exp_dom.lower_unbounded());
  for (const auto& s : grid) {
    const auto dom = domain(s);
    CHECK(dom.upper == Approx(reference(s).upper()).epsilon(1e-12));
    CHECK(std::isfinite(dom.upper));
  }
}

TEST_CASE("closed-form curvature") {
  CHECK(curvature_at({1.0, 2.0, Family::Sinh}, 0.0) == 0.0);
  CHECK(curvature_at({1.0, 1.5, Family::Cosh}, 0.0) == Approx(1.0).epsilon(1e-15));
  CHECK(curvature_at({1.0, 2.0, Family::Exp}, -std::log(2.0)) == Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(curvature_at({1.0, 2.0, Family::Sinh}, -0.3) == Approx(-curvature_at({1.0, 2.0, Family::Sinh}, 0.3)));
  for (const auto& s : grid) {
    const auto ref = reference(s);
    const double top = ref.upper();
    for (double t : {0.1, 0.5, 0.9}) {
      const double x = s.family == Family::Exp ? top - 3.0 * t : -top + 2.0 * top * t;
      CHECK(curvature_at(s, x) == Approx(ref.kappa(x)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(curvature_at({1.0, 2.0, Family::Sinh}, 1.0), InvalidInput);
}

TEST_CASE("killing norm matches the u-form of the first integral") {
  CHECK(killing_norm_sq({1.0, 2.0, Family::Sinh}) == 2.0);
  CHECK(killing_norm_sq({1.0, 1.5, Family::Cosh}) == 0.5);
  CHECK(killing_norm_sq({1.0, 2.0, Family::Exp}) == 1.0);
  for (const auto& s : grid) {
    const auto ref = reference(s);
    const double x = s.family == Family::Exp ? ref.upper() - 1.0 : 0.37 * ref.upper();
    CHECK(killing_norm_sq(s) == Approx(ref.delta_at(x)).epsilon(1e-12));
  }
}

TEST_CASE("profile sampling") {
  const ExtremalSpec s{1.0, 2.0, Family::Sinh};
  CHECK_THROWS_AS(curvature_profile(s, 15), InvalidInput);
  CHECK_THROWS_AS(curvature_profile(s, 64, 0.0), InvalidInput);
  CHECK_THROWS_AS(curvature_profile(s, 64, 0.9), InvalidInput);
  CHECK_THROWS_AS(curvature_profile({1.0, 0.5, Family::Sinh}, 64), InvariantViolation);

  for (const auto& spec : grid) {
    const auto p = curvature_profile(spec, 512);
    CHECK(p.samples.s(0) > p.domain.lower);
    CHECK(p.samples.s(p.size() - 1) < p.domain.upper);
    CHECK(p.delta == killing_norm_sq(spec));
    CHECK(sign_changes(p.samples.kappa) <= 1);
    CHECK(sign_changes(curvature_derivative(p.samples, spec.a)) <= 1);
  }
  const auto e = curvature_profile({1.0, 1.5, Family::Exp}, 256);
  CHECK(std::abs(e.samples.kappa.front()) == Approx(5e-4).epsilon(1e-6));

  for (const auto& spec : grid) {
    const double w = sampling_width(spec);
    const auto wide = curvature_profile(spec, 64, 1e-2 * w);
    const auto tight = curvature_profile(spec, 64, 1e-4 * w);
    auto peak = [](const CurvatureProfile& p) {
      double m = 0.0;
      for (double k : p.samples.kappa) m = std::max(m, std::abs(k));
      return m;
    };
    CHECK(peak(tight) >= 10.0 * peak(wide));
  }
}

TEST_CASE("first integral and Euler-Lagrange residuals") {
  for (const auto& spec : grid) {
    const auto p = curvature_profile(spec, 2048);
    CHECK(first_integral_residual(p) < 1e-4);
    CHECK(el_residual(p) < 1e-3);
  }
  SUBCASE("constant curvature fails") {
    const auto k = constant_samples(1.0, 64, 0.01);
    CHECK(first_integral_residual(k, 1.0, 2.0) > 1.0);
    CHECK(el_residual(k, 1.0) == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(el_residual(constant_samples(0.0, 64, 0.01), 1.3) == 0.0);
  }
  SUBCASE("curvature is stationary at the cosh vertex") {
    const auto p = curvature_profile({1.0, 1.5, Family::Cosh}, 2049);
    const auto dk = curvature_derivative(p.samples, 1.0);
    CHECK(std::abs(dk[1024]) < 1e-6);
  }
  SUBCASE("derivative matches the analytic form") {
    const ExtremalSpec spec{1.0, 2.0, Family::Sinh};
    const auto p = curvature_profile(spec, 4096);
    const auto ref = reference(spec);
    const auto dk = curvature_derivative(p.samples, 1.0);
    for (std::size_t i : {100u, 1000u, 2048u, 3000u}) {
      CHECK(dk[i] == Approx(ref.kappa_prime(p.samples.s(i))).epsilon(1e-5));
    }
  }
}

TEST_CASE("Killing field") {
  for (const auto& spec : grid) CHECK(killing_norm_residual(curvature_profile(spec, 2048)) < 1e-4);
  const auto p = curvature_profile({1.0, 1.5, Family::Cosh}, 2049);
  const auto J = killing_field_J(p);
  CHECK(std::abs(J.normal[1024]) < 1e-9);
  CHECK(J.tangential[1024] == Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-9));
  const auto g = killing_field_J(constant_samples(0.0, 32, 0.1), 1.0);
  for (std::size_t i = 0; i < 32; ++i) {
    CHECK(g.tangential[i] == -1.0);
    CHECK(g.norm_sq(i) == 1.0);
  }
}

TEST_CASE("quadrature reconstruction") {
  for (const auto& spec : grid) {
    const auto c = curve_from_quadrature(spec, 4096, default_margin(spec));
    for (std::size_t i = 1; i < c.size(); ++i) CHECK(c.points()[i].y < c.points()[i - 1].y);
    double r2max = 0.0;
    for (const auto& p : c.points()) r2max = std::max(r2max, p.x * p.x);
    CHECK(r2max < 1.0 / killing_norm_sq(spec));
  }
  const auto c = curve_from_quadrature({1.0, 1.5, Family::Cosh}, 2049, default_margin({1.0, 1.5, Family::Cosh}));
  CHECK(c.points()[1024].x == Approx(1.0).epsilon(1e-9));
  CHECK(unit_speed_residual(curve_from_quadrature({1.0, 2.0, Family::Sinh}, 4096, 1e-2)) < 1e-4);
}

TEST_CASE("turning-angle reconstruction") {
  SUBCASE("straight") {
    const auto c = curve_from_turning_angle(constant_samples(0.0, 64, 0.5));
    CHECK(c.points().back().x == Approx(31.5));
    CHECK(c.points().back().y == 0.0);
  }
  SUBCASE("unit circle closes") {
    const std::size_t n = 2001;
    const auto c = curve_from_turning_angle(constant_samples(1.0, n, 2 * std::numbers::pi / (n - 1)));
    CHECK(norm(c.points().back() - c.points().front()) < 1e-5);
  }
  SUBCASE("self-consistent curvature") {
    const ExtremalSpec spec{1.0, 2.0, Family::Sinh};
    const auto p = curvature_profile(spec, 4096, 0.05 * sampling_width(spec));
    const auto c = curve_from_turning_angle(p);
    const auto k = curvature_from_points(c.points(), c.step());
    for (std::size_t i = 0; i < k.size(); ++i) CHECK(std::abs(k[i] - p.samples.kappa[i]) < 1e-3);
  }
}

TEST_CASE("profile CSV round trip") {
  const auto p = curvature_profile({1.0, 1.5, Family::Exp}, 100);
  std::stringstream ss;
  write_profile_csv(ss, p.samples);
  const auto back = read_profile_csv(ss);
  REQUIRE(back.size() == p.size());
  for (std::size_t i = 0; i < back.size(); ++i) CHECK(back.kappa[i] == p.samples.kappa[i]);
  std::istringstream bad("s,k\n");
  CHECK_THROWS_AS(read_profile_csv(bad), InvalidInput);
}
