#pragma once

// Reference computations used by the tests. None of these call into the library under test:
// they evaluate the closed forms through different routes (the bounded variable u instead of
// kappa^2, analytic derivatives instead of finite differences) so agreement is meaningful.

#include <array>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace oracle {

enum class Branch { Sinh, Cosh, Exp };

struct Closed {
  double a;
  double d;
  Branch branch;

  double c() const { return d - a * a; }
  double f(double z) const {
    switch (branch) {
      case Branch::Sinh: return std::sinh(z);
      case Branch::Cosh: return std::cosh(z);
      case Branch::Exp: return std::exp(z);
    }
    return 0.0;
  }
  double fp(double z) const {
    switch (branch) {
      case Branch::Sinh: return std::cosh(z);
      case Branch::Cosh: return std::sinh(z);
      case Branch::Exp: return std::exp(z);
    }
    return 0.0;
  }
  double fpp(double z) const { return f(z); }

  // u = kappa / sqrt(kappa^2 + a^2) and its first two derivatives in s.
  double u(double s) const { return std::sqrt(c()) * f(a * s) / a; }
  double up(double s) const { return std::sqrt(c()) * fp(a * s); }
  double upp(double s) const { return a * std::sqrt(c()) * fpp(a * s); }

  // kappa = a u / sqrt(1 - u^2); sign follows u.
  double kappa(double s) const {
    const double v = u(s);
    return a * v / std::sqrt(1.0 - v * v);
  }
  // d kappa / ds = a u' / (1 - u^2)^{3/2}.
  double kappa_prime(double s) const {
    const double v = u(s);
    return a * up(s) / std::pow(1.0 - v * v, 1.5);
  }
  // Killing norm from the u-form of the first integral: u'^2 + a^2 (1 - u^2).
  double delta_at(double s) const {
    const double v = u(s);
    return up(s) * up(s) + a * a * (1.0 - v * v);
  }
  // Upper end of the arc-length domain: u(s_max) = 1.
  double upper() const {
    const double ratio = a / std::sqrt(c());
    switch (branch) {
      case Branch::Sinh: return std::log(ratio + std::sqrt(ratio * ratio + 1.0)) / a;
      case Branch::Cosh: return std::log(ratio + std::sqrt(ratio * ratio - 1.0)) / a;
      case Branch::Exp: return std::log(ratio) / a;
    }
    return 0.0;
  }
};

/// Richardson-extrapolated central difference, O(h^4).
inline double derivative(const std::function<double(double)>& g, double s, double h) {
  const double d1 = (g(s + h) - g(s - h)) / (2 * h);
  const double d2 = (g(s + h / 2) - g(s - h / 2)) / h;
  return (4 * d2 - d1) / 3;
}

/// Closed-form least squares for (kappa')^2 = A delta - B with A = w^3/a^4, B = w^2, w = kappa^2 + a^2.
inline double fit_delta(const std::vector<double>& kappa, const std::vector<double>& kappa_prime, double a) {
  double num = 0.0, den = 0.0;
  const double a4 = a * a * a * a;
  for (std::size_t i = 0; i < kappa.size(); ++i) {
    const double w = kappa[i] * kappa[i] + a * a;
    const double A = w * w * w / a4;
    num += A * (kappa_prime[i] * kappa_prime[i] + w * w);
    den += A * A;
  }
  return num / den;
}

struct ObjMesh {
  std::vector<std::array<double, 3>> vertices;
  std::vector<std::array<long, 3>> faces;
};

inline ObjMesh parse_obj(const std::string& text) {
  ObjMesh mesh;
  std::istringstream in(text);
  std::string tag;
  while (in >> tag) {
    if (tag == "v") {
      std::array<double, 3> v{};
      in >> v[0] >> v[1] >> v[2];
      mesh.vertices.push_back(v);
    } else if (tag == "f") {
      std::array<long, 3> f{};
      in >> f[0] >> f[1] >> f[2];
      mesh.faces.push_back(f);
    } else {
      std::string rest;
      std::getline(in, rest);
    }
  }
  return mesh;
}

/// Tractrix profile of the pseudosphere with K = -a^2: r = e^{a s} / a, z' = -sqrt(1 - e^{2 a s}), s < 0.
/// Its signed curvature r' z'' - z' r'' is a e^{a s} / sqrt(1 - e^{2 a s}).
struct Tractrix {
  double a;
  double r(double s) const { return std::exp(a * s) / a; }
  double rp(double s) const { return std::exp(a * s); }
  double zp(double s) const { return -std::sqrt(1.0 - std::exp(2 * a * s)); }
  double kappa(double s) const {
    const double e = std::exp(a * s);
    return a * e / std::sqrt(1.0 - e * e);
  }
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace oracle
