#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "bundle_geometry.hpp"
#include "errors.hpp"
#include "quadrature.hpp"
#include "surface_slopes.hpp"

namespace minslope {

// A profile psi sampled on an increasing grid.
struct MomentProfile {
  std::vector<double> x;
  std::vector<double> psi;

  std::size_t size() const { return x.size(); }

  void validate() const {
    if (x.size() != psi.size()) throw InputError("profile grid and values differ in length");
    if (x.size() < 2) throw InputError("profile needs at least two points");
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!std::isfinite(x[i]) || !std::isfinite(psi[i])) throw InputError("profile has non-finite entries");
      if (i > 0 && !(x[i] > x[i - 1])) throw InputError("profile grid is not strictly increasing");
    }
  }
};

inline std::vector<double> uniform_grid(double lo, double hi, int cells) {
  if (cells < 1 || !(hi > lo)) throw InputError("bad grid");
  std::vector<double> x(cells + 1);
  for (int i = 0; i <= cells; ++i) x[i] = lo + (hi - lo) * i / cells;
  x.back() = hi;
  return x;
}

// Two uniform pieces meeting at `knot`, so that a node sits exactly there.
inline std::vector<double> fitted_grid(double lo, double hi, int cells, double knot) {
  if (!(knot > lo && knot < hi)) return uniform_grid(lo, hi, cells);
  int left = static_cast<int>(std::lround(cells * (knot - lo) / (hi - lo)));
  left = std::clamp(left, 1, cells - 1);
  auto x = uniform_grid(lo, knot, left);
  auto r = uniform_grid(knot, hi, cells - left);
  x.insert(x.end(), r.begin() + 1, r.end());
  return x;
}

// Nodes bunched near `focus`: a sinh stretch with the given strength
// (0 gives the uniform grid).
inline std::vector<double> graded_grid(double lo, double hi, int cells, double focus, double strength) {
  if (strength <= 0) return uniform_grid(lo, hi, cells);
  if (focus < lo || focus > hi) throw InputError("grading focus outside the interval");
  const double L = hi - lo;
  const double u0 = (focus - lo) / L;
  const double A = std::asinh(strength * (0 - u0)), B = std::asinh(strength * (1 - u0));
  std::vector<double> x(cells + 1);
  for (int i = 0; i <= cells; ++i) {
    double t = static_cast<double>(i) / cells;
    x[i] = lo + L * (u0 + std::sinh(A + (B - A) * t) / strength);
  }
  x.front() = lo;
  x.back() = hi;
  return x;
}

// ---- J side: bundle over [0, a] ----

inline double weight(const BundleParams& P, double x) { return std::pow(x, P.m) * std::pow(1 + x, P.n); }

// Steady profile with psi(s) = 0 and psi(a) = b.
inline double psi_tilde_j(const BundleParams& P, double s, double x) {
  const double a = P.ad();
  if (!(s >= 0 && s < a)) throw InputError("s must lie in [0, a)");
  if (x < s - 1e-15 || x > a + 1e-12) throw InputError("x outside [s, a]");
  if (x <= s) return 0;
  const double mu = mu_s(P, s);
  const int m = P.m, n = P.n;
  double num = integrate([&](double t) { return std::pow(t, m) * std::pow(1 + t, n - 1) * (mu * (1 + t) - n); }, s, x, 2);
  return num / weight(P, x);
}

// Limit of the flow: zero up to lambda, the steady profile after.
inline double j_limit_profile(const BundleParams& P, double lambda, double x) {
  return x <= lambda ? 0.0 : psi_tilde_j(P, lambda, x);
}

// Trace of the limit metric against the background one in moment coordinates.
inline double pointwise_slope(const BundleParams& P, double x, double psi, double dpsi) {
  double k = P.n / (1 + x) + (P.m > 0 ? P.m / x : 0.0);
  return dpsi + psi * k + P.n / (1 + x);
}

inline double q_j(double y, double b) { return y * (b - y) / b; }

// ---- dHYM side: blow-up of P^2, x in [1, b] ----

inline double arccot(double y) { return std::numbers::pi / 2 - std::atan(y); }

// Lagrangian phase of the graph: arccot psi' + arccot(psi/x), in (0, pi).
inline double pointwise_angle(double x, double psi, double dpsi) { return arccot(dpsi) + arccot(psi / x); }

inline double cot_angle(double x, double psi, double dpsi) { return (psi * dpsi - x) / (x * dpsi + psi); }

// Steady dHYM profile with psi(1) = s, psi(b) = p.
inline double psi_tilde_dhym(double b, double p, double s, double x) {
  if (b <= 1) throw InputError("b must exceed 1");
  if (x < 1 - 1e-15 || x > b + 1e-12) throw InputError("x outside [1, b]");
  const double c = blp2_c_tilde(b, p, s);
  if (s < c - 1e-14) throw NoMonotoneSolution("s below c(s): no monotone profile through (1, s)");
  const double A = s * s - 2 * c * s - 1;
  double rad = A + (1 + c * c) * x * x;
  if (rad < 0) rad = 0;  // only at x = 1 when s = c(s), up to rounding
  return c * x + std::sqrt(rad);
}

inline double q_dhym(double x, double b) { return (x - 1) * (b - x) / (b - 1); }

// lambda_hat / x + mu x through (1, q) and (b, p).
inline double dhym_initial(double b, double p, double q, double x) {
  const double mu = (b * p - q) / (b * b - 1);
  const double lh = b * (b * q - p) / (b * b - 1);
  return lh / x + mu * x;
}

// ---- Calabi-ansatz potential in the log coordinate rho ----

// Background potential u with u' = lo + (hi - lo) e^rho / (1 + e^rho).
struct BackgroundPotential {
  double lo = 0;
  double hi = 1;

  double logistic(double rho) const { return rho >= 0 ? 1 / (1 + std::exp(-rho)) : std::exp(rho) / (1 + std::exp(rho)); }
  double d1(double rho) const { return lo + (hi - lo) * logistic(rho); }
  double d2(double rho) const {
    double s = logistic(rho);
    return (hi - lo) * s * (1 - s);
  }
  // u'' as a function of u'
  double q(double y) const { return (y - lo) * (hi - y) / (hi - lo); }
  double inverse_d1(double y) const {
    double s = (y - lo) / (hi - lo);
    return std::log(s / (1 - s));
  }
};

}  // namespace minslope
