#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "bisect.hpp"
#include "bundle_geometry.hpp"
#include "calabi_profiles.hpp"
#include "errors.hpp"
#include "flow_engine.hpp"
#include "quadrature.hpp"
#include "rational.hpp"

namespace minslope {

// (n + m + 1) C(n+m, n) d: the constant in front of every moment integral.
inline double energy_constant(const BundleParams& P) {
  return (P.m + P.n + 1) * to_double(Rational(binom(P.n + P.m, P.n))) * P.d;
}

// c \int sigma^2 x^m (1+x)^n dx for a sampled profile, with sigma on cell
// midpoints as in the flow.
inline double moment_energy(const MomentProfile& prof, const BundleParams& P) {
  if (prof.size() < 2 || prof.x.front() == prof.x.back()) return 0;
  prof.validate();
  if (prof.x.front() < 0 || prof.x.back() > P.ad() + 1e-12) throw InputError("profile leaves [0, a]");
  double e = 0;
  for (std::size_t i = 0; i + 1 < prof.size(); ++i) {
    double h = prof.x[i + 1] - prof.x[i];
    double xm = 0.5 * (prof.x[i] + prof.x[i + 1]);
    double wm = weight(P, xm);
    double s = (weight(P, prof.x[i + 1]) * prof.psi[i + 1] - weight(P, prof.x[i]) * prof.psi[i]) / (h * wm) +
               P.n / (1 + xm);
    e += h * wm * s * s;
  }
  return energy_constant(P) * e;
}

// \int_0^y x^m (1+x)^{n-2} dx; the n = 1 case has a logarithm.
inline double bubble_integral(int m, int n, double y) {
  if (n >= 2) return I_num(m, n - 2, 0, y);
  // x^m / (1+x) = sum_{j<m} (-1)^{m-1-j} x^j + (-1)^m / (1+x)
  double s = 0;
  for (int j = 0; j < m; ++j) s += (((m - 1 - j) % 2) ? -1.0 : 1.0) * std::pow(y, j + 1) / (j + 1);
  s += ((m % 2) ? -1.0 : 1.0) * std::log1p(y);
  return s;
}

struct EnergyInfimum {
  double lambda = 0;
  double zeta_inv = 0;
  double interior = 0;
  double bubble = 0;
  double total = 0;
};

// zeta^2 c I_{m,n,lambda}(a) + n^2 c \int_0^lambda x^m (1+x)^{n-2}.
inline EnergyInfimum energy_infimum(const BundleParams& P) {
  auto lz = lambda_and_zeta(P);
  const double c = energy_constant(P);
  EnergyInfimum e;
  e.lambda = lz.lambda;
  e.zeta_inv = lz.zeta_inv;
  e.interior = lz.zeta_inv * lz.zeta_inv * c * I_num(P.m, P.n, lz.lambda, P.ad());
  e.bubble = lz.lambda > 0 ? P.n * P.n * c * bubble_integral(P.m, P.n, lz.lambda) : 0;
  e.total = e.interior + e.bubble;
  return e;
}

// ---- test configurations: convex piecewise-linear Hamiltonians ----

struct PLTestConfig {
  std::vector<Rational> breakpoints;  // 0 = x_0 < ... < x_K = a
  std::vector<Rational> values;       // h(x_i)

  void validate(const BundleParams& P) const {
    if (breakpoints.size() != values.size()) throw InputError("breakpoints and values differ in length");
    if (breakpoints.size() < 2) throw InputError("need at least two breakpoints");
    if (breakpoints.front() != 0 || breakpoints.back() != P.a) throw InputError("breakpoints must run from 0 to a");
    Rational prev_slope;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
      if (!(breakpoints[i + 1] > breakpoints[i])) throw InputError("breakpoints must increase");
      Rational slope = (values[i + 1] - values[i]) / (breakpoints[i + 1] - breakpoints[i]);
      if (i > 0 && slope < prev_slope) throw InputError("test configuration is not convex");
      prev_slope = slope;
    }
    if (prev_slope != 0) throw InputError("test configuration must be constant near a");
  }
};

namespace detail {

// \int_lo^hi poly(x) x^m (1+x)^k dx, poly given by coefficients.
inline Rational poly_moment(const std::vector<Rational>& poly, int m, int k, const Rational& lo, const Rational& hi) {
  Rational total = 0;
  for (std::size_t p = 0; p < poly.size(); ++p) {
    if (poly[p] == 0) continue;
    for (int j = 0; j <= k; ++j) {
      unsigned e = static_cast<unsigned>(m + j + static_cast<int>(p) + 1);
      total += poly[p] * Rational(binom(k, j)) * (rpow(hi, e) - rpow(lo, e)) / e;
    }
  }
  return total;
}

}  // namespace detail

struct FutakiReport {
  Rational b0;
  Rational b0_prime;
  Rational futaki;
  Rational norm_squared;
  double norm = 0;
  double normalized = 0;  // -Fut / ||h||
};

// b0 = \int h x^m (1+x)^n,  b0' = n \int h x^m (1+x)^{n-1} + h(a) a^m (1+a)^n b,
// Fut = b0' - mu_0 b0, all exact.
inline FutakiReport futaki(const BundleParams& P, const PLTestConfig& h) {
  P.validate();
  h.validate(P);
  FutakiReport r;
  for (std::size_t i = 0; i + 1 < h.breakpoints.size(); ++i) {
    const Rational &x0 = h.breakpoints[i], &x1 = h.breakpoints[i + 1];
    Rational slope = (h.values[i + 1] - h.values[i]) / (x1 - x0);
    Rational c0 = h.values[i] - slope * x0;
    std::vector<Rational> lin{c0, slope};
    std::vector<Rational> sq{c0 * c0, 2 * c0 * slope, slope * slope};
    r.b0 += detail::poly_moment(lin, P.m, P.n, x0, x1);
    r.b0_prime += P.n * detail::poly_moment(lin, P.m, P.n - 1, x0, x1);
    r.norm_squared += detail::poly_moment(sq, P.m, P.n, x0, x1);
  }
  r.b0_prime += h.values.back() * rpow(P.a, P.m) * rpow(1 + P.a, P.n) * P.b;
  r.futaki = r.b0_prime - mu_s_exact(P, 0) * r.b0;
  r.b0.canonicalize();
  r.b0_prime.canonicalize();
  r.futaki.canonicalize();
  r.norm_squared.canonicalize();
  r.norm = std::sqrt(to_double(r.norm_squared));
  r.normalized = r.norm > 0 ? -to_double(r.futaki) / r.norm : 0;
  return r;
}

// Piecewise-linear interpolant of h*(x) = n/(1+x) - mu_0 on [0, lambda],
// frozen at its value from lambda on. Nodes are exact rationals, so the
// interpolant of the convex h* stays convex.
inline PLTestConfig limit_hamiltonian_pl(const BundleParams& P, int pieces) {
  if (pieces < 1) throw InputError("need at least one piece");
  auto lz = lambda_and_zeta(P);
  if (lz.lambda <= 0) throw InputError("limit Hamiltonian is constant unless the class is unstable");
  const Rational lam = from_double(lz.lambda);
  PLTestConfig h;
  for (int k = 0; k <= pieces; ++k) {
    Rational x = lam * k / pieces;
    x.canonicalize();
    Rational v = Rational(P.n) / (1 + x) - lz.mu0;
    v.canonicalize();
    h.breakpoints.push_back(x);
    h.values.push_back(v);
  }
  h.breakpoints.push_back(P.a);
  h.values.push_back(h.values.back());
  return h;
}

// || sigma_inf - mu_0 || in L^2(x^m (1+x)^n dx), sigma_inf = n/(1+x) up to lambda, zeta after.
inline double l2_deviation(const BundleParams& P) {
  auto lz = lambda_and_zeta(P);
  const double mu0 = to_double(lz.mu0);
  double left = lz.lambda > 0 ? integrate(
                                    [&](double x) {
                                      double d = P.n / (1 + x) - mu0;
                                      return d * d * weight(P, x);
                                    },
                                    0, lz.lambda, 8)
                              : 0;
  double dz = lz.zeta_inv - mu0;
  return std::sqrt(left + dz * dz * I_num(P.m, P.n, lz.lambda, P.ad()));
}

// ---- minimizing sequence in the log coordinate ----

struct MinimizingReport {
  int k = 0;
  double energy = 0;
  double infimum = 0;
  double relative_gap = 0;
};

namespace detail {

// Smooth step: 0 below 0, 1 above 1.
inline double smooth_step(double s) {
  if (s <= 0) return 0;
  if (s >= 1) return 1;
  double a = std::exp(-1 / s), b = std::exp(-1 / (1 - s));
  return a / (a + b);
}

// y with I_{m,n}(y) = target, y in [0, ymax].
inline double inverse_I(int m, int n, double target, double ymax) {
  if (target <= 0) return 0;
  auto br = bisect_flip([&](double y) { return I_num(m, n, 0, y) < target; }, 0.0, ymax, 1e-15, 200);
  return br.mid();
}

}  // namespace detail

// Energy of v_k = theta_k + lambda log(1 + e^{rho + k}), where theta_k' runs
// from 0 to a - lambda and follows the limit v_inf' - lambda for rho >> -k and
// the background (a - lambda) e^rho / (1 + e^rho) for rho << -k.
inline MinimizingReport minimizing_profile(const BundleParams& P, int k, double drho = 0.01, double R = 40) {
  P.validate();
  if (k < 0) throw InputError("k must be non-negative");
  auto lz = lambda_and_zeta(P);
  const double a = P.ad(), b = P.bd(), lam = lz.lambda, zeta = lz.zeta_inv;
  const int m = P.m, n = P.n;
  const double span = a - lam;
  BackgroundPotential u{0, b};
  BackgroundPotential ut{0, span};

  // psi_tilde_lambda at lambda + y and its x-derivative, with mu (1+x) - n written as zeta y
  auto psi_t = [&](double y) {
    double x = lam + y;
    double num = integrate([&](double t) { return std::pow(lam + t, m) * std::pow(1 + lam + t, n - 1) * zeta * t; },
                           0, y, 2);
    return num / weight(P, x);
  };
  auto dpsi_t = [&](double y, double ps) {
    double x = lam + y;
    double kx = n / (1 + x) + (m > 0 ? m / x : 0.0);
    return zeta * y / (1 + x) - ps * kx;
  };

  const double lo = -R - k, hi = R;
  const int M = static_cast<int>(std::ceil((hi - lo) / drho));
  std::vector<double> rho(M + 1), dens(M + 1), cum(M + 1, 0.0);
  for (int i = 0; i <= M; ++i) rho[i] = lo + (hi - lo) * i / M;

  for (int i = 0; i <= M; ++i) {
    double r = rho[i];
    double kappa = detail::smooth_step(r + k);
    double limit_part = 0;
    if (kappa > 0 && lam < a) {
      double up = u.d1(r);
      double y = bisect_flip([&](double yy) { return psi_t(yy) < up; }, 0.0, span, 1e-15, 200).mid();
      double ps = psi_t(y);
      double dv2 = u.d2(r) / dpsi_t(y, ps);
      limit_part = std::pow(1 + y, n) * std::pow(y, m) * dv2;
    }
    double t1 = ut.d1(r);
    double back_part = std::pow(1 + t1, n) * std::pow(t1, m) * ut.d2(r);
    dens[i] = kappa * limit_part + (1 - kappa) * back_part;
    if (i > 0) cum[i] = cum[i - 1] + 0.5 * (dens[i] + dens[i - 1]) * (rho[i] - rho[i - 1]);
  }
  const double target_total = I_num(m, n, 0, span);
  const double scale = target_total / cum[M];

  const double c = energy_constant(P);
  std::vector<double> integrand(M + 1);
  for (int i = 0; i <= M; ++i) {
    double r = rho[i];
    double th1 = detail::inverse_I(m, n, cum[i] * scale, span);
    double wt = std::pow(1 + th1, n) * std::pow(th1, m);
    double th2 = wt > 0 ? dens[i] * scale / wt : 0;
    double e = std::exp(-std::fabs(r + k));
    double sg = r + k >= 0 ? 1 / (1 + e) : e / (1 + e);
    double z1 = lam * sg, z2 = lam * sg * (1 - sg);
    double v1 = th1 + z1, v2 = th2 + z2;
    double u1 = u.d1(r), u2 = u.d2(r);
    if (!(v2 > 0) || !(v1 > 0)) {
      integrand[i] = 0;
      continue;
    }
    double sigma = u2 / v2 + n * (1 + u1) / (1 + v1) + (m > 0 ? m * u1 / v1 : 0.0);
    integrand[i] = sigma * sigma * std::pow(1 + v1, n) * std::pow(v1, m) * v2;
  }
  double E = 0;
  for (int i = 1; i <= M; ++i) E += 0.5 * (integrand[i] + integrand[i - 1]) * (rho[i] - rho[i - 1]);

  MinimizingReport rep;
  rep.k = k;
  rep.energy = c * E;
  rep.infimum = energy_infimum(P).total;
  rep.relative_gap = (rep.energy - rep.infimum) / rep.infimum;
  return rep;
}

// ---- dHYM volume ----

// 2 \int_1^b |z| dx with z = (psi psi' - x) + i (x psi' + psi), on the
// piecewise-linear interpolant of the samples.
inline double dhym_volume(const MomentProfile& prof) {
  prof.validate();
  if (prof.x.front() <= 0) throw InputError("volume needs x > 0");
  const double b = prof.x.back() > 1 ? prof.x.back() : 2;
  detail::CotOperator op(b, prof.x);
  return op.functional(prof.psi, {});
}

struct DhymVolumeSplit {
  double lower_bound = 0;  // 2 csc(vartheta) (bp - q), cot(vartheta) = c0
  double xi = 0;
  double interior = 0;     // 2 csc(theta_min) (bp - xi)
  double bubble = 0;       // 2 \int_q^xi sqrt(1 + y^2) dy
  double total = 0;
};

inline DhymVolumeSplit dhym_volume_split(double b, double p, double q) {
  auto cf = blp2_closed_forms(from_double(b), from_double(p), from_double(q));
  const double c0 = to_double(cf.c0);
  DhymVolumeSplit s;
  s.lower_bound = 2 * std::sqrt(1 + c0 * c0) * (b * p - q);
  s.xi = cf.verdict == Verdict::Unstable ? cf.xi : c0;
  const double xi = s.xi;
  auto prim = [](double y) { return 0.5 * (y * std::sqrt(1 + y * y) + std::asinh(y)); };
  if (cf.verdict == Verdict::Unstable) {
    s.interior = 2 * std::sqrt(1 + xi * xi) * (b * p - xi);
    s.bubble = 2 * (prim(xi) - prim(q));
  } else {
    s.interior = s.lower_bound;
    s.bubble = 0;
  }
  s.total = s.interior + s.bubble;
  return s;
}

}  // namespace minslope
