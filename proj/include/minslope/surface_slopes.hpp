#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "bisect.hpp"
#include "surface_lattice.hpp"

namespace minslope {

enum class Verdict { Stable, Semistable, Unstable };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Stable: return "stable";
    case Verdict::Semistable: return "semistable";
    default: return "unstable";
  }
}

struct CurveSlope {
  std::string curve;
  Rational value;
};

struct SlopeCertificate {
  std::string equation;  // "J" or "dHYM"
  Rational reference;    // mu for J, c0 for dHYM
  double xi = 0;
  Bracket bracket{0, 0};
  double residual = 0;
  double t0 = 0;  // threshold of bigness in the root variable
  DivisorClass witness;        // negative part at the root; empty when none
  double witness_slope = 0;    // slope recomputed from the witness
  std::vector<CurveSlope> curve_slopes;
  Verdict verdict = Verdict::Stable;
};

namespace detail {

// sup{t : alpha - t beta big}, beta nef and big, alpha - t_lo beta known big.
inline double bigness_threshold(const SurfaceModel& X, const DivisorClass& alpha, const DivisorClass& beta,
                                double t_lo) {
  Rational ak = intersect(X, alpha, X.kahler_ref);
  Rational bk = intersect(X, beta, X.kahler_ref);
  // past this point alpha - t beta is negative on a Kähler class
  double t_hi = to_double(ak / bk);
  auto big_at = [&](double t) { return is_big(X, axpy(-from_double(t), beta, alpha)); };
  if (!big_at(t_lo)) throw NotBigError("class is not big at the start of the bigness search");
  if (big_at(t_hi)) t_hi = std::nextafter(t_hi, INFINITY);
  return bisect_flip(big_at, t_lo, t_hi, 1e-15).mid();
}

inline void require_kahler(const SurfaceModel& X, const DivisorClass& a, const char* what) {
  if (!is_kahler(X, a)) throw InputError(std::string(what) + " is not a Kähler class on this model");
}

}  // namespace detail

// Minimal slope for the J-equation: xi = 1/s0 where s0 is the root of
// vol(alpha - s beta) = s^2 beta^2 on [1/mu, t0).
inline SlopeCertificate j_slope_suite(const SurfaceModel& X, const DivisorClass& alpha, const DivisorClass& beta) {
  detail::require_kahler(X, alpha, "alpha");
  detail::require_kahler(X, beta, "beta");
  const Rational a2 = intersect(X, alpha, alpha);
  const Rational b2 = intersect(X, beta, beta);
  const Rational ab = intersect(X, alpha, beta);

  SlopeCertificate cert;
  cert.equation = "J";
  cert.reference = 2 * ab / a2;
  cert.reference.canonicalize();
  const Rational& mu = cert.reference;

  for (const auto& c : X.curves) {
    Rational s = intersect(X, beta, c.cls) / intersect(X, alpha, c.cls);
    s.canonicalize();
    cert.curve_slopes.push_back({c.name, s});
  }

  const Rational s_lo = 1 / mu;
  cert.t0 = detail::bigness_threshold(X, alpha, beta, 0.0);
  auto g = [&](const Rational& s) -> Rational { return volume(X, axpy(-s, beta, alpha)) - s * s * b2; };
  const double b2d = to_double(b2);

  if (g(s_lo) == 0) {
    cert.xi = to_double(mu);
    cert.bracket = {cert.xi, cert.xi};
    cert.residual = 0;
  } else {
    auto gd = [&](double s) { return to_double(g(from_double(s))); };
    Bracket sb = bisect_decreasing(gd, to_double(s_lo), cert.t0, 1e-15);
    double s0 = sb.mid();
    cert.xi = 1.0 / s0;
    cert.bracket = {1.0 / sb.hi, 1.0 / sb.lo};
    cert.residual = std::fabs(gd(s0));
    auto z = zariski(X, axpy(-from_double(s0), beta, alpha));
    cert.witness = z.negative;
  }
  if (cert.residual > 1e-10 * b2d) throw RootError("J slope residual above tolerance");

  if (!cert.witness.empty()) {
    DivisorClass am = sub(alpha, cert.witness);
    cert.witness_slope = to_double(2 * intersect(X, am, beta) / intersect(X, am, am));
  } else {
    cert.witness_slope = to_double(mu);
  }

  bool above = false, touch = false;
  for (const auto& cs : cert.curve_slopes) {
    if (cs.value > mu) above = true;
    if (cs.value == mu) touch = true;
  }
  cert.verdict = above ? Verdict::Unstable : touch ? Verdict::Semistable : Verdict::Stable;
  return cert;
}

// Minimal slope for the dHYM equation: xi is the root on [c0, t0) of
// vol(alpha - t beta) = (1 + t^2) beta^2.
inline SlopeCertificate dhym_slope_suite(const SurfaceModel& X, const DivisorClass& alpha, const DivisorClass& beta) {
  detail::require_kahler(X, beta, "beta");
  const Rational a2 = intersect(X, alpha, alpha);
  const Rational b2 = intersect(X, beta, beta);
  const Rational ab = intersect(X, alpha, beta);
  if (ab <= 0) throw InputError("alpha.beta must be positive");

  SlopeCertificate cert;
  cert.equation = "dHYM";
  cert.reference = (a2 - b2) / (2 * ab);
  cert.reference.canonicalize();
  const Rational& c0 = cert.reference;

  for (const auto& c : X.curves) {
    Rational s = intersect(X, alpha, c.cls) / intersect(X, beta, c.cls);
    s.canonicalize();
    cert.curve_slopes.push_back({c.name, s});
  }

  cert.t0 = detail::bigness_threshold(X, alpha, beta, to_double(c0) - 1.0);
  auto f = [&](const Rational& t) -> Rational { return volume(X, axpy(-t, beta, alpha)) - (1 + t * t) * b2; };
  const double b2d = to_double(b2);

  if (f(c0) == 0) {
    cert.xi = to_double(c0);
    cert.bracket = {cert.xi, cert.xi};
  } else {
    auto fd = [&](double t) { return to_double(f(from_double(t))); };
    cert.bracket = bisect_decreasing(fd, to_double(c0), cert.t0, 1e-15);
    cert.xi = cert.bracket.mid();
    cert.residual = std::fabs(fd(cert.xi));
    cert.witness = zariski(X, axpy(-from_double(cert.xi), beta, alpha)).negative;
  }
  if (cert.residual > 1e-10 * b2d) throw RootError("dHYM slope residual above tolerance");

  if (!cert.witness.empty()) {
    DivisorClass am = sub(alpha, cert.witness);
    Rational num = intersect(X, am, am) - b2;
    Rational den = 2 * intersect(X, am, beta);
    cert.witness_slope = to_double(num / den);
  } else {
    cert.witness_slope = to_double(c0);
  }

  DivisorClass shifted = axpy(-c0, beta, alpha);
  cert.verdict = is_kahler(X, shifted) ? Verdict::Stable
               : is_nef(X, shifted)    ? Verdict::Semistable
                                       : Verdict::Unstable;
  return cert;
}

// Closed forms on the blow-up of P^2 at a point for alpha = pH - qE, beta = bH - E.
struct Blp2ClosedForm {
  Rational c0;
  double xi;
  double t0;
  Verdict verdict;
};

inline void check_bpq(const Rational& b, const Rational& p, const Rational& q) {
  if (b <= 1) throw InputError("b must exceed 1");
  if (b * p - q <= 0) throw InputError("need bp > q");
}

inline Rational blp2_c0(const Rational& b, const Rational& p, const Rational& q) {
  Rational c = (p * p - q * q - b * b + 1) / (2 * (b * p - q));
  c.canonicalize();
  return c;
}

inline Blp2ClosedForm blp2_closed_forms(const Rational& b, const Rational& p, const Rational& q) {
  check_bpq(b, p, q);
  Blp2ClosedForm out;
  out.c0 = blp2_c0(b, p, q);
  const double bd = to_double(b), pd = to_double(p), qd = to_double(q);
  const double root = bd * pd - std::sqrt((pd * pd + 1) * (bd * bd - 1));
  out.xi = root >= qd ? root : to_double(out.c0);
  out.t0 = std::min(pd / bd, (pd - qd) / (bd - 1));
  out.verdict = q > out.c0 ? Verdict::Stable : q == out.c0 ? Verdict::Semistable : Verdict::Unstable;
  return out;
}

// Slope and constant of the one-parameter family of dHYM profiles
// pinned at psi(b) = p and psi(1) = s.
inline double blp2_c_tilde(double b, double p, double s) { return (p * p - s * s - b * b + 1) / (2 * (p * b - s)); }

inline double blp2_A_tilde(double b, double p, double s) {
  double c = blp2_c_tilde(b, p, s);
  return s * s - 2 * c * s - 1;
}

inline double blp2_dc_tilde(double b, double p, double s) {
  double d = b * p - s;
  return (d * d - (p * p + 1) * (b * b - 1)) / (2 * d * d);
}

}  // namespace minslope
