#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bisect.hpp"
#include "errors.hpp"
#include "quadrature.hpp"
#include "rational.hpp"
#include "surface_slopes.hpp"

namespace minslope {

// Projective bundle of rank r = m + 2 over an n-dimensional base of degree d,
// with classes alpha = h + a eta and beta = h + b eta.
struct BundleParams {
  int m = 0;
  int n = 1;
  Rational a = 1;
  Rational b = 1;
  int d = 1;

  int rank() const { return m + 2; }
  int dim() const { return n + m + 1; }
  double ad() const { return to_double(a); }
  double bd() const { return to_double(b); }

  void validate() const {
    if (m < 0) throw InputError("m must be non-negative");
    if (n < 1) throw InputError("n must be at least 1");
    if (a <= 0) throw InputError("a must be positive");
    if (b <= 0) throw InputError("b must be positive");
    if (d < 1) throw InputError("d must be at least 1");
  }
};

// "m,n,a,b[,d]"
inline BundleParams parse_bundle_params(const std::string& s) {
  auto v = parse_rational_list(s);
  if (v.size() != 4 && v.size() != 5) throw InputError("params must be m,n,a,b[,d]");
  auto as_int = [](const Rational& q, const char* what) {
    if (q.get_den() != 1 || !q.get_num().fits_sint_p()) throw InputError(std::string(what) + " must be an integer");
    return static_cast<int>(q.get_num().get_si());
  };
  BundleParams P;
  P.m = as_int(v[0], "m");
  P.n = as_int(v[1], "n");
  P.a = v[2];
  P.b = v[3];
  if (v.size() == 5) P.d = as_int(v[4], "d");
  P.validate();
  return P;
}

// \int_s^x t^m (1+t)^n dt, exactly.
inline Rational I_exact(int m, int n, const Rational& s, const Rational& x) {
  Rational total = 0;
  for (int k = 0; k <= n; ++k) {
    unsigned e = static_cast<unsigned>(m + k + 1);
    total += Rational(binom(n, k)) * (rpow(x, e) - rpow(s, e)) / e;
  }
  total.canonicalize();
  return total;
}

// Same integral in floating point; Gauss-Legendre is exact for these degrees
// and avoids cancellation between large monomials.
inline double I_num(int m, int n, double s, double x) {
  return integrate([&](double t) { return std::pow(t, m) * std::pow(1 + t, n); }, s, x, 2);
}

inline Rational mu_s_exact(const BundleParams& P, const Rational& s) {
  Rational num = rpow(1 + P.a, P.n) * rpow(P.a, P.m) * P.b + P.n * I_exact(P.m, P.n - 1, s, P.a);
  Rational mu = num / I_exact(P.m, P.n, s, P.a);
  mu.canonicalize();
  return mu;
}

inline double mu_s(const BundleParams& P, double s) {
  const double a = P.ad(), b = P.bd();
  double num = std::pow(1 + a, P.n) * std::pow(a, P.m) * b + P.n * I_num(P.m, P.n - 1, s, a);
  return num / I_num(P.m, P.n, s, a);
}

// Chow ring Z[h, eta]/(h^{n+1}, eta^r - sum_j (-1)^{j-1} C(r-1,j) h^j eta^{r-j}),
// with h^n eta^{r-1} integrating to d.
class ChowRing {
 public:
  using Element = std::map<std::pair<int, int>, Rational>;  // (k, l) -> coefficient of h^k eta^l

  ChowRing(int m, int n, int d) : n_(n), r_(m + 2), d_(d) {}

  int top_degree() const { return n_ + r_ - 1; }

  Element monomial(int k, int l, const Rational& c = 1) const { return reduce({{{k, l}, c}}); }

  Element linear(const Rational& ch, const Rational& ceta) const {
    Element e;
    if (ch != 0) e[{1, 0}] = ch;
    if (ceta != 0) e[{0, 1}] = ceta;
    return e;
  }

  Element mul(const Element& x, const Element& y) const {
    Element out;
    for (const auto& [kx, cx] : x)
      for (const auto& [ky, cy] : y) {
        int k = kx.first + ky.first;
        if (k > n_) continue;
        out[{k, kx.second + ky.second}] += cx * cy;
      }
    return reduce(std::move(out));
  }

  Element pow(const Element& x, int e) const {
    Element acc{{{0, 0}, Rational(1)}};
    for (int i = 0; i < e; ++i) acc = mul(acc, x);
    return acc;
  }

  // Degree of a top-dimensional element.
  Rational integrate(const Element& x) const {
    Rational total = 0;
    for (const auto& [k, c] : x) {
      if (k.first + k.second != top_degree()) continue;
      if (k.first == n_ && k.second == r_ - 1) total += c * d_;
    }
    return total;
  }

 private:
  // Rewrites eta^l with l >= r until every monomial has l < r.
  Element reduce(Element x) const {
    for (;;) {
      auto it = std::find_if(x.begin(), x.end(), [&](const auto& kv) { return kv.first.second >= r_ && kv.second != 0; });
      if (it == x.end()) break;
      auto [k, l] = it->first;
      Rational c = it->second;
      x.erase(it);
      for (int j = 1; j <= r_ - 1; ++j) {
        if (k + j > n_) break;
        Rational coef = Rational(binom(r_ - 1, j)) * ((j % 2 == 1) ? 1 : -1);
        x[{k + j, l - j}] += c * coef;
      }
    }
    for (auto it = x.begin(); it != x.end();)
      it = (it->second == 0 || it->first.first > n_) ? x.erase(it) : std::next(it);
    return x;
  }

  int n_, r_, d_;
};

// alpha^N and alpha^{N-1}.beta from the ring.
inline Rational chow_alpha_top(const BundleParams& P) {
  ChowRing R(P.m, P.n, P.d);
  return R.integrate(R.pow(R.linear(1, P.a), P.dim()));
}

inline Rational chow_alpha_beta(const BundleParams& P) {
  ChowRing R(P.m, P.n, P.d);
  return R.integrate(R.mul(R.pow(R.linear(1, P.a), P.dim() - 1), R.linear(1, P.b)));
}

inline Rational alpha_top_closed(const BundleParams& P) {
  const int N = P.dim();
  return Rational(P.d) * N * Rational(binom(N - 1, P.n)) * I_exact(P.m, P.n, 0, P.a);
}

inline Rational alpha_beta_closed(const BundleParams& P) {
  const int r = P.rank();
  return Rational(P.d) * Rational(binom(P.n + r - 2, P.n)) *
         (rpow(1 + P.a, P.n) * rpow(P.a, r - 2) * P.b + P.n * I_exact(P.m, P.n - 1, 0, P.a));
}

struct LambdaZeta {
  double lambda = 0;
  Bracket bracket{0, 0};
  double zeta_inv = 0;      // mu_lambda
  double zeta_check = 0;    // n / (1 + lambda) when lambda > 0
  Rational mu0;
  double alpha_lambda_top = 0;
  Verdict verdict = Verdict::Stable;
};

inline double alpha_s_top(const BundleParams& P, double s) {
  const int N = P.dim();
  return P.d * N * to_double(Rational(binom(N - 1, P.n))) * I_num(P.m, P.n, s, P.ad());
}

// lambda is the root of p(s) = (mu_s (1+s) - n) I_{m,n,s}(a), which is
// increasing on [0, a); lambda = 0 when mu_0 >= n.
inline LambdaZeta lambda_and_zeta(const BundleParams& P) {
  P.validate();
  LambdaZeta out;
  out.mu0 = mu_s_exact(P, 0);
  const Rational n = P.n;
  out.verdict = out.mu0 > n ? Verdict::Stable : out.mu0 == n ? Verdict::Semistable : Verdict::Unstable;
  if (out.verdict != Verdict::Unstable) {
    out.lambda = 0;
    out.zeta_inv = to_double(out.mu0);
    out.zeta_check = out.zeta_inv;
  } else {
    const Rational top = rpow(1 + P.a, P.n) * rpow(P.a, P.m) * P.b;
    auto p = [&](double sd) {
      Rational s = from_double(sd);
      Rational v = (1 + s) * (top + P.n * I_exact(P.m, P.n - 1, s, P.a)) - P.n * I_exact(P.m, P.n, s, P.a);
      return v < 0;
    };
    out.bracket = bisect_flip(p, 0.0, P.ad(), 1e-16);
    out.lambda = out.bracket.mid();
    out.zeta_inv = mu_s(P, out.lambda);
    out.zeta_check = P.n / (1 + out.lambda);
  }
  out.alpha_lambda_top = alpha_s_top(P, out.lambda);
  return out;
}

// Sum_{j=1}^{s+1} (-1)^{j-1} C(s+1,j) C(s+q-j, q-j).
inline mpz_class alternating_sum(int s, int q) {
  mpz_class total = 0;
  for (int j = 1; j <= s + 1; ++j) {
    mpz_class term = binom(s + 1, j) * binom(s + q - j, q - j);
    total += (j % 2 == 1) ? term : mpz_class(-term);
  }
  return total;
}

// Number of (x_0..x_s) >= 0 with sum q, by enumeration.
inline long count_compositions(int s, int q) {
  if (s == 0) return 1;
  long total = 0;
  for (int x = 0; x <= q; ++x) total += count_compositions(s - 1, q - x);
  return total;
}

struct IdentityReport {
  int checked = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

// Holds for positive s and q; at q = 0 the left side is 0.
inline IdentityReport combinatorial_identity_check(int max_sq) {
  IdentityReport rep;
  for (int s = 1; s <= max_sq; ++s)
    for (int q = 1; q <= max_sq; ++q) {
      ++rep.checked;
      mpz_class lhs = alternating_sum(s, q);
      mpz_class target = binom(q + s, q);
      if (lhs != target || target != count_compositions(s, q))
        rep.failures.push_back("s=" + std::to_string(s) + " q=" + std::to_string(q) + ": " + lhs.get_str() +
                               " vs " + target.get_str());
    }
  return rep;
}

// h^{n-l} eta^{r-1+l} = C(r+l-2, l) d for every l.
inline IdentityReport pairing_table_check(int max_mn, int d = 1) {
  IdentityReport rep;
  for (int m = 0; m <= max_mn; ++m)
    for (int n = 1; n <= max_mn; ++n) {
      ChowRing R(m, n, d);
      const int r = m + 2;
      for (int l = 0; l <= n; ++l) {
        ++rep.checked;
        Rational got = R.integrate(R.monomial(n - l, r - 1 + l));
        Rational want = Rational(binom(r + l - 2, l)) * d;
        if (got != want)
          rep.failures.push_back("m=" + std::to_string(m) + " n=" + std::to_string(n) + " l=" + std::to_string(l) +
                                 ": " + got.get_str() + " vs " + want.get_str());
      }
    }
  return rep;
}

// alpha^N - d sum_l C(N, n-l) s^{r-1+l} <h^{n-l} eta^{r-1+l}> equals
// d N C(N-1, n) I_{m,n,s}(a).
inline Rational blowup_lhs(const BundleParams& P, const Rational& s) {
  ChowRing R(P.m, P.n, P.d);
  const int N = P.dim(), r = P.rank();
  Rational total = R.integrate(R.pow(R.linear(1, P.a), N));
  for (int l = 0; l <= P.n; ++l)
    total -= Rational(binom(N, P.n - l)) * rpow(s, r - 1 + l) * R.integrate(R.monomial(P.n - l, r - 1 + l));
  total.canonicalize();
  return total;
}

inline Rational blowup_rhs(const BundleParams& P, const Rational& s) {
  const int N = P.dim();
  Rational v = Rational(P.d) * N * Rational(binom(N - 1, P.n)) * I_exact(P.m, P.n, s, P.a);
  v.canonicalize();
  return v;
}

inline IdentityReport bundle_identity_check(int max_mn) {
  IdentityReport rep;
  const std::vector<Rational> as = {Rational(1), Rational(7, 3), Rational(4)};
  const std::vector<Rational> bs = {Rational(1, 2), Rational(2)};
  for (int m = 0; m <= max_mn; ++m)
    for (int n = 1; n <= max_mn; ++n)
      for (const auto& a : as)
        for (const auto& b : bs) {
          BundleParams P{m, n, a, b, 2};
          std::string tag = "m=" + std::to_string(m) + " n=" + std::to_string(n) + " a=" + a.get_str() +
                            " b=" + b.get_str();
          ++rep.checked;
          if (chow_alpha_top(P) != alpha_top_closed(P)) rep.failures.push_back(tag + ": alpha^N");
          ++rep.checked;
          if (chow_alpha_beta(P) != alpha_beta_closed(P)) rep.failures.push_back(tag + ": alpha^{N-1}.beta");
          ++rep.checked;
          if (P.dim() * chow_alpha_beta(P) / chow_alpha_top(P) != mu_s_exact(P, 0))
            rep.failures.push_back(tag + ": mu_0");
          for (const Rational& s : {Rational(0), Rational(1, 3), Rational(a / 2)}) {
            ++rep.checked;
            if (blowup_lhs(P, s) != blowup_rhs(P, s)) rep.failures.push_back(tag + " s=" + s.get_str() + ": blow-up");
          }
        }
  return rep;
}

}  // namespace minslope
