#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace minslope {

using DivisorClass = std::vector<Rational>;

struct Curve {
  std::string name;
  DivisorClass cls;
};

// Neron-Severi data of a surface: a basis, the intersection form in that
// basis, and a list of irreducible curves that contains every curve of
// negative self-intersection. Zariski decompositions are only as good as
// that list.
struct SurfaceModel {
  std::vector<std::string> basis;
  std::vector<std::vector<Rational>> form;
  std::vector<Curve> curves;
  DivisorClass kahler_ref;

  std::size_t rank() const { return basis.size(); }
  void validate() const;
};

inline Rational intersect(const SurfaceModel& X, const DivisorClass& a, const DivisorClass& b) {
  const std::size_t r = X.rank();
  if (a.size() != r || b.size() != r)
    throw InputError("class has " + std::to_string(a.size() == r ? b.size() : a.size()) +
                     " coefficients, model has rank " + std::to_string(r));
  Rational s = 0;
  for (std::size_t i = 0; i < r; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < r; ++j) s += a[i] * X.form[i][j] * b[j];
  }
  return s;
}

inline DivisorClass axpy(const Rational& t, const DivisorClass& x, const DivisorClass& y) {
  DivisorClass out(y);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += t * x[i];
  return out;
}

inline DivisorClass sub(const DivisorClass& a, const DivisorClass& b) { return axpy(-1, b, a); }

inline DivisorClass scale(const Rational& t, const DivisorClass& a) {
  DivisorClass out(a);
  for (auto& c : out) c *= t;
  return out;
}

namespace detail {

// Leading principal minors of -G all positive, by exact elimination.
inline bool negative_definite(std::vector<std::vector<Rational>> g) {
  const std::size_t n = g.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (g[k][k] >= 0) return false;
    for (std::size_t i = k + 1; i < n; ++i) {
      Rational f = g[i][k] / g[k][k];
      for (std::size_t j = k; j < n; ++j) g[i][j] -= f * g[k][j];
    }
  }
  return true;
}

// Signs of the pivots of a symmetric matrix (Jacobi with symmetric pivoting
// where a zero diagonal appears). Returns {positive, negative, zero}.
inline std::vector<int> inertia(std::vector<std::vector<Rational>> g) {
  std::vector<int> counts(3, 0);
  std::size_t n = g.size();
  std::size_t k = 0;
  while (k < n) {
    std::size_t piv = n;
    for (std::size_t i = k; i < n; ++i)
      if (g[i][i] != 0) { piv = i; break; }
    if (piv == n) {
      // all remaining diagonal entries vanish; look for an off-diagonal pair
      std::size_t pi = n, pj = n;
      for (std::size_t i = k; i < n && pi == n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (g[i][j] != 0) { pi = i; pj = j; break; }
      if (pi == n) {
        counts[2] += static_cast<int>(n - k);
        break;
      }
      // e_i + e_j has square 2 g_ij != 0
      for (std::size_t c = 0; c < n; ++c) g[pi][c] += g[pj][c];
      for (std::size_t r = 0; r < n; ++r) g[r][pi] += g[r][pj];
      piv = pi;
    }
    std::swap(g[k], g[piv]);
    for (auto& row : g) std::swap(row[k], row[piv]);
    counts[g[k][k] > 0 ? 0 : 1] += 1;
    for (std::size_t i = k + 1; i < n; ++i) {
      Rational f = g[i][k] / g[k][k];
      for (std::size_t j = k; j < n; ++j) g[i][j] -= f * g[k][j];
      g[i][k] = 0;
    }
    for (std::size_t j = k + 1; j < n; ++j) g[k][j] = 0;
    ++k;
  }
  return counts;
}

inline std::vector<Rational> solve(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t n = a.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && a[piv][k] == 0) ++piv;
    if (piv == n) throw ModelError("singular Gram matrix on Zariski support");
    std::swap(a[k], a[piv]);
    std::swap(b[k], b[piv]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a[i][k] == 0) continue;
      Rational f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  for (std::size_t k = 0; k < n; ++k) b[k] /= a[k][k];
  return b;
}

}  // namespace detail

inline void SurfaceModel::validate() const {
  const std::size_t r = rank();
  if (r == 0) throw InputError("empty basis");
  if (form.size() != r) throw InputError("intersection matrix must have " + std::to_string(r) + " rows");
  for (std::size_t i = 0; i < r; ++i) {
    if (form[i].size() != r)
      throw InputError("intersection matrix row " + std::to_string(i + 1) + " has wrong length");
    for (std::size_t j = 0; j < i; ++j)
      if (form[i][j] != form[j][i]) throw InputError("intersection matrix is not symmetric");
  }
  auto in = detail::inertia(form);
  if (in[2] != 0) throw ModelError("intersection form is degenerate");
  if (in[0] != 1) throw ModelError("intersection form must have exactly one positive direction");
  for (const auto& c : curves)
    if (c.cls.size() != r) throw InputError("curve " + c.name + " has wrong number of coefficients");
  if (kahler_ref.size() != r) throw InputError("reference Kähler class has wrong number of coefficients");
  for (const auto& c : curves)
    if (intersect(*this, kahler_ref, c.cls) <= 0)
      throw ModelError("reference Kähler class is not positive on curve " + c.name);
  if (intersect(*this, kahler_ref, kahler_ref) <= 0)
    throw ModelError("reference Kähler class has non-positive square");
}

// Nakai-Moishezon against the curve list.
inline bool is_kahler(const SurfaceModel& X, const DivisorClass& a) {
  for (const auto& c : X.curves)
    if (intersect(X, a, c.cls) <= 0) return false;
  return intersect(X, a, a) > 0;
}

inline bool is_nef(const SurfaceModel& X, const DivisorClass& a) {
  for (const auto& c : X.curves)
    if (intersect(X, a, c.cls) < 0) return false;
  return true;
}

struct ZariskiDecomposition {
  DivisorClass positive;
  DivisorClass negative;
  // (curve index, coefficient) for each curve in the negative part
  std::vector<std::pair<std::size_t, Rational>> support;
  Rational volume;
};

// Bauer's iteration: grow the support by the curves the current positive
// part meets negatively, re-solving N.C = a.C on the support each time.
inline ZariskiDecomposition zariski(const SurfaceModel& X, const DivisorClass& a) {
  const std::size_t nc = X.curves.size();
  std::vector<Rational> ac(nc);
  for (std::size_t i = 0; i < nc; ++i) ac[i] = intersect(X, a, X.curves[i].cls);

  std::vector<std::size_t> S;
  for (std::size_t i = 0; i < nc; ++i)
    if (ac[i] < 0) S.push_back(i);

  DivisorClass N(X.rank(), Rational(0));
  DivisorClass P = a;
  std::vector<Rational> x;
  while (!S.empty()) {
    const std::size_t k = S.size();
    std::vector<std::vector<Rational>> G(k, std::vector<Rational>(k));
    std::vector<Rational> rhs(k);
    for (std::size_t i = 0; i < k; ++i) {
      rhs[i] = ac[S[i]];
      for (std::size_t j = 0; j < k; ++j) G[i][j] = intersect(X, X.curves[S[i]].cls, X.curves[S[j]].cls);
    }
    if (!detail::negative_definite(G))
      throw NotBigError("class is not pseudo-effective: curves it meets negatively span a non-negative-definite lattice");
    x = detail::solve(G, rhs);
    N.assign(X.rank(), Rational(0));
    for (std::size_t i = 0; i < k; ++i) {
      if (x[i] < 0) throw NotBigError("class is not pseudo-effective: negative part has a negative coefficient");
      N = axpy(x[i], X.curves[S[i]].cls, N);
    }
    P = sub(a, N);

    std::vector<std::size_t> grown = S;
    for (std::size_t i = 0; i < nc; ++i)
      if (std::find(S.begin(), S.end(), i) == S.end() && intersect(X, P, X.curves[i].cls) < 0) grown.push_back(i);
    if (grown.size() == S.size()) break;
    std::sort(grown.begin(), grown.end());
    S = std::move(grown);
  }

  ZariskiDecomposition z;
  z.positive = P;
  z.negative = N;
  for (std::size_t i = 0; i < S.size(); ++i)
    if (x[i] != 0) z.support.emplace_back(S[i], x[i]);
  z.volume = intersect(X, P, P);
  if (z.volume <= 0 || intersect(X, P, X.kahler_ref) <= 0)
    throw NotBigError("class is not big: positive part has volume " + z.volume.get_str());
  return z;
}

inline bool is_big(const SurfaceModel& X, const DivisorClass& a) {
  try {
    zariski(X, a);
    return true;
  } catch (const NotBigError&) {
    return false;
  }
}

// vol(a) = P^2 for big a, 0 otherwise.
inline Rational volume(const SurfaceModel& X, const DivisorClass& a) {
  try {
    return zariski(X, a).volume;
  } catch (const NotBigError&) {
    return 0;
  }
}

// Projective plane blown up at one point, basis (H, E).
inline SurfaceModel blowup_p2() {
  SurfaceModel X;
  X.basis = {"H", "E"};
  X.form = {{1, 0}, {0, -1}};
  X.curves = {{"E", {0, 1}}, {"H-E", {1, -1}}, {"H", {1, 0}}};
  X.kahler_ref = {3, -1};
  return X;
}

// Projective plane blown up at two points, basis (H, E1, E2).
inline SurfaceModel blowup_p2_two_points() {
  SurfaceModel X;
  X.basis = {"H", "E1", "E2"};
  X.form = {{1, 0, 0}, {0, -1, 0}, {0, 0, -1}};
  X.curves = {{"E1", {0, 1, 0}},      {"E2", {0, 0, 1}},      {"H-E1-E2", {1, -1, -1}},
              {"H-E1", {1, -1, 0}},   {"H-E2", {1, 0, -1}},   {"H", {1, 0, 0}}};
  X.kahler_ref = {3, -1, -1};
  return X;
}

}  // namespace minslope
