#pragma once

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace minslope {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Golub-Welsch would need an eigen-solver; Newton on P_n is enough here.
inline GaussRule gauss_legendre(int n) {
  GaussRule g;
  g.nodes.resize(n);
  g.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = n * (x * p1 - p0) / (x * x - 1);
      double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    g.nodes[i] = x;
    g.weights[i] = 2 / ((1 - x * x) * dp * dp);
  }
  return g;
}

inline const GaussRule& gauss20() {
  static const GaussRule g = gauss_legendre(20);
  return g;
}

// Gauss-Legendre on [lo, hi] split into `pieces` panels.
template <typename F>
double integrate(F&& f, double lo, double hi, int pieces = 1) {
  const auto& g = gauss20();
  double total = 0;
  double h = (hi - lo) / pieces;
  for (int k = 0; k < pieces; ++k) {
    double a = lo + k * h, b = a + h;
    double c = 0.5 * (a + b), r = 0.5 * (b - a);
    double s = 0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * f(c + r * g.nodes[i]);
    total += r * s;
  }
  return total;
}

}  // namespace minslope
