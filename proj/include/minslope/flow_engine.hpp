#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>
#include <string>
#include <vector>

#include "bundle_geometry.hpp"
#include "calabi_profiles.hpp"
#include "errors.hpp"
#include "surface_slopes.hpp"

namespace minslope {

struct TimeStepError : SolverError {
  using SolverError::SolverError;
};

enum class Stepping { Explicit, LinearlyImplicit };

struct FlowConfig {
  int grid_size = 512;        // number of cells
  double grading = 0;         // sinh stretch toward the free boundary; 0 = uniform
  bool fitted = false;        // put a node on the free boundary
  Stepping stepping = Stepping::Explicit;
  double cfl = 0.4;           // explicit: dt = cfl / (largest diagonal of the Jacobian)
  double dt = 1e-2;           // linearly implicit: fixed step
  double t_max = 5000;
  double convergence_tol = 1e-8;
  int convergence_steps = 100;
  int checkpoints = 40;       // log-spaced in time, plus the final state
  double monitor_tol = 1e-8;
  double functional_slack = 1e-10;
  std::string init = "default";

  void validate() const {
    if (grid_size < 64) throw InputError("grid_size must be at least 64");
    if (!(cfl > 0)) throw InputError("cfl must be positive");
    if (cfl > 1) throw TimeStepError("cfl above 1 breaks the explicit stability bound");
    if (stepping == Stepping::LinearlyImplicit && !(dt > 0)) throw TimeStepError("implicit dt must be positive");
    if (!(t_max > 0)) throw InputError("t_max must be positive");
    if (!(convergence_tol > 0) || convergence_steps < 1) throw InputError("bad convergence settings");
    if (checkpoints < 1) throw InputError("need at least one checkpoint");
  }
};

struct Violation {
  bool seen = false;
  double t = 0;
  double x = 0;
  double value = 0;
  long step = 0;
};

struct MonitorResult {
  std::string name;
  bool applicable = true;
  bool passed = true;
  double worst = 0;  // largest violation amount (0 if none)
  Violation first;
  std::string note;
};

struct MonitorReport {
  std::vector<MonitorResult> results;

  bool all_passed() const {
    return std::all_of(results.begin(), results.end(), [](const auto& r) { return !r.applicable || r.passed; });
  }
  const MonitorResult* find(const std::string& name) const {
    for (const auto& r : results)
      if (r.name == name) return &r;
    return nullptr;
  }
};

struct Checkpoint {
  double t = 0;
  long step = 0;
  std::vector<double> psi;
  std::vector<double> diag;  // sigma (J) or cot(theta) (cotangent), at cell midpoints
  double functional = 0;     // energy (J) or volume (cotangent)
  double sup_psi_t = 0;
};

struct FlowTrace {
  std::string kind;
  std::vector<double> x;
  std::vector<double> x_half;
  std::vector<double> reference;  // expected limit on the nodes
  std::vector<Checkpoint> checkpoints;
  long steps = 0;
  double t_final = 0;
  bool converged = false;
  double sup_psi_t = 0;
  int direction = 0;  // sign of psi_t at t = 0, 0 if mixed
  MonitorReport monitors;

  const Checkpoint& last() const { return checkpoints.back(); }
};

namespace detail {

inline void thomas(std::vector<double>& lo, std::vector<double>& di, std::vector<double>& up, std::vector<double>& r) {
  const std::size_t n = di.size();
  for (std::size_t i = 1; i < n; ++i) {
    double w = lo[i] / di[i - 1];
    di[i] -= w * up[i - 1];
    r[i] -= w * r[i - 1];
  }
  r[n - 1] /= di[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) r[i] = (r[i] - up[i] * r[i + 1]) / di[i];
}

// Conservative J-flow operator. With W = x^m (1+x)^n,
//   sigma_{i+1/2} = ((W psi)_{i+1} - (W psi)_i) / (h W_{i+1/2}) + n / (1 + x_{i+1/2}),
//   psi_t,i = Q(psi_i) (sigma_{i+1/2} - sigma_{i-1/2}) / hbar_i.
// The energy sum h W sigma^2 is then exactly non-increasing for the
// semi-discrete flow.
struct JOperator {
  std::vector<double> x, xh, h, hbar, w, wh, g;
  double b = 1;
  double energy_const = 1;
  const char* functional_name = "energy";

  JOperator(const BundleParams& P, const std::vector<double>& nodes) : x(nodes) {
    const std::size_t N = x.size() - 1;
    xh.resize(N);
    h.resize(N);
    wh.resize(N);
    g.resize(N);
    w.resize(N + 1);
    hbar.assign(N + 1, 0);
    for (std::size_t i = 0; i <= N; ++i) w[i] = weight(P, x[i]);
    for (std::size_t i = 0; i < N; ++i) {
      xh[i] = 0.5 * (x[i] + x[i + 1]);
      h[i] = x[i + 1] - x[i];
      wh[i] = weight(P, xh[i]);
      g[i] = P.n / (1 + xh[i]);
    }
    for (std::size_t i = 1; i < N; ++i) hbar[i] = 0.5 * (h[i - 1] + h[i]);
    b = P.bd();
    energy_const = (P.m + P.n + 1) * to_double(Rational(binom(P.n + P.m, P.n))) * P.d;
  }

  void half(const std::vector<double>& psi, std::vector<double>& s) const {
    for (std::size_t i = 0; i < h.size(); ++i) s[i] = (w[i + 1] * psi[i + 1] - w[i] * psi[i]) / (h[i] * wh[i]) + g[i];
  }
  void rhs(const std::vector<double>& psi, const std::vector<double>& s, std::vector<double>& F) const {
    const std::size_t N = h.size();
    F[0] = F[N] = 0;
    for (std::size_t i = 1; i < N; ++i) F[i] = q_j(psi[i], b) * (s[i] - s[i - 1]) / hbar[i];
  }
  double diag(const std::vector<double>& psi, const std::vector<double>&, std::size_t i) const {
    return q_j(psi[i], b) * (w[i] / (h[i] * wh[i]) + w[i] / (h[i - 1] * wh[i - 1])) / hbar[i];
  }
  double functional(const std::vector<double>&, const std::vector<double>& s) const {
    double e = 0;
    for (std::size_t i = 0; i < h.size(); ++i) e += h[i] * wh[i] * s[i] * s[i];
    return energy_const * e;
  }
  void check_admissible(const std::vector<double>&, double) const {}
};

// Cotangent flow as a weighted gradient flow of the discrete volume
//   V_h = 2 sum_cells sqrt(1 + d^2) \int_cell sqrt(x^2 + psi_lin^2) dx,
// d the cell slope and psi_lin the linear interpolant. Since
//   dV/dpsi = -2 F sin^2(theta) / (1 + psi'^2) (cot theta)_x,   F = |z|,
// the mobility Q (1 + psi'^2) csc^2(theta) / F recovers psi_t = Q (cot theta)_x.
// A cell that collapses onto the vertical line x = 1 then carries its exact
// length, which a midpoint evaluation of cot(theta) would get wrong.
struct CotOperator {
  std::vector<double> x, xh, h, hbar, qx;
  const char* functional_name = "volume";
  static constexpr int kGauss = 4;
  double gt[kGauss], gw[kGauss];
  mutable std::vector<double> dgl, dgr, mob;

  CotOperator(double b, const std::vector<double>& nodes) : x(nodes) {
    const std::size_t N = x.size() - 1;
    xh.resize(N);
    h.resize(N);
    hbar.assign(N + 1, 0);
    qx.resize(N + 1);
    dgl.resize(N);
    dgr.resize(N);
    mob.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
      xh[i] = 0.5 * (x[i] + x[i + 1]);
      h[i] = x[i + 1] - x[i];
    }
    for (std::size_t i = 1; i < N; ++i) hbar[i] = 0.5 * (h[i - 1] + h[i]);
    for (std::size_t i = 0; i <= N; ++i) qx[i] = q_dhym(x[i], b);
    auto g = gauss_legendre(kGauss);
    for (int k = 0; k < kGauss; ++k) {
      gt[k] = 0.5 * (g.nodes[k] + 1);
      gw[k] = 0.5 * g.weights[k];
    }
  }

  // cot(theta) at cell midpoints, for diagnostics and monitors
  void half(const std::vector<double>& psi, std::vector<double>& c) const {
    for (std::size_t i = 0; i < h.size(); ++i) {
      double d = (psi[i + 1] - psi[i]) / h[i];
      double p = 0.5 * (psi[i] + psi[i + 1]);
      c[i] = (p * d - xh[i]) / (xh[i] * d + p);
    }
  }

  // length integral of one cell and its partials in the two end values
  double cell(const std::vector<double>& psi, std::size_t i, double* dl, double* dr) const {
    const double d = (psi[i + 1] - psi[i]) / h[i];
    const double s = std::sqrt(1 + d * d);
    double L = 0, Ll = 0, Lr = 0;
    for (int k = 0; k < kGauss; ++k) {
      double xx = x[i] + gt[k] * h[i];
      double pp = psi[i] + gt[k] * (psi[i + 1] - psi[i]);
      double r = std::sqrt(xx * xx + pp * pp);
      L += gw[k] * r;
      Ll += gw[k] * pp / r * (1 - gt[k]);
      Lr += gw[k] * pp / r * gt[k];
    }
    L *= h[i];
    Ll *= h[i];
    Lr *= h[i];
    if (dl) *dl = -(d / s) * L / h[i] + s * Ll;
    if (dr) *dr = (d / s) * L / h[i] + s * Lr;
    return s * L;
  }

  void rhs(const std::vector<double>& psi, const std::vector<double>& c, std::vector<double>& F) const {
    const std::size_t N = h.size();
    for (std::size_t i = 0; i < N; ++i) {
      cell(psi, i, &dgl[i], &dgr[i]);
      double d = (psi[i + 1] - psi[i]) / h[i];
      double p = 0.5 * (psi[i] + psi[i + 1]);
      double s = std::sqrt(1 + d * d);
      double r = std::sqrt(xh[i] * xh[i] + p * p);
      mob[i] = s * (1 + c[i] * c[i]) / r;
    }
    F[0] = F[N] = 0;
    for (std::size_t i = 1; i < N; ++i) {
      double grad = dgr[i - 1] + dgl[i];
      F[i] = -qx[i] * 0.5 * (mob[i - 1] + mob[i]) * grad / hbar[i];
    }
  }

  double diag(const std::vector<double>& psi, const std::vector<double>& c, std::size_t i) const {
    auto stiff = [&](std::size_t j) {
      double d = (psi[j + 1] - psi[j]) / h[j];
      double p = 0.5 * (psi[j] + psi[j + 1]);
      double s2 = 1 + d * d;
      return std::sqrt(xh[j] * xh[j] + p * p) / (h[j] * s2 * std::sqrt(s2));
    };
    auto mobility = [&](std::size_t j) {
      double d = (psi[j + 1] - psi[j]) / h[j];
      double p = 0.5 * (psi[j] + psi[j + 1]);
      return std::sqrt(1 + d * d) * (1 + c[j] * c[j]) / std::sqrt(xh[j] * xh[j] + p * p);
    };
    return qx[i] * 0.5 * (mobility(i - 1) + mobility(i)) * (stiff(i - 1) + stiff(i)) / hbar[i];
  }

  double functional(const std::vector<double>& psi, const std::vector<double>&) const {
    double v = 0;
    for (std::size_t i = 0; i < h.size(); ++i) v += cell(psi, i, nullptr, nullptr);
    return 2 * v;
  }

  void check_admissible(const std::vector<double>& psi, double t) const {
    for (std::size_t i = 0; i < h.size(); ++i) {
      double d = (psi[i + 1] - psi[i]) / h[i];
      double p = 0.5 * (psi[i] + psi[i + 1]);
      if (!(xh[i] * d + p > 0))
        throw SolverError("left the admissible cone (x psi' + psi <= 0) at x = " + std::to_string(xh[i]) +
                          ", t = " + std::to_string(t));
    }
  }
};

struct MonitorState {
  MonitorResult r;
  explicit MonitorState(std::string name) { r.name = std::move(name); }
  void hit(double amount, double t, double x, long step) {
    if (amount <= 0) return;
    r.passed = false;
    r.worst = std::max(r.worst, amount);
    if (!r.first.seen) r.first = {true, t, x, amount, step};
  }
};

template <typename Op, typename Extra>
FlowTrace run_flow(const Op& op, std::vector<double> psi, const std::vector<double>& reference, const FlowConfig& cfg,
                   const char* kind, Extra&& extra_monitor) {
  cfg.validate();
  const std::size_t N = op.x.size() - 1;
  const double tol = cfg.monitor_tol;

  FlowTrace tr;
  tr.kind = kind;
  tr.x = op.x;
  tr.x_half = op.xh;
  tr.reference = reference;

  std::vector<double> half(N), F(N + 1, 0.0), half_new(N);
  op.check_admissible(psi, 0);
  op.half(psi, half);

  auto eval_rhs = [&](const std::vector<double>& p, const std::vector<double>& s, std::vector<double>& out) {
    op.rhs(p, s, out);
  };

  eval_rhs(psi, half, F);
  bool pos = false, neg = false;
  for (std::size_t i = 1; i < N; ++i) {
    if (F[i] > tol) pos = true;
    if (F[i] < -tol) neg = true;
  }
  tr.direction = pos && !neg ? 1 : neg && !pos ? -1 : 0;
  const int dir = tr.direction;

  MonitorState mono("monotone_in_time"), comp("comparison"), func(std::string(op.functional_name) + "_nonincreasing");
  std::vector<MonitorState> ext;
  for (const auto& [name, note] : extra_monitor.names) {
    ext.emplace_back(name);
    ext.back().r.note = note;
  }
  if (dir == 0) {
    mono.r.applicable = comp.r.applicable = false;
    mono.r.note = comp.r.note = "initial velocity changes sign";
  } else {
    mono.r.note = dir < 0 ? "psi_t <= tol" : "psi_t >= -tol";
    comp.r.note = dir < 0 ? "psi >= limit - tol" : "psi <= limit + tol";
  }

  // log-spaced checkpoint times
  std::vector<double> marks;
  for (int k = 0; k < cfg.checkpoints; ++k)
    marks.push_back(cfg.t_max * std::pow(1e-4, 1.0 - static_cast<double>(k) / std::max(1, cfg.checkpoints - 1)));
  std::size_t next_mark = 0;

  auto snapshot = [&](double t, long step, double functional, double sup_ft) {
    tr.checkpoints.push_back({t, step, psi, half, functional, sup_ft});
  };

  double t = 0;
  long step = 0;
  int quiet = 0;
  double fval = op.functional(psi, half);
  snapshot(0, 0, fval, 0);

  std::vector<double> lo(N - 1), di(N - 1), up(N - 1), rhs(N - 1), Fp(N + 1), psip(N + 1), halfp(N);

  for (;;) {
    double sup_ft = 0;
    std::size_t arg = 0;
    for (std::size_t i = 1; i < N; ++i)
      if (std::fabs(F[i]) > sup_ft) {
        sup_ft = std::fabs(F[i]);
        arg = i;
      }
    (void)arg;
    if (dir != 0)
      for (std::size_t i = 1; i < N; ++i) {
        mono.hit(-dir * F[i] - tol, t, op.x[i], step);
        comp.hit(-dir * (reference[i] - psi[i]) - tol, t, op.x[i], step);
      }
    extra_monitor(psi, half, F, t, step, ext);

    tr.sup_psi_t = sup_ft;
    quiet = sup_ft < cfg.convergence_tol ? quiet + 1 : 0;
    if (quiet >= cfg.convergence_steps) {
      tr.converged = true;
      break;
    }
    if (t >= cfg.t_max) break;

    double dt;
    if (cfg.stepping == Stepping::Explicit) {
      double dmax = 0;
      for (std::size_t i = 1; i < N; ++i) dmax = std::max(dmax, op.diag(psi, half, i));
      dt = dmax > 0 ? cfg.cfl / dmax : cfg.t_max;
      for (std::size_t i = 1; i < N; ++i) psi[i] += dt * F[i];
    } else {
      dt = cfg.dt;
      // tridiagonal Jacobian by three-colour differencing
      for (int c = 0; c < 3; ++c) {
        psip = psi;
        for (std::size_t j = 1 + c; j < N; j += 3) psip[j] += 1e-7 * std::max(1.0, std::fabs(psi[j]));
        op.half(psip, halfp);
        eval_rhs(psip, halfp, Fp);
        for (std::size_t i = 1; i < N; ++i) {
          for (std::size_t j = i - 1; j <= i + 1; ++j) {
            if (j < 1 || j >= N || (j - 1) % 3 != static_cast<std::size_t>(c)) continue;
            double eps = psip[j] - psi[j];
            double jac = (Fp[i] - F[i]) / eps;
            double v = (i == j ? 1.0 : 0.0) - dt * jac;
            if (j + 1 == i) lo[i - 1] = v;
            else if (j == i) di[i - 1] = v;
            else up[i - 1] = v;
          }
        }
      }
      for (std::size_t i = 1; i < N; ++i) rhs[i - 1] = dt * F[i];
      thomas(lo, di, up, rhs);
      for (std::size_t i = 1; i < N; ++i) psi[i] += rhs[i - 1];
    }
    t += dt;
    ++step;

    op.check_admissible(psi, t);
    op.half(psi, half);
    double fnew = op.functional(psi, half);
    if (fnew > fval + cfg.functional_slack * std::fabs(fval)) func.hit(fnew - fval, t, 0, step);
    fval = fnew;
    eval_rhs(psi, half, F);

    while (next_mark < marks.size() && t >= marks[next_mark]) {
      snapshot(t, step, fval, 0);
      ++next_mark;
    }
  }
  tr.steps = step;
  tr.t_final = t;
  if (tr.checkpoints.back().step != step) snapshot(t, step, fval, tr.sup_psi_t);
  tr.checkpoints.back().sup_psi_t = tr.sup_psi_t;
  tr.monitors.results = {mono.r, comp.r, func.r};
  for (const auto& e : ext) tr.monitors.results.push_back(e.r);
  return tr;
}

}  // namespace detail

inline std::vector<double> flow_grid(const FlowConfig& cfg, double lo, double hi, double focus) {
  if (cfg.fitted) return fitted_grid(lo, hi, cfg.grid_size, focus);
  return cfg.grading > 0 ? graded_grid(lo, hi, cfg.grid_size, focus, cfg.grading)
                         : uniform_grid(lo, hi, cfg.grid_size);
}

// Initial data: "default" or "line" is (b/a) x; "power:k" is b (x/a)^k.
inline std::vector<double> j_initial(const BundleParams& P, const std::vector<double>& x, const std::string& init) {
  const double a = P.ad(), b = P.bd();
  std::vector<double> psi(x.size());
  if (init == "default" || init == "line") {
    for (std::size_t i = 0; i < x.size(); ++i) psi[i] = b * x[i] / a;
  } else if (init.rfind("power:", 0) == 0) {
    double k;
    try {
      k = std::stod(init.substr(6));
    } catch (const std::exception&) {
      throw InputError("bad init '" + init + "'");
    }
    if (!(k >= 1)) throw InputError("power init needs exponent >= 1");
    for (std::size_t i = 0; i < x.size(); ++i) psi[i] = b * std::pow(x[i] / a, k);
  } else {
    throw InputError("unknown J init '" + init + "'");
  }
  psi.front() = 0;
  psi.back() = b;
  return psi;
}

// Moment-map form of the J-flow on [0, a], psi(0) = 0, psi(a) = b.
inline FlowTrace run_j_flow(const BundleParams& P, const FlowConfig& cfg) {
  P.validate();
  cfg.validate();
  const auto lz = lambda_and_zeta(P);
  const auto x = flow_grid(cfg, 0, P.ad(), lz.lambda);
  detail::JOperator op(P, x);
  auto psi = j_initial(P, x, cfg.init);
  std::vector<double> ref(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) ref[i] = j_limit_profile(P, lz.lambda, std::min(x[i], P.ad()));

  // slopes must stay in (0, C); C is ten times the steeper of the initial and limit profiles
  double cap = 0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    double h = x[i + 1] - x[i];
    cap = std::max({cap, (psi[i + 1] - psi[i]) / h, (ref[i + 1] - ref[i]) / h});
  }
  cap *= 10;
  struct {
    std::vector<std::pair<std::string, std::string>> names;
    double cap;
    const std::vector<double>* x;
    void operator()(const std::vector<double>& p, const std::vector<double>&, const std::vector<double>&, double t,
                    long step, std::vector<detail::MonitorState>& st) const {
      for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        double s = (p[i + 1] - p[i]) / ((*x)[i + 1] - (*x)[i]);
        double mid = 0.5 * ((*x)[i] + (*x)[i + 1]);
        st[0].hit(-s - 1e-12, t, mid, step);
        st[0].hit(s - cap, t, mid, step);
      }
    }
  } slopes;
  slopes.names = {{"slope_bounds", "0 <= psi' <= " + std::to_string(cap)}};
  slopes.cap = cap;
  slopes.x = &x;
  return detail::run_flow(op, psi, ref, cfg, "j", slopes);
}

// Reference limit for the cotangent flow pinned at (1, q), (b, p).
inline double cotangent_limit(double b, double p, double q, double x) {
  auto cf = blp2_closed_forms(from_double(b), from_double(p), from_double(q));
  double s = cf.verdict == Verdict::Unstable ? cf.xi : q;
  return psi_tilde_dhym(b, p, s, x);
}

// Cotangent flow on [1, b] with psi(1) = q, psi(b) = p.
inline FlowTrace run_cotangent_flow(double b, double p, double q, const FlowConfig& cfg) {
  check_bpq(from_double(b), from_double(p), from_double(q));
  cfg.validate();
  if (cfg.init != "default") throw InputError("cotangent flow supports only the default init");
  const auto cf = blp2_closed_forms(from_double(b), from_double(p), from_double(q));
  const double s = cf.verdict == Verdict::Unstable ? cf.xi : q;
  const auto x = flow_grid(cfg, 1, b, 1);
  detail::CotOperator op(b, x);
  std::vector<double> psi(x.size()), ref(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    psi[i] = dhym_initial(b, p, q, x[i]);
    ref[i] = psi_tilde_dhym(b, p, s, std::min(x[i], b));
  }
  psi.front() = q;
  psi.back() = p;
  // (cot theta)_x as the scheme sees it is psi_t / Q at interior nodes;
  // the phase arccot psi' + arccot(psi / x) on each cell must stay in (0, pi)
  struct {
    std::vector<std::pair<std::string, std::string>> names;
    const std::vector<double>* x;
    const std::vector<double>* q;
    double tol;
    void operator()(const std::vector<double>& p, const std::vector<double>&, const std::vector<double>& F, double t,
                    long step, std::vector<detail::MonitorState>& st) const {
      const auto& xs = *x;
      for (std::size_t i = 1; i + 1 < F.size(); ++i) st[0].hit(-F[i] / (*q)[i] - tol, t, xs[i], step);
      for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        double h = xs[i + 1] - xs[i], xm = 0.5 * (xs[i] + xs[i + 1]);
        double th = pointwise_angle(xm, 0.5 * (p[i] + p[i + 1]), (p[i + 1] - p[i]) / h);
        st[1].hit(-th, t, xm, step);
        st[1].hit(th - std::numbers::pi, t, xm, step);
      }
    }
  } angle;
  angle.names = {{"angle_derivative", "(cot theta)_x >= -tol"}, {"angle_range", "0 < theta < pi on every cell"}};
  angle.x = &x;
  angle.q = &op.qx;
  angle.tol = cfg.monitor_tol;
  return detail::run_flow(op, psi, ref, cfg, "cotangent", angle);
}

// Spread of the midpoint diagnostic (sigma or cot theta) of the last
// checkpoint over the cells inside [lo, hi].
struct Plateau {
  double mean = 0;
  double min = 0;
  double max = 0;
  int cells = 0;
  double oscillation() const { return max - min; }
};

inline Plateau plateau(const FlowTrace& tr, double lo, double hi) {
  Plateau p;
  p.min = std::numeric_limits<double>::infinity();
  p.max = -p.min;
  const auto& d = tr.last().diag;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (tr.x_half[i] < lo || tr.x_half[i] > hi) continue;
    p.mean += d[i];
    p.min = std::min(p.min, d[i]);
    p.max = std::max(p.max, d[i]);
    ++p.cells;
  }
  if (p.cells == 0) throw InputError("plateau window contains no cells");
  p.mean /= p.cells;
  return p;
}

// sup |psi - reference| over the nodes inside [lo, hi] at the last checkpoint.
inline double sup_error(const FlowTrace& tr, double lo, double hi) {
  double e = 0;
  const auto& psi = tr.last().psi;
  for (std::size_t i = 0; i < tr.x.size(); ++i)
    if (tr.x[i] >= lo && tr.x[i] <= hi) e = std::max(e, std::fabs(psi[i] - tr.reference[i]));
  return e;
}

}  // namespace minslope
