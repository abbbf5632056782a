// Command-line front end. Every command prints a JSON summary on stdout
// (or to --json); flows can also dump their checkpoints as CSV.
//
// exit status: 0 ok, 1 bad input, 2 solver or monitor failure

#include <CLI11.hpp>
#include <json.hpp>

#include <minslope/config_io.hpp>
#include <minslope/energy_functionals.hpp>
#include <minslope/flow_engine.hpp>
#include <minslope/surface_slopes.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

using json = nlohmann::ordered_json;
using namespace minslope;

namespace {

struct MonitorFailure : SolverError {
  using SolverError::SolverError;
};

// 15 significant digits, then the shortest round-trip form
double r15(double v) {
  if (!std::isfinite(v)) return v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return std::strtod(buf, nullptr);
}

json rat(const Rational& q) { return {{"exact", q.get_str()}, {"value", r15(to_double(q))}}; }

json class_json(const DivisorClass& c) {
  json out = json::array();
  for (const auto& v : c) out.push_back(r15(to_double(v)));
  return out;
}

json monitors_json(const MonitorReport& rep) {
  json out = json::array();
  for (const auto& r : rep.results) {
    json m = {{"name", r.name}, {"applicable", r.applicable}, {"passed", r.passed}, {"worst", r15(r.worst)},
              {"note", r.note}};
    if (r.first.seen)
      m["first_violation"] = {{"t", r15(r.first.t)}, {"x", r15(r.first.x)}, {"step", r.first.step},
                              {"amount", r15(r.first.value)}};
    out.push_back(m);
  }
  return out;
}

void emit(const json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream os(path);
  if (!os) throw InputError("cannot write " + path);
  os << j.dump(2) << '\n';
}

json header(const std::string& command) { return {{"schema", 1}, {"command", command}}; }

// ---- slope ----

json slope_cmd(const std::string& eq, const std::string& surface, const std::string& alpha, const std::string& beta) {
  SurfaceModel X = surface.empty() ? blowup_p2() : load_surface(surface);
  DivisorClass a = parse_rational_list(alpha), b = parse_rational_list(beta);
  if (a.size() != X.rank()) throw InputError("--alpha has " + std::to_string(a.size()) + " coefficients, basis has " + std::to_string(X.rank()));
  if (b.size() != X.rank()) throw InputError("--beta has " + std::to_string(b.size()) + " coefficients, basis has " + std::to_string(X.rank()));
  auto c = eq == "j" ? j_slope_suite(X, a, b) : dhym_slope_suite(X, a, b);
  json j = header("slope " + eq);
  j["basis"] = X.basis;
  j[eq == "j" ? "mu" : "c0"] = rat(c.reference);
  j["slope"] = r15(c.xi);
  j["bracket"] = {r15(c.bracket.lo), r15(c.bracket.hi)};
  j["residual"] = r15(c.residual);
  j["bigness_threshold"] = r15(c.t0);
  j["witness_negative_part"] = class_json(c.witness);
  j["witness_slope"] = r15(c.witness_slope);
  json cs = json::array();
  for (const auto& s : c.curve_slopes) cs.push_back({{"curve", s.curve}, {"slope", rat(s.value)}});
  j["curve_slopes"] = cs;
  j["verdict"] = to_string(c.verdict);
  return j;
}

// ---- bundle ----

json bundle_cmd(const std::string& params) {
  auto P = parse_bundle_params(params);
  auto lz = lambda_and_zeta(P);
  json j = header("bundle slopes");
  j["params"] = {{"m", P.m}, {"n", P.n}, {"a", P.a.get_str()}, {"b", P.b.get_str()}, {"d", P.d}};
  j["alpha_top"] = rat(chow_alpha_top(P));
  j["alpha_top_minus_one_beta"] = rat(chow_alpha_beta(P));
  j["mu0"] = rat(lz.mu0);
  j["lambda"] = r15(lz.lambda);
  j["lambda_bracket"] = {r15(lz.bracket.lo), r15(lz.bracket.hi)};
  j["zeta_inv"] = r15(lz.zeta_inv);
  j["zeta_check"] = r15(lz.zeta_check);
  j["alpha_lambda_top"] = r15(lz.alpha_lambda_top);
  j["verdict"] = to_string(lz.verdict);
  return j;
}

// ---- flows ----

struct FlowOpts {
  std::string params = "0,1,4,1";
  std::string bpq = "2,3,0";
  int grid = 512;
  bool fitted = false;
  double grading = -1;
  bool implicit = false;
  double dt = 1e-2;
  double cfl = 0.4;
  double t_max = 5000;
  double tol = 1e-8;
  double delta = 0.1;
  std::string init = "default";
  std::string csv;
  std::string json_path;
};

FlowConfig make_cfg(const FlowOpts& o) {
  FlowConfig cfg;
  cfg.grid_size = o.grid;
  cfg.fitted = o.fitted;
  cfg.grading = o.grading < 0 ? 0 : o.grading;
  cfg.stepping = o.implicit ? Stepping::LinearlyImplicit : Stepping::Explicit;
  cfg.dt = o.dt;
  cfg.cfl = o.cfl;
  cfg.t_max = o.t_max;
  cfg.convergence_tol = o.tol;
  cfg.init = o.init;
  return cfg;
}

json trace_summary(const FlowTrace& tr, const Plateau& pl, double reference, double err, double lo, double hi) {
  json j;
  j["terminal_constant"] = r15(pl.mean);
  j["reference_constant"] = r15(reference);
  j["plateau_oscillation"] = r15(pl.oscillation());
  j["sup_error_on_compact"] = r15(err);
  j["compact"] = {r15(lo), r15(hi)};
  j["converged"] = tr.converged;
  j["steps"] = tr.steps;
  j["t_final"] = r15(tr.t_final);
  j["sup_psi_t"] = r15(tr.sup_psi_t);
  j["terminal_functional"] = r15(tr.last().functional);
  j["monitor_report"] = monitors_json(tr.monitors);
  return j;
}

void finish_flow(const FlowTrace& tr, json j, const FlowOpts& o) {
  if (!o.csv.empty()) {
    std::ofstream os(o.csv);
    if (!os) throw InputError("cannot write " + o.csv);
    write_trace_csv(os, tr);
  }
  emit(j, o.json_path);
  if (!tr.monitors.all_passed()) throw MonitorFailure("a flow monitor failed; see monitor_report");
  if (!tr.converged) throw SolverError("flow did not converge before t_max");
}

void flow_j(FlowOpts o) {
  auto P = parse_bundle_params(o.params);
  auto lz = lambda_and_zeta(P);
  if (o.grading < 0 && !o.fitted) o.fitted = true;
  auto tr = run_j_flow(P, make_cfg(o));
  const double a = P.ad();
  auto pl = plateau(tr, lz.lambda + o.delta, a - o.delta);
  double err = sup_error(tr, lz.lambda + o.delta, a);
  json j = header("flow j");
  j["params"] = o.params;
  j.update(trace_summary(tr, pl, lz.zeta_inv, err, lz.lambda + o.delta, a));
  j["sigma_inf"] = r15(pl.mean);
  j["lambda"] = r15(lz.lambda);
  // where the plateau meets the bubble slope n / (1 + x)
  j["lambda_estimate"] = r15(std::max(0.0, P.n / pl.mean - 1));
  j["energy_infimum"] = r15(energy_infimum(P).total);
  finish_flow(tr, j, o);
}

void flow_cot(FlowOpts o) {
  auto v = parse_rational_list(o.bpq);
  if (v.size() != 3) throw InputError("--bpq must be b,p,q");
  auto cf = blp2_closed_forms(v[0], v[1], v[2]);
  const double b = to_double(v[0]), p = to_double(v[1]), q = to_double(v[2]);
  if (o.grading < 0) o.grading = 20;
  auto tr = run_cotangent_flow(b, p, q, make_cfg(o));
  const double ref = cf.verdict == Verdict::Unstable ? cf.xi : blp2_c_tilde(b, p, q);
  auto pl = plateau(tr, 1 + o.delta, b - o.delta);
  double err = sup_error(tr, 1 + o.delta, b);
  auto split = dhym_volume_split(b, p, q);
  json j = header("flow cotangent");
  j["bpq"] = o.bpq;
  j.update(trace_summary(tr, pl, ref, err, 1 + o.delta, b));
  j["cot_inf"] = r15(pl.mean);
  j["c0"] = rat(cf.c0);
  j["regime"] = cf.verdict == Verdict::Stable     ? "smooth convergence"
                : cf.verdict == Verdict::Semistable ? "bounded-potential limit"
                                                    : "convergence away from x = 1";
  j["volume_lower_bound"] = r15(split.lower_bound);
  j["volume_split_total"] = r15(split.total);
  finish_flow(tr, j, o);
}

// ---- energy ----

json energy_infimum_cmd(const std::string& params) {
  auto P = parse_bundle_params(params);
  auto e = energy_infimum(P);
  json j = header("energy infimum");
  j["lambda"] = r15(e.lambda);
  j["zeta_inv"] = r15(e.zeta_inv);
  j["interior"] = r15(e.interior);
  j["bubble"] = r15(e.bubble);
  j["total"] = r15(e.total);
  return j;
}

json energy_futaki_cmd(const std::string& params, int pieces, const std::string& bps, const std::string& vals) {
  auto P = parse_bundle_params(params);
  PLTestConfig h;
  if (!bps.empty() || !vals.empty()) {
    if (bps.empty() || vals.empty()) throw InputError("--breakpoints and --values go together");
    h.breakpoints = parse_rational_list(bps);
    h.values = parse_rational_list(vals);
  } else {
    h = limit_hamiltonian_pl(P, pieces);
  }
  auto f = futaki(P, h);
  json j = header("energy futaki");
  j["b0"] = rat(f.b0);
  j["b0_prime"] = rat(f.b0_prime);
  j["futaki"] = rat(f.futaki);
  j["norm"] = r15(f.norm);
  j["minus_futaki_over_norm"] = r15(f.normalized);
  j["l2_slope_deviation"] = r15(l2_deviation(P));
  return j;
}

json energy_minimizing_cmd(const std::string& params, const std::vector<int>& ks) {
  auto P = parse_bundle_params(params);
  if (lambda_and_zeta(P).verdict != Verdict::Unstable)
    throw InputError("minimizing sequence needs an unstable class: there is no bubble");
  json j = header("energy minimizing-seq");
  json rows = json::array();
  for (int k : ks) {
    auto r = minimizing_profile(P, k);
    rows.push_back({{"k", k}, {"energy", r15(r.energy)}, {"relative_gap", r15(r.relative_gap)}});
    j["infimum"] = r15(r.infimum);
  }
  j["sequence"] = rows;
  return j;
}

json energy_volume_cmd(const std::string& bpq, int grid) {
  auto v = parse_rational_list(bpq);
  if (v.size() != 3) throw InputError("--bpq must be b,p,q");
  const double b = to_double(v[0]), p = to_double(v[1]), q = to_double(v[2]);
  auto split = dhym_volume_split(b, p, q);
  auto x = graded_grid(1, b, grid, 1, 20);
  MomentProfile init{x, {}}, lim{x, {}};
  for (double xi : x) {
    init.psi.push_back(dhym_initial(b, p, q, xi));
    lim.psi.push_back(cotangent_limit(b, p, q, xi));
  }
  init.psi.front() = q;
  // pinning the limit at (1, q) adds the vertical bubble segment in the first cell
  MomentProfile pinned = lim;
  pinned.psi.front() = q;
  json j = header("energy dhym-volume");
  j["lower_bound"] = r15(split.lower_bound);
  j["xi"] = r15(split.xi);
  j["interior"] = r15(split.interior);
  j["bubble"] = r15(split.bubble);
  j["split_total"] = r15(split.total);
  j["volume_initial_profile"] = r15(dhym_volume(init));
  j["volume_limit_profile"] = r15(dhym_volume(lim));
  j["volume_limit_pinned_at_q"] = r15(dhym_volume(pinned));
  return j;
}

// ---- verify ----

json verify_cmd(int max_mn, int max_sq, int max_pair) {
  json j = header("verify identities");
  bool ok = true;
  auto add = [&](const char* name, const IdentityReport& r) {
    j[name] = {{"checked", r.checked}, {"passed", r.ok()}, {"failures", r.failures}};
    ok = ok && r.ok();
  };
  add("bundle", bundle_identity_check(max_mn));
  add("combinatorial", combinatorial_identity_check(max_sq));
  add("pairing", pairing_table_check(max_pair));
  j["all_passed"] = ok;
  if (!ok) {
    emit(j, "");
    throw SolverError("identity check failed");
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimal slopes, Calabi-ansatz flows and energy functionals"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out;
  app.add_option("--json", out, "write the JSON summary here instead of stdout");

  std::string surface, alpha, beta;
  auto* slope = app.add_subcommand("slope", "minimal slope on a surface");
  slope->require_subcommand(1)->fallthrough();
  for (const char* eq : {"j", "dhym"}) {
    auto* s = slope->add_subcommand(eq, std::string(eq) == "j" ? "J-equation" : "deformed Hermitian-Yang-Mills");
    s->add_option("--surface", surface, "surface config (default: P^2 blown up at a point, basis H,-E)");
    s->add_option("--alpha", alpha, "class as a comma list in the basis")->required();
    s->add_option("--beta", beta, "class as a comma list in the basis")->required();
  }

  std::string params = "0,1,4,1";
  auto* bundle = app.add_subcommand("bundle", "projective bundle invariants");
  bundle->require_subcommand(1)->fallthrough();
  auto* bslopes = bundle->add_subcommand("slopes", "mu_0, lambda and zeta_inv");
  bslopes->add_option("--params", params, "m,n,a,b[,d]")->required();

  FlowOpts fo;
  auto* flow = app.add_subcommand("flow", "1D reductions of the J and cotangent flows");
  flow->require_subcommand(1)->fallthrough();
  auto* fj = flow->add_subcommand("j", "J-flow on [0, a]");
  auto* fc = flow->add_subcommand("cotangent", "cotangent flow on [1, b]");
  fj->add_option("--params", fo.params, "m,n,a,b[,d]")->required();
  fj->add_option("--init", fo.init, "line | power:k");
  fj->add_flag("--fitted", fo.fitted, "node on the free boundary (default unless --grading is given)");
  fc->add_option("--bpq", fo.bpq, "b,p,q")->required();
  for (auto* f : {fj, fc}) {
    f->add_option("--grid", fo.grid, "number of cells")->check(CLI::Range(64, 1 << 20));
    f->add_option("--grading", fo.grading, "sinh grading strength toward the free boundary");
    f->add_flag("--implicit", fo.implicit, "linearly implicit Euler with fixed --dt");
    f->add_option("--dt", fo.dt, "implicit time step");
    f->add_option("--cfl", fo.cfl, "explicit CFL factor");
    f->add_option("--t-max", fo.t_max, "final time");
    f->add_option("--tol", fo.tol, "convergence threshold on sup |psi_t|");
    f->add_option("--delta", fo.delta, "distance kept from singular points when measuring");
    f->add_option("--csv", fo.csv, "write checkpoints as CSV");
  }

  auto* energy = app.add_subcommand("energy", "energy and volume functionals");
  energy->require_subcommand(1)->fallthrough();
  auto* einf = energy->add_subcommand("infimum", "closed-form energy infimum");
  einf->add_option("--params", params, "m,n,a,b[,d]")->required();
  int pieces = 256;
  std::string bps, vals;
  auto* efut = energy->add_subcommand("futaki", "Futaki invariant of a piecewise-linear test configuration");
  efut->add_option("--params", params, "m,n,a,b[,d]")->required();
  efut->add_option("--pieces", pieces, "pieces in the approximation of the limit Hamiltonian");
  efut->add_option("--breakpoints", bps, "explicit breakpoints 0,...,a");
  efut->add_option("--values", vals, "values at the breakpoints");
  std::vector<int> ks{0, 5, 10, 20};
  auto* emin = energy->add_subcommand("minimizing-seq", "energies along the bubbling sequence");
  emin->add_option("--params", params, "m,n,a,b[,d]")->required();
  emin->add_option("--k", ks, "shifts to evaluate")->delimiter(',');
  std::string bpq = "2,3,0";
  int vgrid = 512;
  auto* evol = energy->add_subcommand("dhym-volume", "volume functional and its bubbling split");
  evol->add_option("--bpq", bpq, "b,p,q")->required();
  evol->add_option("--grid", vgrid, "cells for profile volumes");

  int max_mn = 4, max_sq = 12, max_pair = 6;
  auto* verify = app.add_subcommand("verify", "exact identity checks");
  verify->require_subcommand(1)->fallthrough();
  auto* vid = verify->add_subcommand("identities", "bundle, combinatorial and pairing identities");
  vid->add_option("--max-mn", max_mn, "largest m and n for the bundle sweep");
  vid->add_option("--max-sq", max_sq, "largest s and q for the combinatorial identity");
  vid->add_option("--max-pairing", max_pair, "largest m and n for the pairing table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    fo.json_path = out;
    for (const char* eq : {"j", "dhym"})
      if (slope->got_subcommand(eq)) emit(slope_cmd(eq, surface, alpha, beta), out);
    if (bslopes->parsed()) emit(bundle_cmd(params), out);
    if (fj->parsed()) flow_j(fo);
    if (fc->parsed()) flow_cot(fo);
    if (einf->parsed()) emit(energy_infimum_cmd(params), out);
    if (efut->parsed()) emit(energy_futaki_cmd(params, pieces, bps, vals), out);
    if (emin->parsed()) emit(energy_minimizing_cmd(params, ks), out);
    if (evol->parsed()) emit(energy_volume_cmd(bpq, vgrid), out);
    if (vid->parsed()) emit(verify_cmd(max_mn, max_sq, max_pair), out);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 1;
  } catch (const ModelError& e) {
    std::cerr << "model error: " << e.what() << '\n';
    return 1;
  } catch (const NotBigError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 1;
  } catch (const NoMonotoneSolution& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
