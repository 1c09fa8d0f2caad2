// Command-line front end: case analysis, dwell-flee curves, certificate
// verification, and trajectory simulation for planar switched systems.
//
// Exit codes: 0 success, 1 malformed input, 2 rejected matrices, 3 failed
// verification.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dwellflee/dwellflee.hpp"
#include "dwellflee/extend.hpp"
#include "dwellflee/simulate.hpp"
#include "dwellflee/verify.hpp"

using json = nlohmann::json;
using namespace dwellflee;

namespace {

constexpr int kExitParse = 1;
constexpr int kExitRejected = 2;
constexpr int kExitVerifyFail = 3;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Serialize with 12 significant digits so regression diffs stay stable.
json num12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return json(std::strtod(buf, nullptr));
}

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Mat2 parse_mat(const json& j, const std::string& field) {
  if (!j.contains(field)) throw ParseError("missing field: " + field);
  const json& m = j.at(field);
  if (!m.is_array() || m.size() != 2 || !m[0].is_array() || m[0].size() != 2 ||
      !m[1].is_array() || m[1].size() != 2)
    throw ParseError("field " + field + " must be a 2x2 numeric array");
  try {
    return Mat2{m[0][0].get<double>(), m[0][1].get<double>(), m[1][0].get<double>(),
                m[1][1].get<double>()};
  } catch (const json::exception&) {
    throw ParseError("field " + field + " must be a 2x2 numeric array");
  }
}

struct Problem {
  Mat2 A1;
  std::optional<Mat2> A2;
  std::vector<Mat2> leaves;
  std::optional<double> eta;
  std::optional<double> grid_from, grid_to, grid_step;
  std::optional<double> tau;
  std::optional<double> u_lo, u_hi;
  std::vector<double> signal_deltas;
  std::optional<Vec2> x0;
  DwellFleeOpts opts;
  std::uint64_t seed = 0;
  int grid_nt = 400, grid_ns = 400;
  double span = -1.0;
};

Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open problem file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }

  Problem p;
  p.A1 = parse_mat(j, "A1");
  if (j.contains("A2")) p.A2 = parse_mat(j, "A2");
  if (j.contains("leaves")) {
    const json& ls = j.at("leaves");
    if (!ls.is_array() || ls.empty()) throw ParseError("field leaves must be a non-empty array");
    for (size_t i = 0; i < ls.size(); ++i) {
      json holder;
      holder["leaf"] = ls[i];
      p.leaves.push_back(parse_mat(holder, "leaf"));
    }
  }
  if (!p.A2 && p.leaves.empty()) throw ParseError("missing field: A2 (or leaves)");

  if (j.contains("eta")) {
    if (!j["eta"].is_number() || j["eta"].get<double>() <= 0.0)
      throw ParseError("field eta must be a positive number");
    p.eta = j["eta"].get<double>();
  }
  if (j.contains("eta_grid")) {
    const json& g = j.at("eta_grid");
    try {
      p.grid_from = g.at("from").get<double>();
      p.grid_to = g.at("to").get<double>();
      p.grid_step = g.at("step").get<double>();
    } catch (const json::exception&) {
      throw ParseError("field eta_grid needs numeric from/to/step");
    }
    if (*p.grid_step <= 0.0 || *p.grid_to < *p.grid_from || *p.grid_from < 0.0)
      throw ParseError("field eta_grid needs from >= 0, to >= from, step > 0");
  }
  if (j.contains("tau")) p.tau = j.at("tau").get<double>();
  if (j.contains("u_lo")) p.u_lo = j.at("u_lo").get<double>();
  if (j.contains("u_hi")) p.u_hi = j.at("u_hi").get<double>();
  if (j.contains("signal")) {
    const json& s = j.at("signal");
    if (!s.contains("deltas") || !s["deltas"].is_array())
      throw ParseError("field signal.deltas must be an array");
    for (const auto& v : s["deltas"]) p.signal_deltas.push_back(v.get<double>());
  }
  if (j.contains("x0")) {
    const json& v = j.at("x0");
    if (!v.is_array() || v.size() != 2) throw ParseError("field x0 must be [x1, x2]");
    p.x0 = Vec2{v[0].get<double>(), v[1].get<double>()};
  }
  if (j.contains("options")) {
    const json& o = j.at("options");
    if (o.contains("margin")) p.opts.margin_scale = o.at("margin").get<double>();
    if (o.contains("tol")) p.opts.solver_tol = o.at("tol").get<double>();
    if (o.contains("seed")) p.seed = o.at("seed").get<std::uint64_t>();
    if (o.contains("grid")) {
      const std::string g = o.at("grid").get<std::string>();
      if (std::sscanf(g.c_str(), "%dx%d", &p.grid_nt, &p.grid_ns) != 2)
        throw ParseError("field options.grid must look like 400x400");
    }
    if (o.contains("span")) p.span = o.at("span").get<double>();
  }
  return p;
}

json mat_json(const Mat2& m) {
  return json::array({json::array({num12(m.a), num12(m.b)}), json::array({num12(m.c), num12(m.d)})});
}

const char* class_name(JordanClass c) {
  switch (c) {
    case JordanClass::RealDiag: return "RealDiag";
    case JordanClass::ComplexPair: return "ComplexPair";
    case JordanClass::Defective: return "Defective";
  }
  return "?";
}

json jordan_json(const JordanDecomp& d) {
  json out;
  out["class"] = class_name(d.cls);
  out["P"] = mat_json(d.P);
  out["J"] = mat_json(d.J);
  return out;
}

json scaling_json(const ScalingParams& sc) {
  json out = json::object();
  if (sc.has_lambda1()) out["lambda1"] = num12(sc.lambda1);
  if (sc.has_lambda2()) out["lambda2"] = num12(sc.lambda2);
  if (sc.has_eps1()) out["eps1"] = num12(sc.eps1);
  if (sc.has_eps2()) out["eps2"] = num12(sc.eps2);
  return out;
}

int cmd_analyze(const Problem& p, const std::string& format) {
  json out;
  out["A1"] = mat_json(p.A1);
  if (!p.leaves.empty()) {
    StarSystem star = build_star(p.A1, p.leaves);
    out["case"] = "STAR";
    out["center_class"] = class_name(star.d1.cls);
    json leaves = json::array();
    for (const StarLeaf& leaf : star.leaves) {
      json lj;
      lj["jordan"] = jordan_json(leaf.d);
      lj["M"] = mat_json(leaf.M);
      leaves.push_back(lj);
    }
    out["leaves"] = leaves;
    if (p.eta) {
      StarOpts sopts;
      sopts.margin_scale = p.opts.margin_scale;
      const StarResult r = star_tau(star, *p.eta, sopts);
      out["eta"] = num12(*p.eta);
      out["tau"] = num12(r.tau);
      out["param"] = num12(r.param);
      out["boundary_minimum"] = r.boundary;
      out["margin"] = num12(r.margin);
      json lt = json::array();
      for (double t : r.leaf_taus) lt.push_back(num12(t));
      out["leaf_taus"] = lt;
    }
  } else {
    SwitchedPair pair = build_pair(p.A1, *p.A2);
    out["A2"] = mat_json(*p.A2);
    out["case"] = to_string(pair.tag);
    out["jordan1"] = jordan_json(pair.d1);
    out["jordan2"] = jordan_json(pair.d2);
    out["M"] = mat_json(pair.M);
    out["det_M"] = num12(pair.M.det());
    if (p.eta) {
      const DwellFleeResult r = dwell_flee(pair, *p.eta, p.opts);
      out["eta"] = num12(*p.eta);
      out["tau12"] = num12(r.tau12);
      out["tau21"] = num12(r.tau21);
      out["tau"] = num12(r.tau);
      out["tau_branch"] = r.tau_branch == 12 ? "12" : "21";
      out["subcase"] = r.subcase;
      out["margin"] = num12(r.margin);
      out["scaling"] = scaling_json(r.scaling);
      if (p.u_lo && p.u_hi) {
        BilinearInput bi;
        bi.pair = pair;
        bi.u_lo = *p.u_lo;
        bi.u_hi = *p.u_hi;
        out["tau_sbs"] = num12(sbs_tau(bi, *p.eta, p.opts));
      }
    }
  }
  (void)format;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_curve(const Problem& p) {
  if (!p.grid_from) throw ParseError("missing field: eta_grid");
  std::vector<double> etas;
  for (double e = *p.grid_from; e <= *p.grid_to + 1e-12; e += *p.grid_step) etas.push_back(e);
  std::cout << "eta,tau12,tau21,tau,subcase\n";
  if (!p.leaves.empty()) {
    StarSystem star = build_star(p.A1, p.leaves);
    for (double e : etas) {
      const StarResult r = star_tau(star, e);
      std::cout << fmt12(e) << ',' << fmt12(r.tau) << ',' << fmt12(r.tau) << ',' << fmt12(r.tau)
                << ",STAR\n";
    }
    return 0;
  }
  SwitchedPair pair = build_pair(p.A1, *p.A2);
  const TauCurve curve = tau_curve(pair, etas, p.opts);
  for (const DwellFleeResult& r : curve.points)
    std::cout << fmt12(r.eta) << ',' << fmt12(r.tau12) << ',' << fmt12(r.tau21) << ','
              << fmt12(r.tau) << ',' << r.subcase << "\n";
  return 0;
}

int cmd_verify(const Problem& p, std::optional<double> tau_flag, std::optional<double> eta_flag) {
  SwitchedPair pair = build_pair(p.A1, *p.A2);
  const double eta = eta_flag ? *eta_flag : (p.eta ? *p.eta : throw ParseError("missing field: eta"));
  double tau;
  if (tau_flag) tau = *tau_flag;
  else if (p.tau) tau = *p.tau;
  else throw ParseError("missing field: tau");

  GridSpec grid;
  grid.n_t = p.grid_nt;
  grid.n_s = p.grid_ns;
  grid.t_span = p.span;
  const VerifyReport rep = verify_rect(pair, tau, eta, grid);
  json out;
  out["pass"] = rep.pass;
  out["max_norm"] = num12(rep.max_norm);
  out["argmax"] = json::array({num12(rep.argmax_t), num12(rep.argmax_s)});
  out["grid"] = json::array({rep.grid.n_t, rep.grid.n_s, num12(rep.grid.t_span)});
  out["scaling_used"] = scaling_json(rep.scaling_used);
  out["order_used"] = rep.order_used;
  out["tau"] = num12(tau);
  out["eta"] = num12(eta);
  std::cout << out.dump(2) << "\n";
  return rep.pass ? 0 : kExitVerifyFail;
}

int cmd_simulate(const Problem& p, const std::string& policy_name, int periods, double delta,
                 std::optional<double> tau_flag, bool summary, int samples) {
  SwitchedPair pair = build_pair(p.A1, *p.A2);
  Signal sig;
  if (!p.signal_deltas.empty()) {
    sig = signal_from_deltas(p.signal_deltas);
  } else {
    if (!p.eta) throw ParseError("missing field: eta");
    double tau = tau_flag ? *tau_flag : dwell_flee(pair, *p.eta, p.opts).tau;
    SignalPolicy policy;
    if (policy_name == "corner") policy = SignalPolicy::Corner;
    else if (policy_name == "jitter") policy = SignalPolicy::Jitter;
    else if (policy_name == "random") policy = SignalPolicy::Random;
    else throw ParseError("unknown policy: " + policy_name);
    sig = make_signal(tau, *p.eta, policy, periods, delta, p.seed);
  }
  const Vec2 x0 = p.x0 ? *p.x0 : Vec2{1.0, 1.0};

  Trajectory traj;
  if (p.u_lo || p.u_hi) {
    BilinearInput bi;
    bi.pair = pair;
    bi.u_lo = p.u_lo ? *p.u_lo : 1.0;
    bi.u_hi = p.u_hi ? *p.u_hi : bi.u_lo;
    traj = flow_bilinear(bi, sig, x0, samples);
  } else {
    traj = flow(pair, sig, x0, samples);
  }

  if (summary) {
    const std::vector<double> env = decay_envelope(traj);
    double geo = 0.0;
    for (double r : env) geo += std::log(std::max(r, 1e-300));
    geo = env.empty() ? 1.0 : std::exp(geo / static_cast<double>(env.size()));
    json out;
    out["initial_norm"] = num12(traj.states.front().norm());
    out["final_norm"] = num12(traj.states.back().norm());
    json ratios = json::array();
    for (double r : env) ratios.push_back(num12(r));
    out["period_ratios"] = ratios;
    out["geometric_mean_ratio"] = num12(geo);
    out["samples"] = traj.times.size();
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  write_trajectory_csv(std::cout, traj);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dwell-time/flee-time stability certificates for planar switched linear systems"};
  app.require_subcommand(1);

  std::string problem_path;
  std::string format = "json";
  std::optional<double> tau_flag, eta_flag;
  std::string policy = "corner";
  int periods = 10;
  double delta = 0.1;
  bool summary = false;
  int samples = 16;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("problem", problem_path, "problem JSON file")->required();
  };

  CLI::App* analyze = app.add_subcommand("analyze", "case analysis and dwell-flee values");
  add_common(analyze);
  analyze->add_option("--eta", eta_flag, "flee time (overrides file)");
  analyze->add_option("--format", format, "json");

  CLI::App* curve = app.add_subcommand("curve", "tau(eta) curve as CSV");
  add_common(curve);

  CLI::App* verify = app.add_subcommand("verify", "norm-criterion certificate check");
  add_common(verify);
  verify->add_option("--tau", tau_flag, "dwell time to verify");
  verify->add_option("--eta", eta_flag, "flee time");

  CLI::App* simulate = app.add_subcommand("simulate", "trajectory CSV for a switching signal");
  add_common(simulate);
  simulate->add_option("--policy", policy, "corner|jitter|random");
  simulate->add_option("--periods", periods, "number of (stable, unstable) periods");
  simulate->add_option("--delta", delta, "jitter amplitude");
  simulate->add_option("--tau", tau_flag, "dwell time (default: computed)");
  simulate->add_option("--samples", samples, "samples per interval");
  simulate->add_flag("--summary", summary, "print decay summary JSON instead of CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    const Problem p = load_problem(problem_path);
    if (analyze->parsed()) {
      Problem q = p;
      if (eta_flag) q.eta = *eta_flag;
      return cmd_analyze(q, format);
    }
    if (curve->parsed()) return cmd_curve(p);
    if (verify->parsed()) return cmd_verify(p, tau_flag, eta_flag);
    if (simulate->parsed())
      return cmd_simulate(p, policy, periods, delta, tau_flag, summary, samples);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::NotHurwitz:
      case ErrorKind::NotUnstable:
      case ErrorKind::ZeroMatrix:
      case ErrorKind::NonFinite:
        std::cerr << "rejected: " << e.what() << "\n";
        return kExitRejected;
      default:
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    }
  }
  return 0;
}
