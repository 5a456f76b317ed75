#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "conelyap/errors.hpp"
#include "conelyap/io.hpp"
#include "conelyap/lyapunov.hpp"
#include "conelyap/oracle.hpp"

using namespace conelyap;
using io::Json;

namespace {

// Exit codes: verdicts 0-3, then sysexits-style usage and input failures.
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitNoInput = 66;
constexpr int kExitSoftware = 70;
constexpr int kExitCantCreate = 73;

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::holds:
      return 0;
    case Verdict::fails:
      return 1;
    case Verdict::hypothesis_not_met:
      return 2;
    case Verdict::inconclusive:
      return 3;
  }
  return 3;
}

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Common {
  std::string format = "text";
  std::uint64_t seed = 1;
  int samples = 1000;
  double mesh = 1e-2;
  int max_iter = -1;
  std::optional<double> tol_ratio;
  std::optional<double> tol_membership;
  std::optional<double> tol_identity;
  std::optional<double> tol_zero;
  std::string output;

  SampleSpec sampling() const { return {samples, seed}; }
  PosDefOptions posdef() const {
    PosDefOptions p;
    p.mesh = mesh;
    if (tol_zero) p.zero_tol = *tol_zero;
    return p;
  }
  VerifyOptions verify_options() const {
    VerifyOptions o;
    o.sampling = sampling();
    o.max_iter = max_iter;
    if (tol_ratio) o.ratio_tol = *tol_ratio;
    o.posdef = posdef();
    return o;
  }
};

struct Output {
  Json json;
  std::string text;
  int code = 0;
};

Vec parse_vector(const std::string& s, const std::string& flag) {
  std::vector<double> vals;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(flag + ": cannot parse '" + item + "' as a number");
    }
  }
  if (vals.empty()) throw UsageError(flag + ": expected a comma-separated vector");
  return Eigen::Map<Vec>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

ConvexProcess load_process(const std::string& path) {
  return io::process_from_json(io::load_json_file(path), path);
}

ConeFunction load_function(const std::string& path) {
  return io::function_from_json(io::load_json_file(path), path);
}

std::string decision_text(const Decision& d) { return d.conclusive ? (d.value ? "true" : "false") : "inconclusive"; }

Json decision_json(const Decision& d) { return d.conclusive ? Json(d.value) : Json("inconclusive"); }

std::string pad(const std::string& key, std::size_t width = 22) {
  return "  " + key + std::string(key.size() < width ? width - key.size() : 1, ' ');
}

Json feasible_json(const FeasibleSetResult& f) {
  Json j;
  j["cone"] = io::cone_to_json(f.cone);
  j["converged"] = f.converged;
  j["iterations"] = f.iterations;
  j["fixed_point_k"] = f.fixed_point_k;
  return j;
}

std::string feasible_text(const FeasibleSetResult& f) {
  std::string s = io::cone_to_text(f.cone);
  if (f.converged) return s + "  (iterations " + std::to_string(f.iterations) + ")";
  return s + "  (not converged; outer approximation)";
}

Output cmd_analyze(const std::string& path, const Common& c) {
  const ConvexProcess h = load_process(path);
  const ConvexProcess lm = minimal_linear(h), lp = maximal_linear(h);
  const auto f = feasible_set(h, c.max_iter);
  const auto fneg = feasible_set(dual(h, PolarSign::negative), c.max_iter);
  const auto fpos = feasible_set(dual(h, PolarSign::positive), c.max_iter);
  const bool dom_cond = check_domain_condition(h);
  const auto tr = check_transversality(h, c.max_iter);
  const auto nec = check_necessary_condition(h, c.max_iter);
  const auto rint = check_rint_condition(h, c.max_iter);

  const std::vector<std::pair<std::string, PolyCone>> cones = {
      {"dom", domain(h)},
      {"im", range(h)},
      {"H(0)", image_at_origin(h)},
      {"graph L_minus", lm.graph()},
      {"graph L_plus", lp.graph()},
      {"R_minus", reachable_linear(lm)},
      {"R_plus", reachable_linear(lp)},
  };
  Output out;
  Json jc;
  for (const auto& [k, v] : cones) jc[k] = io::cone_to_json(v);
  jc["F"] = feasible_json(f);
  jc["F(H^-)"] = feasible_json(fneg);
  jc["F(H^+)"] = feasible_json(fpos);
  Json panel;
  panel["domain_condition"] = dom_cond;
  panel["transversality"] = {{"pos", decision_json(tr.pos)}, {"neg", decision_json(tr.neg)}};
  panel["necessary"] = decision_json(nec);
  panel["rint"] = decision_json(rint);
  out.json["command"] = "analyze";
  out.json["process"] = io::process_to_json(h);
  out.json["linear"] = h.is_linear();
  out.json["cones"] = jc;
  out.json["panel"] = panel;

  std::ostringstream t;
  t << "process " << path << " (n = " << h.n() << (h.is_linear() ? ", linear" : "") << ")\n";
  for (const auto& [k, v] : cones) t << pad(k) << io::cone_to_text(v) << "\n";
  t << pad("F") << feasible_text(f) << "\n";
  t << pad("F(H^-)") << feasible_text(fneg) << "\n";
  t << pad("F(H^+)") << feasible_text(fpos) << "\n";
  t << "panel\n";
  t << pad("domain_condition") << (dom_cond ? "true" : "false") << "\n";
  t << pad("transversality.pos") << decision_text(tr.pos) << "\n";
  t << pad("transversality.neg") << decision_text(tr.neg) << "\n";
  t << pad("necessary") << decision_text(nec) << "\n";
  t << pad("rint") << decision_text(rint) << "\n";
  out.text = t.str();
  return out;
}

Output report_output(const std::string& command, const VerificationReport& r) {
  Output out;
  out.json["command"] = command;
  out.json["report"] = io::report_to_json(r);
  out.text = io::report_to_text(r);
  out.code = exit_code(r.verdict);
  return out;
}

struct LyapunovArgs {
  std::string process, function, query, mode_pos, mode_flag;
  std::optional<double> gamma_pos, gamma_flag;
  bool search = false;
  double resolution = 1e-3;
};

Output cmd_lyapunov(const LyapunovArgs& a, const Common& c) {
  LyapunovQuery q = [&]() {
    if (!a.query.empty()) {
      if (!a.process.empty()) throw UsageError("lyapunov: give either --query or process and function files");
      const std::filesystem::path qp(a.query);
      return io::query_from_json(io::load_json_file(qp), qp.parent_path(), qp.string());
    }
    if (a.process.empty() || a.function.empty()) throw UsageError("lyapunov: process and function files are required");
    LyapunovQuery r{.process = load_process(a.process), .candidate = load_function(a.function)};
    r.sampling = c.sampling();
    r.max_iter = c.max_iter;
    return r;
  }();
  if (a.query.empty() || !a.mode_flag.empty() || !a.mode_pos.empty()) {
    const std::string m = !a.mode_flag.empty() ? a.mode_flag : (!a.mode_pos.empty() ? a.mode_pos : "");
    if (!m.empty()) q.mode = parse_mode(m);
  }
  if (a.gamma_flag) q.gamma = *a.gamma_flag;
  else if (a.gamma_pos) q.gamma = *a.gamma_pos;
  if (c.tol_ratio) q.ratio_tol = *c.tol_ratio;
  q.posdef = c.posdef();
  if (q.candidate.n() != q.process.n()) throw UsageError("lyapunov: function and process dimensions differ");
  if (!(q.gamma > 0 && q.gamma < 1)) throw UsageError("--gamma must lie strictly between 0 and 1");

  if (!a.search) return report_output("lyapunov", verify(q));
  const GammaSearch s = gamma_search(q, a.resolution);
  VerificationReport r = s.report;
  r.name = "gamma_search";
  r.verdict = s.found ? Verdict::holds : s.report.verdict;
  r.quantities.push_back({"gamma_lower", s.lower});
  r.quantities.push_back({"gamma_upper", s.upper});
  if (!s.found) r.detail = "no gamma below 1 passed";
  return report_output("lyapunov", r);
}

struct DualityArgs {
  std::string process, function, g;
  std::optional<double> gamma_pos, gamma_flag;
  std::optional<int> theorem_pos, theorem_flag;
};

Output cmd_duality(const DualityArgs& a, const Common& c) {
  const ConvexProcess h = load_process(a.process);
  const ConeFunction v = load_function(a.function);
  if (v.n() != h.n()) throw UsageError("duality: function and process dimensions differ");
  const double gamma = a.gamma_flag ? *a.gamma_flag : (a.gamma_pos ? *a.gamma_pos : 0.5);
  if (!(gamma > 0 && gamma < 1)) throw UsageError("--gamma must lie strictly between 0 and 1");
  const int theorem = a.theorem_flag ? *a.theorem_flag : (a.theorem_pos ? *a.theorem_pos : 2);
  const VerifyOptions opts = c.verify_options();
  if (theorem == 2) {
    if (!a.g.empty()) throw UsageError("duality: --g applies to theorem 3 only");
    return report_output("duality", check_theorem2(h, v, gamma, opts));
  }
  if (theorem != 3) throw UsageError("duality: theorem must be 2 or 3");
  if (a.g.empty()) throw UsageError("duality: theorem 3 needs --g <file|dual_pos|dual_neg>");
  const bool adjoint = a.g == "dual_pos";
  const ConvexProcess g = adjoint              ? dual(h, PolarSign::positive)
                          : a.g == "dual_neg" ? dual(h, PolarSign::negative)
                                              : load_process(a.g);
  if (g.n() != h.n()) throw UsageError("duality: G and H dimensions differ");
  return report_output("duality", check_theorem3(h, g, v, gamma, adjoint, opts));
}

struct SimulateArgs {
  std::string process, function, x0, policy = "min_V";
  int steps = 10;
};

Output cmd_simulate(const SimulateArgs& a, const Common& c) {
  const ConvexProcess h = load_process(a.process);
  const ConeFunction v = a.function.empty() ? ConeFunction::half_norm_sq(h.n()) : load_function(a.function);
  if (a.x0.empty()) throw UsageError("simulate: --x0 is required");
  const Vec x0 = parse_vector(a.x0, "--x0");
  if (x0.size() != h.n() || v.n() != h.n()) throw UsageError("simulate: dimensions of --x0, function and process differ");
  if (a.steps < 0) throw UsageError("--steps must be nonnegative");
  const SelectionPolicy policy = parse_policy(a.policy);
  const Trajectory t = simulate(h, v, x0, a.steps, policy, c.seed, c.max_iter);

  Output out;
  Json states = Json::array();
  std::ostringstream txt;
  txt << "trajectory (" << to_string(policy) << ", " << (t.states.size() - 1) << " steps"
      << (t.outer_approximation ? ", outer approximation of F(H)" : "") << ")\n";
  txt << "  k  |x_k|         V(x_k)        x_k\n";
  for (std::size_t k = 0; k < t.states.size(); ++k) {
    states.push_back({{"k", k},
                      {"x", io::vector_to_json(t.states[k])},
                      {"norm", io::number(t.states[k].norm())},
                      {"V", io::number(t.values[k])}});
    std::string ks = std::to_string(k), ns = io::format_number(t.states[k].norm()), vs = io::format_number(t.values[k]);
    txt << "  " << ks << std::string(ks.size() < 3 ? 3 - ks.size() : 1, ' ') << ns
        << std::string(ns.size() < 14 ? 14 - ns.size() : 1, ' ') << vs << std::string(vs.size() < 14 ? 14 - vs.size() : 1, ' ')
        << io::format_vector(t.states[k]) << "\n";
  }
  if (!t.stopped.empty()) txt << "stopped: " << t.stopped << "\n";
  out.json["command"] = "simulate";
  out.json["policy"] = to_string(policy);
  out.json["seed"] = c.seed;
  out.json["outer_approximation"] = t.outer_approximation;
  out.json["completed"] = t.stopped.empty();
  if (!t.stopped.empty()) out.json["stopped"] = t.stopped;
  out.json["states"] = states;
  out.text = txt.str();
  out.code = t.stopped.empty() ? 0 : 1;
  return out;
}

struct OracleArgs {
  std::string file, x0, y, sign = "neg";
  int depth = -1;
  double epsilon = 1e-3;
};

Output cmd_oracle_depth(const OracleArgs& a, const Common&) {
  const ConvexProcess h = load_process(a.file);
  const Vec x0 = parse_vector(a.x0, "--x0");
  if (x0.size() != h.n()) throw UsageError("--x0 has the wrong dimension");
  const int d = a.depth > 0 ? a.depth : static_cast<int>(4 * h.n());
  const auto profile = oracle::feasible_depth_profile(h, x0, d);
  Output out;
  Json jp = Json::array();
  int deepest = 0;
  for (std::size_t k = 0; k < profile.size(); ++k) {
    jp.push_back(static_cast<bool>(profile[k]));
    if (profile[k]) deepest = static_cast<int>(k + 1);
  }
  out.json["command"] = "oracle feasible-depth";
  out.json["x0"] = io::vector_to_json(x0);
  out.json["profile"] = jp;
  out.json["deepest_feasible"] = deepest;
  out.text = "feasible depth from " + io::format_vector(x0) + ": " + std::to_string(deepest) + " of " + std::to_string(d) +
             " steps\n";
  return out;
}

Output cmd_oracle_stabilizable(const OracleArgs& a, const Common&) {
  const ConvexProcess h = load_process(a.file);
  const Vec x0 = parse_vector(a.x0, "--x0");
  if (x0.size() != h.n()) throw UsageError("--x0 has the wrong dimension");
  const int d = a.depth > 0 ? a.depth : static_cast<int>(4 * h.n());
  const auto r = oracle::stabilizable_sample(h, x0, d, a.epsilon);
  Output out;
  Json traj = Json::array();
  for (const Vec& x : r.trajectory) traj.push_back(io::vector_to_json(x));
  out.json["command"] = "oracle stabilizable";
  out.json["verdict"] = oracle::to_string(r.verdict);
  out.json["depth"] = d;
  out.json["epsilon"] = a.epsilon;
  out.json["rho"] = io::number(r.rho);
  out.json["envelope"] = io::number(r.envelope);
  out.json["final_ratio"] = io::number(r.final_ratio);
  out.json["trajectory"] = traj;
  std::ostringstream t;
  t << "stabilizable from " << io::format_vector(x0) << ": " << oracle::to_string(r.verdict) << "\n";
  t << pad("rho") << io::format_number(r.rho) << "\n" << pad("envelope") << io::format_number(r.envelope) << "\n";
  t << pad("|x_d| / |x_0|") << io::format_number(r.final_ratio) << "\n";
  out.text = t.str();
  out.code = r.verdict == oracle::StabilizableResult::Verdict::yes_certified ? 0 : 3;
  return out;
}

Output cmd_oracle_polar(const OracleArgs& a, const Common& c) {
  const PolyCone cone = io::cone_from_json(io::load_json_file(a.file), a.file);
  if (a.sign != "neg" && a.sign != "pos") throw UsageError("--sign must be neg or pos");
  const auto r = oracle::polar_sampled(cone, c.samples, c.seed, a.sign == "pos" ? PolarSign::positive : PolarSign::negative);
  Output out;
  out.json["command"] = "oracle polar";
  out.json["sign"] = a.sign;
  out.json["samples"] = r.samples;
  out.json["computed_not_true"] = r.computed_not_true;
  out.json["true_not_computed"] = r.true_not_computed;
  out.json["polar"] = io::cone_to_json(polar(cone, a.sign == "pos" ? PolarSign::positive : PolarSign::negative));
  out.text = "polar check on " + std::to_string(r.samples) + " directions: " + std::to_string(r.computed_not_true) +
             " accepted but violating, " + std::to_string(r.true_not_computed) + " rejected but satisfying\n";
  out.code = r.ok() ? 0 : 1;
  return out;
}

Output cmd_oracle_conjugate(const OracleArgs& a, const Common& c) {
  const ConeFunction f = load_function(a.file);
  const Vec y = parse_vector(a.y, "--y");
  if (y.size() != f.n()) throw UsageError("--y has the wrong dimension");
  const auto g = oracle::conjugate_grid(f, y, c.mesh);
  Output out;
  out.json["command"] = "oracle conjugate";
  out.json["y"] = io::vector_to_json(y);
  out.json["grid_value"] = io::number(g.value);
  out.json["directions"] = g.directions;
  out.json["radius"] = io::number(g.radius);
  std::ostringstream t;
  t << "grid conjugate at " << io::format_vector(y) << ": " << io::format_number(g.value) << "\n";
  try {
    const double exact = evaluate(conjugate(f), y);
    out.json["conjugate_value"] = io::number(exact);
    t << pad("conjugate") << io::format_number(exact) << "\n";
  } catch (const Unsupported& e) {
    out.json["conjugate_value"] = nullptr;
    t << pad("conjugate") << "unsupported: " << e.what() << "\n";
  }
  out.text = t.str();
  return out;
}

void add_common(CLI::App& app, Common& c) {
  app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", c.seed, "Seed for sampling and random selection");
  app.add_option("--samples", c.samples, "Cross-section sample count")->check(CLI::PositiveNumber);
  app.add_option("--mesh", c.mesh, "Angular mesh in radians")->check(CLI::PositiveNumber);
  app.add_option("--max-iter", c.max_iter, "Domain-iteration cap (default 4n)");
  app.add_option("--tol-ratio", c.tol_ratio, "Relative slack in the decrease test");
  app.add_option("--tol-membership", c.tol_membership, "Cone membership tolerance");
  app.add_option("--tol-identity", c.tol_identity, "Cone identity tolerance");
  app.add_option("--tol-zero", c.tol_zero, "Zero threshold of the positive-definiteness check");
  app.add_option("-o,--output", c.output, "Write the report to a file instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lyapunov analysis of polyhedral convex processes", "conelyap"};
  app.require_subcommand(1);
  Common common;
  add_common(app, common);
  app.fallthrough();
  std::optional<Output> result;
  std::function<Output()> run;

  std::string analyze_path;
  auto* analyze = app.add_subcommand("analyze", "Structural cones and the condition panel of a process");
  analyze->add_option("process", analyze_path, "Process JSON file")->required();
  analyze->callback([&] { run = [&] { return cmd_analyze(analyze_path, common); }; });

  LyapunovArgs la;
  auto* lyap = app.add_subcommand("lyapunov", "Verify a Lyapunov candidate");
  lyap->add_option("process", la.process, "Process JSON file");
  lyap->add_option("function", la.function, "Function JSON file");
  lyap->add_option("mode_pos", la.mode_pos, "Mode (positional form)");
  lyap->add_option("gamma_pos", la.gamma_pos, "Gamma (positional form)");
  lyap->add_option("--mode", la.mode_flag, "weak, strong, goebel_weak or goebel_strong");
  lyap->add_option("--gamma", la.gamma_flag, "Decrease factor in (0, 1)");
  lyap->add_option("--query", la.query, "Query JSON file");
  lyap->add_flag("--search", la.search, "Bisect for the least passing gamma");
  lyap->add_option("--resolution", la.resolution, "Bisection resolution")->check(CLI::PositiveNumber);
  lyap->callback([&] { run = [&] { return cmd_lyapunov(la, common); }; });

  DualityArgs da;
  auto* duality = app.add_subcommand("duality", "Transfer a Lyapunov function to a dual process");
  duality->add_option("process", da.process, "Process JSON file")->required();
  duality->add_option("function", da.function, "Function JSON file")->required();
  duality->add_option("gamma_pos", da.gamma_pos, "Gamma (positional form)");
  duality->add_option("theorem_pos", da.theorem_pos, "2 or 3 (positional form)");
  duality->add_option("--gamma", da.gamma_flag, "Decrease factor in (0, 1)");
  duality->add_option("--theorem", da.theorem_flag, "2 (adjoint transfer) or 3 (general dual process)");
  duality->add_option("--g", da.g, "Process G for theorem 3: a file, dual_pos or dual_neg");
  duality->callback([&] { run = [&] { return cmd_duality(da, common); }; });

  SimulateArgs sa;
  auto* sim = app.add_subcommand("simulate", "Simulate x_{k+1} in F(H) ∩ H(x_k)");
  sim->add_option("process", sa.process, "Process JSON file")->required();
  sim->add_option("--function", sa.function, "Function JSON file (default |x|^2 / 2)");
  sim->add_option("--x0", sa.x0, "Initial state, comma separated")->required();
  sim->add_option("--steps", sa.steps, "Number of steps");
  sim->add_option("--policy", sa.policy, "min_V, vertex or random");
  sim->callback([&] { run = [&] { return cmd_simulate(sa, common); }; });

  OracleArgs oa;
  auto* orc = app.add_subcommand("oracle", "Definition-level cross-checks");
  orc->require_subcommand(1);
  auto* depth = orc->add_subcommand("feasible-depth", "Longest trajectory prefix from x0");
  depth->add_option("process", oa.file, "Process JSON file")->required();
  depth->add_option("--x0", oa.x0, "Initial state")->required();
  depth->add_option("--depth", oa.depth, "Horizon (default 4n)");
  depth->callback([&] { run = [&] { return cmd_oracle_depth(oa, common); }; });
  auto* stab = orc->add_subcommand("stabilizable", "Certify decay of an optimized trajectory");
  stab->add_option("process", oa.file, "Process JSON file")->required();
  stab->add_option("--x0", oa.x0, "Initial state")->required();
  stab->add_option("--depth", oa.depth, "Horizon d (default 4n)");
  stab->add_option("--epsilon", oa.epsilon, "Required tail ratio")->check(CLI::PositiveNumber);
  stab->callback([&] { run = [&] { return cmd_oracle_stabilizable(oa, common); }; });
  auto* pol = orc->add_subcommand("polar", "Sample both inclusions of the computed polar");
  pol->add_option("cone", oa.file, "Cone JSON file")->required();
  pol->add_option("--sign", oa.sign, "neg or pos");
  pol->callback([&] { run = [&] { return cmd_oracle_polar(oa, common); }; });
  auto* conj = orc->add_subcommand("conjugate", "Grid lower bound of a conjugate value");
  conj->add_option("function", oa.file, "Function JSON file")->required();
  conj->add_option("--y", oa.y, "Evaluation point")->required();
  conj->callback([&] { run = [&] { return cmd_oracle_conjugate(oa, common); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : kExitUsage;
  }

  try {
    GeometryTolerances tol = default_tolerances();
    if (common.tol_membership) tol.membership = *common.tol_membership;
    if (common.tol_identity) tol.identity = *common.tol_identity;
    set_default_tolerances(tol);
    Output out = run();
    std::string body = common.format == "json" ? io::document(out.json).dump(2) + "\n" : out.text;
    if (common.output.empty())
      std::cout << body;
    else
      io::write_text_file(common.output, body);
    return out.code;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitData;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return std::string(e.what()).rfind("cannot read", 0) == 0 ? kExitNoInput : kExitCantCreate;
  } catch (const DimensionMismatch& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitData;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSoftware;
  }
}
