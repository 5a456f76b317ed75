#include "conelyap/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>

#include "conelyap/errors.hpp"
#include "conelyap/parallel.hpp"

namespace conelyap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Polyhedron slice(const ConvexProcess& h, const Vec& x, const PolyCone* f) {
  Polyhedron p = image_of_point(h, x);
  if (f) p = p.intersected(as_polyhedron(*f));
  return p;
}

struct SampleOutcome {
  double ratio = 0.0;
  bool vacuous = false;
  bool fail = false;
  Vec y;
  std::optional<Vec> ray;
  std::string error;
};

Verdict verdict_of(const Decision& d) {
  if (!d.conclusive) return Verdict::inconclusive;
  return d.value ? Verdict::holds : Verdict::fails;
}

VerificationReport decision_report(const std::string& name, const Decision& d) {
  VerificationReport r;
  r.name = name;
  r.verdict = verdict_of(d);
  if (!d.conclusive) r.detail = "feasible-set iteration did not converge; outer approximation cannot decide";
  return r;
}

// Extended-real comparison inf_{G-slice} p.x <= sup_{H-slice} y.q with the documented conventions.
// inf over the empty set is +inf, sup over the empty set is -inf.
enum class Coupling { holds, fails };

Coupling compare_coupling(bool lhs_empty, double lhs, bool rhs_empty, double rhs) {
  if (lhs_empty) return Coupling::holds;
  if (rhs_empty) return lhs == -kInf ? Coupling::holds : Coupling::fails;
  if (lhs == -kInf || rhs == kInf) return Coupling::holds;
  return lhs <= rhs + 1e-8 * std::max({1.0, std::abs(lhs), std::abs(rhs)}) ? Coupling::holds : Coupling::fails;
}

LyapunovQuery stage_query(const ConvexProcess& h, const ConeFunction& v, double gamma, LyapunovMode mode,
                          const VerifyOptions& opts) {
  return {h, v, gamma, mode, opts.sampling, opts.max_iter, opts.ratio_tol, opts.posdef};
}

Verdict combine_hypotheses(const std::vector<Verdict>& hyps) {
  for (Verdict v : hyps)
    if (v == Verdict::fails || v == Verdict::hypothesis_not_met) return Verdict::hypothesis_not_met;
  for (Verdict v : hyps)
    if (v == Verdict::inconclusive) return Verdict::inconclusive;
  return Verdict::holds;
}

}  // namespace

std::string to_string(LyapunovMode m) {
  switch (m) {
    case LyapunovMode::weak:
      return "weak";
    case LyapunovMode::strong:
      return "strong";
    case LyapunovMode::goebel_weak:
      return "goebel_weak";
    case LyapunovMode::goebel_strong:
      return "goebel_strong";
  }
  return "weak";
}

LyapunovMode parse_mode(const std::string& s) {
  if (s == "weak") return LyapunovMode::weak;
  if (s == "strong") return LyapunovMode::strong;
  if (s == "goebel_weak") return LyapunovMode::goebel_weak;
  if (s == "goebel_strong") return LyapunovMode::goebel_strong;
  throw ParseError("unknown mode '" + s + "' (expected weak, strong, goebel_weak or goebel_strong)");
}

std::string to_string(SelectionPolicy p) {
  switch (p) {
    case SelectionPolicy::min_v:
      return "min_V";
    case SelectionPolicy::vertex:
      return "vertex";
    case SelectionPolicy::random:
      return "random";
  }
  return "min_V";
}

SelectionPolicy parse_policy(const std::string& s) {
  if (s == "min_V" || s == "min_v") return SelectionPolicy::min_v;
  if (s == "vertex") return SelectionPolicy::vertex;
  if (s == "random") return SelectionPolicy::random;
  throw ParseError("unknown policy '" + s + "' (expected min_V, vertex or random)");
}

VerificationReport verify(const LyapunovQuery& q) {
  const ConvexProcess& h = q.process;
  const ConeFunction& v = q.candidate;
  if (!(q.gamma > 0 && q.gamma < 1)) throw Error("verify: gamma must lie strictly between 0 and 1");
  if (v.n() != h.n()) throw DimensionMismatch("verify: candidate and process dimensions differ");
  const bool definition2 = q.mode == LyapunovMode::weak || q.mode == LyapunovMode::strong;
  const bool strong = q.mode == LyapunovMode::strong || q.mode == LyapunovMode::goebel_strong;

  VerificationReport rep;
  rep.name = "lyapunov_" + to_string(q.mode);
  rep.quantities.push_back({"gamma", q.gamma});

  PolyCone region;
  bool converged = true;
  if (definition2) {
    const auto fs = feasible_set(h, q.max_iter);
    region = fs.cone;
    converged = fs.converged;
    VerificationReport sr;
    sr.name = "feasible_set";
    sr.verdict = converged ? Verdict::holds : Verdict::inconclusive;
    sr.quantities = {{"iterations", static_cast<double>(fs.iterations)}};
    if (!converged) sr.detail = "domain iteration did not converge; using the last iterate as an outer approximation";
    rep.sub_reports.push_back(sr);
    if (!converged && !strong) {
      rep.verdict = Verdict::inconclusive;
      rep.detail = "weak mode needs the exact feasible set";
      return rep;
    }
  } else {
    region = domain(h);
  }

  const PosDefBounds pd = posdef_bounds(v, definition2 ? region : PolyCone::whole_space(h.n()), q.posdef);
  {
    VerificationReport sr;
    sr.name = "positive_definite";
    sr.checked_points = pd.samples;
    sr.quantities = {{"alpha", pd.alpha}, {"beta", pd.beta}};
    sr.verdict = pd.status == PosDefBounds::Status::positive_definite ? Verdict::holds
                 : pd.status == PosDefBounds::Status::inconclusive  ? Verdict::inconclusive
                                                                     : Verdict::fails;
    if (pd.refutation) sr.witness = Witness{*pd.refutation, std::nullopt, std::nullopt, "V(x) <= 0 or +inf at a unit x"};
    rep.sub_reports.push_back(sr);
    if (sr.verdict != Verdict::holds) {
      rep.verdict = sr.verdict == Verdict::fails && converged ? Verdict::fails : Verdict::inconclusive;
      rep.witness = sr.witness;
      rep.detail = "candidate is not positive definite on the verification region";
      return rep;
    }
  }

  const std::vector<Vec> xs = cross_section_samples(region, q.sampling);
  const PolyCone* restrict_to = definition2 ? &region : nullptr;
  const double ray_tol = 1e-9 * std::max(1.0, pd.beta);
  std::vector<SampleOutcome> out(xs.size());

  parallel_for(xs.size(), [&](std::size_t i) {
    const Vec& x = xs[i];
    SampleOutcome& o = out[i];
    try {
      const double vx = evaluate(v, x);
      const Polyhedron p = slice(h, x, restrict_to);
      if (!strong) {
        const SliceMinimum m = min_over_polyhedron(v, p);
        if (m.status == SolveStatus::infeasible)
          throw ConsistencyError("verify: empty successor slice at a point of the verification region");
        o.ratio = m.value / vx;
        o.y = m.x;
      } else {
        const PolyhedronVRep vr = vertex_enumeration(p);
        if (vr.points.empty()) {
          if (converged) throw ConsistencyError("verify: F(H) ∩ H(x) is empty for x in F(H)");
          o.vacuous = true;
          return;
        }
        auto unbounded = [&](const Vec& d) {
          const double vd = evaluate(v, d);
          return !(vd <= ray_tol);
        };
        for (Eigen::Index k = 0; k < vr.rays.rows() && !o.ray; ++k)
          if (unbounded(vr.rays.row(k).transpose())) o.ray = vr.rays.row(k).transpose();
        for (Eigen::Index k = 0; k < vr.lines.rows() && !o.ray; ++k) {
          const Vec l = vr.lines.row(k).transpose();
          if (unbounded(l)) o.ray = l;
          else if (unbounded(-l)) o.ray = Vec(-l);
        }
        if (o.ray) {
          o.ratio = kInf;
          o.y = vr.points.front();
        } else {
          o.ratio = -kInf;
          for (const Vec& pt : vr.points) {
            const double r = evaluate(v, pt) / vx;
            if (r > o.ratio) {
              o.ratio = r;
              o.y = pt;
            }
          }
        }
      }
      o.fail = !(o.ratio <= q.gamma * (1.0 + q.ratio_tol));
    } catch (const SolverError& e) {
      o.error = e.what();
    }
  });

  rep.gamma_margin = 0.0;
  rep.checked_points = static_cast<int>(xs.size());
  const SampleOutcome* first_fail = nullptr;
  std::size_t fail_index = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& o = out[i];
    if (!o.error.empty()) {
      rep.verdict = Verdict::inconclusive;
      rep.detail = "solver failure at sample " + std::to_string(i) + ": " + o.error;
      return rep;
    }
    if (o.vacuous) continue;
    rep.gamma_margin = std::max(rep.gamma_margin, o.ratio);
    if (o.fail && !first_fail) {
      first_fail = &o;
      fail_index = i;
    }
  }
  if (first_fail) {
    rep.witness = Witness{xs[fail_index], first_fail->y, first_fail->ray,
                          first_fail->ray ? "V is unbounded along a recession direction of the successor slice"
                                          : "decrease condition violated"};
    if (converged) {
      rep.verdict = Verdict::fails;
    } else {
      rep.verdict = Verdict::inconclusive;
      rep.detail = "violation found on an outer approximation of F(H)";
    }
    return rep;
  }
  rep.verdict = Verdict::holds;
  return rep;
}

GammaSearch gamma_search(LyapunovQuery q, double resolution) {
  GammaSearch out;
  double hi = 1.0 - 1e-6;
  q.gamma = hi;
  out.report = verify(q);
  if (out.report.verdict != Verdict::holds) return out;
  out.found = true;
  double lo = 0.0;
  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    q.gamma = mid;
    VerificationReport r = verify(q);
    if (r.verdict == Verdict::holds) {
      hi = mid;
      out.report = std::move(r);
    } else {
      lo = mid;
    }
  }
  out.lower = lo;
  out.upper = hi;
  return out;
}

ConeFunction dual_candidate(const ConvexProcess& h, const ConeFunction& v, int max_iter) {
  const auto fs = feasible_set(h, max_iter);
  if (!fs.converged) throw Error("dual_candidate: the feasible set of H did not converge");
  return conjugate(restrict(v, fs.cone));
}

VerificationReport check_theorem2(const ConvexProcess& h, const ConeFunction& v, double gamma, const VerifyOptions& opts) {
  const int max_iter = opts.max_iter;
  VerificationReport rep;
  rep.name = "theorem2";
  rep.quantities.push_back({"gamma", gamma});
  const ConvexProcess hp = dual(h, PolarSign::positive);

  const VerificationReport s1 = decision_report("transversality_pos", check_transversality_with(h, hp, max_iter));
  const VerificationReport s2 = verify(stage_query(h, v, gamma, LyapunovMode::weak, opts));
  VerificationReport s3;
  s3.name = "dual_candidate";
  VerificationReport s4;
  s4.name = "lyapunov_strong";
  try {
    const ConeFunction w = dual_candidate(h, v, max_iter);
    s3.verdict = Verdict::holds;
    s3.detail = to_string(w.kind());
    s4 = verify(stage_query(hp, w, gamma, LyapunovMode::strong, opts));
    s4.name = "adjoint_lyapunov_strong";
  } catch (const Error& e) {
    s3.verdict = Verdict::inconclusive;
    s3.detail = e.what();
    s4.verdict = Verdict::inconclusive;
    s4.detail = "dual candidate unavailable";
  }
  rep.sub_reports = {s1, s2, s3, s4};

  const Verdict hyp = combine_hypotheses({s1.verdict, s2.verdict});
  if (hyp != Verdict::holds) {
    rep.verdict = hyp;
    rep.detail = hyp == Verdict::hypothesis_not_met ? "hypotheses of the transfer are not met" : "hypothesis check inconclusive";
    return rep;
  }
  rep.verdict = s3.verdict == Verdict::holds ? s4.verdict : Verdict::inconclusive;
  rep.gamma_margin = s4.gamma_margin;
  rep.checked_points = s2.checked_points + s4.checked_points;
  if (s4.witness) rep.witness = s4.witness;
  return rep;
}

VerificationReport check_theorem3(const ConvexProcess& h, const ConvexProcess& g, const ConeFunction& v, double gamma,
                                  bool g_is_adjoint, const VerifyOptions& opts) {
  const int max_iter = opts.max_iter;
  const SampleSpec& sampling = opts.sampling;
  if (g.n() != h.n()) throw DimensionMismatch("check_theorem3: processes have different dimensions");
  VerificationReport rep;
  rep.name = "theorem3";
  rep.quantities.push_back({"gamma", gamma});

  const auto fh = feasible_set(h, max_iter);
  const auto fg = feasible_set(g, max_iter);

  VerificationReport s1 = decision_report("transversality", check_transversality_with(h, g, max_iter));

  VerificationReport s2;
  s2.name = "coupling_hypothesis";
  if (!fh.converged) {
    s2.verdict = Verdict::inconclusive;
    s2.detail = "F(H) did not converge";
  } else {
    const std::vector<Vec> xs = cross_section_samples(fh.cone, sampling);
    SampleSpec qspec = sampling;
    qspec.seed = sampling.seed + 1;
    std::vector<Vec> qs = cross_section_samples(fg.cone, qspec);
    // Matching meshes would pair nearly parallel x and q; decorrelate them.
    std::mt19937_64 shuffle_rng(sampling.seed);
    std::shuffle(qs.begin(), qs.end(), shuffle_rng);
    const std::size_t pairs = xs.empty() || qs.empty() ? 0 : std::max(xs.size(), qs.size());
    std::vector<Coupling> res(pairs, Coupling::holds);
    parallel_for(pairs, [&](std::size_t i) {
      const Vec& x = xs[i % xs.size()];
      const Vec& qv = qs[i % qs.size()];
      const LpResult l = solve_lp({x, slice(g, qv, &fg.cone), Sense::minimize});
      const LpResult r = solve_lp({qv, slice(h, x, &fh.cone), Sense::maximize});
      const bool le = l.status == SolveStatus::infeasible, re = r.status == SolveStatus::infeasible;
      const double lv = l.status == SolveStatus::unbounded ? -kInf : l.value;
      const double rv = r.status == SolveStatus::unbounded ? kInf : r.value;
      res[i] = compare_coupling(le, lv, re, rv);
    });
    s2.checked_points = static_cast<int>(pairs);
    s2.verdict = Verdict::holds;
    for (std::size_t i = 0; i < pairs; ++i) {
      if (res[i] == Coupling::holds) continue;
      s2.verdict = Verdict::fails;
      s2.witness = Witness{xs[i % xs.size()], qs[i % qs.size()], std::nullopt,
                           "inf over F(G)∩G(q) of p.x exceeds sup over F(H)∩H(x) of y.q"};
      break;
    }
    if (g_is_adjoint) {
      if (s2.verdict == Verdict::fails)
        s2.detail = "numerical check disagrees with the adjoint identity";
      else
        s2.detail = "holds by construction for G = H^+; sampled check agrees";
      if (s2.verdict != Verdict::fails) s2.verdict = Verdict::holds;
    } else if (s2.verdict == Verdict::holds && !fg.converged) {
      s2.verdict = Verdict::inconclusive;
      s2.detail = "F(G) is an outer approximation; sampled inequality cannot certify";
    }
  }

  const VerificationReport s3 = verify(stage_query(h, v, gamma, LyapunovMode::strong, opts));
  VerificationReport s4;
  s4.name = "lyapunov_weak";
  try {
    const ConeFunction w = dual_candidate(h, v, max_iter);
    s4 = verify(stage_query(g, w, gamma, LyapunovMode::weak, opts));
    s4.name = "dual_lyapunov_weak";
  } catch (const Error& e) {
    s4.verdict = Verdict::inconclusive;
    s4.detail = e.what();
  }
  rep.sub_reports = {s1, s2, s3, s4};

  const Verdict hyp = combine_hypotheses({s1.verdict, s2.verdict, s3.verdict});
  if (hyp != Verdict::holds) {
    rep.verdict = hyp;
    rep.detail = hyp == Verdict::hypothesis_not_met ? "hypotheses of the transfer are not met" : "hypothesis check inconclusive";
    return rep;
  }
  rep.verdict = s4.verdict;
  rep.gamma_margin = s4.gamma_margin;
  rep.checked_points = s3.checked_points + s4.checked_points;
  if (s4.witness) rep.witness = s4.witness;
  return rep;
}

namespace {
// States this close to F(H) (relative) are moved onto it before stepping.
constexpr double kSnapTol = 1e-7;
constexpr double kZeroStep = 1e-12;
}  // namespace

Trajectory simulate(const ConvexProcess& h, const ConeFunction& v, const Vec& x0, int steps, SelectionPolicy policy,
                    std::uint64_t seed, int max_iter) {
  if (x0.size() != h.n()) throw DimensionMismatch("simulate: initial state dimension");
  const auto fs = feasible_set(h, max_iter);
  Trajectory t;
  t.outer_approximation = !fs.converged;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g(0.0, 1.0);
  Vec x = x0;
  t.states.push_back(x);
  t.values.push_back(evaluate(v, x));
  for (int k = 0; k < steps; ++k) {
    // 0 is a successor of 0 under every policy.
    const double scale = x.norm();
    if (scale == 0.0) {
      t.states.push_back(x);
      t.values.push_back(evaluate(v, x));
      continue;
    }
    // Homogeneity: step from the unit state so that solver tolerances stay relative.
    Vec xu = x / scale;
    Polyhedron p = slice(h, xu, &fs.cone);
    if (is_empty(p)) {
      const Vec snapped = project_point(fs.cone, xu);
      if ((snapped - xu).norm() <= kSnapTol) {
        xu = snapped;
        p = slice(h, xu, &fs.cone);
      }
    }
    Vec next;
    if (policy == SelectionPolicy::min_v) {
      const SliceMinimum m = min_over_polyhedron(v, p);
      if (m.status == SolveStatus::infeasible) {
        t.stopped = "empty successor set at step " + std::to_string(k);
        break;
      }
      next = m.x;
    } else {
      const PolyhedronVRep vr = vertex_enumeration(p);
      if (vr.points.empty()) {
        t.stopped = "empty successor set at step " + std::to_string(k);
        break;
      }
      if (policy == SelectionPolicy::vertex) {
        next = *std::min_element(vr.points.begin(), vr.points.end(), [](const Vec& a, const Vec& b) {
          return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
        });
      } else {
        Vec w(static_cast<Eigen::Index>(vr.points.size()));
        for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = -std::log(std::max(1e-300, u(rng)));
        w /= w.sum();
        next = Vec::Zero(h.n());
        for (Eigen::Index i = 0; i < w.size(); ++i) next += w(i) * vr.points[static_cast<std::size_t>(i)];
        for (Eigen::Index i = 0; i < vr.rays.rows(); ++i) next += u(rng) * vr.rays.row(i).transpose();
        for (Eigen::Index i = 0; i < vr.lines.rows(); ++i) next += g(rng) * vr.lines.row(i).transpose();
      }
    }
    // A successor this small relative to the unit state is solver residue of an exact 0.
    if (next.norm() <= kZeroStep) next.setZero();
    x = scale * next;
    t.states.push_back(x);
    t.values.push_back(evaluate(v, x));
  }
  return t;
}

}  // namespace conelyap
