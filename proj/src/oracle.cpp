#include "conelyap/oracle.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "conelyap/errors.hpp"
#include "conelyap/sampling.hpp"

namespace conelyap::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double golden_max(const std::function<double(double)>& g, double lo, double hi, int iters) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double gc = g(c), gd = g(d);
  for (int i = 0; i < iters; ++i) {
    if (gc > gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - phi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + phi * (b - a);
      gd = g(d);
    }
  }
  return std::max({gc, gd, g(lo)});
}

// sup over conic combinations within the unit box of sign * z.x, with C given by its input data.
double definition_value(const PolyCone& c, const Vec& z, double sign) {
  if (c.has_generators()) {
    double worst = -kInf;
    for (Eigen::Index i = 0; i < c.rays().rows(); ++i) worst = std::max(worst, sign * z.dot(c.rays().row(i).transpose()) / c.rays().row(i).norm());
    for (Eigen::Index i = 0; i < c.lineality_basis().rows(); ++i)
      worst = std::max(worst, std::abs(z.dot(c.lineality_basis().row(i).transpose())) / c.lineality_basis().row(i).norm());
    return worst == -kInf ? 0.0 : worst;
  }
  Polyhedron p(c.inequalities(), Vec::Zero(c.inequalities().rows()), c.equalities(), Vec::Zero(c.equalities().rows()));
  for (Eigen::Index i = 0; i < c.dim(); ++i) {
    Vec e = Vec::Zero(c.dim());
    e(i) = 1.0;
    p.add_inequality(e, 1.0);
    p.add_inequality(-e, 1.0);
  }
  const LpResult r = solve_lp({sign * z, p, Sense::maximize});
  return r.value;
}

}  // namespace

std::string to_string(StabilizableResult::Verdict v) {
  return v == StabilizableResult::Verdict::yes_certified ? "yes_certified" : "unknown";
}

TrajectorySystem trajectory_system(const ConvexProcess& h, const Vec& x0, int horizon) {
  if (horizon < 1) throw Error("trajectory_system: horizon must be at least 1");
  const Eigen::Index n = h.n();
  if (x0.size() != n) throw DimensionMismatch("trajectory_system: anchor dimension");
  const Mat& a = h.graph().inequalities();
  const Mat& e = h.graph().equalities();
  const Eigen::Index total = n * (horizon + 1);
  Polyhedron sys(total);
  for (Eigen::Index i = 0; i < n; ++i) {
    Vec row = Vec::Zero(total);
    row(i) = 1.0;
    sys.add_equality(row, x0(i));
  }
  for (int k = 0; k < horizon; ++k) {
    // (x_k, x_{k+1}) occupies the contiguous block starting at k * n.
    for (Eigen::Index j = 0; j < a.rows(); ++j) {
      Vec row = Vec::Zero(total);
      row.segment(k * n, 2 * n) = a.row(j).transpose();
      sys.add_inequality(row, 0.0);
    }
    for (Eigen::Index j = 0; j < e.rows(); ++j) {
      Vec row = Vec::Zero(total);
      row.segment(k * n, 2 * n) = e.row(j).transpose();
      sys.add_equality(row, 0.0);
    }
  }
  return {n, horizon, sys};
}

bool feasible_depth(const ConvexProcess& h, const Vec& x0, int d, const NumericsConfig& cfg) {
  const auto sys = trajectory_system(h, x0, d);
  return find_feasible_point(sys.constraints, cfg).status != SolveStatus::infeasible;
}

std::vector<bool> feasible_depth_profile(const ConvexProcess& h, const Vec& x0, int max_depth, const NumericsConfig& cfg) {
  std::vector<bool> out;
  for (int d = 1; d <= max_depth; ++d) {
    out.push_back(feasible_depth(h, x0, d, cfg));
    if (d > 1 && out[d - 1] && !out[d - 2])
      throw ConsistencyError("feasible_depth: feasible at depth " + std::to_string(d) + " but not at depth " +
                             std::to_string(d - 1));
  }
  return out;
}

StabilizableResult stabilizable_sample(const ConvexProcess& h, const Vec& x0, int d, double epsilon,
                                       const NumericsConfig& cfg) {
  if (!(epsilon > 0)) throw Error("stabilizable_sample: epsilon must be positive");
  const Eigen::Index n = h.n();
  const int horizon = d + static_cast<int>(n);
  const auto sys = trajectory_system(h, x0, horizon);
  const Eigen::Index total = sys.variables();
  Mat q = Mat::Zero(total, total);
  for (Eigen::Index i = n; i < n * (horizon + 1); ++i) q(i, i) = 2.0;
  const QpResult r = solve_qp({q, Vec::Zero(total), sys.constraints}, cfg);
  StabilizableResult out;
  if (r.status != SolveStatus::optimal) return out;
  for (int k = 0; k <= horizon; ++k) out.trajectory.push_back(r.x.segment(k * n, n));

  const double n0 = x0.norm();
  if (n0 == 0.0) {
    out.verdict = StabilizableResult::Verdict::yes_certified;
    out.rho = 0.0;
    out.final_ratio = 0.0;
    return out;
  }
  out.final_ratio = out.trajectory[static_cast<std::size_t>(d)].norm() / n0;
  out.rho = std::max(1e-3, std::pow(out.final_ratio, 1.0 / d));
  double tail = 0.0;
  for (int k = 0; k <= horizon; ++k) {
    const double nk = out.trajectory[static_cast<std::size_t>(k)].norm();
    out.envelope = std::max(out.envelope, nk / (std::pow(out.rho, k) * n0));
    if (k >= d) tail = std::max(tail, nk / n0);
  }
  if (out.rho < 1.0 && tail <= epsilon) out.verdict = StabilizableResult::Verdict::yes_certified;
  return out;
}

PolarCheck polar_sampled(const PolyCone& c, int k, std::uint64_t seed, PolarSign sign) {
  const PolyCone p = polar(c, sign);
  const double sgn = sign == PolarSign::negative ? 1.0 : -1.0;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto gauss = [&]() {
    Vec v(c.dim());
    for (Eigen::Index i = 0; i < c.dim(); ++i) v(i) = g(rng);
    return v;
  };
  PolarCheck out;
  auto check = [&](const Vec& z) {
    if (z.norm() < 1e-12) return;
    const Vec zn = z / z.norm();
    ++out.samples;
    const double dv = definition_value(c, zn, sgn);
    if (contains(p, zn, 1e-9) && dv > 1e-6) ++out.computed_not_true;
    if (dv <= 1e-9 && !contains(p, zn, 1e-6)) ++out.true_not_computed;
  };
  const Mat gens = p.generator_list();
  // k directions: isotropic draws alternate with draws inside the computed polar and near its boundary.
  for (int i = 0; out.samples < k && i < 4 * k; ++i) {
    if (gens.rows() == 0 || i % 3 == 0) {
      check(gauss());
      continue;
    }
    Vec z = Vec::Zero(c.dim());
    for (Eigen::Index j = 0; j < gens.rows(); ++j) z += u(rng) * gens.row(j).transpose();
    if (i % 3 == 1)
      check(z);
    else if (z.norm() > 1e-12)
      check(z / z.norm() + 0.05 * gauss());
  }
  return out;
}

GridConjugate conjugate_grid(const ConeFunction& f, const Vec& y, double mesh, int monte_carlo) {
  if (y.size() != f.n()) throw DimensionMismatch("conjugate_grid: point dimension");
  GridConjugate out;
  const PolyCone dom = dd_convert(effective_domain(f));
  if (is_trivial(dom)) return out;

  const int span_dim = span_dimension(dom);
  SampleSpec spec{monte_carlo, 7};
  if (span_dim == 2) spec.count = static_cast<int>(std::ceil(2 * M_PI / mesh));
  std::vector<Vec> dirs = cross_section_samples(dom, spec);

  std::vector<double> fu(dirs.size());
  double alpha = kInf;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    fu[i] = evaluate(f, dirs[i]);
    if (std::isfinite(fu[i])) alpha = std::min(alpha, fu[i]);
  }
  const double yn = y.norm();
  out.radius = alpha > 0 && std::isfinite(alpha) ? yn / alpha : kInf;

  auto radial = [&](const Vec& uvec, double fval) {
    const double slope = y.dot(uvec);
    if (!std::isfinite(fval) || slope <= 0) return 0.0;
    if (fval <= 1e-14) return kInf;
    const double r = std::max(out.radius, yn / fval);
    return golden_max([&](double t) { return t * slope - evaluate(f, t * uvec); }, 0.0, r, 80);
  };

  double best = 0.0;
  Vec best_dir;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    ++out.directions;
    const double v = radial(dirs[i], fu[i]);
    if (v == kInf) {
      out.value = kInf;
      return out;
    }
    if (v > best) {
      best = v;
      best_dir = dirs[i];
    }
  }
  if (best_dir.size() > 0) {
    const Mat basis = span(dom).lineality_basis();
    double step = 0.5 * mesh;
    for (int it = 0; it < 80 && step > 1e-9; ++it) {
      bool improved = false;
      for (Eigen::Index k = 0; k < basis.rows() && !improved; ++k) {
        for (double s : {step, -step}) {
          Vec cand = best_dir + s * basis.row(k).transpose();
          if (!contains(dom, cand)) cand = project_point(dom, cand);
          if (cand.norm() < 1e-12) continue;
          cand.normalize();
          ++out.directions;
          const double v = radial(cand, evaluate(f, cand));
          if (v > best) {
            best = v;
            best_dir = cand;
            improved = true;
            break;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
  }
  out.value = best;
  return out;
}

}  // namespace conelyap::oracle
