#include "conelyap/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "conelyap/errors.hpp"

namespace conelyap {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

struct ScaledRow {
  Vec a;
  double b;
  bool equality;
  Eigen::Index source;
  double norm;
};

// Dense tableau over the standard form M z = r, z >= 0, r >= 0, with one
// artificial column per row (the initial basis).
class Tableau {
 public:
  Tableau(const Mat& m, const Vec& r)
      : rows_(m.rows()),
        cols_(m.cols()),
        t_(m.rows() + 1, m.cols() + 1),
        m_(m),
        r_(r),
        shift_(Vec::Zero(m.rows())),
        cost_(Vec::Zero(m.cols())) {
    t_.setZero();
    t_.topLeftCorner(rows_, cols_) = m;
    t_.col(cols_).head(rows_) = r;
    alive_.assign(static_cast<std::size_t>(rows_), 1);
    basis_.resize(static_cast<std::size_t>(rows_));
  }

  void set_basis(std::size_t row, Eigen::Index col) { basis_[row] = col; }
  Eigen::Index basic(std::size_t row) const { return basis_[row]; }
  bool alive(std::size_t row) const { return alive_[row] != 0; }
  void kill(std::size_t row) { alive_[row] = 0; }
  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }
  double at(Eigen::Index i, Eigen::Index j) const { return t_(i, j); }
  double rhs(Eigen::Index i) const { return t_(i, cols_); }
  double objective_value() const { return -t_(rows_, cols_); }

  void set_objective(const Vec& cost) {
    cost_ = cost;
    t_.row(rows_).setZero();
    t_.row(rows_).head(cols_) = cost.transpose();
    for (Eigen::Index k = 0; k < rows_; ++k) {
      if (!alive(static_cast<std::size_t>(k))) continue;
      const double cb = cost(basis_[static_cast<std::size_t>(k)]);
      if (cb != 0.0) t_.row(rows_) -= cb * t_.row(k);
    }
  }

  void pivot(Eigen::Index pr, Eigen::Index pc) {
    t_.row(pr) /= t_(pr, pc);
    for (Eigen::Index i = 0; i <= rows_; ++i) {
      if (i == pr) continue;
      if (i < rows_ && !alive(static_cast<std::size_t>(i))) continue;
      const double factor = t_(i, pc);
      if (factor != 0.0) t_.row(i) -= factor * t_.row(pr);
    }
    basis_[static_cast<std::size_t>(pr)] = pc;
    for (Eigen::Index i = 0; i < rows_; ++i)
      if (t_(i, cols_) < 0.0 && t_(i, cols_) > -1e-9) t_(i, cols_) = 0.0;
  }

  std::vector<Eigen::Index> live_rows() const {
    std::vector<Eigen::Index> live;
    for (Eigen::Index k = 0; k < rows_; ++k)
      if (alive(static_cast<std::size_t>(k))) live.push_back(k);
    return live;
  }

  Mat basis_matrix(const std::vector<Eigen::Index>& live) const {
    const auto size = static_cast<Eigen::Index>(live.size());
    Mat b(size, size);
    for (Eigen::Index i = 0; i < size; ++i)
      for (Eigen::Index c = 0; c < size; ++c)
        b(i, c) = m_(live[static_cast<std::size_t>(i)], basis_[static_cast<std::size_t>(live[static_cast<std::size_t>(c)])]);
    return b;
  }

  // Rebuilds the tableau as B^{-1} [M r] from the original data to shed pivoting drift.
  void refactor() {
    const std::vector<Eigen::Index> live = live_rows();
    const auto size = static_cast<Eigen::Index>(live.size());
    if (size == 0) return;
    Mat data(size, cols_ + 1);
    for (Eigen::Index i = 0; i < size; ++i) {
      const Eigen::Index row = live[static_cast<std::size_t>(i)];
      data.row(i).head(cols_) = m_.row(row);
      data(i, cols_) = r_(row) + shift_(row);
    }
    const Eigen::FullPivLU<Mat> lu(basis_matrix(live));
    if (!lu.isInvertible()) return;
    const Mat rebuilt = lu.solve(data);
    for (Eigen::Index c = 0; c < size; ++c) t_.row(live[static_cast<std::size_t>(c)]) = rebuilt.row(c);
    set_objective(cost_);
  }

  // Bound shifting against stalling: raises zero basic values by small random amounts, which
  // is a right-hand side change r -> r + B delta recorded in shift_.
  void perturb(const NumericsConfig& cfg) {
    const std::vector<Eigen::Index> live = live_rows();
    const auto size = static_cast<Eigen::Index>(live.size());
    if (size == 0) return;
    double scale = 1.0;
    for (Eigen::Index row : live) scale = std::max(scale, std::abs(t_(row, cols_)));
    std::uniform_real_distribution<double> u(1.0, 2.0);
    Vec delta = Vec::Zero(size);
    for (Eigen::Index i = 0; i < size; ++i)
      if (t_(live[static_cast<std::size_t>(i)], cols_) <= cfg.feasibility_tol)
        delta(i) = 100.0 * cfg.feasibility_tol * scale * u(rng_);
    const Vec moved = basis_matrix(live) * delta;
    for (Eigen::Index i = 0; i < size; ++i) {
      shift_(live[static_cast<std::size_t>(i)]) += moved(i);
      t_(live[static_cast<std::size_t>(i)], cols_) += delta(i);
    }
    set_objective(cost_);
    shifted_ = true;
  }

  // Restores the true right-hand side; the basis stays primal feasible up to tolerance.
  void unshift(const NumericsConfig& cfg) {
    shift_.setZero();
    shifted_ = false;
    refactor();
    double scale = 1.0;
    for (Eigen::Index i = 0; i < rows_; ++i) scale = std::max(scale, std::abs(r_(i)));
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (!alive(static_cast<std::size_t>(i)) || t_(i, cols_) >= 0.0) continue;
      if (t_(i, cols_) < -1e3 * cfg.feasibility_tol * scale)
        throw SolverError("simplex: basis lost feasibility when removing the anti-stalling shift", 0);
      t_(i, cols_) = 0.0;
    }
  }

  // Returns -1 on optimality, otherwise the entering column of an unbounded ray.
  Eigen::Index optimize(const std::vector<char>& allowed, const NumericsConfig& cfg, int& iterations,
                        bool& bland_engaged) {
    int degenerate = 0;
    bool bland = false;
    int since_refactor = 0;
    int shift_rounds = 0;
    bool clean = false;
    for (;;) {
      if (since_refactor >= 64) {
        refactor();
        since_refactor = 0;
        clean = true;
      }
      if (++iterations > cfg.max_iterations)
        throw SolverError(bland ? "simplex: iteration cap reached with Bland's rule engaged"
                                : "simplex: iteration cap reached",
                          iterations);
      Eigen::Index enter = -1;
      double best = -cfg.optimality_tol;
      for (Eigen::Index j = 0; j < cols_; ++j) {
        if (!allowed[static_cast<std::size_t>(j)]) continue;
        const double d = t_(rows_, j);
        if (bland) {
          if (d < -cfg.optimality_tol) {
            enter = j;
            break;
          }
        } else if (d < best) {
          best = d;
          enter = j;
        }
      }
      if (enter < 0) {
        if (shifted_) {
          unshift(cfg);
          since_refactor = 0;
          clean = true;
          continue;
        }
        if (clean) return -1;
        refactor();
        since_refactor = 0;
        clean = true;
        continue;
      }

      // Harris two-pass ratio test: bound the step with relaxed right-hand sides, then take the
      // largest pivot inside the bound. Bland's rule instead takes the smallest index at the minimum.
      Eigen::Index leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      double bound = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < rows_; ++i) {
        if (!alive(static_cast<std::size_t>(i))) continue;
        const double coef = t_(i, enter);
        if (coef <= cfg.pivot_tol) continue;
        bound = std::min(bound, (std::max(0.0, t_(i, cols_)) + cfg.feasibility_tol) / coef);
      }
      for (Eigen::Index i = 0; i < rows_; ++i) {
        if (!alive(static_cast<std::size_t>(i))) continue;
        const double coef = t_(i, enter);
        if (coef <= cfg.pivot_tol) continue;
        const double q = std::max(0.0, t_(i, cols_)) / coef;
        if (q > bound) continue;
        bool better = leave < 0;
        if (!better && bland)
          better = q < ratio - 1e-12 ||
                   (q <= ratio + 1e-12 && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)]);
        else if (!better)
          better = coef > t_(leave, enter);
        if (better) {
          ratio = q;
          leave = i;
        }
      }
      if (leave < 0) {
        if (shifted_) {
          unshift(cfg);
          since_refactor = 0;
          clean = true;
          continue;
        }
        if (clean) return enter;
        refactor();
        since_refactor = 0;
        clean = true;
        continue;
      }
      // A pivot counts as progress only if the objective drops by more than noise. Bland is used
      // while stalled; it terminates every degenerate run but is slow as a global rule.
      const double gain = -ratio * t_(rows_, enter);
      if (gain <= 1e-9 * (1.0 + std::abs(objective_value()))) {
        if (++degenerate > cfg.degenerate_switch && !bland) {
          degenerate = 0;
          if (shift_rounds < 8) {
            ++shift_rounds;
            perturb(cfg);
            continue;
          }
          bland = true;
          bland_engaged = true;
        }
      } else {
        degenerate = 0;
        bland = false;
      }
      pivot(leave, enter);
      ++since_refactor;
      clean = false;
    }
  }

  Vec basic_solution() const {
    Vec z = Vec::Zero(cols_);
    for (Eigen::Index k = 0; k < rows_; ++k)
      if (alive(static_cast<std::size_t>(k))) z(basis_[static_cast<std::size_t>(k)]) = t_(k, cols_);
    return z;
  }

 private:
  Eigen::Index rows_;
  Eigen::Index cols_;
  Mat t_;
  Mat m_;
  Vec r_;
  Vec shift_;
  Vec cost_;
  bool shifted_ = false;
  std::mt19937_64 rng_{0x5eed};
  std::vector<char> alive_;
  std::vector<Eigen::Index> basis_;
};

// Solves B^T y = c_B for the alive rows of the original standard form.
Vec basis_duals(const Mat& m, const Tableau& tab, const Vec& cost) {
  std::vector<Eigen::Index> rows;
  for (Eigen::Index k = 0; k < tab.rows(); ++k)
    if (tab.alive(static_cast<std::size_t>(k))) rows.push_back(k);
  const auto size = static_cast<Eigen::Index>(rows.size());
  Mat basis(size, size);
  Vec cb(size);
  for (Eigen::Index c = 0; c < size; ++c) {
    const Eigen::Index col = tab.basic(static_cast<std::size_t>(rows[static_cast<std::size_t>(c)]));
    for (Eigen::Index r = 0; r < size; ++r) basis(r, c) = m(rows[static_cast<std::size_t>(r)], col);
    cb(c) = cost(col);
  }
  Vec y_alive = size > 0 ? Vec(basis.transpose().fullPivLu().solve(cb)) : Vec(0);
  Vec y = Vec::Zero(tab.rows());
  for (Eigen::Index r = 0; r < size; ++r) y(rows[static_cast<std::size_t>(r)]) = y_alive(r);
  return y;
}

}  // namespace

LpResult solve_lp(const LinearProgram& lp, const NumericsConfig& cfg) {
  const Polyhedron& poly = lp.constraints;
  const Eigen::Index n = poly.dim();
  if (lp.c.size() != n) throw DimensionMismatch("solve_lp: objective width differs from constraints");
  const Vec cost_x = lp.sense == Sense::maximize ? Vec(-lp.c) : lp.c;

  LpResult res;
  res.ineq_multipliers = Vec::Zero(poly.A.rows());
  res.eq_multipliers = Vec::Zero(poly.E.rows());

  std::vector<ScaledRow> rows;
  for (Eigen::Index i = 0; i < poly.A.rows(); ++i) {
    const double nrm = poly.A.row(i).norm();
    if (nrm <= 1e-14) {
      if (poly.b(i) < -cfg.feasibility_tol) {
        res.status = SolveStatus::infeasible;
        res.ineq_multipliers(i) = 1.0;
        return res;
      }
      continue;
    }
    rows.push_back({poly.A.row(i).transpose() / nrm, poly.b(i) / nrm, false, i, nrm});
  }
  for (Eigen::Index i = 0; i < poly.E.rows(); ++i) {
    const double nrm = poly.E.row(i).norm();
    if (nrm <= 1e-14) {
      if (std::abs(poly.f(i)) > cfg.feasibility_tol) {
        res.status = SolveStatus::infeasible;
        res.eq_multipliers(i) = poly.f(i) > 0 ? -1.0 : 1.0;
        return res;
      }
      continue;
    }
    rows.push_back({poly.E.row(i).transpose() / nrm, poly.f(i) / nrm, true, i, nrm});
  }

  const auto m = static_cast<Eigen::Index>(rows.size());
  Eigen::Index mi = 0;
  for (const auto& r : rows) mi += r.equality ? 0 : 1;
  const Eigen::Index slack0 = 2 * n;
  const Eigen::Index art0 = 2 * n + mi;
  const Eigen::Index ncols = art0 + m;

  Mat std_m = Mat::Zero(m, ncols);
  Vec rhs(m);
  std::vector<double> sigma(static_cast<std::size_t>(m));
  Eigen::Index slack = 0;
  for (Eigen::Index k = 0; k < m; ++k) {
    const auto& r = rows[static_cast<std::size_t>(k)];
    const double s = r.b >= 0 ? 1.0 : -1.0;
    sigma[static_cast<std::size_t>(k)] = s;
    std_m.block(k, 0, 1, n) = s * r.a.transpose();
    std_m.block(k, n, 1, n) = -s * r.a.transpose();
    if (!r.equality) std_m(k, slack0 + slack++) = s;
    std_m(k, art0 + k) = 1.0;
    rhs(k) = s * r.b;
  }

  Tableau tab(std_m, rhs);
  for (Eigen::Index k = 0; k < m; ++k) tab.set_basis(static_cast<std::size_t>(k), art0 + k);

  auto to_original = [&](const Vec& y, Vec& ineq, Vec& eq) {
    ineq = Vec::Zero(poly.A.rows());
    eq = Vec::Zero(poly.E.rows());
    for (Eigen::Index k = 0; k < m; ++k) {
      const auto& r = rows[static_cast<std::size_t>(k)];
      const double w = -sigma[static_cast<std::size_t>(k)] * y(k) / r.norm;
      if (r.equality)
        eq(r.source) = w;
      else
        ineq(r.source) = std::max(0.0, w);
    }
  };

  // Phase one.
  Vec phase1 = Vec::Zero(ncols);
  phase1.tail(m).setOnes();
  tab.set_objective(phase1);
  std::vector<char> all(static_cast<std::size_t>(ncols), 1);
  tab.optimize(all, cfg, res.iterations, res.bland_engaged);
  const double infeas = tab.objective_value();
  if (infeas > cfg.feasibility_tol * std::max(1.0, rhs.size() > 0 ? rhs.lpNorm<Eigen::Infinity>() : 0.0)) {
    res.status = SolveStatus::infeasible;
    const Vec y = basis_duals(std_m, tab, phase1);
    to_original(y, res.ineq_multipliers, res.eq_multipliers);
    return res;
  }

  // Drive artificials out of the basis; rows where that fails are redundant.
  for (Eigen::Index k = 0; k < m; ++k) {
    if (tab.basic(static_cast<std::size_t>(k)) < art0) continue;
    Eigen::Index best = -1;
    double mag = 1e-9;
    for (Eigen::Index j = 0; j < art0; ++j) {
      if (std::abs(tab.at(k, j)) > mag) {
        mag = std::abs(tab.at(k, j));
        best = j;
      }
    }
    if (best >= 0)
      tab.pivot(k, best);
    else
      tab.kill(static_cast<std::size_t>(k));
  }

  // Phase two.
  Vec phase2 = Vec::Zero(ncols);
  phase2.head(n) = cost_x;
  phase2.segment(n, n) = -cost_x;
  tab.set_objective(phase2);
  std::vector<char> allowed(static_cast<std::size_t>(ncols), 1);
  for (Eigen::Index j = art0; j < ncols; ++j) allowed[static_cast<std::size_t>(j)] = 0;
  const Eigen::Index enter = tab.optimize(allowed, cfg, res.iterations, res.bland_engaged);

  const Vec z = tab.basic_solution();
  res.x = z.head(n) - z.segment(n, n);
  res.value = lp.c.dot(res.x);
  {
    // A basic solution that misses the constraints in absolute terms is not reported.
    double scale = 1.0;
    if (poly.b.size() > 0) scale = std::max(scale, poly.b.lpNorm<Eigen::Infinity>());
    if (poly.f.size() > 0) scale = std::max(scale, poly.f.lpNorm<Eigen::Infinity>());
    double viol = 0.0;
    if (poly.A.rows() > 0) viol = std::max(viol, (poly.A * res.x - poly.b).maxCoeff());
    if (poly.E.rows() > 0) viol = std::max(viol, (poly.E * res.x - poly.f).lpNorm<Eigen::Infinity>());
    if (viol > 1e-6 * scale)
      throw SolverError("simplex: solution violates the constraints by " + std::to_string(viol) +
                            " (ill-conditioned instance)",
                        res.iterations);
  }
  if (enter >= 0) {
    Vec dz = Vec::Zero(ncols);
    dz(enter) = 1.0;
    for (Eigen::Index k = 0; k < m; ++k)
      if (tab.alive(static_cast<std::size_t>(k))) dz(tab.basic(static_cast<std::size_t>(k))) -= tab.at(k, enter);
    res.ray = dz.head(n) - dz.segment(n, n);
    const double nrm = res.ray.norm();
    if (nrm > 0) res.ray /= nrm;
    res.status = SolveStatus::unbounded;
    return res;
  }
  res.status = SolveStatus::optimal;
  const Vec y = basis_duals(std_m, tab, phase2);
  Vec ineq, eq;
  to_original(y, ineq, eq);
  // Multipliers belong to the minimization form of the objective actually solved.
  res.ineq_multipliers = ineq;
  res.eq_multipliers = eq;
  return res;
}

bool verify_farkas(const Polyhedron& p, const Vec& ineq, const Vec& eq, double tol) {
  if (ineq.size() != p.A.rows() || eq.size() != p.E.rows()) return false;
  if (ineq.size() > 0 && ineq.minCoeff() < -tol) return false;
  Vec comb = Vec::Zero(p.dim());
  if (p.A.rows() > 0) comb += p.A.transpose() * ineq;
  if (p.E.rows() > 0) comb += p.E.transpose() * eq;
  const double gap = (p.b.size() > 0 ? p.b.dot(ineq) : 0.0) + (p.f.size() > 0 ? p.f.dot(eq) : 0.0);
  const double scale = std::max(1.0, ineq.lpNorm<1>() + eq.lpNorm<1>());
  return comb.norm() <= tol * scale && gap < -tol * scale * 1e-3;
}

LpResult find_feasible_point(const Polyhedron& p, const NumericsConfig& cfg) {
  LinearProgram lp{Vec::Zero(p.dim()), p, Sense::minimize};
  return solve_lp(lp, cfg);
}

QpResult solve_qp(const QuadraticProgram& qp, const NumericsConfig& cfg) {
  const Eigen::Index n = qp.constraints.dim();
  if (qp.Q.rows() != n || qp.Q.cols() != n || qp.c.size() != n)
    throw DimensionMismatch("solve_qp: Q/c dimensions differ from constraints");
  const double qscale = std::max(1.0, qp.Q.cwiseAbs().maxCoeff());
  if ((qp.Q - qp.Q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * qscale)
    throw SolverError("solve_qp: Q is not symmetric");
  const Mat q = 0.5 * (qp.Q + qp.Q.transpose());

  // Work on a row-normalized copy of the constraints.
  Polyhedron poly(n);
  for (Eigen::Index i = 0; i < qp.constraints.A.rows(); ++i) {
    const double nrm = qp.constraints.A.row(i).norm();
    if (nrm <= 1e-14) {
      if (qp.constraints.b(i) < -cfg.feasibility_tol) return QpResult{};
      continue;
    }
    poly.add_inequality(qp.constraints.A.row(i).transpose() / nrm, qp.constraints.b(i) / nrm);
  }
  for (Eigen::Index i = 0; i < qp.constraints.E.rows(); ++i) {
    const double nrm = qp.constraints.E.row(i).norm();
    if (nrm <= 1e-14) {
      if (std::abs(qp.constraints.f(i)) > cfg.feasibility_tol) return QpResult{};
      continue;
    }
    poly.add_equality(qp.constraints.E.row(i).transpose() / nrm, qp.constraints.f(i) / nrm);
  }

  {
    const Mat zn = poly.E.rows() > 0 ? linalg::null_space(poly.E, 1e-10) : Mat(Mat::Identity(n, n));
    const double lmin = linalg::min_eigenvalue_on(q, zn);
    if (lmin < -1e-8 * qscale) throw SolverError("solve_qp: objective is not convex on the feasible set", 0);
  }

  QpResult res;
  LpResult start = find_feasible_point(poly, cfg);
  if (start.status == SolveStatus::infeasible) {
    res.status = SolveStatus::infeasible;
    return res;
  }
  Vec x = start.x;
  const Eigen::Index mi = poly.A.rows();

  std::vector<Eigen::Index> work;
  auto working_matrix = [&]() {
    Mat aw(poly.E.rows() + static_cast<Eigen::Index>(work.size()), n);
    aw.topRows(poly.E.rows()) = poly.E;
    for (std::size_t k = 0; k < work.size(); ++k)
      aw.row(poly.E.rows() + static_cast<Eigen::Index>(k)) = poly.A.row(work[k]);
    return aw;
  };
  {
    int current = linalg::rank(poly.E, 1e-10);
    for (Eigen::Index i = 0; i < mi; ++i) {
      if (std::abs(poly.A.row(i).dot(x) - poly.b(i)) > 1e-9 * std::max(1.0, x.norm())) continue;
      work.push_back(i);
      const int r = linalg::rank(working_matrix(), 1e-10);
      if (r > current)
        current = r;
      else
        work.pop_back();
    }
  }

  Vec multipliers;
  for (int iter = 0;; ++iter) {
    if (iter > cfg.max_iterations) throw SolverError("solve_qp: iteration cap reached", iter);
    res.iterations = iter;
    const Vec g = q * x + qp.c;
    const Mat aw = working_matrix();
    const Mat z = linalg::null_space(aw, 1e-10);
    Vec p = Vec::Zero(n);
    bool ray = false;
    if (z.cols() > 0) {
      Mat hr = z.transpose() * q * z;
      hr = 0.5 * (hr + hr.transpose()).eval();
      const Vec gr = z.transpose() * g;
      Eigen::SelfAdjointEigenSolver<Mat> es(hr);
      const Vec& lam = es.eigenvalues();
      const double lam_scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
      if (lam(0) < -1e-8 * lam_scale) throw SolverError("solve_qp: objective is not convex on the feasible set", iter);
      const Vec coef = es.eigenvectors().transpose() * gr;
      Vec pr = Vec::Zero(z.cols());
      Vec dr = Vec::Zero(z.cols());
      const double curv = 1e-10 * lam_scale;
      for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (lam(i) > curv)
          pr -= coef(i) / lam(i) * es.eigenvectors().col(i);
        else
          dr -= coef(i) * es.eigenvectors().col(i);
      }
      if (dr.norm() > 1e-10 * (1.0 + g.norm())) {
        ray = true;
        p = z * dr;
      } else {
        p = z * pr;
      }
    }

    if (!ray && p.norm() <= 1e-12 * (1.0 + x.norm())) {
      Vec lam = Vec::Zero(aw.rows());
      if (aw.rows() > 0) lam = aw.transpose().colPivHouseholderQr().solve(-g);
      Eigen::Index worst = -1;
      double most = -cfg.kkt_tol * (1.0 + g.norm());
      for (std::size_t k = 0; k < work.size(); ++k) {
        const double l = lam(poly.E.rows() + static_cast<Eigen::Index>(k));
        if (l < most) {
          most = l;
          worst = static_cast<Eigen::Index>(k);
        }
      }
      if (worst < 0) {
        multipliers = lam;
        break;
      }
      work.erase(work.begin() + worst);
      continue;
    }

    double alpha = ray ? std::numeric_limits<double>::infinity() : 1.0;
    Eigen::Index block = -1;
    const double pn = p.norm();
    for (Eigen::Index i = 0; i < mi; ++i) {
      if (std::find(work.begin(), work.end(), i) != work.end()) continue;
      const double ap = poly.A.row(i).dot(p);
      if (ap <= 1e-12 * pn) continue;
      const double s = std::max(0.0, (poly.b(i) - poly.A.row(i).dot(x)) / ap);
      if (s < alpha) {
        alpha = s;
        block = i;
      }
    }
    if (ray && block < 0) {
      res.status = SolveStatus::unbounded;
      res.x = x;
      res.ray = p / pn;
      res.value = -std::numeric_limits<double>::infinity();
      return res;
    }
    x += alpha * p;
    if (block >= 0) work.push_back(block);
  }

  res.status = SolveStatus::optimal;
  res.x = x;
  res.value = 0.5 * x.dot(q * x) + qp.c.dot(x);
  Vec stationarity = q * x + qp.c;
  const Mat aw = working_matrix();
  if (aw.rows() > 0) stationarity += aw.transpose() * multipliers;
  double primal = 0.0;
  for (Eigen::Index i = 0; i < mi; ++i) primal = std::max(primal, poly.A.row(i).dot(x) - poly.b(i));
  for (Eigen::Index i = 0; i < poly.E.rows(); ++i) primal = std::max(primal, std::abs(poly.E.row(i).dot(x) - poly.f(i)));
  res.kkt_residual = std::max(stationarity.norm(), primal);
  return res;
}

}  // namespace conelyap
