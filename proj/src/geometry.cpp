#include "conelyap/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "conelyap/errors.hpp"

namespace conelyap {

namespace {

GeometryTolerances& tolerance_slot() {
  static GeometryTolerances tol{};
  return tol;
}

}  // namespace

const GeometryTolerances& default_tolerances() { return tolerance_slot(); }

void set_default_tolerances(const GeometryTolerances& tol) { tolerance_slot() = tol; }

namespace {

Mat empty_rows(Eigen::Index n) { return Mat(0, n); }

Mat shaped(const Mat& m, Eigen::Index n) {
  if (m.rows() == 0) return empty_rows(n);
  if (m.cols() != n) throw DimensionMismatch("cone rows have width " + std::to_string(m.cols()) + ", expected " + std::to_string(n));
  return m;
}

Eigen::Index infer_dim(const Mat& a, const Mat& b) {
  if (a.rows() > 0 && b.rows() > 0 && a.cols() != b.cols())
    throw DimensionMismatch("cone: representation lists have different widths");
  if (a.rows() > 0) return a.cols();
  if (b.rows() > 0) return b.cols();
  return std::max(a.cols(), b.cols());
}

void require_same_dim(const PolyCone& a, const PolyCone& b, const char* op) {
  if (a.dim() != b.dim())
    throw DimensionMismatch(std::string(op) + ": cones live in R^" + std::to_string(a.dim()) + " and R^" +
                            std::to_string(b.dim()));
}

const PolyCone& canonical(const PolyCone& c, PolyCone& storage) {
  if (c.materialized()) return c;
  storage = dd_convert(c);
  return storage;
}

// Pointed double description in R^r for {w : B w <= 0}, B of full column rank.
Mat pointed_double_description(const Mat& b, const GeometryTolerances& tol) {
  const Eigen::Index r = b.cols();
  const Eigen::Index m = b.rows();
  const double eps = tol.dd_zero;

  Eigen::ColPivHouseholderQR<Mat> qr(b.transpose());
  const auto& perm = qr.colsPermutation().indices();
  std::vector<Eigen::Index> initial(static_cast<std::size_t>(r));
  std::vector<char> processed(static_cast<std::size_t>(m), 0);
  Mat sel(r, r);
  for (Eigen::Index i = 0; i < r; ++i) {
    initial[static_cast<std::size_t>(i)] = perm(i);
    processed[static_cast<std::size_t>(perm(i))] = 1;
    sel.row(i) = b.row(perm(i));
  }
  const Mat inv = sel.inverse();

  std::vector<Vec> rays;
  std::vector<std::vector<char>> tight;
  for (Eigen::Index i = 0; i < r; ++i) {
    Vec w = -inv.col(i);
    rays.push_back(w / w.norm());
    std::vector<char> z(static_cast<std::size_t>(m), 0);
    for (Eigen::Index k = 0; k < r; ++k)
      if (k != i) z[static_cast<std::size_t>(initial[static_cast<std::size_t>(k)])] = 1;
    tight.push_back(std::move(z));
  }

  std::vector<Eigen::Index> done(initial.begin(), initial.end());
  for (Eigen::Index j = 0; j < m; ++j) {
    if (processed[static_cast<std::size_t>(j)]) continue;
    const Vec a = b.row(j).transpose();
    std::vector<double> val(rays.size());
    std::vector<std::size_t> pos, neg;
    for (std::size_t k = 0; k < rays.size(); ++k) {
      double v = a.dot(rays[k]);
      if (std::abs(v) <= eps) v = 0.0;
      val[k] = v;
      if (v > 0) pos.push_back(k);
      if (v < 0) neg.push_back(k);
    }
    processed[static_cast<std::size_t>(j)] = 1;
    if (pos.empty()) {
      for (std::size_t k = 0; k < rays.size(); ++k)
        if (val[k] == 0.0) tight[k][static_cast<std::size_t>(j)] = 1;
      done.push_back(j);
      continue;
    }

    std::vector<Vec> next;
    std::vector<std::vector<char>> next_tight;
    for (std::size_t k = 0; k < rays.size(); ++k) {
      if (val[k] > 0) continue;
      if (val[k] == 0.0) tight[k][static_cast<std::size_t>(j)] = 1;
      next.push_back(rays[k]);
      next_tight.push_back(tight[k]);
    }
    for (std::size_t p : pos) {
      for (std::size_t q : neg) {
        std::vector<Eigen::Index> common;
        for (Eigen::Index c : done)
          if (tight[p][static_cast<std::size_t>(c)] && tight[q][static_cast<std::size_t>(c)]) common.push_back(c);
        if (static_cast<Eigen::Index>(common.size()) < r - 2) continue;
        if (r > 2) {
          Mat sub(static_cast<Eigen::Index>(common.size()), r);
          for (std::size_t c = 0; c < common.size(); ++c) sub.row(static_cast<Eigen::Index>(c)) = b.row(common[c]);
          if (linalg::rank(sub, 10 * eps) != r - 2) continue;
        }
        Vec w = val[p] * rays[q] - val[q] * rays[p];
        const double nrm = w.norm();
        if (nrm <= eps) continue;
        next.push_back(w / nrm);
        std::vector<char> z(static_cast<std::size_t>(m), 0);
        for (Eigen::Index c : common) z[static_cast<std::size_t>(c)] = 1;
        z[static_cast<std::size_t>(j)] = 1;
        next_tight.push_back(std::move(z));
        if (next.size() > tol.max_rays)
          throw RepresentationBlowup("double description: more than " + std::to_string(tol.max_rays) +
                                     " intermediate rays");
      }
    }
    rays = std::move(next);
    tight = std::move(next_tight);
    done.push_back(j);
  }

  // Drop numerical duplicates.
  std::vector<Vec> unique;
  for (const auto& w : rays) {
    bool dup = false;
    for (const auto& u : unique)
      if ((u - w).norm() <= 1e3 * eps) {
        dup = true;
        break;
      }
    if (!dup) unique.push_back(w);
  }
  return linalg::from_rows(unique, r);
}

}  // namespace

DoubleDescription double_description(const Mat& inequalities, const Mat& equalities, const GeometryTolerances& tol) {
  const Eigen::Index n = infer_dim(inequalities, equalities);
  const Mat a = shaped(inequalities, n);
  const Mat e = shaped(equalities, n);

  const Mat basis = e.rows() > 0 ? linalg::null_space(e, tol.dd_zero) : Mat(Mat::Identity(n, n));
  const Eigen::Index k = basis.cols();
  DoubleDescription out{empty_rows(n), empty_rows(n)};
  if (k == 0) return out;

  Mat ap = a.rows() > 0 ? Mat(a * basis) : Mat(0, k);
  ap = linalg::normalized_rows(ap, 1e-10);
  if (ap.rows() == 0) ap.resize(0, k);

  const Mat lz = linalg::null_space(ap, tol.dd_zero);
  out.lines = (basis * lz).transpose();
  const Mat p = linalg::row_space(ap, tol.dd_zero);
  if (p.cols() == 0) return out;

  Mat bp = linalg::normalized_rows(ap * p, 1e-12);
  const Mat w = pointed_double_description(bp, tol);
  Mat rays = w.rows() > 0 ? Mat((basis * p * w.transpose()).transpose()) : empty_rows(n);
  out.rays = linalg::normalized_rows(rays, 1e-14);
  if (out.rays.rows() == 0) out.rays = empty_rows(n);
  return out;
}

Mat PolyCone::generator_list() const {
  PolyCone storage;
  const PolyCone& c = has_v_ ? *this : canonical(*this, storage);
  Mat out(c.rays_.rows() + 2 * c.lines_.rows(), dim_);
  out.topRows(c.rays_.rows()) = c.rays_;
  for (Eigen::Index i = 0; i < c.lines_.rows(); ++i) {
    out.row(c.rays_.rows() + 2 * i) = c.lines_.row(i);
    out.row(c.rays_.rows() + 2 * i + 1) = -c.lines_.row(i);
  }
  return out;
}

PolyCone PolyCone::from_generators(const Mat& rays, const Mat& lineality) {
  PolyCone c;
  c.dim_ = infer_dim(rays, lineality);
  c.rays_ = shaped(rays, c.dim_);
  c.lines_ = shaped(lineality, c.dim_);
  c.ineq_ = empty_rows(c.dim_);
  c.eq_ = empty_rows(c.dim_);
  c.has_v_ = true;
  return c;
}

PolyCone PolyCone::from_generators(const std::vector<Vec>& rays, Eigen::Index dim) {
  for (const auto& r : rays)
    if (r.size() != dim) throw DimensionMismatch("from_generators: ray width");
  return from_generators(linalg::from_rows(rays, dim), empty_rows(dim));
}

PolyCone PolyCone::from_constraints(const Mat& inequalities, const Mat& equalities) {
  PolyCone c;
  c.dim_ = infer_dim(inequalities, equalities);
  c.ineq_ = shaped(inequalities, c.dim_);
  c.eq_ = shaped(equalities, c.dim_);
  c.rays_ = empty_rows(c.dim_);
  c.lines_ = empty_rows(c.dim_);
  c.has_h_ = true;
  return c;
}

PolyCone PolyCone::from_constraints(const std::vector<Vec>& inequalities, Eigen::Index dim) {
  for (const auto& r : inequalities)
    if (r.size() != dim) throw DimensionMismatch("from_constraints: row width");
  return from_constraints(linalg::from_rows(inequalities, dim), empty_rows(dim));
}

PolyCone PolyCone::subspace(const Mat& basis, Eigen::Index dim) {
  const Mat b = shaped(basis, dim);
  PolyCone c;
  c.dim_ = dim;
  const Mat cols = b.rows() > 0 ? linalg::row_space(b) : Mat(dim, 0);
  c.lines_ = cols.cols() > 0 ? Mat(cols.transpose()) : empty_rows(dim);
  const Mat comp = cols.cols() > 0 ? linalg::null_space(cols.transpose()) : Mat(Mat::Identity(dim, dim));
  c.eq_ = comp.cols() > 0 ? Mat(comp.transpose()) : empty_rows(dim);
  c.rays_ = empty_rows(dim);
  c.ineq_ = empty_rows(dim);
  c.has_v_ = c.has_h_ = true;
  return c;
}

PolyCone PolyCone::whole_space(Eigen::Index n) { return subspace(Mat::Identity(n, n), n); }

PolyCone PolyCone::origin(Eigen::Index n) { return subspace(empty_rows(n), n); }

PolyCone PolyCone::nonnegative_orthant(Eigen::Index n) {
  PolyCone c;
  c.dim_ = n;
  c.rays_ = Mat::Identity(n, n);
  c.lines_ = empty_rows(n);
  c.ineq_ = -Mat::Identity(n, n);
  c.eq_ = empty_rows(n);
  c.has_v_ = c.has_h_ = true;
  return c;
}

PolyCone dd_convert(const PolyCone& cone, const GeometryTolerances& tol) {
  if (cone.materialized()) return cone;
  PolyCone out;
  out.dim_ = cone.dim_;
  if (cone.has_h_) {
    const auto v = double_description(cone.ineq_, cone.eq_, tol);
    const auto h = double_description(v.rays, v.lines, tol);
    out.rays_ = v.rays;
    out.lines_ = v.lines;
    out.ineq_ = h.rays;
    out.eq_ = h.lines;
  } else if (cone.has_v_) {
    const auto h = double_description(cone.rays_, cone.lines_, tol);
    const auto v = double_description(h.rays, h.lines, tol);
    out.rays_ = v.rays;
    out.lines_ = v.lines;
    out.ineq_ = h.rays;
    out.eq_ = h.lines;
  } else {
    return PolyCone::whole_space(cone.dim_);
  }
  out.has_v_ = out.has_h_ = true;
  return out;
}

PolyCone polar(const PolyCone& cone, PolarSign sign) {
  PolyCone out;
  out.dim_ = cone.dim_;
  out.has_v_ = cone.has_h_;
  out.has_h_ = cone.has_v_;
  out.rays_ = cone.ineq_;
  out.lines_ = cone.eq_;
  out.ineq_ = cone.rays_;
  out.eq_ = cone.lines_;
  if (!out.has_v_) {
    out.rays_ = empty_rows(out.dim_);
    out.lines_ = empty_rows(out.dim_);
  }
  if (!out.has_h_) {
    out.ineq_ = empty_rows(out.dim_);
    out.eq_ = empty_rows(out.dim_);
  }
  PolyCone c = dd_convert(out);
  if (sign == PolarSign::positive) return negate(c);
  return c;
}

PolyCone orthogonal_transform(const PolyCone& cone, const Mat& u) {
  if (u.rows() != cone.dim_ || u.cols() != cone.dim_) throw DimensionMismatch("orthogonal_transform: matrix size");
  PolyCone out = cone;
  const Mat ut = u.transpose();
  if (out.rays_.rows() > 0) out.rays_ = out.rays_ * ut;
  if (out.lines_.rows() > 0) out.lines_ = out.lines_ * ut;
  if (out.ineq_.rows() > 0) out.ineq_ = out.ineq_ * ut;
  if (out.eq_.rows() > 0) out.eq_ = out.eq_ * ut;
  return out;
}

PolyCone negate(const PolyCone& cone) {
  return orthogonal_transform(cone, -Mat::Identity(cone.dim(), cone.dim()));
}

PolyCone lineality(const PolyCone& cone) {
  PolyCone s;
  const PolyCone& c = canonical(cone, s);
  return PolyCone::subspace(c.lineality_basis(), c.dim());
}

PolyCone span(const PolyCone& cone) {
  PolyCone s;
  const PolyCone& c = canonical(cone, s);
  return PolyCone::subspace(linalg::vstack(c.rays(), c.lineality_basis()), c.dim());
}

PolyCone sum(const PolyCone& a, const PolyCone& b) {
  require_same_dim(a, b, "sum");
  PolyCone sa, sb;
  const PolyCone& ca = a.has_generators() ? a : canonical(a, sa);
  const PolyCone& cb = b.has_generators() ? b : canonical(b, sb);
  return dd_convert(PolyCone::from_generators(linalg::vstack(ca.rays(), cb.rays()),
                                              linalg::vstack(ca.lineality_basis(), cb.lineality_basis())));
}

PolyCone intersect(const PolyCone& a, const PolyCone& b) {
  require_same_dim(a, b, "intersect");
  PolyCone sa, sb;
  const PolyCone& ca = a.has_constraints() ? a : canonical(a, sa);
  const PolyCone& cb = b.has_constraints() ? b : canonical(b, sb);
  return dd_convert(PolyCone::from_constraints(linalg::vstack(ca.inequalities(), cb.inequalities()),
                                               linalg::vstack(ca.equalities(), cb.equalities())));
}

PolyCone product(const PolyCone& a, const PolyCone& b) {
  PolyCone sa, sb;
  const PolyCone& ca = canonical(a, sa);
  const PolyCone& cb = canonical(b, sb);
  const Eigen::Index na = ca.dim(), nb = cb.dim(), n = na + nb;
  auto block = [&](const Mat& ma, const Mat& mb) {
    Mat out = Mat::Zero(ma.rows() + mb.rows(), n);
    if (ma.rows() > 0) out.block(0, 0, ma.rows(), na) = ma;
    if (mb.rows() > 0) out.block(ma.rows(), na, mb.rows(), nb) = mb;
    return out;
  };
  return dd_convert(PolyCone::from_constraints(block(ca.inequalities(), cb.inequalities()),
                                               block(ca.equalities(), cb.equalities())));
}

PolyCone linear_image(const PolyCone& cone, const Mat& m) {
  if (m.cols() != cone.dim()) throw DimensionMismatch("linear_image: matrix width");
  PolyCone s;
  const PolyCone& c = cone.has_generators() ? cone : canonical(cone, s);
  const Eigen::Index out_dim = m.rows();
  Mat rays = c.rays().rows() > 0 ? Mat(c.rays() * m.transpose()) : empty_rows(out_dim);
  Mat lines = c.lineality_basis().rows() > 0 ? Mat(c.lineality_basis() * m.transpose()) : empty_rows(out_dim);
  return dd_convert(PolyCone::from_generators(shaped(rays, out_dim), shaped(lines, out_dim)));
}

PolyCone preimage(const PolyCone& cone, const Mat& m) {
  if (m.rows() != cone.dim()) throw DimensionMismatch("preimage: matrix height");
  PolyCone s;
  const PolyCone& c = cone.has_constraints() ? cone : canonical(cone, s);
  const Eigen::Index in_dim = m.cols();
  Mat ineq = c.inequalities().rows() > 0 ? Mat(c.inequalities() * m) : empty_rows(in_dim);
  Mat eq = c.equalities().rows() > 0 ? Mat(c.equalities() * m) : empty_rows(in_dim);
  return dd_convert(PolyCone::from_constraints(shaped(ineq, in_dim), shaped(eq, in_dim)));
}

bool contains(const PolyCone& cone, const Vec& x, double tol) {
  if (x.size() != cone.dim()) throw DimensionMismatch("contains: point dimension");
  PolyCone s;
  const PolyCone& c = cone.has_constraints() ? cone : canonical(cone, s);
  const double scale = tol * std::max(1.0, x.norm());
  for (Eigen::Index i = 0; i < c.inequalities().rows(); ++i)
    if (c.inequalities().row(i).dot(x) > scale * std::max(1.0, c.inequalities().row(i).norm())) return false;
  for (Eigen::Index i = 0; i < c.equalities().rows(); ++i)
    if (std::abs(c.equalities().row(i).dot(x)) > scale * std::max(1.0, c.equalities().row(i).norm())) return false;
  return true;
}

bool rel_interior_contains(const PolyCone& cone, const Vec& x, double tol) {
  PolyCone s;
  const PolyCone& c = canonical(cone, s);
  if (!contains(c, x, tol)) return false;
  const double scale = tol * std::max(1.0, x.norm());
  for (Eigen::Index i = 0; i < c.inequalities().rows(); ++i)
    if (c.inequalities().row(i).dot(x) >= -scale) return false;
  return true;
}

bool includes(const PolyCone& outer, const PolyCone& inner, double tol) {
  require_same_dim(outer, inner, "includes");
  PolyCone so, si;
  const PolyCone& o = canonical(outer, so);
  const PolyCone& i = canonical(inner, si);
  for (Eigen::Index k = 0; k < i.rays().rows(); ++k)
    if (!contains(o, i.rays().row(k).transpose(), tol)) return false;
  for (Eigen::Index k = 0; k < i.lineality_basis().rows(); ++k) {
    const Vec l = i.lineality_basis().row(k).transpose();
    if (!contains(o, l, tol) || !contains(o, -l, tol)) return false;
  }
  return true;
}

bool equals(const PolyCone& a, const PolyCone& b, double tol) {
  if (a.dim() != b.dim()) return false;
  return includes(a, b, tol) && includes(b, a, tol);
}

bool is_trivial(const PolyCone& cone) {
  PolyCone s;
  const PolyCone& c = canonical(cone, s);
  return c.rays().rows() == 0 && c.lineality_basis().rows() == 0;
}

bool is_whole_space(const PolyCone& cone) {
  PolyCone s;
  const PolyCone& c = canonical(cone, s);
  return c.inequalities().rows() == 0 && c.equalities().rows() == 0;
}

bool is_subspace(const PolyCone& cone) {
  PolyCone s;
  const PolyCone& c = canonical(cone, s);
  return c.rays().rows() == 0;
}

int span_dimension(const PolyCone& cone) {
  PolyCone s;
  const PolyCone& c = canonical(cone, s);
  return static_cast<int>(c.dim() - c.equalities().rows());
}

Polyhedron as_polyhedron(const PolyCone& cone) {
  PolyCone s;
  const PolyCone& c = cone.has_constraints() ? cone : canonical(cone, s);
  return Polyhedron(c.inequalities(), Vec::Zero(c.inequalities().rows()), c.equalities(),
                    Vec::Zero(c.equalities().rows()));
}

Vec project_point(const PolyCone& cone, const Vec& p, const NumericsConfig& cfg) {
  if (p.size() != cone.dim()) throw DimensionMismatch("project_point: point dimension");
  QuadraticProgram qp{Mat::Identity(p.size(), p.size()), -p, as_polyhedron(cone)};
  const QpResult r = solve_qp(qp, cfg);
  if (r.status != SolveStatus::optimal)
    throw SolverError("project_point: projection QP did not reach optimality (" + to_string(r.status) + ")",
                      r.iterations);
  return r.x;
}

PolyCone homogenize(const Polyhedron& p) {
  const Eigen::Index n = p.dim();
  Mat ineq(p.A.rows() + 1, n + 1);
  if (p.A.rows() > 0) {
    ineq.topLeftCorner(p.A.rows(), n) = p.A;
    ineq.block(0, n, p.A.rows(), 1) = -p.b;
  }
  ineq.row(p.A.rows()).setZero();
  ineq(p.A.rows(), n) = -1.0;
  Mat eq(p.E.rows(), n + 1);
  if (p.E.rows() > 0) {
    eq.leftCols(n) = p.E;
    eq.col(n) = -p.f;
  }
  return dd_convert(PolyCone::from_constraints(ineq, shaped(eq, n + 1)));
}

Polyhedron dehomogenize(const PolyCone& cone) {
  PolyCone s;
  const PolyCone& c = cone.has_constraints() ? cone : canonical(cone, s);
  const Eigen::Index n = c.dim() - 1;
  Polyhedron out(n);
  for (Eigen::Index i = 0; i < c.inequalities().rows(); ++i) {
    const Vec a = c.inequalities().row(i).head(n).transpose();
    const double t = c.inequalities()(i, n);
    if (a.norm() <= 1e-12 && t <= 0) continue;
    out.add_inequality(a, -t);
  }
  for (Eigen::Index i = 0; i < c.equalities().rows(); ++i) {
    const Vec e = c.equalities().row(i).head(n).transpose();
    out.add_equality(e, -c.equalities()(i, n));
  }
  return out;
}

PolyhedronVRep vertex_enumeration(const Polyhedron& p) {
  const Eigen::Index n = p.dim();
  const PolyCone k = homogenize(p);
  PolyhedronVRep out;
  std::vector<Vec> rays, lines;
  for (Eigen::Index i = 0; i < k.rays().rows(); ++i) {
    const Vec r = k.rays().row(i).transpose();
    if (r(n) > 1e-9)
      out.points.push_back(r.head(n) / r(n));
    else
      rays.push_back(r.head(n).normalized());
  }
  for (Eigen::Index i = 0; i < k.lineality_basis().rows(); ++i) {
    const Vec l = k.lineality_basis().row(i).transpose();
    lines.push_back(l.head(n).normalized());
  }
  out.rays = linalg::from_rows(rays, n);
  out.lines = linalg::from_rows(lines, n);
  return out;
}

bool is_empty(const Polyhedron& p) { return find_feasible_point(p).status == SolveStatus::infeasible; }

Polyhedron minkowski_sum(const Polyhedron& a, const Polyhedron& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("minkowski_sum: dims");
  const Eigen::Index n = a.dim();
  const auto va = vertex_enumeration(a);
  const auto vb = vertex_enumeration(b);
  if (va.points.empty() || vb.points.empty()) {
    Polyhedron empty(n);
    empty.add_inequality(Vec::Zero(n), -1.0);
    return empty;
  }
  std::vector<Vec> gens;
  for (const auto& pa : va.points)
    for (const auto& pb : vb.points) {
      Vec g(n + 1);
      g << pa + pb, 1.0;
      gens.push_back(g);
    }
  auto lift = [&](const Mat& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      Vec g = Vec::Zero(n + 1);
      g.head(n) = m.row(i).transpose();
      gens.push_back(g);
    }
  };
  lift(va.rays);
  lift(vb.rays);
  std::vector<Vec> lines;
  for (const Mat* m : {&va.lines, &vb.lines})
    for (Eigen::Index i = 0; i < m->rows(); ++i) {
      Vec g = Vec::Zero(n + 1);
      g.head(n) = m->row(i).transpose();
      lines.push_back(g);
    }
  const PolyCone k = dd_convert(PolyCone::from_generators(linalg::from_rows(gens, n + 1), linalg::from_rows(lines, n + 1)));
  return dehomogenize(k);
}

bool polyhedra_equal(const Polyhedron& a, const Polyhedron& b, double tol) {
  if (a.dim() != b.dim()) return false;
  const bool ea = is_empty(a);
  const bool eb = is_empty(b);
  if (ea || eb) return ea == eb;
  return equals(homogenize(a), homogenize(b), tol);
}

}  // namespace conelyap
