#include "conelyap/functions.hpp"

#include <cmath>
#include <limits>

#include "conelyap/errors.hpp"
#include "conelyap/sampling.hpp"

namespace conelyap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Mat span_basis(const PolyCone& c) {
  const PolyCone s = span(c);
  return s.lineality_basis().rows() > 0 ? Mat(s.lineality_basis().transpose()) : Mat(c.dim(), 0);
}

double scale_of(const Mat& q) { return std::max(1.0, q.cwiseAbs().maxCoeff()); }

Vec projection(const PolyCone& c, const Vec& x) {
  if (is_whole_space(c)) return x;
  if (is_subspace(c)) {
    const Mat& l = c.lineality_basis();
    if (l.rows() == 0) return Vec::Zero(x.size());
    return l.transpose() * (l * x);
  }
  return project_point(c, x);
}

Mat lifted_distance(Eigen::Index n, const Mat& r) {
  Mat m(2 * n, 2 * n);
  m << r, -r, -r, r;
  return m;
}

PolyCone lift_cone(const PolyCone& x_part, Eigen::Index m) {
  if (m == 0) return x_part;
  return product(x_part, PolyCone::whole_space(m));
}

double conjugate_value(const LiftedQuadratic& lq, const Vec& y, const NumericsConfig& cfg) {
  const Eigen::Index n = lq.n;
  const Eigen::Index total = lq.m.rows();
  Vec c = Vec::Zero(total);
  c.head(n) = -y;

  // Zero-curvature directions of the domain along which y.x grows make the sup infinite.
  const Mat z = span_basis(lq.k);
  Polyhedron rec = as_polyhedron(lq.k);
  if (z.cols() > 0) {
    const Mat rows = z.transpose() * lq.m;
    for (Eigen::Index i = 0; i < rows.rows(); ++i) rec.add_equality(rows.row(i).transpose(), 0.0);
  }
  for (Eigen::Index i = 0; i < total; ++i) {
    Vec e = Vec::Zero(total);
    e(i) = 1.0;
    rec.add_inequality(e, 1.0);
    rec.add_inequality(-e, 1.0);
  }
  const LpResult lp = solve_lp({-c, rec, Sense::maximize}, cfg);
  if (lp.status == SolveStatus::optimal && lp.value > 1e-9 * std::max(1.0, y.norm())) return kInf;

  const QpResult qp = solve_qp({2.0 * lq.m, c, as_polyhedron(lq.k)}, cfg);
  if (qp.status == SolveStatus::unbounded) return kInf;
  if (qp.status != SolveStatus::optimal)
    throw SolverError("conjugate evaluation: inner problem is " + to_string(qp.status), qp.iterations);
  return std::max(0.0, -qp.value);
}

void check_copositive(const Mat& q, const PolyCone& c) {
  const Mat g = c.generator_list();
  const double tol = 1e-10 * scale_of(q);
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = i; j < g.rows(); ++j) {
      Vec x = g.row(i).transpose() + g.row(j).transpose();
      if (x.norm() < 1e-12) continue;
      x.normalize();
      if (x.dot(q * x) < -tol) throw Error("quad_on_cone: x^T Q x is negative at a point of the cone");
    }
  }
}

SliceMinimum lifted_min(const LiftedQuadratic& lq, const Polyhedron& p, const NumericsConfig& cfg) {
  const Eigen::Index n = lq.n, total = lq.m.rows();
  Polyhedron sys = as_polyhedron(lq.k);
  for (Eigen::Index i = 0; i < p.A.rows(); ++i) {
    Vec a = Vec::Zero(total);
    a.head(n) = p.A.row(i).transpose();
    sys.add_inequality(a, p.b(i));
  }
  for (Eigen::Index i = 0; i < p.E.rows(); ++i) {
    Vec e = Vec::Zero(total);
    e.head(n) = p.E.row(i).transpose();
    sys.add_equality(e, p.f(i));
  }
  const QpResult r = solve_qp({2.0 * lq.m, Vec::Zero(total), sys}, cfg);
  SliceMinimum out;
  out.status = r.status;
  if (r.status == SolveStatus::optimal) {
    out.value = std::max(0.0, r.value);
    out.x = r.x.head(n);
  } else if (r.status == SolveStatus::unbounded) {
    throw SolverError("min_over_polyhedron: objective unbounded below on a nonnegative function", r.iterations);
  }
  return out;
}

}  // namespace

std::string to_string(ConeFunction::Kind k) {
  switch (k) {
    case ConeFunction::Kind::quad_on_cone:
      return "quad_on_cone";
    case ConeFunction::Kind::scaled_dist_sq:
      return "scaled_dist_sq";
    case ConeFunction::Kind::conjugate_of:
      return "conjugate_of";
    case ConeFunction::Kind::restricted:
      return "restricted";
  }
  return "unknown";
}

std::string to_string(PosDefBounds::Status s) {
  switch (s) {
    case PosDefBounds::Status::positive_definite:
      return "positive_definite";
    case PosDefBounds::Status::not_positive_definite:
      return "not_positive_definite";
    case PosDefBounds::Status::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

ConeFunction ConeFunction::quad_on_cone(const Mat& q, const PolyCone& c) {
  const Eigen::Index n = c.dim();
  if (q.rows() != n || q.cols() != n) throw DimensionMismatch("quad_on_cone: Q must be n x n with n the cone dimension");
  if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale_of(q)) throw Error("quad_on_cone: Q is not symmetric");
  ConeFunction f;
  f.kind_ = Kind::quad_on_cone;
  f.n_ = n;
  f.q_ = 0.5 * (q + q.transpose());
  f.cone_ = dd_convert(c);
  check_copositive(f.q_, f.cone_);
  return f;
}

ConeFunction ConeFunction::quadratic(const Mat& q) { return quad_on_cone(q, PolyCone::whole_space(q.rows())); }

ConeFunction ConeFunction::half_norm_sq(Eigen::Index n) { return quadratic(0.5 * Mat::Identity(n, n)); }

ConeFunction ConeFunction::scaled_dist_sq(double alpha, const PolyCone& c) {
  if (!(alpha > 0) || !std::isfinite(alpha)) throw Error("scaled_dist_sq: alpha must be positive and finite");
  ConeFunction f;
  f.kind_ = Kind::scaled_dist_sq;
  f.n_ = c.dim();
  f.alpha_ = alpha;
  f.cone_ = dd_convert(c);
  return f;
}

ConeFunction ConeFunction::conjugate_of(const ConeFunction& inner) {
  ConeFunction f;
  f.kind_ = Kind::conjugate_of;
  f.n_ = inner.n();
  f.inner_ = std::make_shared<const ConeFunction>(inner);
  return f;
}

ConeFunction ConeFunction::restricted(const ConeFunction& inner, const PolyCone& d) {
  if (d.dim() != inner.n()) throw DimensionMismatch("restricted: cone dimension differs from the function");
  ConeFunction f;
  f.kind_ = Kind::restricted;
  f.n_ = inner.n();
  f.cone_ = dd_convert(d);
  f.inner_ = std::make_shared<const ConeFunction>(inner);
  return f;
}

LiftedQuadratic lift(const ConeFunction& f) {
  const Eigen::Index n = f.n();
  switch (f.kind()) {
    case ConeFunction::Kind::quad_on_cone:
      return {n, f.q(), f.cone()};
    case ConeFunction::Kind::scaled_dist_sq:
      return {n, f.alpha() * lifted_distance(n, Mat::Identity(n, n)), product(PolyCone::whole_space(n), f.cone())};
    case ConeFunction::Kind::restricted: {
      LiftedQuadratic lq = lift(f.inner());
      lq.k = intersect(lq.k, lift_cone(f.cone(), lq.m.rows() - n));
      return lq;
    }
    case ConeFunction::Kind::conjugate_of: {
      const ConeFunction& g = f.inner();
      if (g.kind() == ConeFunction::Kind::conjugate_of) return lift(g.inner());
      if (g.kind() == ConeFunction::Kind::scaled_dist_sq)
        return {n, Mat::Identity(n, n) / (4.0 * g.alpha()), polar(g.cone())};
      if (g.kind() == ConeFunction::Kind::restricted && g.inner().kind() == ConeFunction::Kind::quad_on_cone)
        return lift(ConeFunction::conjugate_of(
            ConeFunction::quad_on_cone(g.inner().q(), intersect(g.inner().cone(), g.cone()))));
      if (g.kind() == ConeFunction::Kind::quad_on_cone) {
        // (x^T Q x + indicator_C)^* = min_{w in C^-} (y - w)^T R (y - w) / 4, R = (P Q P + I - P)^-1.
        const Mat nb = span_basis(g.cone());
        if (nb.cols() > 0 && linalg::min_eigenvalue_on(g.q(), nb) <= 1e-10 * scale_of(g.q()))
          throw Unsupported("conjugate: quadratic is not positive definite on the span of its cone");
        const Mat p = nb * nb.transpose();
        const Mat id = Mat::Identity(n, n);
        const Mat qq = p * g.q() * p + (id - p);
        const Mat r = qq.ldlt().solve(id);
        return {n, 0.25 * lifted_distance(n, 0.5 * (r + r.transpose())), product(PolyCone::whole_space(n), polar(g.cone()))};
      }
      throw Unsupported("conjugate: no finite quadratic lift for the conjugate of a " + to_string(g.kind()));
    }
  }
  throw Unsupported("lift: unknown variant");
}

double evaluate(const ConeFunction& f, const Vec& x, const NumericsConfig& cfg) {
  if (x.size() != f.n()) throw DimensionMismatch("evaluate: point dimension differs from the function");
  switch (f.kind()) {
    case ConeFunction::Kind::quad_on_cone:
      return contains(f.cone(), x) ? std::max(0.0, x.dot(f.q() * x)) : kInf;
    case ConeFunction::Kind::scaled_dist_sq:
      return f.alpha() * (x - projection(f.cone(), x)).squaredNorm();
    case ConeFunction::Kind::restricted:
      return contains(f.cone(), x) ? evaluate(f.inner(), x, cfg) : kInf;
    case ConeFunction::Kind::conjugate_of:
      return conjugate_value(lift(f.inner()), x, cfg);
  }
  throw Unsupported("evaluate: unknown variant");
}

ConeFunction restrict(const ConeFunction& f, const PolyCone& c) {
  if (c.dim() != f.n()) throw DimensionMismatch("restrict: cone dimension differs from the function");
  if (is_whole_space(c)) return f;
  switch (f.kind()) {
    case ConeFunction::Kind::quad_on_cone:
      return ConeFunction::quad_on_cone(f.q(), intersect(f.cone(), c));
    case ConeFunction::Kind::restricted:
      return restrict(f.inner(), intersect(f.cone(), c));
    default:
      return ConeFunction::restricted(f, c);
  }
}

ConeFunction conjugate(const ConeFunction& f) {
  const Eigen::Index n = f.n();
  switch (f.kind()) {
    case ConeFunction::Kind::quad_on_cone: {
      const Mat nb = span_basis(f.cone());
      const PolyCone cm = polar(f.cone());
      if (nb.cols() == 0) return ConeFunction::quad_on_cone(Mat::Zero(n, n), cm);
      const Mat s = nb.transpose() * f.q() * nb;
      const double tol = 1e-10 * scale_of(f.q());
      if (s.cwiseAbs().maxCoeff() <= tol) return ConeFunction::quad_on_cone(Mat::Zero(n, n), cm);
      const double a = s.trace() / static_cast<double>(s.rows());
      if (a > 0 && (s - a * Mat::Identity(s.rows(), s.cols())).cwiseAbs().maxCoeff() <= tol)
        return ConeFunction::scaled_dist_sq(1.0 / (4.0 * a), cm);
      return ConeFunction::conjugate_of(f);
    }
    case ConeFunction::Kind::scaled_dist_sq:
      return ConeFunction::quad_on_cone(Mat::Identity(n, n) / (4.0 * f.alpha()), polar(f.cone()));
    case ConeFunction::Kind::conjugate_of:
      return f.inner();
    case ConeFunction::Kind::restricted:
      if (f.inner().kind() == ConeFunction::Kind::quad_on_cone)
        return conjugate(ConeFunction::quad_on_cone(f.inner().q(), intersect(f.inner().cone(), f.cone())));
      return ConeFunction::conjugate_of(f);
  }
  throw Unsupported("conjugate: unknown variant");
}

PolyCone effective_domain(const ConeFunction& f) {
  switch (f.kind()) {
    case ConeFunction::Kind::quad_on_cone:
      return f.cone();
    case ConeFunction::Kind::scaled_dist_sq:
      return PolyCone::whole_space(f.n());
    case ConeFunction::Kind::restricted:
      return intersect(effective_domain(f.inner()), f.cone());
    case ConeFunction::Kind::conjugate_of:
      break;
  }
  try {
    const LiftedQuadratic lq = lift(f);
    Mat sel = Mat::Zero(f.n(), lq.m.rows());
    sel.leftCols(f.n()) = Mat::Identity(f.n(), f.n());
    return linear_image(lq.k, sel);
  } catch (const Unsupported&) {
    return PolyCone::whole_space(f.n());
  }
}

bool is_convex(const ConeFunction& f) {
  if (f.kind() == ConeFunction::Kind::conjugate_of) return true;
  const LiftedQuadratic lq = lift(f);
  const Mat z = span_basis(lq.k);
  if (z.cols() == 0) return true;
  return linalg::min_eigenvalue_on(lq.m, z) >= -1e-10 * scale_of(lq.m);
}

SliceMinimum min_over_polyhedron(const ConeFunction& f, const Polyhedron& p, const NumericsConfig& cfg) {
  if (p.dim() != f.n()) throw DimensionMismatch("min_over_polyhedron: polyhedron dimension");
  return lifted_min(lift(f), p, cfg);
}

PosDefBounds posdef_bounds(const ConeFunction& f, const PolyCone& cone, const PosDefOptions& opts) {
  if (cone.dim() != f.n()) throw DimensionMismatch("posdef_bounds: cone dimension differs from the function");
  const PolyCone c = dd_convert(cone);
  PosDefBounds out;
  if (is_trivial(c)) {
    out.status = PosDefBounds::Status::positive_definite;
    out.alpha = out.beta = 1.0;
    out.exact = true;
    return out;
  }

  auto classify = [&]() {
    if (out.refutation || out.alpha <= opts.zero_tol) {
      out.status = PosDefBounds::Status::not_positive_definite;
      if (!out.refutation) out.refutation = out.argmin;
    } else if (out.alpha <= opts.tiny_alpha) {
      out.status = PosDefBounds::Status::inconclusive;
    } else {
      out.status = PosDefBounds::Status::positive_definite;
    }
  };

  if (f.kind() == ConeFunction::Kind::quad_on_cone && is_subspace(c) && includes(f.cone(), c)) {
    const Mat nb = c.lineality_basis().transpose();
    Eigen::SelfAdjointEigenSolver<Mat> es(nb.transpose() * f.q() * nb);
    out.alpha = es.eigenvalues()(0);
    out.beta = es.eigenvalues()(es.eigenvalues().size() - 1);
    out.argmin = nb * es.eigenvectors().col(0);
    out.argmax = nb * es.eigenvectors().col(es.eigenvalues().size() - 1);
    out.exact = true;
    out.samples = static_cast<int>(nb.cols());
    classify();
    return out;
  }

  const int span_dim = span_dimension(c);
  SampleSpec spec{opts.monte_carlo, 1};
  if (span_dim == 2) {
    double arc = 2 * M_PI;
    if (c.lineality_basis().rows() == 1) arc = M_PI;
    if (c.lineality_basis().rows() == 0)
      arc = std::acos(std::clamp(c.rays().row(0).dot(c.rays().row(1)), -1.0, 1.0));
    spec.count = std::max(2, static_cast<int>(std::ceil(arc / opts.mesh)));
  }
  const auto samples = cross_section_samples(c, spec);
  out.alpha = kInf;
  out.beta = -kInf;
  for (const auto& x : samples) {
    const double v = evaluate(f, x);
    ++out.samples;
    if (!std::isfinite(v)) {
      out.refutation = x;
      out.alpha = out.beta = kInf;
      out.argmin = out.argmax = x;
      out.status = PosDefBounds::Status::not_positive_definite;
      return out;
    }
    if (v < out.alpha) {
      out.alpha = v;
      out.argmin = x;
    }
    if (v > out.beta) {
      out.beta = v;
      out.argmax = x;
    }
  }

  // Coordinate search on the cross-section around the extremal samples.
  const Mat nb = span_basis(c);
  auto refine = [&](Vec& best, double& value, double sign) {
    double step = 0.05;
    for (int it = 0; it < opts.refine_steps && step > 1e-7; ++it) {
      bool improved = false;
      for (Eigen::Index k = 0; k < nb.cols() && !improved; ++k) {
        for (double s : {step, -step}) {
          Vec cand = projection(c, best + s * nb.col(k));
          const double nrm = cand.norm();
          if (nrm < 1e-9) continue;
          cand /= nrm;
          const double v = evaluate(f, cand);
          ++out.samples;
          if (std::isfinite(v) && sign * v < sign * value) {
            value = v;
            best = cand;
            improved = true;
            break;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
  };
  refine(out.argmin, out.alpha, 1.0);
  refine(out.argmax, out.beta, -1.0);
  classify();
  return out;
}

VerificationReport check_theorem1_transfer(const ConeFunction& f, const PolyCone& c, const PolyCone& d,
                                           const PosDefOptions& opts) {
  VerificationReport rep;
  rep.name = "theorem1_transfer";

  VerificationReport pf;
  pf.name = "posdef_on_C";
  const PosDefBounds bf = posdef_bounds(f, c, opts);
  pf.verdict = bf.status == PosDefBounds::Status::positive_definite ? Verdict::holds
               : bf.status == PosDefBounds::Status::inconclusive  ? Verdict::inconclusive
                                                                   : Verdict::fails;
  pf.checked_points = bf.samples;
  pf.quantities = {{"alpha", bf.alpha}, {"beta", bf.beta}};
  if (bf.refutation) pf.witness = Witness{*bf.refutation, std::nullopt, std::nullopt, "f(x) <= 0 or +inf on the unit cross-section"};

  VerificationReport hyp;
  hyp.name = "polar_C_meets_D_trivially";
  const bool trivial = is_trivial(intersect(polar(c), d));
  hyp.verdict = trivial ? Verdict::holds : Verdict::fails;
  rep.sub_reports = {pf, hyp};

  if (pf.verdict == Verdict::inconclusive) {
    rep.verdict = Verdict::inconclusive;
    rep.detail = "positive definiteness of f on C is inconclusive";
    return rep;
  }
  if (pf.verdict != Verdict::holds || !trivial) {
    rep.verdict = Verdict::hypothesis_not_met;
    rep.detail = !trivial ? "C^- meets D outside the origin" : "f is not positive definite on C";
    return rep;
  }

  const ConeFunction w = conjugate(restrict(f, c));
  const PosDefBounds bw = posdef_bounds(w, d, opts);
  VerificationReport pw;
  pw.name = "posdef_conjugate_on_D";
  pw.checked_points = bw.samples;
  pw.quantities = {{"alpha", bw.alpha}, {"beta", bw.beta}};
  rep.checked_points = bf.samples + bw.samples;
  rep.quantities = pw.quantities;
  if (bw.status == PosDefBounds::Status::positive_definite) {
    pw.verdict = rep.verdict = Verdict::holds;
  } else if (bw.status == PosDefBounds::Status::inconclusive) {
    pw.verdict = rep.verdict = Verdict::inconclusive;
  } else {
    pw.verdict = rep.verdict = Verdict::fails;
    pw.witness = rep.witness = Witness{*bw.refutation, std::nullopt, std::nullopt, "conjugate vanishes or is +inf"};
  }
  rep.sub_reports.push_back(pw);
  return rep;
}

}  // namespace conelyap
