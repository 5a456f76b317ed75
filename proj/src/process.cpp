#include "conelyap/process.hpp"

#include <string>

#include "conelyap/errors.hpp"

namespace conelyap {

namespace {

// Selection of coordinate blocks: rows pick blocks `which` out of `blocks` blocks of size n.
Mat block_selector(Eigen::Index n, int blocks, std::initializer_list<int> which) {
  Mat m = Mat::Zero(n * static_cast<Eigen::Index>(which.size()), n * blocks);
  Eigen::Index r = 0;
  for (int b : which) {
    m.block(r, n * b, n, n) = Mat::Identity(n, n);
    r += n;
  }
  return m;
}

Mat block2(const Mat& a, const Mat& b, const Mat& c, const Mat& d) {
  Mat m(a.rows() + c.rows(), a.cols() + b.cols());
  m << a, b, c, d;
  return m;
}

void require_same_n(const ConvexProcess& g, const ConvexProcess& h, const char* op) {
  if (g.n() != h.n()) throw DimensionMismatch(std::string(op) + ": processes have different state dimensions");
}

}  // namespace

ConvexProcess::ConvexProcess(Eigen::Index n, PolyCone graph) : n_(n), graph_(dd_convert(graph)) {
  if (graph_.dim() != 2 * n)
    throw DimensionMismatch("process: graph lives in R^" + std::to_string(graph_.dim()) + ", expected R^" +
                            std::to_string(2 * n));
}

ConvexProcess ConvexProcess::linear_map(const Mat& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("linear_map: matrix must be square");
  const Eigen::Index n = a.rows();
  Mat basis(n, 2 * n);
  basis << Mat::Identity(n, n), a.transpose();
  return ConvexProcess(n, PolyCone::subspace(basis, 2 * n));
}

ConvexProcess ConvexProcess::affine_cone(const Mat& a, const PolyCone& input, const PolyCone& state) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || input.dim() != n || state.dim() != n)
    throw DimensionMismatch("affine_cone: A, input cone and state cone must share the dimension");
  const PolyCone s = state.has_generators() ? state : dd_convert(state);
  const PolyCone k = input.has_generators() ? input : dd_convert(input);
  auto lift_state = [&](const Mat& rows) {
    Mat out(rows.rows(), 2 * n);
    if (rows.rows() > 0) out << rows, rows * a.transpose();
    return out;
  };
  auto lift_input = [&](const Mat& rows) {
    Mat out = Mat::Zero(rows.rows(), 2 * n);
    if (rows.rows() > 0) out.rightCols(n) = rows;
    return out;
  };
  const Mat rays = linalg::vstack(lift_state(s.rays()), lift_input(k.rays()));
  const Mat lines = linalg::vstack(lift_state(s.lineality_basis()), lift_input(k.lineality_basis()));
  return ConvexProcess(n, PolyCone::from_generators(rays.rows() > 0 ? rays : Mat(0, 2 * n),
                                                    lines.rows() > 0 ? lines : Mat(0, 2 * n)));
}

PolyCone domain(const ConvexProcess& h) { return linear_image(h.graph(), block_selector(h.n(), 2, {0})); }

PolyCone range(const ConvexProcess& h) { return linear_image(h.graph(), block_selector(h.n(), 2, {1})); }

Polyhedron image_of_point(const ConvexProcess& h, const Vec& x) {
  const Eigen::Index n = h.n();
  if (x.size() != n) throw DimensionMismatch("image_of_point: point dimension");
  const Mat& a = h.graph().inequalities();
  const Mat& e = h.graph().equalities();
  return Polyhedron(a.rightCols(n), -(a.leftCols(n) * x), e.rightCols(n), -(e.leftCols(n) * x));
}

PolyCone image_at_origin(const ConvexProcess& h) {
  return preimage(h.graph(), block_selector(h.n(), 2, {1}).transpose());
}

PolyCone image_of_cone(const ConvexProcess& h, const PolyCone& s) {
  if (s.dim() != h.n()) throw DimensionMismatch("image_of_cone: cone dimension");
  const PolyCone cyl = product(s, PolyCone::whole_space(h.n()));
  return linear_image(intersect(h.graph(), cyl), block_selector(h.n(), 2, {1}));
}

PolyCone preimage_of_cone(const ConvexProcess& h, const PolyCone& s) {
  if (s.dim() != h.n()) throw DimensionMismatch("preimage_of_cone: cone dimension");
  const PolyCone cyl = product(PolyCone::whole_space(h.n()), s);
  return linear_image(intersect(h.graph(), cyl), block_selector(h.n(), 2, {0}));
}

ConvexProcess inverse(const ConvexProcess& h) {
  const Eigen::Index n = h.n();
  const Mat z = Mat::Zero(n, n), i = Mat::Identity(n, n);
  return ConvexProcess(n, orthogonal_transform(h.graph(), block2(z, i, i, z)));
}

ConvexProcess compose(const ConvexProcess& g, const ConvexProcess& h) {
  require_same_n(g, h, "compose");
  const Eigen::Index n = h.n();
  const PolyCone first = preimage(h.graph(), block_selector(n, 3, {0, 1}));
  const PolyCone second = preimage(g.graph(), block_selector(n, 3, {1, 2}));
  return ConvexProcess(n, linear_image(intersect(first, second), block_selector(n, 3, {0, 2})));
}

ConvexProcess power(const ConvexProcess& h, int q) {
  if (q < 1) throw Error("power: exponent must be at least 1");
  ConvexProcess out = h;
  for (int k = 1; k < q; ++k) out = compose(h, out);
  return out;
}

ConvexProcess dual(const ConvexProcess& h, PolarSign sign) {
  const Eigen::Index n = h.n();
  const Mat z = Mat::Zero(n, n), i = Mat::Identity(n, n);
  // (u, v) in polar(graph) maps to (q, p): (v, -u) for H^-, (-v, u) for H^+.
  const Mat t = sign == PolarSign::negative ? block2(z, i, -i, z) : block2(z, -i, i, z);
  return ConvexProcess(n, orthogonal_transform(polar(h.graph()), t));
}

ConvexProcess minimal_linear(const ConvexProcess& h) { return ConvexProcess(h.n(), lineality(h.graph())); }

ConvexProcess maximal_linear(const ConvexProcess& h) { return ConvexProcess(h.n(), span(h.graph())); }

ConvexProcess linear_dual(const ConvexProcess& l) {
  if (!l.is_linear()) throw Error("linear_dual: process is not linear");
  return dual(l, PolarSign::positive);
}

PolyCone reachable_linear(const ConvexProcess& l) {
  if (!l.is_linear()) throw Error("reachable_linear: process is not linear");
  PolyCone r = PolyCone::origin(l.n());
  for (Eigen::Index k = 0; k < l.n(); ++k) r = image_of_cone(l, r);
  return r;
}

PolyCone feasible_linear(const ConvexProcess& l) {
  if (!l.is_linear()) throw Error("feasible_linear: process is not linear");
  PolyCone f = PolyCone::whole_space(l.n());
  for (Eigen::Index k = 0; k < l.n(); ++k) f = preimage_of_cone(l, f);
  return f;
}

FeasibleSetResult feasible_set(const ConvexProcess& h, int max_iter) {
  const int n = static_cast<int>(h.n());
  if (max_iter < 0) max_iter = 4 * std::max(n, 1);
  FeasibleSetResult out;
  PolyCone prev = PolyCone::whole_space(h.n());
  PolyCone cur = domain(h);
  std::optional<bool> domain_condition;
  for (int k = 1; k <= max_iter; ++k) {
    // dom H^{k+1} lies in dom H^k; intersecting keeps the chain monotone when nearly
    // parallel facets of slowly converging iterates amplify rounding.
    const PolyCone next = intersect(cur, preimage_of_cone(h, cur));
    if (includes(next, cur)) {
      out.cone = cur;
      out.previous = prev;
      out.converged = true;
      out.fixed_point_k = k;
      out.iterations = k - 1;
      break;
    }
    prev = cur;
    cur = next;
    if (k == n) domain_condition = check_domain_condition(h);
    if (domain_condition && *domain_condition && k >= n)
      throw ConsistencyError("feasible_set: domain condition holds but dom H^k did not stabilize within n steps");
  }
  if (!out.converged) {
    out.cone = cur;
    out.previous = prev;
    out.iterations = max_iter;
  }
  return out;
}

bool check_domain_condition(const ConvexProcess& h) {
  const PolyCone r_minus = reachable_linear(minimal_linear(h));
  return is_whole_space(sum(domain(h), r_minus));
}

Decision check_transversality_with(const ConvexProcess& h, const ConvexProcess& g, int max_iter) {
  require_same_n(g, h, "transversality");
  const auto fh = feasible_set(h, max_iter);
  if (!fh.converged) return {false, false};
  const auto fg = feasible_set(g, max_iter);
  // An outer approximation of F(G) can only certify triviality.
  const bool trivial = is_trivial(intersect(polar(fh.cone), fg.cone));
  return {trivial, trivial || fg.converged};
}

TransversalityResult check_transversality(const ConvexProcess& h, int max_iter) {
  return {check_transversality_with(h, dual(h, PolarSign::positive), max_iter),
          check_transversality_with(h, dual(h, PolarSign::negative), max_iter)};
}

Decision check_necessary_condition(const ConvexProcess& h, int max_iter) {
  const auto fh = feasible_set(h, max_iter);
  const bool trivial = is_trivial(intersect(fh.cone, image_at_origin(h)));
  return {trivial, trivial || fh.converged};
}

Decision check_rint_condition(const ConvexProcess& h, int max_iter) {
  const auto fh = feasible_set(h, max_iter);
  if (!fh.converged) return {false, false};
  const PolyCone dom = domain(h);
  const PolyCone& f = fh.cone;
  Vec interior = Vec::Zero(h.n());
  for (Eigen::Index i = 0; i < f.rays().rows(); ++i) {
    const Vec r = f.rays().row(i).transpose();
    if (!rel_interior_contains(dom, r)) return {false, true};
    interior += r;
  }
  for (Eigen::Index i = 0; i < f.lineality_basis().rows(); ++i) {
    const Vec l = f.lineality_basis().row(i).transpose();
    if (!rel_interior_contains(dom, l) || !rel_interior_contains(dom, -l)) return {false, true};
  }
  if (interior.norm() > 0 && !rel_interior_contains(dom, interior)) return {false, true};
  return {true, true};
}

}  // namespace conelyap
