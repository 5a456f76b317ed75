#include "conelyap/polyhedron.hpp"

#include <algorithm>

#include "conelyap/errors.hpp"

namespace conelyap {

Polyhedron::Polyhedron(Mat a, Vec bb, Mat e, Vec ff)
    : A(std::move(a)), b(std::move(bb)), E(std::move(e)), f(std::move(ff)) {
  if (A.rows() != b.size() || E.rows() != f.size())
    throw DimensionMismatch("polyhedron: row count does not match right-hand side");
  if (A.rows() > 0 && E.rows() > 0 && A.cols() != E.cols())
    throw DimensionMismatch("polyhedron: inequality and equality widths differ");
  if (A.rows() == 0 && E.rows() > 0) A.resize(0, E.cols());
  if (E.rows() == 0 && A.cols() != E.cols()) E.resize(0, A.cols());
}

bool Polyhedron::contains(const Vec& x, double tol) const {
  if (x.size() != dim()) throw DimensionMismatch("polyhedron: point dimension");
  const double scale = tol * std::max(1.0, x.norm());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    const double rn = std::max(1.0, A.row(i).norm());
    if (A.row(i).dot(x) - b(i) > scale * rn) return false;
  }
  for (Eigen::Index i = 0; i < E.rows(); ++i) {
    const double rn = std::max(1.0, E.row(i).norm());
    if (std::abs(E.row(i).dot(x) - f(i)) > scale * rn) return false;
  }
  return true;
}

void Polyhedron::add_inequality(const Vec& a, double rhs) {
  if (a.size() != dim()) throw DimensionMismatch("polyhedron: inequality width");
  A.conservativeResize(A.rows() + 1, Eigen::NoChange);
  A.row(A.rows() - 1) = a.transpose();
  b.conservativeResize(b.size() + 1);
  b(b.size() - 1) = rhs;
}

void Polyhedron::add_equality(const Vec& e, double rhs) {
  if (e.size() != dim()) throw DimensionMismatch("polyhedron: equality width");
  E.conservativeResize(E.rows() + 1, Eigen::NoChange);
  E.row(E.rows() - 1) = e.transpose();
  f.conservativeResize(f.size() + 1);
  f(f.size() - 1) = rhs;
}

Polyhedron Polyhedron::intersected(const Polyhedron& other) const {
  if (other.dim() != dim()) throw DimensionMismatch("polyhedron: intersect dims");
  Vec bb(b.size() + other.b.size());
  bb << b, other.b;
  Vec ff(f.size() + other.f.size());
  ff << f, other.f;
  Mat a = linalg::vstack(A, other.A);
  Mat e = linalg::vstack(E, other.E);
  if (a.cols() != dim()) a.resize(0, dim());
  if (e.cols() != dim()) e.resize(0, dim());
  return Polyhedron(a, bb, e, ff);
}

}  // namespace conelyap
