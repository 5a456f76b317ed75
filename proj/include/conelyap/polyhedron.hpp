#pragma once

#include "conelyap/linalg.hpp"

namespace conelyap {

/// Affine-inequality set {x : A x <= b, E x = f}.
struct Polyhedron {
  Mat A;
  Vec b;
  Mat E;
  Vec f;

  Polyhedron() = default;
  explicit Polyhedron(Eigen::Index dim) : A(0, dim), b(0), E(0, dim), f(0) {}
  Polyhedron(Mat a, Vec bb, Mat e, Vec ff);

  Eigen::Index dim() const { return A.cols(); }

  /// Row-wise scaled-residual membership: (a.x - b) <= tol * max(1, |x|).
  bool contains(const Vec& x, double tol = 1e-9) const;

  void add_inequality(const Vec& a, double rhs);
  void add_equality(const Vec& e, double rhs);
  /// Conjunction of two systems in the same space.
  Polyhedron intersected(const Polyhedron& other) const;
};

}  // namespace conelyap
