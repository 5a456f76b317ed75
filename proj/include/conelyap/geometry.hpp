#pragma once

#include <cstddef>
#include <vector>

#include "conelyap/linalg.hpp"
#include "conelyap/numerics.hpp"
#include "conelyap/polyhedron.hpp"

namespace conelyap {

struct GeometryTolerances {
  /// Membership of a point (scaled by max(1, |x|)).
  double membership = 1e-9;
  /// Cone-level identities (equality, inclusion of generators).
  double identity = 1e-8;
  /// Zero test of the double description method on normalized data.
  double dd_zero = 1e-9;
  /// Cap on intermediate rays before the conversion gives up.
  std::size_t max_rays = 20000;
};

const GeometryTolerances& default_tolerances();
/// Process-wide override; call before any concurrent use of the library.
void set_default_tolerances(const GeometryTolerances& tol);

enum class PolarSign { negative, positive };

/// Polyhedral convex cone {x : A x <= 0, E x = 0} = cone(rays) + span(lineality).
///
/// Either representation may be absent; dd_convert materializes both. A
/// materialized cone is canonical: rays are unit extreme rays orthogonal to
/// the lineality space, the lineality and equality bases are orthonormal, and
/// the inequality rows are unit facet normals orthogonal to the equalities.
/// No list means: no generators = {0}, no constraints = R^n.
class PolyCone {
 public:
  PolyCone() = default;

  static PolyCone from_generators(const Mat& rays, const Mat& lineality = Mat());
  static PolyCone from_generators(const std::vector<Vec>& rays, Eigen::Index dim);
  static PolyCone from_constraints(const Mat& inequalities, const Mat& equalities = Mat());
  static PolyCone from_constraints(const std::vector<Vec>& inequalities, Eigen::Index dim);
  static PolyCone whole_space(Eigen::Index n);
  static PolyCone origin(Eigen::Index n);
  static PolyCone nonnegative_orthant(Eigen::Index n);
  /// Span of the rows of `basis`.
  static PolyCone subspace(const Mat& basis, Eigen::Index dim);

  Eigen::Index dim() const { return dim_; }
  bool has_generators() const { return has_v_; }
  bool has_constraints() const { return has_h_; }
  bool materialized() const { return has_v_ && has_h_; }

  /// Ray rows (pointed part when materialized).
  const Mat& rays() const { return rays_; }
  const Mat& lineality_basis() const { return lines_; }
  const Mat& inequalities() const { return ineq_; }
  const Mat& equalities() const { return eq_; }

  /// All generators with the lineality basis expanded in +/- pairs.
  Mat generator_list() const;

 private:
  friend PolyCone dd_convert(const PolyCone&, const GeometryTolerances&);
  friend PolyCone orthogonal_transform(const PolyCone&, const Mat&);
  friend PolyCone polar(const PolyCone&, PolarSign);

  Eigen::Index dim_ = 0;
  bool has_v_ = false;
  bool has_h_ = false;
  Mat rays_;
  Mat lines_;
  Mat ineq_;
  Mat eq_;
};

/// Extreme rays and lineality basis of {x : A x <= 0, E x = 0}.
struct DoubleDescription {
  Mat rays;
  Mat lines;
};

DoubleDescription double_description(const Mat& inequalities, const Mat& equalities,
                                     const GeometryTolerances& tol = default_tolerances());

PolyCone dd_convert(const PolyCone& cone, const GeometryTolerances& tol = default_tolerances());

PolyCone polar(const PolyCone& cone, PolarSign sign = PolarSign::negative);
PolyCone lineality(const PolyCone& cone);
PolyCone span(const PolyCone& cone);
PolyCone sum(const PolyCone& a, const PolyCone& b);
PolyCone intersect(const PolyCone& a, const PolyCone& b);
PolyCone negate(const PolyCone& cone);
/// a x b in R^{na + nb}.
PolyCone product(const PolyCone& a, const PolyCone& b);
/// {M x : x in cone}.
PolyCone linear_image(const PolyCone& cone, const Mat& m);
/// {x : M x in cone}.
PolyCone preimage(const PolyCone& cone, const Mat& m);
/// U x for orthogonal U; both representations map without conversion.
PolyCone orthogonal_transform(const PolyCone& cone, const Mat& u);

bool contains(const PolyCone& cone, const Vec& x, double tol = default_tolerances().membership);
bool rel_interior_contains(const PolyCone& cone, const Vec& x, double tol = default_tolerances().membership);
/// inner is a subset of outer.
bool includes(const PolyCone& outer, const PolyCone& inner, double tol = default_tolerances().identity);
bool equals(const PolyCone& a, const PolyCone& b, double tol = default_tolerances().identity);
bool is_trivial(const PolyCone& cone);
bool is_whole_space(const PolyCone& cone);
bool is_subspace(const PolyCone& cone);
/// Dimension of span(cone).
int span_dimension(const PolyCone& cone);

/// Euclidean projection onto the cone (convex QP).
Vec project_point(const PolyCone& cone, const Vec& p, const NumericsConfig& cfg = {});

/// The cone as the polyhedron {A x <= 0, E x = 0}.
Polyhedron as_polyhedron(const PolyCone& cone);

// Polyhedra through homogenization: P <-> cl cone(P x {1}) in R^{n+1}.

struct PolyhedronVRep {
  std::vector<Vec> points;
  Mat rays;
  Mat lines;
};

PolyCone homogenize(const Polyhedron& p);
Polyhedron dehomogenize(const PolyCone& cone);
/// Minimal-face representatives, extreme rays and lines. No points means empty.
PolyhedronVRep vertex_enumeration(const Polyhedron& p);
bool is_empty(const Polyhedron& p);
Polyhedron minkowski_sum(const Polyhedron& a, const Polyhedron& b);
bool polyhedra_equal(const Polyhedron& a, const Polyhedron& b, double tol = default_tolerances().identity);

}  // namespace conelyap
