#pragma once

#include <memory>
#include <optional>

#include "conelyap/geometry.hpp"
#include "conelyap/report.hpp"

namespace conelyap {

/// Member of the class of closed convex nonnegative degree-2 homogeneous functions.
///
/// quad_on_cone:   x^T Q x + indicator(x | C)      (Q absorbs any factor 1/2)
/// scaled_dist_sq: alpha * dist(x, C)^2
/// conjugate_of:   sup_z { x.z - inner(z) }
/// restricted:     inner(x) + indicator(x | D)
class ConeFunction {
 public:
  enum class Kind { quad_on_cone, scaled_dist_sq, conjugate_of, restricted };

  static ConeFunction quad_on_cone(const Mat& q, const PolyCone& c);
  static ConeFunction quadratic(const Mat& q);
  static ConeFunction half_norm_sq(Eigen::Index n);
  static ConeFunction scaled_dist_sq(double alpha, const PolyCone& c);
  static ConeFunction conjugate_of(const ConeFunction& inner);
  static ConeFunction restricted(const ConeFunction& inner, const PolyCone& d);

  Kind kind() const { return kind_; }
  Eigen::Index n() const { return n_; }
  const Mat& q() const { return q_; }
  double alpha() const { return alpha_; }
  /// C for quad_on_cone and scaled_dist_sq, D for restricted.
  const PolyCone& cone() const { return cone_; }
  const ConeFunction& inner() const { return *inner_; }

 private:
  ConeFunction() = default;
  Kind kind_ = Kind::quad_on_cone;
  Eigen::Index n_ = 0;
  Mat q_;
  double alpha_ = 0.0;
  PolyCone cone_;
  std::shared_ptr<const ConeFunction> inner_;
};

std::string to_string(ConeFunction::Kind k);

/// Extended-real value; +inf outside the effective domain.
double evaluate(const ConeFunction& f, const Vec& x, const NumericsConfig& cfg = {});

ConeFunction restrict(const ConeFunction& f, const PolyCone& c);
/// Closed forms for isotropic quadratics and scaled distances, a wrapper otherwise.
ConeFunction conjugate(const ConeFunction& f);

/// Closed cone outside which f is +inf (an outer bound for conjugate wrappers).
PolyCone effective_domain(const ConeFunction& f);

/// f(x) = min_w [x;w]^T M [x;w] subject to [x;w] in K, with w in R^m.
struct LiftedQuadratic {
  Eigen::Index n = 0;
  Mat m;
  PolyCone k;
};

/// Throws Unsupported for conjugates of forms without a finite lift.
LiftedQuadratic lift(const ConeFunction& f);

/// Convexity of the quadratic part on the span of its domain.
bool is_convex(const ConeFunction& f);

struct SliceMinimum {
  /// infeasible: the polyhedron misses the domain, value +inf.
  SolveStatus status = SolveStatus::infeasible;
  double value = std::numeric_limits<double>::infinity();
  Vec x;
};

/// min { f(x) : x in P }.
SliceMinimum min_over_polyhedron(const ConeFunction& f, const Polyhedron& p, const NumericsConfig& cfg = {});

struct PosDefOptions {
  /// Angular step on two-dimensional cross-sections.
  double mesh = 1e-2;
  /// Quasi-random points on higher-dimensional cross-sections.
  int monte_carlo = 10000;
  int refine_steps = 60;
  /// f(x) <= zero_tol on a unit x refutes positive definiteness.
  double zero_tol = 1e-12;
  /// A minimum between zero_tol and this is reported as inconclusive.
  double tiny_alpha = 1e-8;
};

struct PosDefBounds {
  enum class Status { positive_definite, not_positive_definite, inconclusive };
  Status status = Status::inconclusive;
  double alpha = 0.0;
  double beta = 0.0;
  Vec argmin;
  Vec argmax;
  bool exact = false;
  int samples = 0;
  /// Unit vector of C with f <= 0 or f = +inf.
  std::optional<Vec> refutation;
};

std::string to_string(PosDefBounds::Status s);

/// alpha |x|^2 <= f(x) <= beta |x|^2 on C, from the unit cross-section.
PosDefBounds posdef_bounds(const ConeFunction& f, const PolyCone& c, const PosDefOptions& opts = {});

/// Positive definiteness of (f|_C)^* on D when C^- meets D only at 0.
VerificationReport check_theorem1_transfer(const ConeFunction& f, const PolyCone& c, const PolyCone& d,
                                           const PosDefOptions& opts = {});

}  // namespace conelyap
