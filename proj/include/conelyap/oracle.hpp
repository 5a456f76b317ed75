#pragma once

#include <cstdint>
#include <vector>

#include "conelyap/functions.hpp"
#include "conelyap/process.hpp"

namespace conelyap::oracle {

/// Stacked system in the unknowns x_0..x_T: every consecutive pair satisfies
/// the graph inequalities and equalities, and x_0 is pinned to the anchor.
struct TrajectorySystem {
  Eigen::Index n = 0;
  int horizon = 0;
  Polyhedron constraints;
  /// Column offset of x_k is k * n.
  Eigen::Index variables() const { return constraints.dim(); }
};

TrajectorySystem trajectory_system(const ConvexProcess& h, const Vec& x0, int horizon);

/// A d-step trajectory from x0 exists.
bool feasible_depth(const ConvexProcess& h, const Vec& x0, int d, const NumericsConfig& cfg = {});

/// feasible_depth for d = 1..max_depth; throws ConsistencyError if not antitone.
std::vector<bool> feasible_depth_profile(const ConvexProcess& h, const Vec& x0, int max_depth,
                                         const NumericsConfig& cfg = {});

struct StabilizableResult {
  enum class Verdict { yes_certified, unknown };
  Verdict verdict = Verdict::unknown;
  /// x_0..x_{d+n}; empty if no trajectory of that length exists.
  std::vector<Vec> trajectory;
  /// Envelope |x_k| <= K rho^k |x_0| fitted on the returned trajectory.
  double rho = 1.0;
  double envelope = 0.0;
  double final_ratio = 1.0;
};

std::string to_string(StabilizableResult::Verdict v);

/// Minimizes sum_k |x_k|^2 over trajectories of length d + n and certifies decay a posteriori.
StabilizableResult stabilizable_sample(const ConvexProcess& h, const Vec& x0, int d, double epsilon,
                                       const NumericsConfig& cfg = {});

struct PolarCheck {
  int samples = 0;
  /// Points accepted by the computed polar that violate the definition.
  int computed_not_true = 0;
  /// Points satisfying the definition that the computed polar rejects.
  int true_not_computed = 0;
  bool ok() const { return computed_not_true == 0 && true_not_computed == 0; }
};

/// Cross-checks polar(C, sign) against the defining inequality on k sampled directions.
PolarCheck polar_sampled(const PolyCone& c, int k, std::uint64_t seed = 1, PolarSign sign = PolarSign::negative);

struct GridConjugate {
  /// Lower bound of f^*(y) (or +inf).
  double value = 0.0;
  int directions = 0;
  /// Radius beyond which y.x - f(x) < 0.
  double radius = 0.0;
};

/// max of y.x - f(x) over a direction mesh of the domain cross-section times a radial search.
GridConjugate conjugate_grid(const ConeFunction& f, const Vec& y, double mesh = 1e-2, int monte_carlo = 4000);

}  // namespace conelyap::oracle
