#pragma once

#include <optional>

#include "conelyap/geometry.hpp"

namespace conelyap {

/// Convex process H : R^n => R^n given by its graph cone in R^{2n}, ordered (x, y).
class ConvexProcess {
 public:
  ConvexProcess() = default;
  ConvexProcess(Eigen::Index n, PolyCone graph);

  /// x |-> {A x}.
  static ConvexProcess linear_map(const Mat& a);
  /// x |-> A x + K if x in S, empty otherwise.
  static ConvexProcess affine_cone(const Mat& a, const PolyCone& input, const PolyCone& state);

  Eigen::Index n() const { return n_; }
  const PolyCone& graph() const { return graph_; }
  bool is_linear() const { return is_subspace(graph_); }

 private:
  Eigen::Index n_ = 0;
  PolyCone graph_;
};

PolyCone domain(const ConvexProcess& h);
PolyCone range(const ConvexProcess& h);
/// The slice H(x) as a polyhedron; empty iff x is outside dom H.
Polyhedron image_of_point(const ConvexProcess& h, const Vec& x);
/// H(0), a cone.
PolyCone image_at_origin(const ConvexProcess& h);
PolyCone image_of_cone(const ConvexProcess& h, const PolyCone& s);
/// H^{-1}(S) = {x : H(x) meets S}.
PolyCone preimage_of_cone(const ConvexProcess& h, const PolyCone& s);

ConvexProcess inverse(const ConvexProcess& h);
/// x |-> G(H(x)).
ConvexProcess compose(const ConvexProcess& g, const ConvexProcess& h);
ConvexProcess power(const ConvexProcess& h, int q);
/// H^- for PolarSign::negative, H^+ for PolarSign::positive.
ConvexProcess dual(const ConvexProcess& h, PolarSign sign);

ConvexProcess minimal_linear(const ConvexProcess& h);
ConvexProcess maximal_linear(const ConvexProcess& h);
/// L^perp, the common value of both duals of a linear process.
ConvexProcess linear_dual(const ConvexProcess& l);

PolyCone reachable_linear(const ConvexProcess& l);
PolyCone feasible_linear(const ConvexProcess& l);

struct FeasibleSetResult {
  /// Fixed point when converged, else the last iterate (an outer approximation).
  PolyCone cone;
  /// Iterate preceding `cone`.
  PolyCone previous;
  bool converged = false;
  /// Number of domain-iteration steps after dom H needed to reach the fixed point.
  int iterations = 0;
  /// Smallest k >= 1 with dom H^k = dom H^{k+1}; -1 when not converged.
  int fixed_point_k = -1;
};

/// Iterates D_k = dom H^k. max_iter < 0 selects 4n.
FeasibleSetResult feasible_set(const ConvexProcess& h, int max_iter = -1);

/// dom H + R(L_-) = R^n.
bool check_domain_condition(const ConvexProcess& h);

/// A boolean that may be undecidable from outer approximations.
struct Decision {
  bool value = false;
  bool conclusive = true;
};

struct TransversalityResult {
  Decision pos;
  Decision neg;
};

/// F(H)^- meets F(H^+) (pos) and F(H^-) (neg) only at 0.
TransversalityResult check_transversality(const ConvexProcess& h, int max_iter = -1);
/// F(H)^- meets F(G) only at 0.
Decision check_transversality_with(const ConvexProcess& h, const ConvexProcess& g, int max_iter = -1);
/// F(H) and H(0) meet only at 0.
Decision check_necessary_condition(const ConvexProcess& h, int max_iter = -1);
/// Every nonzero point of F(H) lies in the relative interior of dom H.
Decision check_rint_condition(const ConvexProcess& h, int max_iter = -1);

}  // namespace conelyap
