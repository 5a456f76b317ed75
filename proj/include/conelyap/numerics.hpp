#pragma once

#include <string>

#include "conelyap/polyhedron.hpp"

namespace conelyap {

/// Tolerances and caps shared by the LP and QP kernels.
struct NumericsConfig {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double kkt_tol = 1e-8;
  double pivot_tol = 1e-9;
  int max_iterations = 20000;
  /// Consecutive degenerate pivots before switching from Dantzig to Bland.
  int degenerate_switch = 50;
};

enum class Sense { minimize, maximize };

enum class SolveStatus { optimal, infeasible, unbounded };

std::string to_string(SolveStatus s);

struct LinearProgram {
  Vec c;
  Polyhedron constraints;
  Sense sense = Sense::minimize;
};

/// Outcome of solve_lp. Exactly one certificate is meaningful per status:
///  - optimal:    x feasible; (ineq_multipliers, eq_multipliers) are dual
///                multipliers of the minimization form, c + A^T l + E^T m = 0.
///  - infeasible: (ineq_multipliers >= 0, eq_multipliers) is a Farkas
///                certificate, A^T l + E^T m = 0 and b.l + f.m < 0.
///  - unbounded:  x feasible and `ray` is a recession direction improving the
///                objective.
struct LpResult {
  SolveStatus status = SolveStatus::infeasible;
  Vec x;
  double value = 0.0;
  Vec ineq_multipliers;
  Vec eq_multipliers;
  Vec ray;
  int iterations = 0;
  bool bland_engaged = false;
};

LpResult solve_lp(const LinearProgram& lp, const NumericsConfig& cfg = {});

/// Checks a Farkas certificate against the constraint system.
bool verify_farkas(const Polyhedron& p, const Vec& ineq, const Vec& eq, double tol = 1e-7);

/// Minimize 1/2 x^T Q x + c.x over the polyhedron; Q symmetric PSD.
struct QuadraticProgram {
  Mat Q;
  Vec c;
  Polyhedron constraints;
};

struct QpResult {
  SolveStatus status = SolveStatus::infeasible;
  Vec x;
  double value = 0.0;
  /// Direction along which the objective decreases without bound.
  Vec ray;
  double kkt_residual = 0.0;
  int iterations = 0;
};

QpResult solve_qp(const QuadraticProgram& qp, const NumericsConfig& cfg = {});

/// Point of the polyhedron with no objective preference (phase-one LP).
/// Empty optional-like: status infeasible.
LpResult find_feasible_point(const Polyhedron& p, const NumericsConfig& cfg = {});

}  // namespace conelyap
