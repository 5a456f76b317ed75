#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "conelyap/functions.hpp"
#include "conelyap/process.hpp"
#include "conelyap/report.hpp"
#include "conelyap/sampling.hpp"

namespace conelyap {

/// weak/strong: decrease for some/every y in F(H) ∩ H(x), x in F(H).
/// goebel_weak/goebel_strong: the same over H(x), x in dom H.
enum class LyapunovMode { weak, strong, goebel_weak, goebel_strong };

std::string to_string(LyapunovMode m);
LyapunovMode parse_mode(const std::string& s);

struct LyapunovQuery {
  ConvexProcess process;
  ConeFunction candidate;
  double gamma = 0.5;
  LyapunovMode mode = LyapunovMode::weak;
  SampleSpec sampling = {};
  /// Domain-iteration cap; negative selects the default 4n.
  int max_iter = -1;
  /// Relative slack when comparing V(y) with gamma V(x).
  double ratio_tol = 1e-9;
  PosDefOptions posdef = {};
};

VerificationReport verify(const LyapunovQuery& q);

struct GammaSearch {
  /// Largest tested gamma that failed (0 if none) and smallest that held (1 if none).
  double lower = 0.0;
  double upper = 1.0;
  bool found = false;
  VerificationReport report;
};

/// Bisection on gamma in (0, 1) down to `resolution`.
GammaSearch gamma_search(LyapunovQuery q, double resolution = 1e-3);

/// (V restricted to F(H))^*.
ConeFunction dual_candidate(const ConvexProcess& h, const ConeFunction& v, int max_iter = -1);

/// Settings shared by the stages of the transfer pipelines.
struct VerifyOptions {
  SampleSpec sampling = {};
  int max_iter = -1;
  double ratio_tol = 1e-9;
  PosDefOptions posdef = {};
};

VerificationReport check_theorem2(const ConvexProcess& h, const ConeFunction& v, double gamma,
                                  const VerifyOptions& opts = {});

/// `g_is_adjoint` marks G = H^+, for which the coupling hypothesis holds by construction.
VerificationReport check_theorem3(const ConvexProcess& h, const ConvexProcess& g, const ConeFunction& v, double gamma,
                                  bool g_is_adjoint = false, const VerifyOptions& opts = {});

enum class SelectionPolicy { min_v, vertex, random };

std::string to_string(SelectionPolicy p);
SelectionPolicy parse_policy(const std::string& s);

struct Trajectory {
  std::vector<Vec> states;
  std::vector<double> values;
  /// Empty when all steps were taken.
  std::string stopped;
  /// Successors were drawn from an outer approximation of F(H).
  bool outer_approximation = false;
};

/// x_{k+1} chosen in F(H) ∩ H(x_k) by the policy.
Trajectory simulate(const ConvexProcess& h, const ConeFunction& v, const Vec& x0, int steps, SelectionPolicy policy,
                    std::uint64_t seed = 1, int max_iter = -1);

}  // namespace conelyap
