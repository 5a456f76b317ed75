#pragma once

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "conelyap/linalg.hpp"

namespace conelyap {

enum class Verdict { holds, fails, hypothesis_not_met, inconclusive };

/// "holds_sampled", "fails", "hypothesis_not_met", "inconclusive".
std::string to_string(Verdict v);

struct Witness {
  Vec x;
  std::optional<Vec> y;
  /// Recession direction of a slice along which the candidate is unbounded.
  std::optional<Vec> ray;
  std::string note;
};

struct VerificationReport {
  std::string name;
  Verdict verdict = Verdict::inconclusive;
  std::optional<Witness> witness;
  int checked_points = 0;
  /// Worst observed ratio V(y)/V(x); NaN when not applicable.
  double gamma_margin = std::numeric_limits<double>::quiet_NaN();
  std::string detail;
  std::vector<std::pair<std::string, double>> quantities;
  std::vector<VerificationReport> sub_reports;
};

}  // namespace conelyap
