#include "conelyap/report.hpp"

namespace conelyap {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds:
      return "holds_sampled";
    case Verdict::fails:
      return "fails";
    case Verdict::hypothesis_not_met:
      return "hypothesis_not_met";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

}  // namespace conelyap
