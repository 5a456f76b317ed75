#pragma once

#include <cstdint>
#include <vector>

#include "conelyap/geometry.hpp"

namespace conelyap {

struct SampleSpec {
  int count = 1000;
  std::uint64_t seed = 1;
};

/// Radical inverse of `index` in the given prime base.
double radical_inverse(std::uint64_t index, int base);

/// i-th point of a Cranley-Patterson shifted Halton sequence in [0,1)^dim.
Vec halton_point(std::uint64_t i, int dim, const Vec& shift);

/// Shift vector in [0,1)^dim derived from the seed.
Vec seeded_shift(std::uint64_t seed, int dim);

/// Points of {x in C : |x| = 1}: all extreme rays and +/- lineality vectors first,
/// then `count` further points (an even angular mesh when span C is a plane,
/// quasi-random conic combinations of the generators otherwise).
std::vector<Vec> cross_section_samples(const PolyCone& c, const SampleSpec& spec);

}  // namespace conelyap
