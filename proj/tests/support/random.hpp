#pragma once

#include <random>
#include <vector>

#include "conelyap/geometry.hpp"

namespace testsupport {

using conelyap::Mat;
using conelyap::PolyCone;
using conelyap::Vec;

inline Vec random_vec(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

inline Vec random_unit(std::mt19937_64& rng, Eigen::Index n) {
  Vec v = random_vec(rng, n);
  while (v.norm() < 1e-3) v = random_vec(rng, n);
  return v / v.norm();
}

/// Small-integer vector; keeps random cones away from near-degenerate data.
inline Vec random_int_vec(std::mt19937_64& rng, Eigen::Index n, int range = 3) {
  std::uniform_int_distribution<int> u(-range, range);
  Vec v(n);
  do {
    for (Eigen::Index i = 0; i < n; ++i) v(i) = u(rng);
  } while (v.norm() == 0.0);
  return v;
}

/// Random cone given by k integer generators, optionally with a lineality vector.
inline PolyCone random_generated_cone(std::mt19937_64& rng, Eigen::Index n, int k, bool with_line = false) {
  std::vector<Vec> rays;
  for (int i = 0; i < k; ++i) rays.push_back(random_int_vec(rng, n));
  Mat lines(0, n);
  if (with_line) {
    lines.resize(1, n);
    lines.row(0) = random_int_vec(rng, n).transpose();
  }
  return PolyCone::from_generators(conelyap::linalg::from_rows(rays, n), lines);
}

/// Random cone given by k integer inequalities.
inline PolyCone random_constrained_cone(std::mt19937_64& rng, Eigen::Index n, int k) {
  std::vector<Vec> rows;
  for (int i = 0; i < k; ++i) rows.push_back(random_int_vec(rng, n));
  return PolyCone::from_constraints(conelyap::linalg::from_rows(rows, n), Mat(0, n));
}

inline PolyCone random_cone(std::mt19937_64& rng, Eigen::Index max_dim = 4) {
  std::uniform_int_distribution<int> dim(1, static_cast<int>(max_dim));
  std::uniform_int_distribution<int> count(1, 6);
  std::bernoulli_distribution coin(0.5), rare(0.2);
  const Eigen::Index n = dim(rng);
  if (coin(rng)) return conelyap::dd_convert(random_generated_cone(rng, n, count(rng), rare(rng)));
  return conelyap::dd_convert(random_constrained_cone(rng, n, count(rng)));
}

inline Vec random_point_in(std::mt19937_64& rng, const PolyCone& c) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g(0.0, 1.0);
  Vec x = Vec::Zero(c.dim());
  for (Eigen::Index i = 0; i < c.rays().rows(); ++i) x += u(rng) * c.rays().row(i).transpose();
  for (Eigen::Index i = 0; i < c.lineality_basis().rows(); ++i) x += g(rng) * c.lineality_basis().row(i).transpose();
  return x;
}

}  // namespace testsupport
