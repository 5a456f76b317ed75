#include "conelyap/sampling.hpp"

#include <cmath>
#include <random>

namespace conelyap {

namespace {

constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                           59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131};

// Great-circle interpolation between unit vectors at angle < pi.
Vec slerp(const Vec& a, const Vec& b, double t) {
  const double c = std::clamp(a.dot(b), -1.0, 1.0);
  const double w = std::acos(c);
  if (w < 1e-12) return a;
  return (std::sin((1 - t) * w) * a + std::sin(t * w) * b) / std::sin(w);
}

void planar_mesh(const PolyCone& c, int count, double shift, std::vector<Vec>& out) {
  const Mat& r = c.rays();
  const Mat& l = c.lineality_basis();
  auto push = [&](const Vec& v) { out.push_back(v / v.norm()); };
  if (l.rows() == 2) {
    const Vec a = l.row(0).transpose(), b = l.row(1).transpose();
    for (int i = 0; i < count; ++i) {
      const double th = 2 * M_PI * (i + shift) / count;
      push(std::cos(th) * a + std::sin(th) * b);
    }
    return;
  }
  if (l.rows() == 1) {
    // Half-plane: arc from l through the ray to -l.
    const Vec a = l.row(0).transpose();
    Vec b = r.row(0).transpose();
    b -= b.dot(a) * a;
    b.normalize();
    for (int i = 0; i < count; ++i) {
      const double th = M_PI * (i + shift) / count;
      push(std::cos(th) * a + std::sin(th) * b);
    }
    return;
  }
  const Vec a = r.row(0).transpose(), b = r.row(1).transpose();
  for (int i = 0; i < count; ++i) push(slerp(a, b, (i + shift) / count));
}

}  // namespace

double radical_inverse(std::uint64_t index, int base) {
  double inv = 1.0 / base, f = inv, out = 0.0;
  while (index > 0) {
    out += f * static_cast<double>(index % static_cast<std::uint64_t>(base));
    index /= static_cast<std::uint64_t>(base);
    f *= inv;
  }
  return out;
}

Vec halton_point(std::uint64_t i, int dim, const Vec& shift) {
  Vec p(dim);
  for (int k = 0; k < dim; ++k) {
    const int base = kPrimes[k % static_cast<int>(std::size(kPrimes))];
    double v = radical_inverse(i + 1, base) + (k < shift.size() ? shift(k) : 0.0);
    p(k) = v - std::floor(v);
  }
  return p;
}

Vec seeded_shift(std::uint64_t seed, int dim) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vec s(dim);
  for (int k = 0; k < dim; ++k) s(k) = u(rng);
  return s;
}

std::vector<Vec> cross_section_samples(const PolyCone& cone, const SampleSpec& spec) {
  const PolyCone c = dd_convert(cone);
  std::vector<Vec> out;
  for (Eigen::Index i = 0; i < c.rays().rows(); ++i) out.push_back(c.rays().row(i).transpose());
  for (Eigen::Index i = 0; i < c.lineality_basis().rows(); ++i) {
    out.push_back(c.lineality_basis().row(i).transpose());
    out.push_back(-c.lineality_basis().row(i).transpose());
  }
  if (out.empty() || spec.count <= 0) return out;
  const int span_dim = span_dimension(c);
  if (span_dim <= 1) return out;
  if (span_dim == 2) {
    planar_mesh(c, spec.count, seeded_shift(spec.seed, 1)(0), out);
    return out;
  }
  const Mat g = c.generator_list();
  const int k = static_cast<int>(g.rows());
  const Vec shift = seeded_shift(spec.seed, k);
  for (int i = 0; i < spec.count; ++i) {
    const Vec w = halton_point(static_cast<std::uint64_t>(i), k, shift);
    Vec x = g.transpose() * w;
    const double nrm = x.norm();
    if (nrm < 1e-9) continue;
    out.push_back(x / nrm);
  }
  return out;
}

}  // namespace conelyap
