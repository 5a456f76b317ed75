#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "conelyap/errors.hpp"
#include "conelyap/functions.hpp"
#include "conelyap/oracle.hpp"
#include "support/fixtures.hpp"
#include "support/random.hpp"

using namespace conelyap;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

PolyCone cone2(double a, double b, double c, double d) {
  Mat g(2, 2);
  g << a, b, c, d;
  return dd_convert(PolyCone::from_generators(g));
}

Mat random_pd(std::mt19937_64& rng, Eigen::Index n) {
  const Mat a = Mat::NullaryExpr(n, n, [&]() { return std::normal_distribution<double>(0, 1)(rng); });
  return a * a.transpose() + 0.2 * Mat::Identity(n, n);
}

}  // namespace

TEST_CASE("evaluation of the basic variants") {
  const auto f = ConeFunction::half_norm_sq(2);
  CHECK(evaluate(f, v2(3, 4)) == doctest::Approx(12.5));
  const auto c = PolyCone::nonnegative_orthant(2);
  const auto g = ConeFunction::quad_on_cone(Mat::Zero(2, 2), c);
  CHECK(evaluate(g, v2(1, 2)) == 0.0);
  CHECK(evaluate(g, v2(-1, 2)) == kInf);
  const auto h = ConeFunction::scaled_dist_sq(0.5, c);
  CHECK(evaluate(h, v2(1, 2)) == doctest::Approx(0.0));
  CHECK(evaluate(h, v2(-3, 2)) == doctest::Approx(4.5));
  CHECK_THROWS_AS(evaluate(f, Vec::Zero(3)), DimensionMismatch);
  CHECK_THROWS_AS(ConeFunction::scaled_dist_sq(-1.0, c), Error);
  CHECK_THROWS_AS(ConeFunction::quadratic((Mat(2, 2) << 1, 2, 0, 1).finished()), Error);
}

TEST_CASE("restriction") {
  const auto f = ConeFunction::half_norm_sq(2);
  const auto c = PolyCone::nonnegative_orthant(2);
  const auto d = cone2(1, 0, 1, -1);
  const auto fc = restrict(f, c);
  CHECK(fc.kind() == ConeFunction::Kind::quad_on_cone);
  CHECK(equals(fc.cone(), c));
  const auto twice = restrict(fc, d);
  const auto once = restrict(f, intersect(c, d));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const Vec x = testsupport::random_vec(rng, 2);
    CHECK(evaluate(twice, x) == evaluate(once, x));
  }
  // Restricting to the feasible set of the third fixture leaves the x-axis.
  const auto fh = feasible_set(testsupport::example3()).cone;
  const auto fr = restrict(f, fh);
  CHECK(evaluate(fr, v2(2, 0)) == doctest::Approx(2.0));
  CHECK(evaluate(fr, v2(2, 1e-3)) == kInf);
}

TEST_CASE("conjugate closed forms") {
  const auto f = ConeFunction::half_norm_sq(2);
  const auto fs = conjugate(f);
  const auto c = cone2(1, 0, 1, 1);
  const auto g = ConeFunction::quad_on_cone(Mat::Zero(2, 2), c);
  const auto gs = conjugate(g);
  const auto h = ConeFunction::scaled_dist_sq(0.5, c);
  const auto hs = conjugate(h);
  const auto cm = polar(c);
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    const Vec y = 3.0 * testsupport::random_vec(rng, 2);
    CHECK(evaluate(fs, y) == doctest::Approx(0.5 * y.squaredNorm()));
    CHECK(evaluate(gs, y) == (contains(cm, y) ? 0.0 : kInf));
    if (contains(cm, y))
      CHECK(evaluate(hs, y) == doctest::Approx(0.5 * y.squaredNorm()));
    else
      CHECK(evaluate(hs, y) == kInf);
  }
  // Moreau: (1/2|.|^2 restricted to C)^* = 1/2 |proj_C|^2.
  const auto w = conjugate(restrict(f, c));
  for (int i = 0; i < 50; ++i) {
    const Vec y = testsupport::random_vec(rng, 2);
    CHECK(evaluate(w, y) == doctest::Approx(0.5 * project_point(c, y).squaredNorm()).epsilon(1e-9));
  }
}

TEST_CASE("numerical conjugates agree with closed forms") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 30; ++t) {
    const auto c = testsupport::random_cone(rng, 3);
    const Eigen::Index n = c.dim();
    const double a = 0.3 + t % 4;
    const auto f = ConeFunction::quad_on_cone(a * Mat::Identity(n, n), c);
    const auto closed = conjugate(f);
    const auto numeric = ConeFunction::conjugate_of(f);
    for (int i = 0; i < 5; ++i) {
      const Vec y = testsupport::random_vec(rng, n);
      const double e1 = evaluate(closed, y), e2 = evaluate(numeric, y);
      CHECK(std::abs(e1 - e2) <= 1e-7 * std::max(1.0, e1));
    }
  }
}

TEST_CASE("biconjugation through explicit wrappers") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 20; ++t) {
    const auto c = testsupport::random_cone(rng, 3);
    const Eigen::Index n = c.dim();
    const auto f = ConeFunction::quad_on_cone(random_pd(rng, n), c);
    const auto ff = ConeFunction::conjugate_of(ConeFunction::conjugate_of(f));
    for (int i = 0; i < 5; ++i) {
      const Vec x = testsupport::random_point_in(rng, c);
      const double a = evaluate(f, x), b = evaluate(ff, x);
      CHECK(std::abs(a - b) <= 1e-6 * std::max(1.0, a));
    }
  }
}

TEST_CASE("homogeneity and order reversal") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    const auto c = testsupport::random_cone(rng, 3);
    const Eigen::Index n = c.dim();
    const Mat q = random_pd(rng, n);
    const std::vector<ConeFunction> fs = {ConeFunction::quad_on_cone(q, c), ConeFunction::scaled_dist_sq(0.7, c),
                                          ConeFunction::conjugate_of(ConeFunction::quad_on_cone(q, c))};
    for (const auto& f : fs) {
      const Vec x = f.kind() == ConeFunction::Kind::quad_on_cone ? testsupport::random_point_in(rng, c)
                                                                : testsupport::random_vec(rng, n);
      const double base = evaluate(f, x);
      if (!std::isfinite(base)) continue;
      CHECK(evaluate(f, Vec::Zero(n)) == doctest::Approx(0.0));
      for (double lam : {0.5, 2.0, 10.0}) {
        const double v = evaluate(f, lam * x);
        CHECK(std::abs(v - lam * lam * base) <= 1e-8 * std::max(1.0, lam * lam * base));
      }
    }
    // f1 = f2 + 1/2|.|^2 >= f2 gives f1^* <= f2^*.
    const auto f2 = ConeFunction::quad_on_cone(q, c);
    const auto f1 = ConeFunction::quad_on_cone(q + 0.5 * Mat::Identity(n, n), c);
    for (int i = 0; i < 5; ++i) {
      const Vec y = testsupport::random_vec(rng, n);
      CHECK(evaluate(conjugate(f1), y) <= evaluate(conjugate(f2), y) + 1e-9);
    }
  }
}

TEST_CASE("conjugates match the grid oracle") {
  std::mt19937_64 rng(77);
  const auto f = ConeFunction::half_norm_sq(2);
  CHECK(oracle::conjugate_grid(f, v2(3, 4)).value == doctest::Approx(12.5).epsilon(1e-6));
  Mat q(2, 2);
  q << 2, 0, 0, 1;
  const auto g = ConeFunction::quad_on_cone(q, cone2(1, 0, 1, 1));
  for (int i = 0; i < 20; ++i) {
    const Vec y = testsupport::random_vec(rng, 2);
    const double exact = evaluate(conjugate(g), y);
    const double grid = oracle::conjugate_grid(g, y).value;
    INFO("gap " << (exact - grid));
    CHECK(grid <= exact * (1 + 1e-7) + 1e-12);
    CHECK(std::abs(exact - grid) <= 1e-4 * std::max(1e-12, exact) + 1e-12);
  }
}

TEST_CASE("positive definiteness bounds") {
  const auto f = ConeFunction::half_norm_sq(2);
  auto b = posdef_bounds(f, cone2(1, 0, 1, 1));
  CHECK(b.status == PosDefBounds::Status::positive_definite);
  CHECK(b.alpha == doctest::Approx(0.5));
  CHECK(b.beta == doctest::Approx(0.5));
  b = posdef_bounds(f, PolyCone::whole_space(2));
  CHECK(b.exact);
  CHECK(b.alpha == doctest::Approx(0.5));

  // On cone{(1,0),(1,1)} the minimum of x1^2 on unit vectors is 1/2, at (1,1)/sqrt 2.
  Mat q(2, 2);
  q << 1, 0, 0, 0;
  const auto g = ConeFunction::quad_on_cone(q, PolyCone::whole_space(2));
  b = posdef_bounds(g, cone2(1, 0, 1, 1));
  CHECK(b.status == PosDefBounds::Status::positive_definite);
  CHECK(b.alpha == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(b.beta == doctest::Approx(1.0));
  CHECK((b.argmin - v2(1, 1) / std::sqrt(2.0)).norm() < 1e-6);

  Mat x1x2(2, 2);
  x1x2 << 0, 0.5, 0.5, 0;
  const auto bilinear = ConeFunction::quad_on_cone(x1x2, PolyCone::nonnegative_orthant(2));
  CHECK_FALSE(is_convex(bilinear));
  b = posdef_bounds(bilinear, PolyCone::nonnegative_orthant(2));
  CHECK(b.status == PosDefBounds::Status::not_positive_definite);
  REQUIRE(b.refutation);
  CHECK(evaluate(bilinear, *b.refutation) <= 1e-12);

  b = posdef_bounds(ConeFunction::quad_on_cone(0.5 * Mat::Identity(2, 2), PolyCone::nonnegative_orthant(2)),
                    PolyCone::whole_space(2));
  CHECK(b.status == PosDefBounds::Status::not_positive_definite);
  CHECK(b.alpha == kInf);

  b = posdef_bounds(f, PolyCone::origin(2));
  CHECK(b.exact);
  CHECK(b.status == PosDefBounds::Status::positive_definite);
}

TEST_CASE("positive definiteness transfers to the conjugate") {
  const auto f = ConeFunction::half_norm_sq(2);
  auto r = check_theorem1_transfer(f, PolyCone::whole_space(2), PolyCone::whole_space(2));
  CHECK(r.verdict == Verdict::holds);
  r = check_theorem1_transfer(f, PolyCone::nonnegative_orthant(2), cone2(1, 0, 1, -1));
  CHECK(r.verdict == Verdict::holds);
  r = check_theorem1_transfer(f, PolyCone::nonnegative_orthant(2), negate(PolyCone::nonnegative_orthant(2)));
  CHECK(r.verdict == Verdict::hypothesis_not_met);
}

TEST_CASE("minimum over polyhedra") {
  const auto f = ConeFunction::half_norm_sq(2);
  Polyhedron line(2);
  line.add_equality(v2(1, 1), 2.0);
  auto m = min_over_polyhedron(f, line);
  REQUIRE(m.status == SolveStatus::optimal);
  CHECK(m.value == doctest::Approx(1.0));
  const auto h = ConeFunction::scaled_dist_sq(1.0, PolyCone::nonnegative_orthant(2));
  Polyhedron far(2);
  far.add_inequality(v2(1, 0), -2.0);
  m = min_over_polyhedron(h, far);
  CHECK(m.value == doctest::Approx(4.0));
  const auto g = ConeFunction::quad_on_cone(Mat::Identity(2, 2), PolyCone::nonnegative_orthant(2));
  CHECK(min_over_polyhedron(g, far).status == SolveStatus::infeasible);
}
