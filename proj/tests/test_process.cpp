#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "conelyap/errors.hpp"
#include "conelyap/process.hpp"
#include "support/fixtures.hpp"
#include "support/random.hpp"

using namespace conelyap;

namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

PolyCone halfplane(double a, double b) {
  Mat r(1, 2);
  r << a, b;
  return PolyCone::from_constraints(r);
}

}  // namespace

TEST_CASE("ex3 fixture structure") {
  const auto h = testsupport::example3();
  const auto f = feasible_set(h);
  REQUIRE(f.converged);
  CHECK(f.iterations == 1);
  CHECK(equals(f.cone, PolyCone::subspace(Mat(v2(1, 0).transpose()), 2)));
  CHECK(equals(domain(h), halfplane(0, -1)));

  const Polyhedron hx = image_of_point(h, v2(0, 1));
  Polyhedron expect(2);
  expect.add_equality(v2(1, 0), 0.0);
  expect.add_inequality(v2(0, 1), -0.5);
  CHECK(polyhedra_equal(hx, expect));
  CHECK(is_empty(image_of_point(h, v2(0, -1))));

  const auto hp = dual(h, PolarSign::positive);
  CHECK(equals(domain(hp), halfplane(0, 1)));
  const Polyhedron hq = image_of_point(hp, v2(2, -2));
  Polyhedron expect_q(2);
  expect_q.add_equality(v2(1, 0), -1.0);
  expect_q.add_inequality(v2(0, 1), 1.0);
  CHECK(polyhedra_equal(hq, expect_q));

  const auto t = check_transversality(h);
  CHECK(t.pos.conclusive);
  CHECK_FALSE(t.pos.value);
  CHECK(check_necessary_condition(h).value);
  CHECK_FALSE(check_rint_condition(h).value);
  CHECK_FALSE(check_domain_condition(h));
}

TEST_CASE("ex2 fixture structure") {
  const auto h = testsupport::example2();
  const auto f = feasible_set(h);
  REQUIRE(f.converged);
  CHECK(f.fixed_point_k == 1);
  CHECK(f.iterations == 0);
  CHECK(equals(f.cone, domain(h)));
  const Polyhedron hx = image_of_point(h, v2(2, 1));
  Polyhedron expect(2);
  expect.add_equality(v2(0, 1), 0.5);
  CHECK(polyhedra_equal(hx, expect));

  const auto lm = minimal_linear(h);
  Mat line(1, 4);
  line << 0, 0, 1, 0;
  CHECK(equals(lm.graph(), PolyCone::subspace(line, 4)));
  CHECK(is_trivial(domain(lm)));
  CHECK(equals(reachable_linear(lm), PolyCone::subspace(Mat(v2(1, 0).transpose()), 2)));
  CHECK_FALSE(check_domain_condition(h));
  CHECK(equals(image_of_cone(h, domain(h)), halfplane(0, -1)));
}

TEST_CASE("strict and linear processes") {
  const auto s = testsupport::strict_diag();
  CHECK(is_whole_space(domain(s)));
  CHECK(check_domain_condition(s));
  const auto fs = feasible_set(s);
  CHECK(fs.converged);
  CHECK(fs.iterations == 0);
  const auto t = check_transversality(s);
  CHECK((t.pos.value && t.neg.value));
  CHECK(check_rint_condition(s).value);
  const auto sp = dual(s, PolarSign::positive);
  CHECK(equals(domain(sp), halfplane(-1, -1)));
  CHECK(polyhedra_equal(image_of_point(sp, v2(1, 2)), Polyhedron(Mat(0, 2), Vec(0), Mat::Identity(2, 2), v2(0.5, 2.0 / 3.0))));
  // The forward domain iteration of the adjoint does not stabilize.
  const auto fp = feasible_set(sp);
  CHECK_FALSE(fp.converged);
  CHECK(includes(fp.cone, dd_convert(PolyCone::from_generators(Mat((Mat(2, 2) << 0, 1, 1, -1).finished())))));

  const auto l = testsupport::linear_diag();
  CHECK(l.is_linear());
  CHECK(is_trivial(image_of_cone(power(l, 2), PolyCone::origin(2))));
  CHECK(is_trivial(reachable_linear(l)));
  CHECK(is_whole_space(feasible_linear(l)));
  CHECK(equals(linear_dual(l).graph(), l.graph()));
  CHECK(check_rint_condition(l).value);
  CHECK(check_necessary_condition(l).value);
  CHECK(equals(minimal_linear(l).graph(), l.graph()));
  CHECK(equals(maximal_linear(l).graph(), l.graph()));
}

TEST_CASE("everything-valued process fails the necessary condition") {
  const ConvexProcess all(2, PolyCone::whole_space(4));
  CHECK_FALSE(check_necessary_condition(all).value);
}

TEST_CASE("inverse and power") {
  const auto h = testsupport::example3();
  CHECK(equals(inverse(inverse(h)).graph(), h.graph()));
  const auto h2 = power(h, 2);
  const auto direct = compose(h, h);
  CHECK(equals(h2.graph(), direct.graph()));
  // dom H^2 is F(H) for this example.
  CHECK(equals(domain(h2), feasible_set(h).cone));
  CHECK_THROWS_AS(compose(h, ConvexProcess::linear_map(Mat::Identity(3, 3))), DimensionMismatch);
  CHECK_THROWS_AS(ConvexProcess(3, PolyCone::whole_space(4)), DimensionMismatch);
}

TEST_CASE("dual identities on random processes") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 60; ++t) {
    const Eigen::Index n = 1 + t % 3;
    const auto g = testsupport::random_generated_cone(rng, 2 * n, 2 + t % 5, t % 7 == 0);
    const ConvexProcess h(n, g);
    const auto hp = dual(h, PolarSign::positive);
    const auto hm = dual(h, PolarSign::negative);
    CHECK(equals(dual(hp, PolarSign::negative).graph(), h.graph()));
    // H^+(q) = -H^-(-q)
    const Vec q = testsupport::random_vec(rng, n);
    Polyhedron a = image_of_point(hp, q);
    Polyhedron b = image_of_point(hm, -q);
    Polyhedron neg_b(-b.A, b.b, -b.E, b.f);
    CHECK(polyhedra_equal(a, neg_b));
    // H(0) = (dom H^+)^+
    CHECK(equals(image_at_origin(h), polar(domain(hp), PolarSign::positive)));
    // Defining inequality p.x <= q.y on graph samples.
    const Vec gp = testsupport::random_point_in(rng, hp.graph());
    const Vec gh = testsupport::random_point_in(rng, h.graph());
    CHECK(gp.tail(n).dot(gh.head(n)) <= gp.head(n).dot(gh.tail(n)) + 1e-8);
  }
}

TEST_CASE("affine cone compiles to the expected graph") {
  Mat a(2, 2);
  a << 0, 1, 1, 0;
  const auto h = ConvexProcess::affine_cone(a, PolyCone::origin(2), PolyCone::nonnegative_orthant(2));
  CHECK(equals(domain(h), PolyCone::nonnegative_orthant(2)));
  CHECK(polyhedra_equal(image_of_point(h, v2(1, 3)), Polyhedron(Mat(0, 2), Vec(0), Mat::Identity(2, 2), v2(3, 1))));
}
