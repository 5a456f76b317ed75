#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "conelyap/errors.hpp"
#include "conelyap/lyapunov.hpp"
#include "support/fixtures.hpp"
#include "support/random.hpp"

using namespace conelyap;

namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

LyapunovQuery query(const ConvexProcess& h, double gamma, LyapunovMode mode, int count = 200) {
  return {h, ConeFunction::half_norm_sq(h.n()), gamma, mode, SampleSpec{count, 1}};
}

const VerificationReport* sub(const VerificationReport& r, const std::string& name) {
  for (const auto& s : r.sub_reports)
    if (s.name == name) return &s;
  return nullptr;
}

}  // namespace

TEST_CASE("ex3 strong mode holds with margin 1/4") {
  const auto r = verify(query(testsupport::example3(), 0.25, LyapunovMode::strong));
  CHECK(r.verdict == Verdict::holds);
  CHECK(r.gamma_margin == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(r.checked_points > 0);

  const auto tight = verify(query(testsupport::example3(), 0.2, LyapunovMode::strong));
  CHECK(tight.verdict == Verdict::fails);
  REQUIRE(tight.witness);
  CHECK(std::abs(tight.witness->x(1)) < 1e-9);
}

TEST_CASE("ex3 on the whole domain fails along a ray") {
  const auto r = verify(query(testsupport::example3(), 0.5, LyapunovMode::goebel_strong));
  CHECK(r.verdict == Verdict::fails);
  REQUIRE(r.witness);
  REQUIRE(r.witness->ray);
  CHECK((*r.witness->ray - v2(0, -1)).norm() < 1e-9);
}

TEST_CASE("ex2 weak modes") {
  const auto goebel = verify(query(testsupport::example2(), 0.5, LyapunovMode::goebel_weak, 400));
  CHECK(goebel.verdict == Verdict::holds);
  CHECK(goebel.gamma_margin == doctest::Approx(0.05).epsilon(1e-3));

  const auto weak = verify(query(testsupport::example2(), 0.5, LyapunovMode::weak, 400));
  CHECK(weak.verdict == Verdict::holds);
  CHECK(weak.gamma_margin == doctest::Approx(0.25).epsilon(1e-3));
}

TEST_CASE("non positive definite candidates are rejected") {
  Mat q = Mat::Zero(2, 2);
  q(0, 0) = 1;
  LyapunovQuery lq{testsupport::linear_diag(), ConeFunction::quadratic(q), 0.5, LyapunovMode::weak, SampleSpec{50, 1}};
  const auto r = verify(lq);
  CHECK(r.verdict == Verdict::fails);
  REQUIRE(r.witness);
  CHECK(std::abs(r.witness->x(0)) < 1e-6);
}

TEST_CASE("gamma must lie in (0,1)") {
  CHECK_THROWS_AS(verify(query(testsupport::linear_diag(), 1.0, LyapunovMode::weak)), Error);
  CHECK_THROWS_AS(verify(query(testsupport::linear_diag(), 0.0, LyapunovMode::weak)), Error);
}

TEST_CASE("gamma search brackets the margin") {
  const auto s = gamma_search(query(testsupport::example3(), 0.5, LyapunovMode::strong, 50), 1e-3);
  REQUIRE(s.found);
  CHECK(s.upper >= 0.25 - 1e-9);
  CHECK(s.upper - s.lower <= 1e-3);
  CHECK(s.lower <= 0.25);
}

TEST_CASE("linear maps: margins bounded by the squared operator norm") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + t % 2;
    Mat a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = g(rng);
    a *= 0.8 / a.operatorNorm();
    const auto h = ConvexProcess::linear_map(a);
    const double bound = std::pow(a.operatorNorm(), 2);
    for (auto mode : {LyapunovMode::weak, LyapunovMode::strong}) {
      const auto r = verify(query(h, 0.7, mode, 100));
      CHECK(r.verdict == Verdict::holds);
      CHECK(r.gamma_margin <= bound + 1e-9);
    }
  }
}

TEST_CASE("weak V transfers to a strong W for the adjoint") {
  const auto r = check_theorem2(testsupport::strict_diag(), ConeFunction::half_norm_sq(2), 0.25, {SampleSpec{200, 1}});
  CHECK(r.verdict == Verdict::holds);
  REQUIRE(r.sub_reports.size() == 4);
  for (const auto& s : r.sub_reports) CHECK_MESSAGE(s.verdict == Verdict::holds, s.name);
  CHECK(r.gamma_margin <= 0.25 + 1e-9);

  const auto bad = check_theorem2(testsupport::example3(), ConeFunction::half_norm_sq(2), 0.25, {SampleSpec{100, 1}});
  CHECK(bad.verdict == Verdict::hypothesis_not_met);
  REQUIRE(sub(bad, "transversality_pos"));
  CHECK(sub(bad, "transversality_pos")->verdict == Verdict::fails);
}

TEST_CASE("dual-process transfer on a linear process") {
  const auto h = testsupport::linear_diag();
  const auto v = ConeFunction::half_norm_sq(2);
  const auto plus = check_theorem3(h, dual(h, PolarSign::positive), v, 0.3, true, {SampleSpec{100, 1}});
  CHECK(plus.verdict == Verdict::holds);
  REQUIRE(sub(plus, "coupling_hypothesis"));
  CHECK(sub(plus, "coupling_hypothesis")->verdict == Verdict::holds);

  const auto minus = check_theorem3(h, dual(h, PolarSign::negative), v, 0.3, false, {SampleSpec{100, 1}});
  CHECK(sub(minus, "coupling_hypothesis")->verdict == Verdict::holds);
  CHECK(minus.verdict == Verdict::holds);

  Mat at = Mat::Zero(2, 2);
  at(0, 0) = -0.5;
  at(1, 1) = -1.0 / 3.0;
  const auto flipped = check_theorem3(h, ConvexProcess::linear_map(at), v, 0.3, false, {SampleSpec{100, 1}});
  CHECK(flipped.verdict == Verdict::hypothesis_not_met);
  REQUIRE(sub(flipped, "coupling_hypothesis"));
  CHECK(sub(flipped, "coupling_hypothesis")->verdict == Verdict::fails);
  CHECK(sub(flipped, "coupling_hypothesis")->witness);
}

TEST_CASE("simulation of ex3 halves the state") {
  const auto h = testsupport::example3();
  const auto v = ConeFunction::half_norm_sq(2);
  for (auto policy : {SelectionPolicy::min_v, SelectionPolicy::vertex, SelectionPolicy::random}) {
    const auto t = simulate(h, v, v2(1, 0), 10, policy, 3);
    REQUIRE(t.states.size() == 11);
    CHECK(t.stopped.empty());
    for (std::size_t k = 0; k < t.states.size(); ++k)
      CHECK(t.states[k].norm() == doctest::Approx(std::pow(2.0, -static_cast<double>(k))).epsilon(1e-9));
  }
  const auto dead = simulate(h, v, v2(0, -1), 5, SelectionPolicy::min_v);
  CHECK(!dead.stopped.empty());
  CHECK(dead.states.size() == 1);
}

TEST_CASE("simulation of ex2 converges under min_V") {
  const auto t = simulate(testsupport::example2(), ConeFunction::half_norm_sq(2), v2(2, 1), 20, SelectionPolicy::min_v);
  REQUIRE(t.stopped.empty());
  CHECK(t.states.back().norm() < 1e-5);
  for (std::size_t k = 1; k < t.values.size(); ++k) CHECK(t.values[k] <= 0.25 * t.values[k - 1] + 1e-12);
}

TEST_CASE("mode and policy names round trip") {
  for (auto m : {LyapunovMode::weak, LyapunovMode::strong, LyapunovMode::goebel_weak, LyapunovMode::goebel_strong})
    CHECK(parse_mode(to_string(m)) == m);
  for (auto p : {SelectionPolicy::min_v, SelectionPolicy::vertex, SelectionPolicy::random})
    CHECK(parse_policy(to_string(p)) == p);
  CHECK_THROWS_AS(parse_mode("medium"), ParseError);
}
