#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "conelyap/errors.hpp"
#include "conelyap/oracle.hpp"
#include "support/fixtures.hpp"
#include "support/random.hpp"

using namespace conelyap;
using oracle::StabilizableResult;

namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

ConvexProcess random_process(std::mt19937_64& rng, Eigen::Index n) {
  std::uniform_int_distribution<int> k(n, 2 * n + 2);
  return ConvexProcess(n, testsupport::random_generated_cone(rng, 2 * n, k(rng)));
}

}  // namespace

TEST_CASE("polar of the orthant by sampling") {
  const auto r = oracle::polar_sampled(PolyCone::nonnegative_orthant(2), 10000);
  CHECK(r.samples == 10000);
  CHECK(r.ok());
  CHECK(oracle::polar_sampled(PolyCone::nonnegative_orthant(3), 1000, 5, PolarSign::positive).ok());
}

TEST_CASE("sampled polar agrees on random cones") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 30; ++t) {
    const PolyCone c = testsupport::random_cone(rng, 4);
    const auto r = oracle::polar_sampled(c, 1000, static_cast<std::uint64_t>(t));
    CHECK_MESSAGE(r.ok(), "trial " << t << " " << r.computed_not_true << "/" << r.true_not_computed);
  }
}

TEST_CASE("grid conjugate of the half squared norm") {
  const auto g = oracle::conjugate_grid(ConeFunction::half_norm_sq(2), v2(3, 4), 1e-2);
  CHECK(g.value == doctest::Approx(12.5).epsilon(1e-4));
  CHECK(g.value <= 12.5 + 1e-9);
  CHECK(g.radius >= 5.0);
}

TEST_CASE("feasible depth is antitone and contains the feasible set") {
  std::mt19937_64 rng(5);
  int checked = 0, profiles = 0, ill_conditioned = 0;
  for (int t = 0; t < 40; ++t) {
    const Eigen::Index n = 2 + t % 2;
    const ConvexProcess h = random_process(rng, n);
    const auto fs = feasible_set(h);
    std::vector<Vec> starts;
    for (int s = 0; s < 3; ++s) starts.push_back(testsupport::random_unit(rng, n));
    if (fs.converged && !is_trivial(fs.cone)) starts.push_back(testsupport::random_point_in(rng, fs.cone));
    for (const Vec& x0 : starts) {
      std::vector<bool> profile;
      try {
        profile = oracle::feasible_depth_profile(h, x0, static_cast<int>(4 * n));
      } catch (const SolverError&) {
        // Trajectories that grow by orders of magnitude per step exceed the dense simplex's accuracy.
        ++ill_conditioned;
        continue;
      }
      ++profiles;
      for (std::size_t d = 1; d < profile.size(); ++d) CHECK((profile[d - 1] || !profile[d]));
      if (fs.converged && contains(fs.cone, x0)) {
        ++checked;
        for (bool b : profile) CHECK(b);
      }
    }
  }
  MESSAGE("profiles " << profiles << ", inside F " << checked << ", ill-conditioned " << ill_conditioned);
  CHECK(checked >= 20);
  CHECK(ill_conditioned * 20 <= profiles);
}

TEST_CASE("depth on the ex3 fixture") {
  const auto h = testsupport::example3();
  CHECK(oracle::feasible_depth(h, v2(1, 0), 8));
  CHECK(oracle::feasible_depth(h, v2(0, 1), 1));
  CHECK(!oracle::feasible_depth(h, v2(0, 1), 2));
  CHECK(!oracle::feasible_depth(h, v2(0, -1), 1));
}

TEST_CASE("stabilizability of a contraction") {
  const auto h = ConvexProcess::linear_map(0.5 * Mat::Identity(2, 2));
  const auto r = oracle::stabilizable_sample(h, v2(0.3, -2), 10, 0.01);
  CHECK(r.verdict == StabilizableResult::Verdict::yes_certified);
  CHECK(r.rho == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(r.trajectory.size() == 13);
}

TEST_CASE("stabilizability of the ex3 fixture") {
  const auto r = oracle::stabilizable_sample(testsupport::example3(), v2(1, 0), 10, 0.01);
  REQUIRE(r.verdict == StabilizableResult::Verdict::yes_certified);
  for (std::size_t k = 0; k < r.trajectory.size(); ++k) {
    const double expect = std::pow(-0.5, static_cast<double>(k));
    CHECK((r.trajectory[k] - v2(expect, 0)).norm() < 1e-7);
  }
}

TEST_CASE("stabilizability of the ex2 fixture") {
  const auto r = oracle::stabilizable_sample(testsupport::example2(), v2(2, 1), 30, 1e-3);
  CHECK(r.verdict == StabilizableResult::Verdict::yes_certified);
  CHECK(r.rho < 1.0);
}

TEST_CASE("expanding and dead-end processes are not certified") {
  const auto grow = ConvexProcess::linear_map(2.0 * Mat::Identity(2, 2));
  CHECK(oracle::stabilizable_sample(grow, v2(1, 1), 10, 0.01).verdict == StabilizableResult::Verdict::unknown);
  const auto dead = oracle::stabilizable_sample(testsupport::example3(), v2(0, 1), 10, 0.01);
  CHECK(dead.verdict == StabilizableResult::Verdict::unknown);
  CHECK(dead.trajectory.empty());
}
