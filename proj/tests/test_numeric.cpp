#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <vector>

#include "ct/numeric.hpp"
#include "doctest.h"

using namespace ct;

TEST_CASE("pairwise_sum matches naive accumulation on benign data") {
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(0.1 * static_cast<double>(i));
  const double naive = std::accumulate(v.begin(), v.end(), 0.0);
  CHECK(pairwise_sum(v.data(), v.size()) == doctest::Approx(naive).epsilon(1e-14));
}

TEST_CASE("pairwise_sum handles tiny and empty inputs") {
  CHECK(pairwise_sum(nullptr, 0) == 0.0);
  const double one = 42.0;
  CHECK(pairwise_sum(&one, 1) == 42.0);
}

TEST_CASE("deterministic_sum is independent of the worker count") {
  auto term = [](std::size_t i) {
    const double x = static_cast<double>(i % 977) * 1e-3;
    return std::sin(x) * std::exp(-x) + 1e-9 * static_cast<double>(i % 13);
  };
  const std::size_t n = 100000;
  const double s1 = deterministic_sum(n, term, 1);
  const double s2 = deterministic_sum(n, term, 2);
  const double s5 = deterministic_sum(n, term, 5);
  // Bitwise identical, not merely close: the reduction order is fixed.
  CHECK(s1 == s2);
  CHECK(s1 == s5);
}

TEST_CASE("deterministic_sum equals pairwise_sum of the same terms") {
  const std::size_t n = 9001;  // forces a partial trailing chunk
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 / static_cast<double>(i + 1);
  const double a = deterministic_sum(n, [&](std::size_t i) { return v[i]; }, 3);
  const double naive = std::accumulate(v.begin(), v.end(), 0.0);
  CHECK(a == doctest::Approx(naive).epsilon(1e-13));
}

TEST_CASE("worker_count respects the environment override") {
  // Only exercise the parse path when the variable is absent; tests must not
  // mutate the process environment for other cases running in parallel.
  if (std::getenv("CONTACT_THERMO_THREADS") == nullptr) {
    CHECK(worker_count(3) == 3);
    CHECK(worker_count(0) >= 1);
  }
}

TEST_CASE("coordinate wrapping lands in the fundamental box") {
  CHECK(wrap_coord(1.25, 1.0) == doctest::Approx(0.25));
  CHECK(wrap_coord(-0.25, 1.0) == doctest::Approx(0.75));
  CHECK(wrap_coord(3.0, 1.0) == doctest::Approx(0.0));
  Vec p(2);
  p << 1.0, 2.0;
  Vec x(2);
  x << -0.1, 2.5;
  const Vec w = wrap_point(x, p);
  CHECK(w[0] == doctest::Approx(0.9));
  CHECK(w[1] == doctest::Approx(0.5));
}

TEST_CASE("circle and torus distances take the short way around") {
  CHECK(circle_distance(0.1, 0.9, 1.0) == doctest::Approx(0.2));
  CHECK(circle_distance(0.0, 0.5, 1.0) == doctest::Approx(0.5));
  Vec p(3);
  p << 1.0, 1.0, 1.0;
  Vec a(3), b(3);
  a << 0.05, 0.5, 0.0;
  b << 0.95, 0.5, 0.5;
  // Euclidean over the per-axis wraparound distances (0.1, 0, 0.5).
  CHECK(torus_distance(a, b, p) == doctest::Approx(std::hypot(0.1, 0.5)));
}

TEST_CASE("rng streams are reproducible by seed") {
  Rng r1(7), r2(7), r3(8);
  const double a = r1.uniform(0.0, 1.0);
  const double b = r2.uniform(0.0, 1.0);
  CHECK(a == b);
  Vec p(3);
  p << 1.0, 1.0, 1.0;
  const Vec x1 = r1.point(p);
  const Vec x2 = r2.point(p);
  CHECK((x1 - x2).cwiseAbs().maxCoeff() == 0.0);
  for (int i = 0; i < 3; ++i) {
    CHECK(x1[i] >= 0.0);
    CHECK(x1[i] < 1.0);
  }
  // A different seed should decorrelate immediately.
  CHECK(r3.uniform(0.0, 1.0) != a);
}
