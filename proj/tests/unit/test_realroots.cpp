#include <doctest.h>

#include <cmath>
#include <random>

#include "cylhypo/realroots.hpp"

using namespace cylhypo::realpoly;

TEST_CASE("roots of x^2 - 4") {
  auto r = real_roots({-4.0, 0.0, 1.0});
  REQUIRE(r.size() == 2);
  CHECK(r[0] == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(r[1] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("no real roots") {
  CHECK(real_roots({1.0, 0.0, 1.0}).empty());
  CHECK(real_roots({3.0}).empty());
  CHECK(real_roots({}).empty());
}

TEST_CASE("double root counted once") {
  auto r = real_roots({1.0, -2.0, 1.0});
  REQUIRE(r.size() == 1);
  CHECK(std::abs(r[0] - 1.0) < 1e-7);
}

TEST_CASE("root bound encloses roots") {
  const std::vector<double> c{-6.0, 11.0, -6.0, 1.0};  // (x-1)(x-2)(x-3)
  const double B = root_bound(c);
  for (double x : real_roots(c)) CHECK(std::abs(x) <= B);
  CHECK(sturm_count(c, -B, B) == 3);
  CHECK(sturm_count(c, 1.5, 2.5) == 1);
}

TEST_CASE("isolated roots match Sturm counts") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(-3, 3);
  for (int n = 0; n < 100; ++n) {
    std::vector<double> c(1 + n % 6);
    for (auto& v : c) v = U(rng);
    c.push_back(1.0);
    const auto roots = real_roots(c);
    const double B = root_bound(c);
    CHECK(static_cast<int>(roots.size()) == sturm_count(c, -B - 1, B + 1));
    for (double x : roots) CHECK(std::abs(eval(c, x)) < 1e-8 * (1 + std::abs(x)) * 100);
  }
}

TEST_CASE("trimmed and derivative") {
  CHECK(trimmed({1.0, 0.0, 0.0}).size() == 1);
  CHECK(derivative({1.0, 2.0, 3.0}) == std::vector<double>{2.0, 6.0});
}
