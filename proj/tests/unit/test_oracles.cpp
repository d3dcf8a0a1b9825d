#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cylhypo/oracles.hpp"

using namespace cylhypo;
using namespace cylhypo::oracles;
using std::numbers::pi;

namespace {
const cplx I{0.0, 1.0};
}

TEST_CASE("enumerate_delta small cases") {
  auto d3 = enumerate_delta(3);
  REQUIRE(d3.size() == 3);
  CHECK(d3[0].tau == std::vector<int>{3, 0, 0});
  CHECK(d3[1].tau == std::vector<int>{1, 1, 0});
  CHECK(d3[2].tau == std::vector<int>{0, 0, 1});
  auto d1 = enumerate_delta(1);
  REQUIRE(d1.size() == 1);
  CHECK(d1[0].tau == std::vector<int>{1});
  CHECK(enumerate_delta(5).size() == 7);
  for (const auto& t : enumerate_delta(6)) CHECK(t.valid());
  CHECK(d3[1].size() == 2);
}

TEST_CASE("Delta(N) counts are partition numbers") {
  const long long p[] = {1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101, 135, 176, 231, 297, 385, 490, 627};
  for (int N = 1; N <= 20; ++N) {
    CHECK(partition_count(N) == p[N - 1]);
    CHECK(static_cast<long long>(enumerate_delta(N).size()) == p[N - 1]);
  }
}

TEST_CASE("Faa di Bruno examples") {
  CHECK(std::abs(faa_di_bruno_exp(TrigPolynomial::cosine(1.0), 2, 0.0) + std::exp(1.0)) < 1e-13);
  CHECK(std::abs(faa_di_bruno_exp(TrigPolynomial(), 3, 1.0)) == 0.0);
  // f = it is not a trig polynomial; i sin t matches it to first order at 0
  const auto f = TrigPolynomial::sine(1.0) * I;
  auto ef = [&](double t) { return std::exp(f(t)); };
  for (int N = 1; N <= 4; ++N)
    for (double t : {0.0, 0.7, 2.0}) {
      const cplx fd = finite_difference(ef, t, N, 1e-2, 3 + N);
      const cplx fb = faa_di_bruno_exp(f, N, t);
      CHECK(std::abs(fd - fb) < 1e-4 * std::max(1.0, std::abs(fb)));
    }
}

TEST_CASE("Delta identity") {
  auto a = check_delta_identity(3, 2, 1);
  CHECK(a.exact);
  CHECK(a.equal);
  CHECK(a.lhs_text == "18");
  auto b = check_delta_identity(1, 5, 1);
  CHECK(b.equal);
  CHECK(b.lhs == 5.0);
  auto c = check_delta_identity(12, -0.5);
  CHECK(c.equal);
  CHECK(std::abs(c.lhs - c.rhs) < 1e-9);
  for (int N = 1; N <= 12; ++N)
    for (auto [n, d] : {std::pair{-1LL, 2LL}, {1LL, 1LL}, {2LL, 1LL}, {7LL, 3LL}}) CHECK(check_delta_identity(N, n, d).equal);
}

TEST_CASE("factorial bound") {
  CHECK(check_factorial_bound({3, {1, 1, 0}}, 2.0));
  for (const auto& t : enumerate_delta(5)) CHECK(check_factorial_bound(t, 1.0));
  for (const auto& t : enumerate_delta(6)) CHECK(check_factorial_bound(t, 1.5));
  for (const auto& t : enumerate_delta(20)) CHECK(check_factorial_bound(t, 3.0));
}

TEST_CASE("exponential bound") {
  CHECK(check_exp_bound(1.0, 1.0, 1.0, 2));
  CHECK(check_exp_bound(0.0, 1.0, 1.0, 0));
  CHECK(check_exp_bound(0.0, 0.5, 2.0, 4));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> X(-1e3, 1e3), P(0.2, 3.0);
  std::uniform_int_distribution<int> S(0, 20);
  int fails = 0;
  for (int i = 0; i < 20000; ++i) fails += !check_exp_bound(X(rng), P(rng), P(rng), S(rng));
  CHECK(fails == 0);
}

TEST_CASE("reciprocal derivative") {
  const auto g = TrigPolynomial::constant(2.0) + TrigPolynomial::cosine(1.0);
  CHECK(std::abs(reciprocal_derivative(g, 1, pi / 2) - 0.25) < 1e-15);
  CHECK(std::abs(reciprocal_derivative(g, 0, 0.3) - 1.0 / g(0.3)) < 1e-15);
  const auto h = TrigPolynomial::mode(1.0, 1) + TrigPolynomial::constant(3.0);
  auto inv = [&](double t) { return 1.0 / h(t); };
  for (int n = 1; n <= 5; ++n)
    for (double t : {0.0, 1.1, 4.0}) {
      const cplx fd = finite_difference(inv, t, n, 1e-2, 3 + n);
      const cplx ex = reciprocal_derivative(h, n, t);
      CHECK(std::abs(fd - ex) < 1e-5 * std::max(1.0, std::abs(ex)));
    }
}

TEST_CASE("finite difference weights") {
  auto w = fd_weights(0.0, {-1.0, 0.0, 1.0}, 2);
  REQUIRE(w.size() == 3);
  CHECK(w[0] == doctest::Approx(1.0));
  CHECK(w[1] == doctest::Approx(-2.0));
  CHECK(w[2] == doctest::Approx(1.0));
  auto c = finite_difference([](double t) { return cplx(std::sin(t)); }, 0.3, 1, 1e-2, 3);
  CHECK(std::abs(c - std::cos(0.3)) < 1e-10);
}

TEST_CASE("RK4 oracle") {
  auto a = rk_ode_oracle([](double) { return cplx(1.0); }, [](double t) { return cplx(std::cos(t)); }, 0.5);
  CHECK(std::abs(a.u.back() - 0.5) < 1e-8);
  CHECK(a.t.back() == doctest::Approx(2 * pi));

  auto b = rk_ode_oracle([](double t) { return cplx(1.0 + 0.5 * std::cos(t)); }, [](double) { return cplx(0.0); }, 2.0);
  for (std::size_t i = 0; i < b.t.size(); i += 512) {
    const double t = b.t[i];
    CHECK(std::abs(b.u[i] - 2.0 * std::exp(-(t + 0.5 * std::sin(t)))) < 1e-10);
  }

  auto c = rk_ode_oracle([](double) { return cplx(0.0); }, [](double t) { return cplx(std::sin(t)); }, 1.0);
  for (std::size_t i = 0; i < c.t.size(); i += 512) CHECK(std::abs(c.u[i] - (2.0 - std::cos(c.t[i]))) < 1e-10);
}

TEST_CASE("lemma suite passes") {
  auto r = run_lemma_suite(1, 20000);
  CHECK(r.size() == 8);
  for (const auto& l : r) {
    INFO(l.name << ": " << l.detail);
    CHECK(l.pass);
  }
}
