#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cylhypo/error.hpp"
#include "cylhypo/symbols.hpp"

using namespace cylhypo;
using std::numbers::pi;

namespace {
const cplx I{0.0, 1.0};
}

TEST_CASE("ComplexPolynomial trims trailing zeros") {
  ComplexPolynomial p({1.0, 2.0, 0.0, 0.0});
  CHECK(p.degree() == 1);
  CHECK(p.coeff(1) == cplx(2.0));
  CHECK(p.coeff(5) == cplx(0.0));
  ComplexPolynomial z({0.0, 0.0});
  CHECK(z.is_zero());
  CHECK(z.degree() == -1);
}

TEST_CASE("ComplexPolynomial evaluation and derivative") {
  ComplexPolynomial p({I, 1.0, -I});  // -i x^2 + x + i
  CHECK(std::abs(p(1.0) - cplx(1.0)) < 1e-15);
  auto d = p.derivative();
  CHECK(d.degree() == 1);
  CHECK(std::abs(d(2.0) - (1.0 - 4.0 * I)) < 1e-15);
}

TEST_CASE("symbol_at examples") {
  const ConstSplit xi_plus_k{ComplexPolynomial({0.0, 1.0}), ComplexPolynomial({0.0, 1.0})};
  CHECK(std::abs(symbol_at(xi_plus_k, 1, -1.0)) == 0.0);

  const FirstOrderT f{{1, 1}, 1.0, 1.0};
  CHECK(std::abs(symbol_at(f, -1, 1.0)) < 1e-15);

  const ConstSplit split{ComplexPolynomial({I, 1.0, -I}), ComplexPolynomial({0.0, -1.0, 1.0})};
  CHECK(std::abs(symbol_at(split, 0, 1.0) - cplx(1.0)) < 1e-15);
}

TEST_CASE("symbol_at on tube operators") {
  const TubeT constant = make_tube(TrigPolynomial::constant(1.0), TrigPolynomial::constant(1.0),
                                   TrigPolynomial::constant(1.0));
  CHECK(std::abs(symbol_at(constant, -1, 1.0)) < 1e-15);

  const TubeT varying = make_tube({}, TrigPolynomial::cosine(1.0), {});
  try {
    symbol_at(varying, 0, 1.0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
  }
}

TEST_CASE("symbol_at matches Horner evaluation") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-2, 2);
  for (int n = 0; n < 50; ++n) {
    std::vector<cplx> pc(4), qc(3);
    for (auto& c : pc) c = {U(rng), U(rng)};
    for (auto& c : qc) c = {U(rng), U(rng)};
    const ConstSplit op{ComplexPolynomial(pc), ComplexPolynomial(qc)};
    const int k = static_cast<int>(std::lround(U(rng) * 5));
    const double xi = U(rng) * 3;
    cplx hp = 0, hq = 0;
    for (int i = 3; i >= 0; --i) hp = hp * xi + pc[i];
    for (int i = 2; i >= 0; --i) hq = hq * static_cast<double>(k) + qc[i];
    CHECK(std::abs(symbol_at(op, k, xi) - (hp + hq)) < 1e-12);
  }
}

TEST_CASE("plane wave multiplier of first-order forms") {
  const auto f = first_order_t_form(1.0, 1.0, 1.0);
  CHECK(std::abs(plane_wave_multiplier(f, 2, 0.5) - I * symbol_at(f, 2, 0.5)) < 1e-15);
  const ConstSplit cs = to_const_split(f);
  CHECK(std::abs(symbol_at(cs, 2, 0.5) - symbol_at(f, 2, 0.5)) < 1e-15);
}

TEST_CASE("average") {
  CHECK(average(TrigPolynomial::cosine(1.0)) == cplx(0.0));
  CHECK(average(TrigPolynomial::constant(1.0) + TrigPolynomial::cosine(1.0)) == cplx(1.0));
  CHECK(average(TrigPolynomial::constant({0, 0.3})) == cplx(0, 0.3));
}

TEST_CASE("zero_mean_antiderivative") {
  auto A = zero_mean_antiderivative(TrigPolynomial::cosine(1.0));
  auto B = zero_mean_antiderivative(TrigPolynomial::constant(1.0) + TrigPolynomial::cosine(1.0));
  auto Q = zero_mean_antiderivative(TrigPolynomial::constant({0.5, 2.0}));
  for (double t : {0.0, 0.4, 1.3, 3.0, 5.9}) {
    CHECK(std::abs(A.periodic(t) - std::sin(t)) < 1e-15);
    CHECK(std::abs(B.periodic(t) - std::sin(t)) < 1e-15);
  }
  CHECK(B.slope == cplx(1.0));
  CHECK(Q.periodic.is_zero());
  CHECK(A.periodic.is_real_valued());
}

TEST_CASE("antiderivative derivative plus average recovers f") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int trial = 0; trial < 10; ++trial) {
    std::map<int, cplx> c;
    for (int n = -3; n <= 3; ++n) c[n] = {U(rng), U(rng)};
    TrigPolynomial f(c);
    auto F = zero_mean_antiderivative(f);
    const double h = 1e-6;
    for (int j = 0; j < 64; ++j) {
      const double t = 2 * pi * j / 64;
      const cplx fd = (F.periodic(t + h) - F.periodic(t - h)) / (2 * h);
      CHECK(std::abs(fd + average(f) - f(t)) < 1e-5);
    }
  }
}

TEST_CASE("real-valuedness survives antiderivative") {
  TrigPolynomial f({{-2, cplx(0.5, -1)}, {0, 3.0}, {2, cplx(0.5, 1)}, {1, cplx(0, 2)}, {-1, cplx(0, -2)}});
  CHECK(f.is_real_valued());
  CHECK(zero_mean_antiderivative(f).periodic.is_real_valued());
  TrigPolynomial g({{1, 1.0}});
  CHECK_FALSE(g.is_real_valued());
}

TEST_CASE("eval_trig and eval_deriv") {
  const auto c = TrigPolynomial::cosine(1.0);
  CHECK(std::abs(eval_trig(c, 0.0) - cplx(1.0)) < 1e-15);
  CHECK(std::abs(eval_deriv(c, 1, pi / 2) - cplx(-1.0)) < 1e-15);
  CHECK(std::abs(eval_deriv(TrigPolynomial::mode(1.0, 1), 2, 0.0) - cplx(-1.0)) < 1e-15);
}

TEST_CASE("trig arithmetic") {
  const auto c = TrigPolynomial::cosine(1.0), s = TrigPolynomial::sine(1.0);
  const auto one = c * c + s * s;
  CHECK(one.is_constant());
  CHECK(std::abs(one.coefficient(0) - cplx(1.0)) < 1e-15);
  CHECK((c - c).is_zero());
  CHECK(c.pow(3).max_frequency() == 3);
}

TEST_CASE("make_tube rejects complex a or b") {
  CHECK_THROWS_AS(make_tube(TrigPolynomial::mode(1.0, 1), {}, {}), Error);
  CHECK_NOTHROW(make_tube({}, TrigPolynomial::cosine(1.0), TrigPolynomial::mode(1.0, 1)));
}
