#include "cylhypo/oracles.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "cylhypo/counterexamples.hpp"
#include "cylhypo/error.hpp"
#include "cylhypo/solver.hpp"

namespace cylhypo::oracles {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

int PartitionMultiIndex::size() const { return std::accumulate(tau.begin(), tau.end(), 0); }

bool PartitionMultiIndex::valid() const {
  if (N < 1 || static_cast<int>(tau.size()) != N) return false;
  long s = 0;
  for (int j = 0; j < N; ++j) {
    if (tau[j] < 0) return false;
    s += static_cast<long>(j + 1) * tau[j];
  }
  return s == N;
}

namespace {

void enumerate_rec(int N, int j, int remaining, std::vector<int>& tau, std::vector<PartitionMultiIndex>& out) {
  // j is 0-based; tau[j] counts parts of size j+1
  if (j == N) {
    if (remaining == 0) out.push_back({N, tau});
    return;
  }
  const int part = j + 1;
  for (int c = remaining / part; c >= 0; --c) {
    tau[j] = c;
    enumerate_rec(N, j + 1, remaining - c * part, tau, out);
  }
  tau[j] = 0;
}

cpp_int factorial(int n) {
  cpp_int r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

double lfact(double n) { return std::lgamma(n + 1.0); }

cpp_rational rational_pow(const cpp_rational& x, int e) {
  cpp_rational r = 1;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

std::string to_text(const cpp_rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

IdentityCheck delta_identity_exact(int N, const cpp_rational& R) {
  if (N < 1) throw precondition_error("invalid_N", "N must be positive");
  cpp_rational lhs = 0;
  for (const auto& t : enumerate_delta(N)) {
    cpp_int denom = 1;
    for (int c : t.tau) denom *= factorial(c);
    const int s = t.size();
    lhs += cpp_rational(factorial(s), denom) * rational_pow(R, s);
  }
  const cpp_rational rhs = R * rational_pow(1 + R, N - 1);
  IdentityCheck c;
  c.lhs = static_cast<double>(lhs);
  c.rhs = static_cast<double>(rhs);
  c.exact = true;
  c.equal = lhs == rhs;
  c.lhs_text = to_text(lhs);
  c.rhs_text = to_text(rhs);
  return c;
}

}  // namespace

std::vector<PartitionMultiIndex> enumerate_delta(int N) {
  if (N < 1) throw precondition_error("invalid_N", "N must be positive");
  std::vector<PartitionMultiIndex> out;
  std::vector<int> tau(N, 0);
  enumerate_rec(N, 0, N, tau, out);
  return out;
}

long long partition_count(int N) {
  if (N < 0) return 0;
  std::vector<long long> p(N + 1, 0);
  p[0] = 1;
  for (int n = 1; n <= N; ++n) {
    long long s = 0;
    for (int k = 1;; ++k) {
      const int g1 = k * (3 * k - 1) / 2, g2 = k * (3 * k + 1) / 2;
      if (g1 > n) break;
      const long long sign = (k % 2) ? 1 : -1;
      s += sign * p[n - g1];
      if (g2 <= n) s += sign * p[n - g2];
    }
    p[n] = s;
  }
  return p[N];
}

cplx faa_di_bruno_exp(const TrigPolynomial& f, int N, double t) {
  if (N < 1) throw precondition_error("invalid_N", "N must be positive");
  std::vector<cplx> d(N + 1);
  for (int j = 1; j <= N; ++j) d[j] = f.derivative(j, t);
  cplx sum{};
  for (const auto& tau : enumerate_delta(N)) {
    // N! / (tau! prod (j!)^{tau_j}) prod (f^{(j)})^{tau_j}
    double lc = lfact(N);
    cplx prod = 1.0;
    for (int j = 1; j <= N; ++j) {
      const int c = tau.tau[j - 1];
      if (c == 0) continue;
      lc -= lfact(c) + c * lfact(j);
      prod *= std::pow(d[j], c);
    }
    sum += std::exp(lc) * prod;
  }
  return std::exp(f(t)) * sum;
}

IdentityCheck check_delta_identity(int N, double R) {
  // a double is an exact dyadic rational
  return delta_identity_exact(N, cpp_rational(R));
}

IdentityCheck check_delta_identity(int N, long long num, long long den) {
  if (den == 0) throw precondition_error("zero_denominator", "R denominator is zero");
  return delta_identity_exact(N, cpp_rational(cpp_int(num), cpp_int(den)));
}

bool check_factorial_bound(const PartitionMultiIndex& tau, double sigma) {
  if (!(sigma >= 1.0)) throw precondition_error("invalid_sigma", "sigma must be >= 1");
  if (!tau.valid()) throw precondition_error("invalid_tau", "tau is not in Delta(N)");
  const int s = tau.size();
  double lhs = sigma * lfact(s);
  for (int l = 1; l <= tau.N; ++l) lhs += (sigma - 1.0) * tau.tau[l - 1] * lfact(l);
  const double rhs = lfact(s) + (sigma - 1.0) * lfact(tau.N);
  return lhs <= rhs + 1e-12 * (1.0 + std::abs(rhs));
}

bool check_exp_bound(double x, double L, double mu, int s) {
  if (!(L > 0) || !(mu > 0) || s < 0) throw precondition_error("invalid_parameters", "need L, mu > 0 and s >= 0");
  const double ax = std::abs(x);
  if (ax == 0.0) return true;  // lhs is 0 (s > 0) or 1 = rhs (s = 0)
  const double lhs = -L * std::pow(ax, 1.0 / mu) + s * std::log(ax);
  const double rhs = mu * s * std::log(mu / L) + mu * lfact(s);
  return lhs <= rhs + 1e-12 * (1.0 + std::abs(rhs));
}

cplx reciprocal_derivative(const TrigPolynomial& g, int n, double t) {
  if (n < 0) throw precondition_error("invalid_n", "n must be >= 0");
  // nonvanishing check on a grid fine enough for the top frequency
  const int F = g.max_frequency();
  const int samples = std::max(256, 32 * F + 64);
  double gmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) gmin = std::min(gmin, std::abs(g(2 * M_PI * i / samples)));
  if (!(gmin > 1e-12)) throw precondition_error("vanishing_g", "g vanishes on the circle");
  const cplx gt = g(t);
  if (n == 0) return 1.0 / gt;
  cplx sum{};
  TrigPolynomial gk = TrigPolynomial::constant(1.0);
  for (int k = 1; k <= n; ++k) {
    gk = gk * g;
    const double binom = std::exp(lfact(n + 1) - lfact(k + 1) - lfact(n - k));
    const double sign = (k % 2) ? -1.0 : 1.0;
    sum += sign * std::round(binom) * std::pow(gt, -(k + 1)) * gk.derivative(n, t);
  }
  return sum;
}

std::vector<double> fd_weights(double x0, const std::vector<double>& xs, int m) {
  const int n = static_cast<int>(xs.size()) - 1;
  if (n < m) throw precondition_error("too_few_nodes", "stencil too small for derivative order");
  // Fornberg (1988)
  std::vector<std::vector<long double>> c(n + 1, std::vector<long double>(m + 1, 0.0L));
  long double c1 = 1.0L, c4 = xs[0] - x0;
  c[0][0] = 1.0L;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    long double c2 = 1.0L;
    const long double c5 = c4;
    c4 = xs[i] - x0;
    for (int j = 0; j < i; ++j) {
      const long double c3 = static_cast<long double>(xs[i]) - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n + 1);
  for (int i = 0; i <= n; ++i) w[i] = static_cast<double>(c[i][m]);
  return w;
}

cplx finite_difference(const std::function<cplx(double)>& f, double t, int m, double h, int half) {
  std::vector<double> xs;
  for (int i = -half; i <= half; ++i) xs.push_back(i * h);
  const auto w = fd_weights(0.0, xs, m);
  cplx s{};
  for (int i = 0; i < static_cast<int>(xs.size()); ++i) s += w[i] * f(t + xs[i]);
  return s;
}

Trajectory rk_ode_oracle(const std::function<cplx(double)>& theta, const std::function<cplx(double)>& g, cplx u0,
                         int steps) {
  if (steps < 1) throw precondition_error("invalid_steps", "need at least one step");
  const double h = 2 * M_PI / steps;
  auto rhs = [&](double t, cplx u) { return g(t) - theta(t) * u; };
  Trajectory tr;
  tr.t.resize(steps + 1);
  tr.u.resize(steps + 1);
  cplx u = u0;
  tr.t[0] = 0.0;
  tr.u[0] = u;
  for (int i = 0; i < steps; ++i) {
    const double t = i * h;
    const cplx k1 = rhs(t, u);
    const cplx k2 = rhs(t + h / 2, u + h / 2 * k1);
    const cplx k3 = rhs(t + h / 2, u + h / 2 * k2);
    const cplx k4 = rhs(t + h, u + h * k3);
    u += h / 6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    tr.t[i + 1] = (i + 1) * h;
    tr.u[i + 1] = u;
  }
  return tr;
}

namespace {

TrigPolynomial random_trig(std::mt19937_64& rng, int F, double scale) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::map<int, cplx> c;
  for (int n = -F; n <= F; ++n) c[n] = scale * cplx(U(rng), U(rng)) / (1.0 + n * n);
  return TrigPolynomial(c);
}

}  // namespace

std::vector<LemmaResult> run_lemma_suite(unsigned seed, int exp_samples) {
  std::vector<LemmaResult> out;
  std::mt19937_64 rng(seed);

  {
    LemmaResult r{"delta_partition_count", true, 0, 0, ""};
    for (int N = 1; N <= 20; ++N) {
      const auto d = enumerate_delta(N);
      ++r.cases;
      const bool ok = static_cast<long long>(d.size()) == partition_count(N);
      if (!ok) r.detail = "count mismatch at N=" + std::to_string(N);
      r.pass = r.pass && ok;
    }
    out.push_back(r);
  }
  {
    LemmaResult r{"delta_identity", true, 0, 0, ""};
    const std::pair<long long, long long> Rs[] = {{-1, 2}, {1, 1}, {2, 1}, {7, 3}};
    for (int N = 1; N <= 12; ++N)
      for (auto [num, den] : Rs) {
        const auto c = check_delta_identity(N, num, den);
        ++r.cases;
        if (!c.equal) r.detail = "N=" + std::to_string(N) + " R=" + std::to_string(num) + "/" + std::to_string(den);
        r.pass = r.pass && c.equal;
      }
    out.push_back(r);
  }
  {
    LemmaResult r{"factorial_bound", true, 0, 0, ""};
    for (double sigma : {1.0, 1.5, 2.0, 3.0})
      for (int N = 1; N <= 12; ++N)
        for (const auto& t : enumerate_delta(N)) {
          ++r.cases;
          r.pass = r.pass && check_factorial_bound(t, sigma);
        }
    out.push_back(r);
  }
  {
    LemmaResult r{"exp_bound", true, 0, 0, ""};
    std::uniform_real_distribution<double> X(-1e3, 1e3), P(0.2, 3.0);
    std::uniform_int_distribution<int> S(0, 20);
    for (int i = 0; i < exp_samples; ++i) {
      const double x = X(rng), L = P(rng), mu = P(rng);
      const int s = S(rng);
      ++r.cases;
      if (!check_exp_bound(x, L, mu, s)) {
        r.pass = false;
        r.detail = "fails at x=" + std::to_string(x);
      }
    }
    out.push_back(r);
  }
  {
    LemmaResult r{"faa_di_bruno_exp", true, 0, 0, ""};
    for (int trial = 0; trial < 10; ++trial) {
      const auto f = random_trig(rng, 2, 0.5);
      const double t = std::uniform_real_distribution<double>(0, 2 * M_PI)(rng);
      auto ef = [&](double s) { return std::exp(f(s)); };
      for (int N = 1; N <= 4; ++N) {
        const cplx a = faa_di_bruno_exp(f, N, t);
        const cplx b = finite_difference(ef, t, N, 1e-2, 3);
        const double rel = std::abs(a - b) / std::max(std::abs(a), 1e-300);
        ++r.cases;
        r.worst = std::max(r.worst, rel);
      }
    }
    r.pass = r.worst < 1e-4;
    out.push_back(r);
  }
  {
    LemmaResult r{"reciprocal_derivative", true, 0, 0, ""};
    std::vector<TrigPolynomial> gs = {TrigPolynomial::constant(2.0) + TrigPolynomial::cosine(1.0),
                                      TrigPolynomial::mode(1.0, 1) + TrigPolynomial::constant(3.0)};
    for (int trial = 0; trial < 6; ++trial) gs.push_back(TrigPolynomial::constant(4.0) + random_trig(rng, 2, 1.0));
    for (const auto& g : gs) {
      const double t = std::uniform_real_distribution<double>(0, 2 * M_PI)(rng);
      auto rg = [&](double s) { return 1.0 / g(s); };
      for (int n = 1; n <= 5; ++n) {
        const cplx a = reciprocal_derivative(g, n, t);
        const cplx b = finite_difference(rg, t, n, 2e-2, 5);
        const double rel = std::abs(a - b) / std::max(std::abs(a), 1e-12);
        ++r.cases;
        r.worst = std::max(r.worst, rel);
      }
    }
    r.pass = r.worst < 1e-5;
    out.push_back(r);
  }
  {
    LemmaResult r{"laplace_lower_bound", true, 0, 0, ""};
    auto psi = [](double s) { return (s - M_PI) * (s - M_PI) * (2.0 + std::cos(s)); };
    const auto rep = laplace_lower_bound_check(psi, M_PI, 0.5, {1.0, 10.0, 100.0, 1e3, 1e4});
    r.cases = static_cast<int>(rep.points.size());
    r.pass = rep.all_hold;
    out.push_back(r);
  }
  {
    LemmaResult r{"periodic_ode_vs_rk4", true, 0, 0, ""};
    const int M = 256;
    for (int trial = 0; trial < 50; ++trial) {
      TrigPolynomial theta = random_trig(rng, 2, 1.0);
      while (is_resonant(average(theta), 1e-3)) theta = random_trig(rng, 2, 1.0);
      const TrigPolynomial g = random_trig(rng, 3, 1.0);
      PeriodicODEProblem prob{theta, std::vector<cplx>(M)};
      for (int j = 0; j < M; ++j) prob.g[j] = g(2 * M_PI * j / M);
      const auto sol = solve_periodic_ode(prob);
      const auto tr = rk_ode_oracle([&](double t) { return theta(t); }, [&](double t) { return g(t); }, sol.u[0]);
      double dev = 0;
      for (int j = 0; j < M; ++j) dev = std::max(dev, std::abs(sol.u[j] - tr.u[j * (4096 / M)]));
      ++r.cases;
      r.worst = std::max(r.worst, dev);
    }
    r.pass = r.worst < 1e-6;
    out.push_back(r);
  }
  return out;
}

}  // namespace cylhypo::oracles
