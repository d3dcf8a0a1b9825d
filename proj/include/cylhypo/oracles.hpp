#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cylhypo/symbols.hpp"

namespace cylhypo::oracles {

/// tau = (tau_1..tau_N) with sum_j j*tau_j = N.
struct PartitionMultiIndex {
  int N = 0;
  std::vector<int> tau;

  int size() const;  // |tau|
  bool valid() const;
  bool operator==(const PartitionMultiIndex&) const = default;
};

/// All members of Delta(N), lexicographically descending in tau
/// (so (N,0,..,0) comes first and (0,..,0,1) last).
std::vector<PartitionMultiIndex> enumerate_delta(int N);

/// Integer partition count p(N) by the pentagonal recurrence.
long long partition_count(int N);

/// d^N/dt^N e^{f(t)} via Faa di Bruno with exact derivatives of f.
cplx faa_di_bruno_exp(const TrigPolynomial& f, int N, double t);

struct IdentityCheck {
  double lhs = 0;
  double rhs = 0;
  bool exact = false;  // compared in rational arithmetic
  bool equal = false;
  std::string lhs_text;  // exact value when rational
  std::string rhs_text;
};

/// sum over Delta(N) of |tau|!/tau! R^{|tau|}  vs  R (1+R)^{N-1}.
IdentityCheck check_delta_identity(int N, double R);
/// Exact variant for R = num/den.
IdentityCheck check_delta_identity(int N, long long num, long long den);

/// |tau|!^sigma prod_l l!^{(sigma-1) tau_l} <= |tau|! N!^{sigma-1}, in log-gamma.
bool check_factorial_bound(const PartitionMultiIndex& tau, double sigma);

/// e^{-L|x|^{1/mu}} |x|^s <= (mu/L)^{mu s} s!^mu, in log domain.
bool check_exp_bound(double x, double L, double mu, int s);

/// n-th derivative of 1/g through
/// sum_{k=1}^n (-1)^k C(n+1,k+1) g^{-(k+1)} d^n(g^k); n = 0 gives 1/g.
cplx reciprocal_derivative(const TrigPolynomial& g, int n, double t);

/// Fornberg weights for the m-th derivative at x0 from nodes xs.
std::vector<double> fd_weights(double x0, const std::vector<double>& xs, int m);

/// d^m f(t) by a centred stencil of 2*half+1 points with spacing h.
cplx finite_difference(const std::function<cplx(double)>& f, double t, int m, double h, int half);

struct Trajectory {
  std::vector<double> t;
  std::vector<cplx> u;
};

/// Classical RK4 for u' + theta u = g on [0, 2pi] with the given step count.
Trajectory rk_ode_oracle(const std::function<cplx(double)>& theta, const std::function<cplx(double)>& g, cplx u0,
                         int steps = 4096);

struct LemmaResult {
  std::string name;
  bool pass = false;
  int cases = 0;
  double worst = 0;  // worst error or margin, meaning depends on the lemma
  std::string detail;
};

/// Full suite behind `verify-lemmas`.
std::vector<LemmaResult> run_lemma_suite(unsigned seed = 1, int exp_samples = 100000);

}  // namespace cylhypo::oracles
