#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cylhypo/symbols.hpp"

namespace cylhypo {

inline constexpr double kZeroTol = 1e-10;

struct ZeroWitness {
  int k = 0;
  double xi = 0.0;
  double residual = 0.0;  // |symbol| at (k, xi)
};

enum class Completeness { Exhaustive, BudgetLimited };

struct ZeroSearch {
  std::vector<ZeroWitness> witnesses;
  Completeness completeness = Completeness::BudgetLimited;
  int k_budget = 0;
  /// How exhaustiveness was (or was not) established.
  std::string basis;
  /// True when a whole line of zeros exists (witnesses hold representatives).
  bool continuum = false;

  bool empty() const { return witnesses.empty(); }
  bool exhaustive() const { return completeness == Completeness::Exhaustive; }
};

/// Zeros of the symbol on Z x R. FirstOrderT is solved in closed form;
/// ConstSplit is searched for |k| <= k_budget (plus any k singled out by an
/// a-priori bound). Throws "degenerate_operator" for the zero symbol.
ZeroSearch find_zeros(const OperatorSpec& op, int k_budget);

/// Zeros with k_lo <= k <= k_hi and |xi| <= xi_max (any operator with a pointwise symbol).
std::vector<ZeroWitness> zeros_in_box(const OperatorSpec& op, int k_lo, int k_hi, double xi_max);

/// Witness ordering used for first-order forms: smallest |k|, positive first.
std::optional<ZeroWitness> first_order_witness(const FirstOrderT& op);

struct LowerBoundSample {
  int k = 0;
  double xi = 0.0;
  double ratio = 0.0;  // |p(xi)+q(k)| / |xi|^{N-1}
};

struct LowerBoundCertificate {
  double C = 0.0;
  double R = 0.0;
  double R_max = 0.0;
  int K_range = 0;
  double grid_inf = 0.0;
  int xi_samples = 0;
  LowerBoundSample argmin;
};

struct LowerBoundRefutation {
  /// Per-|k| minimiser of the ratio, ordered by increasing |k|.
  std::vector<LowerBoundSample> path;
  double inner_min = 0.0;
  double outer_min = 0.0;
};

struct LowerBoundResult {
  std::optional<LowerBoundCertificate> certificate;
  std::optional<LowerBoundRefutation> refutation;
  bool certified() const { return certificate.has_value(); }
};

/// Sampled check of |p(xi)+q(k)| >= C |xi|^{N-1} for |xi| >= R, N = deg p > 1.
/// The result is numerical evidence, not a proof.
LowerBoundResult certify_lower_bound(const ConstSplit& op, double R, int k_budget, int xi_samples);

/// Sampled infimum of |symbol| over |k| <= k_budget, |xi| <= xi_range.
double uniform_gap(const OperatorSpec& op, int k_budget, double xi_range);

}  // namespace cylhypo
