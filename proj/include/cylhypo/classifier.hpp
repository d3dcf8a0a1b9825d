#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cylhypo/symbols.hpp"
#include "cylhypo/zeroset.hpp"

namespace cylhypo {

inline constexpr double kIntTol = 1e-9;
inline constexpr double kSignTol = 1e-12;

enum class Verdict { GH, NotGH, Undecided };
enum class Notion { S_sigma_mu, F_mu };

std::string to_string(Verdict v);
std::string to_string(Notion n);

/// Interval of mu; hi = +infinity when unbounded.
struct MuRange {
  double lo = 0.5;
  bool lo_closed = true;
  std::string text() const;  // e.g. "[1/2,inf)" or "(1,inf)"
};

/// A named condition with the values it was evaluated on.
struct CriterionTrace {
  std::string condition;
  std::vector<std::pair<std::string, double>> values;
  bool holds = false;
  bool boundary_case = false;  // value within int_tol of an integer
};

struct Classification {
  Verdict verdict = Verdict::Undecided;
  std::string theorem;
  Notion notion = Notion::S_sigma_mu;
  MuRange mu_validity;
  std::string sigma_validity = "all sigma >= 1";
  std::optional<ZeroWitness> witness;
  std::vector<CriterionTrace> trace;
  std::optional<ZeroSearch> zero_search;
  std::optional<LowerBoundResult> lower_bound;
  std::optional<double> gap;  // sampled inf |symbol| when GH via the degree <= 1 theorem
  std::vector<std::string> notes;
};

struct Budgets {
  int k_budget = 64;
  int xi_samples = 4096;
  double R = 1.0;
};

struct Tolerances {
  double int_tol = kIntTol;
  double sign_tol = kSignTol;
};

/// Distance to the nearest integer <= tol. Sets boundary when 0 < dist <= tol.
bool is_integer(double v, double tol, bool* boundary = nullptr);

Classification classify_const_deg_le1(const ConstSplit& op, const Budgets& budgets = {});
/// P = d_t + (a + ib) d_x + c
Classification classify_first_order_t(double a, double b, cplx c, const Tolerances& tol = {});
/// P = d_x + (a + ib) d_t + c
Classification classify_first_order_x(double a, double b, cplx c, const Tolerances& tol = {});
Classification classify_const_general(const ConstSplit& op, const Budgets& budgets = {});
Classification classify_tube(const TubeT& op, const Budgets& budgets = {}, const Tolerances& tol = {});

enum class SignPattern { Nonnegative, Nonpositive, ChangesSign, IdenticallyZero };
std::string to_string(SignPattern s);

struct SignReport {
  SignPattern pattern = SignPattern::IdenticallyZero;
  double min = 0.0;
  double max = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
};

/// Sign behaviour of a real trigonometric polynomial on the circle.
SignReport sign_change(const TrigPolynomial& b, double sign_tol = kSignTol);

/// Dispatch on the operator kind.
Classification classify(const OperatorSpec& op, const Budgets& budgets = {}, const Tolerances& tol = {});

}  // namespace cylhypo
