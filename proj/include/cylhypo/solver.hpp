#pragma once

#include <string>
#include <vector>

#include "cylhypo/classifier.hpp"
#include "cylhypo/spectral.hpp"
#include "cylhypo/symbols.hpp"

namespace cylhypo {

/// u' + theta(t) u = g(t) on the circle; g sampled at t_j = 2 pi j / M.
struct PeriodicODEProblem {
  TrigPolynomial theta;
  std::vector<cplx> g;

  cplx theta0() const { return average(theta); }
};

enum class Branch { Auto, SolMinus, SolPlus };
enum class BranchUsed { SolMinus, SolPlus, Resonant };
std::string to_string(BranchUsed b);

struct ODESolution {
  std::vector<cplx> u;
  BranchUsed branch = BranchUsed::SolMinus;
  /// |1 - e^{-2 pi theta0}| (sol-) or |e^{2 pi theta0} - 1| (sol+); 0 when resonant.
  double denominator = 0.0;
  /// integral_0^{2pi} g e^{Theta} dt, only computed on resonant fibers.
  cplx compatibility{};
};

inline constexpr double kResonanceTol = 1e-9;
inline constexpr double kExpCap = 700.0;

/// Periodic solution through the integrating-factor formulas. Auto picks sol+
/// when Re theta0 <= 0 and sol- otherwise, so the propagation factors never
/// grow. On resonant fibers (theta0 in iZ) returns the lambda = 0 solution
/// when the compatibility integral vanishes, else throws "unsolvable_fiber".
ODESolution solve_periodic_ode(const PeriodicODEProblem& prob, Branch branch = Branch::Auto);

bool is_resonant(cplx theta0, double tol = kResonanceTol);

struct SolveReport {
  double residual_inf = 0.0;   // max |P u - f| on the grid, recomputed from u
  double conditioning = 0.0;   // min |denominator| (or |multiplier|) encountered
  double tolerance = 0.0;
  bool flagged = false;        // residual above tolerance or operator not GH
  int sol_minus = 0;           // fibers per branch (tube solver)
  int sol_plus = 0;
  int resonant = 0;
  std::vector<BranchUsed> branches;  // per xi column (tube solver)
  std::vector<std::string> notes;
};

struct SolveResult {
  GridFunction u;
  SolveReport report;
};

/// Division by the plane-wave multiplier on the mixed grid. Throws
/// "vanishing_symbol" (with the witness in the message) if the symbol has a
/// zero with k in the grid range and |xi| <= pi N / (2X).
SolveResult solve_const(const OperatorSpec& op, const GridFunction& f, Exec exec = Exec::Parallel,
                        double residual_tol = 1e-6);

/// Fiberwise periodic ODE in t for each xi column.
SolveResult solve_tube(const TubeT& op, const GridFunction& f, Exec exec = Exec::Parallel, double residual_tol = 1e-5);

enum class Direction { Forward, Inverse };

/// (Psi_a f)^(t, xi) = e^{+-i xi A(t)} f^(t, xi), i.e. f(t, x +- A(t)).
GridFunction conjugate_psi_a(const TrigPolynomial& a, const GridFunction& f, Direction dir, Exec exec = Exec::Parallel);
/// (Psi_q f)(t, x) = e^{+-Q(t)} f(t, x).
GridFunction conjugate_psi_q(const TrigPolynomial& q, const GridFunction& f, Direction dir);

struct TubeReduction {
  double a0 = 0.0;
  cplx q0{};
  FirstOrderT P00;          // d_t + a0 d_x + q0
  TrigPolynomial a, q;      // original coefficients
  Antiderivative A, Q;
  Classification classification;  // of P00
};

/// b must vanish identically. Psi = Psi_q o Psi_a intertwines P with P00.
TubeReduction reduce_tube(const TubeT& op);
GridFunction apply_psi(const TubeReduction& r, const GridFunction& f, Direction dir, Exec exec = Exec::Parallel);

/// Grid residuals of P0 o Psi_a - Psi_a o P and P00 o Psi_q - Psi_q o P0 applied to f,
/// where P0 = d_t + a0 d_x + q(t).
struct ConjugationCheck {
  double psi_a_residual = 0.0;
  double psi_q_residual = 0.0;
  double scale = 0.0;  // max |P f|, for relative reading
};
ConjugationCheck conjugation_residuals(const TubeReduction& r, const GridFunction& f, Exec exec = Exec::Parallel);

/// Solve through the reduction: u = Psi^{-1} solve_const(P00, Psi f).
SolveResult solve_reduced(const TubeT& op, const GridFunction& f, Exec exec = Exec::Parallel);

}  // namespace cylhypo
