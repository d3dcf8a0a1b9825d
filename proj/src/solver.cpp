#include "cylhypo/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "cylhypo/error.hpp"
#include "cylhypo/kernels.hpp"
#include "cylhypo/zeroset.hpp"

namespace cylhypo {

namespace {

constexpr cplx kI{0.0, 1.0};

struct Rule {
  std::vector<double> x, w;  // nodes and weights on [-1, 1]
};

const Rule& gauss10() {
  static const Rule rule = [] {
    using G = boost::math::quadrature::gauss<double, 10>;
    Rule r;
    const auto& a = G::abscissa();
    const auto& w = G::weights();
    for (std::size_t i = a.size(); i-- > 0;) {
      r.x.push_back(-a[i]);
      r.w.push_back(w[i]);
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      r.x.push_back(a[i]);
      r.w.push_back(w[i]);
    }
    return r;
  }();
  return rule;
}

cplx checked_exp(cplx z) {
  if (z.real() > kExpCap)
    throw Error(ErrorKind::Refusal, "exponent_overflow", "integrating factor exponent exceeds the cap")
        .with("exponent", z.real());
  return std::exp(z);
}

// Trigonometric interpolant of periodic samples g evaluated at t_j + delta for all j.
std::vector<cplx> shifted_samples(const std::vector<cplx>& ghat, double delta) {
  const int M = static_cast<int>(ghat.size());
  std::vector<cplx> v(M);
  for (int b = 0; b < M; ++b) {
    if (2 * b == M) {
      v[b] = ghat[b] * std::cos(0.5 * M * delta);  // split Nyquist mode
    } else {
      const int n = b < M / 2 ? b : b - M;
      v[b] = ghat[b] * std::polar(1.0, n * delta);
    }
  }
  kernels::dft_rows_omp(v.data(), 1, M, +1);
  return v;
}

}  // namespace

std::string to_string(BranchUsed b) {
  switch (b) {
    case BranchUsed::SolMinus: return "sol_minus";
    case BranchUsed::SolPlus: return "sol_plus";
    default: return "resonant";
  }
}

bool is_resonant(cplx theta0, double tol) {
  return std::abs(theta0.real()) <= tol && std::abs(theta0.imag() - std::round(theta0.imag())) <= tol;
}

ODESolution solve_periodic_ode(const PeriodicODEProblem& prob, Branch branch) {
  const int M = static_cast<int>(prob.g.size());
  if (M < 2) throw precondition_error("grid_too_small", "ODE needs at least 2 samples");
  const double h = 2 * M_PI / M;
  const cplx theta0 = prob.theta0();
  const TrigPolynomial phi = zero_mean_antiderivative(prob.theta).periodic;
  auto Theta = [&](double t) { return phi(t) + theta0 * t; };

  std::vector<cplx> ghat = prob.g;
  kernels::dft_rows_omp(ghat.data(), 1, M, -1);
  for (auto& c : ghat) c /= static_cast<double>(M);

  const Rule& rule = gauss10();
  const int L = static_cast<int>(rule.x.size());
  // node values: gn[l][c] = g(t_c + delta_l), Tn[l][c] = Theta(t_c + delta_l)
  std::vector<std::vector<cplx>> gn(L), Tn(L, std::vector<cplx>(M));
  std::vector<double> wn(L);
  for (int l = 0; l < L; ++l) {
    const double delta = 0.5 * h * (1.0 + rule.x[l]);
    wn[l] = 0.5 * h * rule.w[l];
    gn[l] = shifted_samples(ghat, delta);
    for (int c = 0; c < M; ++c) Tn[l][c] = Theta(c * h + delta);
  }
  std::vector<cplx> Tg(M + 1);
  for (int c = 0; c <= M; ++c) Tg[c] = Theta(c * h);

  ODESolution sol;
  sol.u.assign(M, cplx{});

  BranchUsed used;
  if (is_resonant(theta0)) {
    used = BranchUsed::Resonant;
  } else if (branch == Branch::Auto) {
    used = theta0.real() <= 0.0 ? BranchUsed::SolPlus : BranchUsed::SolMinus;
  } else {
    used = branch == Branch::SolPlus ? BranchUsed::SolPlus : BranchUsed::SolMinus;
  }
  sol.branch = used;

  // forward cell data: u(t_{c+1}) = P_c u(t_c) + J_c
  auto forward_cells = [&](std::vector<cplx>& P, std::vector<cplx>& J) {
    P.resize(M);
    J.resize(M);
    for (int c = 0; c < M; ++c) {
      P[c] = checked_exp(-(Tg[c + 1] - Tg[c]));
      cplx acc{};
      for (int l = 0; l < L; ++l) acc += wn[l] * gn[l][c] * checked_exp(-(Tg[c + 1] - Tn[l][c]));
      J[c] = acc;
    }
  };

  if (used == BranchUsed::Resonant) {
    cplx compat{};
    double scale = 0.0;
    for (int c = 0; c < M; ++c)
      for (int l = 0; l < L; ++l) {
        const cplx term = wn[l] * gn[l][c] * checked_exp(Tn[l][c]);
        compat += term;
        scale += std::abs(term);
      }
    sol.compatibility = compat;
    if (std::abs(compat) > 1e-8 * std::max(scale, 1e-300))
      throw Error(ErrorKind::Refusal, "unsolvable_fiber", "resonant fiber with nonzero compatibility integral")
          .with("theta0_re", theta0.real())
          .with("theta0_im", theta0.imag())
          .with("compat_abs", std::abs(compat));
    std::vector<cplx> P, J;
    forward_cells(P, J);
    for (int c = 0; c + 1 < M; ++c) sol.u[c + 1] = P[c] * sol.u[c] + J[c];
    return sol;
  }

  if (used == BranchUsed::SolMinus) {
    std::vector<cplx> P, J;
    forward_cells(P, J);
    cplx w{};
    for (int c = 0; c < M; ++c) w = P[c] * w + J[c];
    const cplx denom = 1.0 - checked_exp(-2 * M_PI * theta0);
    sol.denominator = std::abs(denom);
    sol.u[0] = w / denom;
    for (int c = 0; c + 1 < M; ++c) sol.u[c + 1] = P[c] * sol.u[c] + J[c];
  } else {
    // backward: u(t_c) = Q_c u(t_{c+1}) - K_c
    std::vector<cplx> Q(M), K(M);
    for (int c = 0; c < M; ++c) {
      Q[c] = checked_exp(Tg[c + 1] - Tg[c]);
      cplx acc{};
      for (int l = 0; l < L; ++l) acc += wn[l] * gn[l][c] * checked_exp(Tn[l][c] - Tg[c]);
      K[c] = acc;
    }
    cplx z{};
    for (int c = M - 1; c >= 0; --c) z = Q[c] * z - K[c];
    const cplx denom = checked_exp(2 * M_PI * theta0) - 1.0;
    sol.denominator = std::abs(denom);
    sol.u[0] = -z / denom;
    cplx next = sol.u[0];  // u(2 pi) = u(0)
    for (int c = M - 1; c >= 1; --c) {
      sol.u[c] = Q[c] * next - K[c];
      next = sol.u[c];
    }
  }
  for (const auto& v : sol.u)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(ErrorKind::Refusal, "exponent_overflow", "solution overflowed on this branch");
  return sol;
}

SolveResult solve_const(const OperatorSpec& op, const GridFunction& f, Exec exec, double residual_tol) {
  const auto& g = f.grid;
  g.validate();
  if (auto* t = std::get_if<TubeT>(&op); t && !constant_tube_form(*t))
    throw precondition_error("not_constant", "solve_const needs constant coefficients; use solve_tube");
  const double xi_max = M_PI * g.N / (2 * g.X);
  auto zeros = zeros_in_box(op, -g.M / 2, g.M / 2 - 1, xi_max);
  if (!zeros.empty()) {
    const auto& w = zeros.front();
    std::ostringstream os;
    os.precision(17);
    os << "division by vanishing symbol at (k, xi) = (" << w.k << ", " << w.xi << ")";
    throw Error(ErrorKind::Refusal, "vanishing_symbol", os.str())
        .with("k", w.k)
        .with("xi", w.xi)
        .with("residual", w.residual);
  }
  auto F = forward_mixed(f, exec);
  double cond = std::numeric_limits<double>::infinity();
  for (int r = 0; r < g.M; ++r)
    for (int c = 0; c < g.N; ++c) {
      const cplx m = plane_wave_multiplier(op, g.k(r), g.xi(c));
      cond = std::min(cond, std::abs(m));
      F(r, c) /= m;
    }
  SolveResult res;
  res.u = inverse_mixed(F, exec);
  const auto Pu = apply_operator(op, res.u, exec);
  res.report.residual_inf = max_abs_diff(Pu.values, f.values);
  res.report.conditioning = cond;
  res.report.tolerance = residual_tol;
  if (res.report.residual_inf > residual_tol) {
    res.report.flagged = true;
    res.report.notes.push_back("residual above tolerance");
  }
  return res;
}

SolveResult solve_tube(const TubeT& op, const GridFunction& f, Exec exec, double residual_tol) {
  const auto& g = f.grid;
  g.validate();
  SolveResult res;
  auto& rep = res.report;
  rep.tolerance = residual_tol;
  const auto cls = classify_tube(op);
  if (cls.verdict != Verdict::GH) {
    rep.flagged = true;
    rep.notes.push_back("operator is not classified GH (" + to_string(cls.verdict) + "); solution may not be regular");
  }

  const auto F = forward_partial(f, exec);
  PartialSpectrum U(g);
  std::vector<BranchUsed> branches(g.N, BranchUsed::SolMinus);
  std::vector<double> denoms(g.N, std::numeric_limits<double>::infinity());
  std::vector<std::string> failures(g.N);

  auto fiber = [&](int c) {
    const double xi = g.xi(c);
    PeriodicODEProblem prob{op.a * cplx(0.0, xi) + op.b * cplx(-xi, 0.0) + op.q, std::vector<cplx>(g.M)};
    for (int j = 0; j < g.M; ++j) prob.g[j] = F(j, c);
    try {
      auto s = solve_periodic_ode(prob);
      for (int j = 0; j < g.M; ++j) U(j, c) = s.u[j];
      branches[c] = s.branch;
      if (s.branch != BranchUsed::Resonant) denoms[c] = s.denominator;
    } catch (const Error& e) {
      failures[c] = e.code();
    }
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int c = 0; c < g.N; ++c) fiber(c);
  } else {
    for (int c = 0; c < g.N; ++c) fiber(c);
  }

  std::ostringstream bad;
  int nbad = 0;
  for (int c = 0; c < g.N; ++c)
    if (!failures[c].empty()) {
      bad << (nbad++ ? ", " : "") << "xi=" << g.xi(c) << " (" << failures[c] << ")";
    }
  if (nbad) {
    Error e(ErrorKind::Refusal, "unsolvable_fiber", "unsolvable fibers: " + bad.str());
    e.with("count", nbad);
    throw e;
  }

  for (auto b : branches) {
    if (b == BranchUsed::SolMinus) ++rep.sol_minus;
    if (b == BranchUsed::SolPlus) ++rep.sol_plus;
    if (b == BranchUsed::Resonant) ++rep.resonant;
  }
  rep.branches = std::move(branches);
  rep.conditioning = *std::min_element(denoms.begin(), denoms.end());
  res.u = inverse_partial(U, exec);
  const auto Pu = apply_operator(OperatorSpec{op}, res.u, exec);
  rep.residual_inf = max_abs_diff(Pu.values, f.values);
  if (rep.residual_inf > residual_tol) {
    rep.flagged = true;
    rep.notes.push_back("residual above tolerance");
  }
  return res;
}

GridFunction conjugate_psi_a(const TrigPolynomial& a, const GridFunction& f, Direction dir, Exec exec) {
  if (!a.is_real_valued()) throw precondition_error("nonreal_coefficient", "Psi_a needs real-valued a(t)");
  const TrigPolynomial A = zero_mean_antiderivative(a).periodic;
  const double sgn = dir == Direction::Forward ? 1.0 : -1.0;
  auto F = forward_partial(f, exec);
  const auto& g = f.grid;
  for (int j = 0; j < g.M; ++j) {
    const double At = A(g.t(j)).real();
    for (int c = 0; c < g.N; ++c) F(j, c) *= std::polar(1.0, sgn * g.xi(c) * At);
  }
  return inverse_partial(F, exec);
}

GridFunction conjugate_psi_q(const TrigPolynomial& q, const GridFunction& f, Direction dir) {
  const TrigPolynomial Q = zero_mean_antiderivative(q).periodic;
  const double sgn = dir == Direction::Forward ? 1.0 : -1.0;
  GridFunction out = f;
  const auto& g = f.grid;
  for (int j = 0; j < g.M; ++j) {
    const cplx m = std::exp(sgn * Q(g.t(j)));
    for (int i = 0; i < g.N; ++i) out(j, i) *= m;
  }
  return out;
}

TubeReduction reduce_tube(const TubeT& op) {
  if (!op.b.is_zero())
    throw precondition_error("nonzero_b", "reduction to P00 needs b == 0; use solve_tube for the complex case");
  if (!op.a.is_real_valued()) throw precondition_error("nonreal_coefficient", "a(t) must be real-valued");
  TubeReduction r;
  r.a0 = average(op.a).real();
  r.q0 = average(op.q);
  r.P00 = first_order_t_form(r.a0, 0.0, r.q0);
  r.a = op.a;
  r.q = op.q;
  r.A = zero_mean_antiderivative(op.a);
  r.Q = zero_mean_antiderivative(op.q);
  r.classification = classify_first_order_t(r.a0, 0.0, r.q0);
  return r;
}

GridFunction apply_psi(const TubeReduction& r, const GridFunction& f, Direction dir, Exec exec) {
  if (dir == Direction::Forward) return conjugate_psi_q(r.q, conjugate_psi_a(r.a, f, dir, exec), dir);
  return conjugate_psi_a(r.a, conjugate_psi_q(r.q, f, dir), dir, exec);
}

ConjugationCheck conjugation_residuals(const TubeReduction& r, const GridFunction& f, Exec exec) {
  const OperatorSpec P = TubeT{r.a, TrigPolynomial{}, r.q};
  const OperatorSpec P0 = TubeT{TrigPolynomial::constant(r.a0), TrigPolynomial{}, r.q};
  const OperatorSpec P00 = r.P00;
  ConjugationCheck c;
  const auto Pf = apply_operator(P, f, exec);
  c.scale = max_abs(Pf.values);
  const auto lhs_a = apply_operator(P0, conjugate_psi_a(r.a, f, Direction::Forward, exec), exec);
  const auto rhs_a = conjugate_psi_a(r.a, Pf, Direction::Forward, exec);
  c.psi_a_residual = max_abs_diff(lhs_a.values, rhs_a.values);
  const auto lhs_q = apply_operator(P00, conjugate_psi_q(r.q, f, Direction::Forward), exec);
  const auto rhs_q = conjugate_psi_q(r.q, apply_operator(P0, f, exec), Direction::Forward);
  c.psi_q_residual = max_abs_diff(lhs_q.values, rhs_q.values);
  return c;
}

SolveResult solve_reduced(const TubeT& op, const GridFunction& f, Exec exec) {
  const auto red = reduce_tube(op);
  auto w = solve_const(OperatorSpec{red.P00}, apply_psi(red, f, Direction::Forward, exec), exec);
  SolveResult res;
  res.u = apply_psi(red, w.u, Direction::Inverse, exec);
  res.report = w.report;
  const auto Pu = apply_operator(OperatorSpec{op}, res.u, exec);
  res.report.residual_inf = max_abs_diff(Pu.values, f.values);
  return res;
}

}  // namespace cylhypo
