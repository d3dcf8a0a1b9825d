#include "cylhypo/counterexamples.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cylhypo/classifier.hpp"
#include "cylhypo/error.hpp"
#include "cylhypo/solver.hpp"

namespace cylhypo {

namespace {

constexpr double kTwoPi = 2 * M_PI;

double wrap_2pi(double t) {
  double r = std::fmod(t, kTwoPi);
  return r < 0 ? r + kTwoPi : r;
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-13) {
  if (!(b > a)) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, tol);
}

// 20-point Gauss-Legendre on [a, b]
template <class F>
cplx gauss_legendre(const F& f, double a, double b) {
  using Rule = boost::math::quadrature::gauss<double, 20>;
  const auto& x = Rule::abscissa();
  const auto& wt = Rule::weights();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  cplx s{};
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) {
      s += wt[i] * f(c);
    } else {
      s += wt[i] * (f(c - h * x[i]) + f(c + h * x[i]));
    }
  }
  return h * s;
}

double G_at(const Antiderivative& Bint, double t, double s, bool mirrored) {
  return mirrored ? (Bint(t) - Bint(t - s)).real() : (Bint(t + s) - Bint(t)).real();
}

// s-intervals in [0, 2pi] on which the cutoff at (t +- s) can be nonzero
std::vector<std::pair<double, double>> support_in_s(const SignChangeReport& r, double t) {
  std::vector<std::pair<double, double>> out;
  for (int n = -2; n <= 2; ++n) {
    double lo, hi;
    if (!r.mirrored) {
      lo = r.phi.t_lo - t + kTwoPi * n;
      hi = r.phi.t_hi - t + kTwoPi * n;
    } else {
      lo = t - r.phi.t_hi + kTwoPi * n;
      hi = t - r.phi.t_lo + kTwoPi * n;
    }
    lo = std::max(lo, 0.0);
    hi = std::min(hi, kTwoPi);
    if (hi > lo) out.emplace_back(lo, hi);
  }
  return out;
}

}  // namespace

double gevrey_step(double s, double order) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double p = 1.0 / (order - 1.0);
  // h(s) / (h(s) + h(1-s)) with h(s) = exp(-s^{-p})
  const double d = std::pow(s, -p) - std::pow(1.0 - s, -p);
  if (d > 700) return 0.0;
  return 1.0 / (1.0 + std::exp(d));
}

double GevreyCutoff::operator()(double t) const {
  if (t <= t_lo || t >= t_hi) return 0.0;
  if (t >= p_lo && t <= p_hi) return 1.0;
  if (t < p_lo) return gevrey_step((t - t_lo) / (p_lo - t_lo), order);
  return gevrey_step((t_hi - t) / (t_hi - p_hi), order);
}

double GevreyCutoff::periodic(double t) const { return (*this)(wrap_2pi(t)); }

GevreyCutoff plateau_cutoff(double center, double delta, double order) {
  if (!(order > 1.0)) throw precondition_error("invalid_order", "Gevrey cutoff needs order > 1");
  if (!(delta > 0.0)) throw precondition_error("invalid_delta", "cutoff half-width must be positive");
  return {order, center - delta, center - 0.5 * delta, center + 0.5 * delta, center + delta};
}

CylinderGrid grid_for_frequency(const CylinderGrid& grid, double xi0) {
  CylinderGrid g = grid;
  const double a = std::abs(xi0);
  if (a == 0.0) return g;
  const double m = std::ceil(a * grid.X / M_PI - 1e-12);
  g.X = M_PI * std::max(1.0, m) / a;
  return g;
}

PlaneWaveReport plane_wave_witness(const OperatorSpec& op, const ZeroWitness& w, const CylinderGrid& grid) {
  PlaneWaveReport rep;
  rep.witness = w;
  rep.grid = grid_for_frequency(grid, w.xi);
  rep.grid.validate();
  rep.u = GridFunction::sample(rep.grid, [&](double t, double x) { return std::polar(1.0, w.k * t + w.xi * x); });
  const auto Pu = apply_operator(op, rep.u);
  rep.residual_inf = max_abs(Pu.values);
  if (rep.residual_inf > kWitnessResidualTol) {
    Error e(ErrorKind::Refusal, "witness_rejected", "plane wave does not solve Pu = 0 on the grid");
    e.with("k", w.k).with("xi", w.xi).with("residual", rep.residual_inf);
    throw e;
  }
  const auto& g = rep.grid;
  rep.edge_min = std::numeric_limits<double>::infinity();
  std::vector<double> xs, env;
  for (int i = 0; i < g.N; ++i) {
    double m = 0.0;
    for (int j = 0; j < g.M; ++j) m = std::max(m, std::abs(rep.u(j, i)));
    if (std::abs(g.x(i)) > g.X - 1.0) rep.edge_min = std::min(rep.edge_min, m);
    if (g.x(i) > 0) {
      xs.push_back(g.x(i));
      env.push_back(m);
    }
  }
  auto fit = fit_decay_samples(xs, env, Axis::Xi);
  rep.decay_total = fit.rate * std::pow(g.X, 1.0 / fit.order);
  rep.no_decay = rep.decay_total < 1.0;
  return rep;
}

TubeWitnessReport tube_zero_witness(const TubeT& op, int k0, double xi0, const CylinderGrid& grid) {
  const cplx c0 = average(op.a) + cplx(0, 1) * average(op.b);
  const cplx q0 = average(op.q);
  TubeWitnessReport rep;
  rep.k0 = k0;
  rep.xi0 = xi0;
  rep.condition_defect = std::abs(static_cast<double>(k0) + c0 * xi0 - cplx(0, 1) * q0);
  if (rep.condition_defect > 1e-9) {
    Error e(ErrorKind::Refusal, "periodicity_violated", "k0 + c0 xi0 - i q0 != 0: the witness is not periodic in t");
    e.with("defect", rep.condition_defect);
    throw e;
  }
  const auto A = zero_mean_antiderivative(op.a);
  const auto Bb = zero_mean_antiderivative(op.b);
  const auto Qi = zero_mean_antiderivative(op.q);
  auto v_at = [&](double t, double x) {
    const cplx C = A(t) + cplx(0, 1) * Bb(t);
    return std::exp(-cplx(0, xi0) * C - Qi(t)) * std::polar(1.0, xi0 * x);
  };
  rep.grid = grid_for_frequency(grid, xi0);
  rep.grid.validate();
  rep.v = GridFunction::sample(rep.grid, v_at);
  for (int i = 0; i < rep.grid.N; ++i) {
    const double x = rep.grid.x(i);
    rep.periodicity_defect = std::max(rep.periodicity_defect, std::abs(v_at(kTwoPi, x) - v_at(0.0, x)));
  }
  rep.residual_inf = max_abs(apply_operator(OperatorSpec{op}, rep.v).values);
  return rep;
}

double G_value(const Antiderivative& Bint, double t, double s, bool mirrored) { return G_at(Bint, t, s, mirrored); }

cplx f_hat(const SignChangeReport& r, const Antiderivative&, double t, double xi) {
  const double psi = r.psi(xi);
  if (psi == 0.0) return {};
  const double tt = wrap_2pi(t);
  const double phi = r.phi(tt);
  if (phi == 0.0) return {};
  const cplx w = cplx(0, xi * r.a0) + r.q0;  // i xi a0 + q0
  const cplx theta0 = w - xi * r.b0;
  if (!r.mirrored) return (std::exp(kTwoPi * theta0) - 1.0) * std::exp(r.B * xi) * phi * std::exp(-w * (tt - r.t0)) * psi;
  return (1.0 - std::exp(-kTwoPi * theta0)) * std::exp(-r.B * xi) * phi * std::exp(-w * (tt - r.t0)) * psi;
}

cplx u_hat(const SignChangeReport& r, const Antiderivative& Bint, double t, double xi) {
  const double psi = r.psi(xi);
  if (psi == 0.0) return {};
  const cplx w = cplx(0, xi * r.a0) + r.q0;
  auto integrand = [&](double s) -> cplx {
    const double tau = r.mirrored ? t - s : t + s;
    const double tt = wrap_2pi(tau);
    const double phi = r.phi(tt);
    if (phi == 0.0) return {};
    const double n = std::round((tt - tau) / kTwoPi);  // tt = tau + 2 pi n
    const double G = G_at(Bint, t, s, r.mirrored);
    const double expo = r.mirrored ? xi * (G - r.B) : xi * (r.B - G);
    return phi * std::exp(expo - w * (t - r.t0 + n * kTwoPi));
  };
  // panels: cutoff breakpoints, a grading towards the peak at s0, max width 0.05
  const double width = 0.5 / std::sqrt(xi + 1.0);
  const double knots_t[] = {r.phi.t_lo, r.phi.p_lo, r.phi.p_hi, r.phi.t_hi};
  cplx total{};
  for (auto [lo, hi] : support_in_s(r, t)) {
    std::vector<double> cuts = {lo, hi};
    for (int n = -2; n <= 2; ++n)
      for (double k : knots_t) cuts.push_back(r.mirrored ? t - k + kTwoPi * n : k - t + kTwoPi * n);
    for (double d = width; d < kTwoPi; d *= 2) {
      cuts.push_back(r.s0 - d);
      cuts.push_back(r.s0 + d);
    }
    cuts.push_back(r.s0);
    std::vector<double> pts;
    for (double c : cuts)
      if (c >= lo && c <= hi) pts.push_back(c);
    std::sort(pts.begin(), pts.end());
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const double a = pts[i], b = pts[i + 1];
      if (!(b > a)) continue;
      const int panels = static_cast<int>(std::ceil((b - a) / 0.05));
      const double hp = (b - a) / panels;
      for (int m = 0; m < panels; ++m) total += gauss_legendre(integrand, a + m * hp, a + (m + 1) * hp);
    }
  }
  return psi * total;
}

SignChangeReport sign_change_construction(double a0, const TrigPolynomial& b, cplx q0, const SignChangeParams& params) {
  if (!b.is_real_valued()) throw precondition_error("nonreal_coefficient", "b must be real-valued");
  if (!(params.mu > 1.0))
    throw Error(ErrorKind::Refusal, "mu_out_of_range",
                "the sign-change construction needs mu > 1; for mu <= 1 the necessity direction is open");
  if (!(params.sigma1 > 1.0)) throw precondition_error("invalid_order", "sigma1 must exceed 1");
  const auto sign = sign_change(b);
  if (sign.pattern != SignPattern::ChangesSign)
    throw precondition_error("no_sign_change", "b does not change sign; the construction does not apply");

  SignChangeReport r;
  r.a0 = a0;
  r.b0 = average(b).real();
  r.q0 = q0;
  const auto tilde = classify_first_order_t(a0, r.b0, q0);
  if (tilde.verdict != Verdict::GH)
    throw precondition_error("averaged_not_gh",
                             "averaged operator is not GH; a tube zero witness already shows P is not GH");
  r.mirrored = r.b0 < 0;
  const auto Bint = zero_mean_antiderivative(b);

  // extremise G on a 512^2 grid; on grid points t+s stays on the grid
  const int n = 512;
  const double h = kTwoPi / n;
  std::vector<double> P(2 * n + 1);
  for (int i = -n; i <= n; ++i) P[i + n] = Bint(i * h).real();
  auto Pv = [&](int i) { return P[i + n]; };
  std::vector<double> P2(2 * n + 1);
  for (int i = 0; i <= 2 * n; ++i) P2[i] = Bint(i * h).real();
  double best = std::numeric_limits<double>::infinity();
  int bi = 0, bj = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= n; ++j) {
      const double G = r.mirrored ? -(Pv(i) - Pv(i - j)) : P2[i + j] - P2[i];
      if (G < best) {
        best = G;
        bi = i;
        bj = j;
      }
    }
  // Newton refinement with exact derivatives of the signed objective
  double t = bi * h, s = bj * h;
  auto obj = [&](double tt, double ss) { return r.mirrored ? -G_at(Bint, tt, ss, true) : G_at(Bint, tt, ss, false); };
  for (int it = 0; it < 50; ++it) {
    double gt, gs, htt, hts, hss;
    if (!r.mirrored) {
      gt = (b(t + s) - b(t)).real();
      gs = b(t + s).real();
      htt = (b.derivative(1, t + s) - b.derivative(1, t)).real();
      hts = b.derivative(1, t + s).real();
      hss = hts;
    } else {
      // -(B(t) - B(t - s))
      gt = -(b(t) - b(t - s)).real();
      gs = -b(t - s).real();
      htt = -(b.derivative(1, t) - b.derivative(1, t - s)).real();
      hts = -b.derivative(1, t - s).real();
      hss = b.derivative(1, t - s).real();
    }
    const double det = htt * hss - hts * hts;
    if (!(det > 0) || !(htt > 0)) break;
    const double dt = -(hss * gt - hts * gs) / det;
    const double ds = -(htt * gs - hts * gt) / det;
    const double nt = t + dt, ns = s + ds;
    if (obj(nt, ns) > obj(t, s) + 1e-15) break;
    t = nt;
    s = ns;
    if (std::hypot(dt, ds) < 1e-14) break;
  }
  r.t0 = wrap_2pi(t);
  r.s0 = s;
  r.B = G_at(Bint, r.t0, r.s0, r.mirrored);
  r.tau0 = wrap_2pi(r.mirrored ? r.t0 - r.s0 : r.t0 + r.s0);
  r.delta = std::min({params.delta, 0.99 * r.tau0, 0.99 * (kTwoPi - r.tau0)});
  if (!(r.delta > 0)) throw precondition_error("degenerate_extremiser", "plateau centre sits on the period boundary");
  r.phi = plateau_cutoff(r.tau0, r.delta, params.sigma1);
  r.psi = HalfLineCutoff{params.mu};

  // (b) slope of |u^(t0, xi)| in log-log
  const int np = std::max(2, params.slope_points);
  r.xi.resize(np);
  r.u_abs.resize(np);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < np; ++i) {
    const double xi = std::exp(std::log(params.xi_lo) + (std::log(params.xi_hi) - std::log(params.xi_lo)) * i / (np - 1));
    r.xi[i] = xi;
    r.u_abs[i] = std::abs(u_hat(r, Bint, r.t0, xi));
  }
  {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < np; ++i) {
      const double x = std::log(r.xi[i]), y = std::log(r.u_abs[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    r.slope = (np * sxy - sx * sy) / (np * sxx - sx * sx);
    r.slope_ok = r.slope >= -0.6 && r.slope <= -0.4;
  }

  // (c) fibers: closed form against the periodic ODE solver
  const int M = params.fiber_M;
  r.fiber_residuals.assign(params.fiber_xis.size(), 0.0);
  for (std::size_t f = 0; f < params.fiber_xis.size(); ++f) {
    const double xi = params.fiber_xis[f];
    PeriodicODEProblem prob{TrigPolynomial::constant(cplx(0, xi * a0) + q0) + b * cplx(-xi, 0.0), std::vector<cplx>(M)};
    std::vector<cplx> exact(M);
#pragma omp parallel for schedule(dynamic)
    for (int j = 0; j < M; ++j) {
      const double tj = kTwoPi * j / M;
      prob.g[j] = f_hat(r, Bint, tj, xi);
      exact[j] = u_hat(r, Bint, tj, xi);
    }
    const auto sol = solve_periodic_ode(prob);
    r.fiber_residuals[f] = max_abs_diff(sol.u, exact) / std::max(max_abs(exact), 1e-300);
    r.fiber_residual_max = std::max(r.fiber_residual_max, r.fiber_residuals[f]);
  }
  r.fiber_ok = r.fiber_residual_max < 1e-5;

  // (a) membership of f^
  const auto& g = params.membership_grid;
  g.validate();
  PartialSpectrum Fp(g);
  for (int j = 0; j < g.M; ++j)
    for (int c = 0; c < g.N; ++c) Fp(j, c) = f_hat(r, Bint, g.t(j), g.xi(c));
  r.f_membership = membership_report(partial_to_mixed(Fp), std::max(params.sigma1, params.mu), params.mu);
  r.passed = r.slope_ok && r.fiber_ok && r.f_membership.consistent;
  return r;
}

LaplaceReport laplace_lower_bound_check(const std::function<double(double)>& psi, double s0, double delta,
                                        const std::vector<double>& lambdas) {
  if (!(delta > 0)) throw precondition_error("invalid_delta", "delta must be positive");
  LaplaceReport rep;
  rep.s0 = s0;
  rep.delta = delta;
  const int n = 20000;
  double slope_ref = 0.0, pmax = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double s = s0 - delta + 2.0 * delta * i / n;
    const double d = s - s0;
    const double v = psi(s);
    if (v < -1e-14) throw precondition_error("negative_psi", "psi must be nonnegative");
    pmax = std::max(pmax, v);
    if (std::abs(d) < 1e-9 * delta) continue;
    rep.M = std::max(rep.M, v / (d * d));
    slope_ref = std::max(slope_ref, v / std::abs(d));
  }
  if (std::abs(psi(s0)) > 1e-12 * (1.0 + pmax)) throw precondition_error("not_a_zero", "psi(s0) != 0");
  const double hh = 1e-6 * delta;
  const double slope_h = std::max(psi(s0 + hh), psi(s0 - hh)) / hh;
  if (slope_ref > 0 && slope_h > 1e-2 * slope_ref)
    throw precondition_error("order_one_zero", "psi'(s0) != 0: the zero has order one");
  if (!(rep.M > 0)) throw precondition_error("flat_psi", "psi vanishes on the window");
  rep.lambda_threshold = 1.0 / rep.M;
  const double gauss = integrate([](double s) { return std::exp(-s * s); }, -delta, delta);
  rep.all_hold = true;
  for (double lam : lambdas) {
    LaplacePoint p;
    p.lambda = lam;
    auto f = [&](double s) { return std::exp(-lam * psi(s)); };
    p.lhs = integrate(f, s0 - delta, s0) + integrate(f, s0, s0 + delta);
    p.rhs = gauss / std::sqrt(lam * rep.M);
    p.holds = p.lhs >= p.rhs * (1.0 - 1e-10);
    p.guaranteed = lam >= rep.lambda_threshold;
    rep.all_hold = rep.all_hold && p.holds;
    rep.points.push_back(p);
  }
  return rep;
}

}  // namespace cylhypo
