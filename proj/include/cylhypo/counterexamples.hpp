#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cylhypo/spectral.hpp"
#include "cylhypo/symbols.hpp"
#include "cylhypo/zeroset.hpp"

namespace cylhypo {

/// Smooth step: 0 for s <= 0, 1 for s >= 1, built from h(s) = exp(-s^{-1/(order-1)})
/// as h(s) / (h(s) + h(1-s)). Gevrey of the given order (> 1).
double gevrey_step(double s, double order);

/// 0 <= phi <= 1, phi = 1 on [p_lo, p_hi], phi = 0 outside (t_lo, t_hi).
struct GevreyCutoff {
  double order = 2.0;
  double t_lo = 0.0, p_lo = 0.0, p_hi = 0.0, t_hi = 0.0;

  double operator()(double t) const;
  /// Periodic extension from [0, 2pi).
  double periodic(double t) const;
};

/// Support [c - delta, c + delta], plateau [c - delta/2, c + delta/2].
GevreyCutoff plateau_cutoff(double center, double delta, double order);

/// psi(xi) = 0 for xi <= 0, 1 for xi >= 1.
struct HalfLineCutoff {
  double order = 2.0;
  double operator()(double xi) const { return gevrey_step(xi, order); }
};

// ------------------------------------------------------------ plane waves

struct PlaneWaveReport {
  ZeroWitness witness;
  CylinderGrid grid;  // X adjusted so that xi0 lies on the frequency grid
  GridFunction u;
  double residual_inf = 0.0;  // max |P u|
  double edge_min = 0.0;      // min |u| on |x| > X - 1
  double decay_total = 0.0;   // fitted decay of max_t |u| across the x window (in e-folds)
  bool no_decay = false;
};

inline constexpr double kWitnessResidualTol = 1e-8;

/// u = e^{i(k0 t + xi0 x)}. Throws "witness_rejected" if max|Pu| > 1e-8.
PlaneWaveReport plane_wave_witness(const OperatorSpec& op, const ZeroWitness& w, const CylinderGrid& grid);

/// Smallest X' >= X with xi0 X' / pi an integer (X unchanged for xi0 = 0).
CylinderGrid grid_for_frequency(const CylinderGrid& grid, double xi0);

struct TubeWitnessReport {
  int k0 = 0;
  double xi0 = 0.0;
  double condition_defect = 0.0;    // |k0 + c0 xi0 - i q0|
  double periodicity_defect = 0.0;  // max |v(2pi, x) - v(0, x)|
  double residual_inf = 0.0;        // max |P v|
  CylinderGrid grid;
  GridFunction v;
};

/// v(t,x) = exp(-integral_0^t (i xi0 c(s) + q(s)) ds) e^{i xi0 x}, c = a + ib.
/// Throws "periodicity_violated" unless k0 + c0 xi0 - i q0 = 0 within 1e-9.
TubeWitnessReport tube_zero_witness(const TubeT& op, int k0, double xi0, const CylinderGrid& grid);

// ------------------------------------------------------ sign change

struct SignChangeParams {
  double sigma1 = 1.5;        // Gevrey order of phi
  double mu = 2.0;            // order of psi, must exceed 1
  double delta = 1.0;         // support half-width of phi (shrunk to fit in (0, 2pi))
  double xi_lo = 50.0, xi_hi = 2000.0;
  int slope_points = 40;
  std::vector<double> fiber_xis{0.5, 1.0, 2.0, 5.0, 10.0, 20.0};
  int fiber_M = 1024;
  CylinderGrid membership_grid{256, 256, 10.0};
};

struct SignChangeReport {
  bool mirrored = false;  // b0 < 0 construction
  double a0 = 0.0, b0 = 0.0;
  cplx q0{};
  double t0 = 0.0, s0 = 0.0;  // extremiser of G (or G~)
  double B = 0.0;             // min G (or max G~)
  double tau0 = 0.0;          // centre of phi's plateau
  double delta = 0.0;
  GevreyCutoff phi;
  HalfLineCutoff psi;
  std::vector<double> xi;       // slope sweep
  std::vector<double> u_abs;    // |u^(t0, xi)|
  double slope = 0.0;
  bool slope_ok = false;        // slope in [-0.6, -0.4]
  std::vector<double> fiber_residuals;  // per fiber_xis: relative defect vs the fiber solver
  double fiber_residual_max = 0.0;
  bool fiber_ok = false;        // < 1e-5
  MembershipReport f_membership;
  bool passed = false;
};

/// Builds f^ and u^ solving the fiber ODEs for d_t + (a0 + i b(t)) d_x + q0
/// with b sign-changing and verifies the slow xi-decay of u^ at t0.
SignChangeReport sign_change_construction(double a0, const TrigPolynomial& b, cplx q0,
                                          const SignChangeParams& params = {});

/// G(t,s) = integral_t^{t+s} b (or integral_{t-s}^t b when mirrored).
double G_value(const Antiderivative& Bint, double t, double s, bool mirrored);

/// f^(t, xi) and u^(t, xi) from a finished construction.
cplx f_hat(const SignChangeReport& r, const Antiderivative& Bint, double t, double xi);
cplx u_hat(const SignChangeReport& r, const Antiderivative& Bint, double t, double xi);

// ------------------------------------------------------------- Laplace

struct LaplacePoint {
  double lambda = 0.0;
  double lhs = 0.0;  // integral_{s0-delta}^{s0+delta} e^{-lambda psi}
  double rhs = 0.0;  // (integral_{-delta}^{delta} e^{-s^2}) (lambda M)^{-1/2}
  bool holds = false;
  bool guaranteed = false;  // lambda >= 1/M, where the bound is a theorem
};

struct LaplaceReport {
  double s0 = 0.0, delta = 0.0, M = 0.0;
  double lambda_threshold = 0.0;  // 1 / M
  std::vector<LaplacePoint> points;
  bool all_hold = false;
};

/// psi >= 0 with psi(s0) = psi'(s0) = 0. Throws "order_one_zero" if psi'(s0) != 0.
LaplaceReport laplace_lower_bound_check(const std::function<double(double)>& psi, double s0, double delta,
                                        const std::vector<double>& lambdas);

}  // namespace cylhypo
