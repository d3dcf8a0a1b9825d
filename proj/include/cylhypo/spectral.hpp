#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cylhypo/symbols.hpp"

namespace cylhypo {

/// Uniform grid on [0, 2pi) x [-X, X).
struct CylinderGrid {
  int M = 64;    // t samples
  int N = 512;   // x samples
  double X = 12.0;

  double dt() const;
  double dx() const;
  double dxi() const;  // pi / X
  double t(int j) const;
  double x(int i) const;
  /// Frequency of spectrum column c (c = 0..N-1), i.e. xi_{c - N/2}.
  double xi(int c) const;
  /// Fourier index of spectrum row r (r = 0..M-1), i.e. r - M/2.
  int k(int r) const;
  std::size_t size() const { return static_cast<std::size_t>(M) * N; }

  /// Throws Usage error unless M, N are powers of two >= 2 and X > 0.
  void validate() const;
  bool operator==(const CylinderGrid&) const = default;
};

/// Row-major M x N array: row j is t_j, column i is x_i.
struct GridFunction {
  CylinderGrid grid;
  std::vector<cplx> values;

  GridFunction() = default;
  explicit GridFunction(CylinderGrid g) : grid(g), values(g.size()) {}
  cplx& operator()(int j, int i) { return values[static_cast<std::size_t>(j) * grid.N + i]; }
  cplx operator()(int j, int i) const { return values[static_cast<std::size_t>(j) * grid.N + i]; }

  static GridFunction sample(const CylinderGrid& g, const std::function<cplx(double, double)>& f);
};

/// f~(k, xi): row r <-> k = r - M/2, column c <-> xi_{c - N/2} (both ascending).
struct MixedSpectrum {
  CylinderGrid grid;
  std::vector<cplx> values;

  MixedSpectrum() = default;
  explicit MixedSpectrum(CylinderGrid g) : grid(g), values(g.size()) {}
  cplx& operator()(int r, int c) { return values[static_cast<std::size_t>(r) * grid.N + c]; }
  cplx operator()(int r, int c) const { return values[static_cast<std::size_t>(r) * grid.N + c]; }
  /// Value at Fourier index k and column c; zero outside the stored range.
  cplx at(int k, int c) const;
};

/// f^(t, xi): x transformed only. Row j <-> t_j, column c <-> xi_{c - N/2}.
struct PartialSpectrum {
  CylinderGrid grid;
  std::vector<cplx> values;

  PartialSpectrum() = default;
  explicit PartialSpectrum(CylinderGrid g) : grid(g), values(g.size()) {}
  cplx& operator()(int j, int c) { return values[static_cast<std::size_t>(j) * grid.N + c]; }
  cplx operator()(int j, int c) const { return values[static_cast<std::size_t>(j) * grid.N + c]; }
};

enum class Exec { Serial, Parallel };

/// Fourier coefficients in t (1/M scaling) composed with the x transform
/// approximating integral f e^{-i xi x} dx (Delta x scaling, -X phase shift).
MixedSpectrum forward_mixed(const GridFunction& f, Exec exec = Exec::Parallel);
GridFunction inverse_mixed(const MixedSpectrum& F, Exec exec = Exec::Parallel);

PartialSpectrum forward_partial(const GridFunction& f, Exec exec = Exec::Parallel);
GridFunction inverse_partial(const PartialSpectrum& F, Exec exec = Exec::Parallel);

/// t-series of a partial spectrum: PartialSpectrum -> MixedSpectrum and back.
MixedSpectrum partial_to_mixed(const PartialSpectrum& F, Exec exec = Exec::Parallel);
PartialSpectrum mixed_to_partial(const MixedSpectrum& F, Exec exec = Exec::Parallel);

/// Applies P on the grid: per-axis spectral derivatives for constant
/// coefficients, pointwise coefficient products for tube operators.
GridFunction apply_operator(const OperatorSpec& op, const GridFunction& u, Exec exec = Exec::Parallel);

/// Spectral d/dt and d/dx of a grid function (odd derivatives zero the Nyquist bin).
GridFunction diff_t(const GridFunction& u, int order = 1, Exec exec = Exec::Parallel);
GridFunction diff_x(const GridFunction& u, int order = 1, Exec exec = Exec::Parallel);

double max_abs(const std::vector<cplx>& v);
double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b);

/// Grid quadratures for the Parseval identity: sum |f|^2 dt dx and
/// 2pi * sum_k sum_xi |F|^2 dxi / (2pi).
double l2_norm_sq(const GridFunction& f);
double l2_norm_sq(const MixedSpectrum& F);

// ------------------------------------------------------------------ fits

enum class Axis { K, Xi };
std::string to_string(Axis a);

struct FitWindow {
  int min_index = 2;             // exclude |k| < 2 (|m| < 2 on the xi axis)
  double tail_fraction = 0.10;   // exclude the largest 10% of indices
  double floor_rel = 1e-15;      // exclude magnitudes below floor_rel * max
  bool tail_max = true;          // fit the monotone envelope max_{|n'| >= |n|} s(n')
};

/// log s = log C - rate * |index|^{1/order}
struct DecayFit {
  Axis axis = Axis::K;
  double C = 0.0;
  double rate = 0.0;
  double order = 0.0;
  double rms_residual = 0.0;
  int points = 0;
  bool decaying() const { return rate > 0.0; }
};

inline constexpr double kOrderMin = 0.30;
inline constexpr double kOrderMax = 6.00;

/// Fits the envelope s(k) = max_xi |F| (axis K) or s(xi) = max_k |F| (axis Xi).
/// The xi axis is indexed by the frequency value xi_m itself. With
/// window.tail_max the profile is first replaced by its running maximum from
/// the outer edge of the window inwards on each side, which removes the nulls
/// of oscillating spectra without changing monotone ones.
DecayFit fit_decay(const MixedSpectrum& F, Axis axis, const FitWindow& window = {});

/// Same model on explicit (index, magnitude) data.
DecayFit fit_decay_samples(const std::vector<double>& index, const std::vector<double>& magnitude, Axis axis);

struct MembershipReport {
  double sigma_claim = 1.0;
  double mu_claim = 0.5;
  std::optional<DecayFit> k_fit;
  std::optional<DecayFit> xi_fit;
  std::string k_note;
  std::string xi_note;
  bool k_consistent = false;
  bool xi_consistent = false;
  bool truncation_warning = false;
  double edge_max = 0.0;  // max |f| on |x| > X - 1
  bool consistent = false;
  std::vector<std::pair<int, double>> k_profile;     // (k, s(k))
  std::vector<std::pair<double, double>> xi_profile; // (xi, s(xi))
};

inline constexpr double kOrderSlack = 0.15;
inline constexpr double kRmsLimit = 0.5;

MembershipReport membership_report(const GridFunction& f, double sigma_claim, double mu_claim,
                                   const FitWindow& window = {});
MembershipReport membership_report(const MixedSpectrum& F, double sigma_claim, double mu_claim,
                                   const FitWindow& window = {});

}  // namespace cylhypo
