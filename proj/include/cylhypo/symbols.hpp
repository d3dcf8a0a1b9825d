#pragma once

#include <complex>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace cylhypo {

using cplx = std::complex<double>;

/// Complex polynomial in one real variable, coefficients in ascending degree.
/// Trailing zero coefficients are removed on construction, so the stored
/// leading coefficient is nonzero unless the polynomial is identically zero.
class ComplexPolynomial {
 public:
  ComplexPolynomial() = default;
  explicit ComplexPolynomial(std::vector<cplx> coeffs);

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  std::span<const cplx> coeffs() const { return coeffs_; }
  cplx coeff(int i) const;

  cplx operator()(cplx x) const;
  cplx operator()(double x) const { return (*this)(cplx(x, 0.0)); }

  /// Real and imaginary coefficient sequences (not trimmed).
  std::vector<double> real_part() const;
  std::vector<double> imag_part() const;

  ComplexPolynomial derivative() const;

 private:
  std::vector<cplx> coeffs_;
};

/// Finite Fourier series  f(t) = sum_n c_n e^{int}  on the circle [0, 2pi).
class TrigPolynomial {
 public:
  TrigPolynomial() = default;
  explicit TrigPolynomial(std::map<int, cplx> coeffs);

  static TrigPolynomial constant(cplx c);
  /// amp * cos(n t)
  static TrigPolynomial cosine(double amp, int n = 1);
  /// amp * sin(n t)
  static TrigPolynomial sine(double amp, int n = 1);
  /// amp * e^{i n t}
  static TrigPolynomial mode(cplx amp, int n);

  const std::map<int, cplx>& coefficients() const { return coeffs_; }
  cplx coefficient(int n) const;
  /// Largest |n| with a nonzero coefficient, 0 for constants.
  int max_frequency() const;

  bool is_zero() const { return coeffs_.empty(); }
  bool is_constant() const;
  /// Exact check c_{-n} == conj(c_n) for every stored frequency.
  bool is_real_valued() const;

  cplx operator()(double t) const;
  /// d^order/dt^order evaluated at t.
  cplx derivative(int order, double t) const;
  TrigPolynomial derivative(int order) const;

  TrigPolynomial operator+(const TrigPolynomial& o) const;
  TrigPolynomial operator-(const TrigPolynomial& o) const;
  TrigPolynomial operator*(const TrigPolynomial& o) const;
  TrigPolynomial operator*(cplx s) const;
  TrigPolynomial pow(int e) const;

 private:
  std::map<int, cplx> coeffs_;  // zero amplitudes are never stored
};

/// Zero-frequency coefficient, i.e. (1/2pi) * integral over a period.
cplx average(const TrigPolynomial& f);

/// Primitive of f split into a periodic part and a linear part:
/// integral_0^t f = periodic(t) + slope * t, with periodic(0) = 0.
struct Antiderivative {
  TrigPolynomial periodic;
  cplx slope;

  cplx operator()(double t) const { return periodic(t) + slope * t; }
  /// integral_{t0}^{t1} f
  cplx integral(double t0, double t1) const { return (*this)(t1) - (*this)(t0); }
};

/// Periodic F with F(0) = 0 and F' = f - average(f); coefficients c_n / (i n).
/// Real-valuedness of f carries over to F exactly.
Antiderivative zero_mean_antiderivative(const TrigPolynomial& f);

inline cplx eval_trig(const TrigPolynomial& f, double t) { return f(t); }
inline cplx eval_deriv(const TrigPolynomial& f, int order, double t) { return f.derivative(order, t); }

// ---------------------------------------------------------------------------
// Operators on T^1 x R.

/// P = p(D_x) + q(D_t) with D = -i d. Symbol p(xi) + q(k).
struct ConstSplit {
  ComplexPolynomial p;  // in xi
  ComplexPolynomial q;  // in k
};

/// P = c1 d_x + c2 d_t + c3. Normalised symbol c1 xi + c2 k - i c3.
struct FirstOrderT {
  cplx c1;
  cplx c2;
  cplx c3;
};

/// P = d_t + (a(t) + i b(t)) d_x + q(t), with a, b real-valued.
struct TubeT {
  TrigPolynomial a;
  TrigPolynomial b;
  TrigPolynomial q;
};

using OperatorSpec = std::variant<ConstSplit, FirstOrderT, TubeT>;

/// Validates that a and b are real-valued.
TubeT make_tube(TrigPolynomial a, TrigPolynomial b, TrigPolynomial q);

/// P = d_t + (a + ib) d_x + c
FirstOrderT first_order_t_form(double a, double b, cplx c);
/// P = d_x + (a + ib) d_t + c
FirstOrderT first_order_x_form(double a, double b, cplx c);

/// The symbol whose zero set on Z x R decides hypoellipticity.
/// ConstSplit: p(xi) + q(k). FirstOrderT: c1 xi + c2 k - i c3.
/// TubeT is accepted only with constant coefficients.
cplx symbol_at(const OperatorSpec& op, int k, double xi);

/// Eigenvalue of P on the plane wave e^{i(kt + xi x)}.
/// Equals symbol_at for ConstSplit and i * symbol_at for first-order forms.
cplx plane_wave_multiplier(const OperatorSpec& op, int k, double xi);

/// i^{-1} P written as p(D_x) + q(D_t):  p = c1 xi - i c3,  q = c2 k.
ConstSplit to_const_split(const FirstOrderT& op);

/// Constant-coefficient tube operator as a first-order form, if applicable.
std::optional<FirstOrderT> constant_tube_form(const TubeT& op);

std::string describe(const OperatorSpec& op);

}  // namespace cylhypo
