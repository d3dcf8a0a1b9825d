#include "cylhypo/symbols.hpp"

#include <cmath>
#include <sstream>

#include "cylhypo/error.hpp"

namespace cylhypo {

namespace {

constexpr cplx kI{0.0, 1.0};

cplx ipow(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

std::string fmt_c(cplx z) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i)";
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------- polynomial

ComplexPolynomial::ComplexPolynomial(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && coeffs_.back() == cplx(0.0, 0.0)) coeffs_.pop_back();
}

cplx ComplexPolynomial::coeff(int i) const {
  return (i >= 0 && i < static_cast<int>(coeffs_.size())) ? coeffs_[i] : cplx{};
}

cplx ComplexPolynomial::operator()(cplx x) const {
  cplx acc{};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::vector<double> ComplexPolynomial::real_part() const {
  std::vector<double> out(coeffs_.size());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i] = coeffs_[i].real();
  return out;
}

std::vector<double> ComplexPolynomial::imag_part() const {
  std::vector<double> out(coeffs_.size());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i] = coeffs_[i].imag();
  return out;
}

ComplexPolynomial ComplexPolynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<cplx> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<double>(i);
  return ComplexPolynomial(std::move(d));
}

// ---------------------------------------------------------- trig polynomial

TrigPolynomial::TrigPolynomial(std::map<int, cplx> coeffs) {
  for (auto& [n, c] : coeffs)
    if (c != cplx(0.0, 0.0)) coeffs_.emplace(n, c);
}

TrigPolynomial TrigPolynomial::constant(cplx c) { return TrigPolynomial({{0, c}}); }

TrigPolynomial TrigPolynomial::cosine(double amp, int n) {
  if (n == 0) return constant(amp);
  return TrigPolynomial({{n, 0.5 * amp}, {-n, 0.5 * amp}});
}

TrigPolynomial TrigPolynomial::sine(double amp, int n) {
  if (n == 0) return {};
  // sin(nt) = (e^{int} - e^{-int}) / 2i
  return TrigPolynomial({{n, cplx(0.0, -0.5 * amp)}, {-n, cplx(0.0, 0.5 * amp)}});
}

TrigPolynomial TrigPolynomial::mode(cplx amp, int n) { return TrigPolynomial({{n, amp}}); }

cplx TrigPolynomial::coefficient(int n) const {
  auto it = coeffs_.find(n);
  return it == coeffs_.end() ? cplx{} : it->second;
}

int TrigPolynomial::max_frequency() const {
  int f = 0;
  for (const auto& [n, c] : coeffs_) f = std::max(f, std::abs(n));
  return f;
}

bool TrigPolynomial::is_constant() const {
  return coeffs_.empty() || (coeffs_.size() == 1 && coeffs_.begin()->first == 0);
}

bool TrigPolynomial::is_real_valued() const {
  for (const auto& [n, c] : coeffs_) {
    if (std::conj(c) != coefficient(-n)) return false;
  }
  return true;
}

cplx TrigPolynomial::operator()(double t) const {
  cplx acc{};
  for (const auto& [n, c] : coeffs_) acc += c * std::polar(1.0, n * t);
  return acc;
}

cplx TrigPolynomial::derivative(int order, double t) const {
  cplx acc{};
  for (const auto& [n, c] : coeffs_) {
    acc += c * ipow(order) * std::pow(static_cast<double>(n), order) * std::polar(1.0, n * t);
  }
  return acc;
}

TrigPolynomial TrigPolynomial::derivative(int order) const {
  std::map<int, cplx> d;
  for (const auto& [n, c] : coeffs_) d[n] = c * ipow(order) * std::pow(static_cast<double>(n), order);
  return TrigPolynomial(std::move(d));
}

TrigPolynomial TrigPolynomial::operator+(const TrigPolynomial& o) const {
  std::map<int, cplx> s = coeffs_;
  for (const auto& [n, c] : o.coeffs_) s[n] += c;
  return TrigPolynomial(std::move(s));
}

TrigPolynomial TrigPolynomial::operator-(const TrigPolynomial& o) const { return *this + o * cplx(-1.0, 0.0); }

TrigPolynomial TrigPolynomial::operator*(const TrigPolynomial& o) const {
  std::map<int, cplx> s;
  for (const auto& [n, c] : coeffs_)
    for (const auto& [m, d] : o.coeffs_) s[n + m] += c * d;
  return TrigPolynomial(std::move(s));
}

TrigPolynomial TrigPolynomial::operator*(cplx s) const {
  std::map<int, cplx> out;
  for (const auto& [n, c] : coeffs_) out[n] = c * s;
  return TrigPolynomial(std::move(out));
}

TrigPolynomial TrigPolynomial::pow(int e) const {
  TrigPolynomial acc = constant(1.0);
  for (int i = 0; i < e; ++i) acc = acc * *this;
  return acc;
}

cplx average(const TrigPolynomial& f) { return f.coefficient(0); }

Antiderivative zero_mean_antiderivative(const TrigPolynomial& f) {
  std::map<int, cplx> d;
  for (const auto& [n, c] : f.coefficients()) {
    if (n == 0) continue;
    // c / (i n) = -i c / n, written componentwise so conjugate pairs stay exact
    d[n] = cplx(c.imag() / n, -c.real() / n);
  }
  // F(0) = 0 fixes the constant term; sum symmetric pairs so a real input
  // produces an exactly real constant.
  cplx sum{};
  for (const auto& [n, c] : d) {
    if (n < 0) continue;
    auto it = d.find(-n);
    sum += it == d.end() ? c : c + it->second;
  }
  for (const auto& [n, c] : d) {
    if (n < 0 && !d.count(-n)) sum += c;
  }
  d[0] = -sum;
  return {TrigPolynomial(std::move(d)), f.coefficient(0)};
}

// ----------------------------------------------------------------- operators

TubeT make_tube(TrigPolynomial a, TrigPolynomial b, TrigPolynomial q) {
  if (!a.is_real_valued() || !b.is_real_valued())
    throw precondition_error("nonreal_coefficient", "tube operator requires real-valued a(t) and b(t)");
  return {std::move(a), std::move(b), std::move(q)};
}

FirstOrderT first_order_t_form(double a, double b, cplx c) { return {cplx(a, b), cplx(1.0, 0.0), c}; }

FirstOrderT first_order_x_form(double a, double b, cplx c) { return {cplx(1.0, 0.0), cplx(a, b), c}; }

ConstSplit to_const_split(const FirstOrderT& op) {
  return {ComplexPolynomial({-kI * op.c3, op.c1}), ComplexPolynomial({cplx{}, op.c2})};
}

std::optional<FirstOrderT> constant_tube_form(const TubeT& op) {
  if (!op.a.is_constant() || !op.b.is_constant() || !op.q.is_constant()) return std::nullopt;
  return FirstOrderT{average(op.a) + kI * average(op.b), cplx(1.0, 0.0), average(op.q)};
}

cplx symbol_at(const OperatorSpec& op, int k, double xi) {
  return std::visit(
      [&](const auto& o) -> cplx {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, ConstSplit>) {
          return o.p(xi) + o.q(static_cast<double>(k));
        } else if constexpr (std::is_same_v<T, FirstOrderT>) {
          return o.c1 * xi + o.c2 * static_cast<double>(k) - kI * o.c3;
        } else {
          auto f = constant_tube_form(o);
          if (!f)
            throw precondition_error("symbol_not_pointwise",
                                     "symbol not pointwise-defined for variable-coefficient tube operators; "
                                     "use the fiberwise solver");
          return symbol_at(OperatorSpec{*f}, k, xi);
        }
      },
      op);
}

cplx plane_wave_multiplier(const OperatorSpec& op, int k, double xi) {
  if (std::holds_alternative<ConstSplit>(op)) return symbol_at(op, k, xi);
  return kI * symbol_at(op, k, xi);
}

std::string describe(const OperatorSpec& op) {
  std::ostringstream os;
  std::visit(
      [&](const auto& o) {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, ConstSplit>) {
          os << "p(D_x)+q(D_t) with p=[";
          for (std::size_t i = 0; i < o.p.coeffs().size(); ++i) os << (i ? "," : "") << fmt_c(o.p.coeffs()[i]);
          os << "], q=[";
          for (std::size_t i = 0; i < o.q.coeffs().size(); ++i) os << (i ? "," : "") << fmt_c(o.q.coeffs()[i]);
          os << "]";
        } else if constexpr (std::is_same_v<T, FirstOrderT>) {
          os << fmt_c(o.c1) << "d_x+" << fmt_c(o.c2) << "d_t+" << fmt_c(o.c3);
        } else {
          os << "d_t+(a(t)+ib(t))d_x+q(t) with " << o.a.coefficients().size() << "/" << o.b.coefficients().size()
             << "/" << o.q.coefficients().size() << " Fourier modes";
        }
      },
      op);
  return os.str();
}

}  // namespace cylhypo
