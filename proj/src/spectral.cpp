#include <algorithm>
#include <cmath>

#include "cylhypo/error.hpp"
#include "cylhypo/kernels.hpp"
#include "cylhypo/spectral.hpp"

namespace cylhypo {

namespace {

int wrap(int m, int n) { return ((m % n) + n) % n; }
double parity(int m) { return (m % 2 == 0) ? 1.0 : -1.0; }

void rows(std::vector<cplx>& v, const CylinderGrid& g, int sign, Exec e) {
  if (e == Exec::Serial)
    kernels::dft_rows_serial(v.data(), g.M, g.N, sign);
  else
    kernels::dft_rows_omp(v.data(), g.M, g.N, sign);
}

void cols(std::vector<cplx>& v, const CylinderGrid& g, int sign, Exec e) {
  if (e == Exec::Serial)
    kernels::dft_cols_serial(v.data(), g.M, g.N, sign);
  else
    kernels::dft_cols_omp(v.data(), g.M, g.N, sign);
}

// u -> inverse DFT( mult(bin) * DFT(u) ) along x
template <class Mult>
std::vector<cplx> x_multiplier(const GridFunction& u, Mult&& mult, Exec e) {
  const auto& g = u.grid;
  std::vector<cplx> v = u.values;
  rows(v, g, -1, e);
  std::vector<cplx> w(g.N);
  for (int b = 0; b < g.N; ++b) {
    const int m = b < g.N / 2 ? b : b - g.N;
    w[b] = mult(m, M_PI * m / g.X) / static_cast<double>(g.N);
  }
  for (int j = 0; j < g.M; ++j)
    for (int b = 0; b < g.N; ++b) v[static_cast<std::size_t>(j) * g.N + b] *= w[b];
  rows(v, g, +1, e);
  return v;
}

template <class Mult>
std::vector<cplx> t_multiplier(const GridFunction& u, Mult&& mult, Exec e) {
  const auto& g = u.grid;
  std::vector<cplx> v = u.values;
  cols(v, g, -1, e);
  for (int b = 0; b < g.M; ++b) {
    const int k = b < g.M / 2 ? b : b - g.M;
    const cplx w = mult(k) / static_cast<double>(g.M);
    for (int i = 0; i < g.N; ++i) v[static_cast<std::size_t>(b) * g.N + i] *= w;
  }
  cols(v, g, +1, e);
  return v;
}

// polynomial in the frequency; odd powers vanish on the Nyquist bin
cplx poly_nyquist(const ComplexPolynomial& p, double freq, bool nyquist) {
  cplx acc{};
  double pw = 1.0;
  for (int j = 0; j <= p.degree(); ++j) {
    if (!(nyquist && j % 2 == 1)) acc += p.coeff(j) * pw;
    pw *= freq;
  }
  return acc;
}

cplx i_pow(double freq, int order, bool nyquist) {
  if (nyquist && order % 2 == 1) return {};
  return std::pow(cplx(0.0, freq), order);
}

}  // namespace

PartialSpectrum forward_partial(const GridFunction& f, Exec exec) {
  const auto& g = f.grid;
  std::vector<cplx> v = f.values;
  rows(v, g, -1, exec);
  PartialSpectrum out(g);
  const double dx = g.dx();
  for (int j = 0; j < g.M; ++j)
    for (int c = 0; c < g.N; ++c) {
      const int m = c - g.N / 2;
      out(j, c) = dx * parity(m) * v[static_cast<std::size_t>(j) * g.N + wrap(m, g.N)];
    }
  return out;
}

GridFunction inverse_partial(const PartialSpectrum& F, Exec exec) {
  const auto& g = F.grid;
  std::vector<cplx> v(g.size());
  const double s = 1.0 / (g.N * g.dx());
  for (int j = 0; j < g.M; ++j)
    for (int c = 0; c < g.N; ++c) {
      const int m = c - g.N / 2;
      v[static_cast<std::size_t>(j) * g.N + wrap(m, g.N)] = s * parity(m) * F(j, c);
    }
  rows(v, g, +1, exec);
  GridFunction out(g);
  out.values = std::move(v);
  return out;
}

MixedSpectrum partial_to_mixed(const PartialSpectrum& F, Exec exec) {
  const auto& g = F.grid;
  std::vector<cplx> v = F.values;
  cols(v, g, -1, exec);
  MixedSpectrum out(g);
  const double s = 1.0 / g.M;
  for (int r = 0; r < g.M; ++r) {
    const int b = wrap(g.k(r), g.M);
    for (int c = 0; c < g.N; ++c) out(r, c) = s * v[static_cast<std::size_t>(b) * g.N + c];
  }
  return out;
}

PartialSpectrum mixed_to_partial(const MixedSpectrum& F, Exec exec) {
  const auto& g = F.grid;
  std::vector<cplx> v(g.size());
  for (int r = 0; r < g.M; ++r) {
    const int b = wrap(g.k(r), g.M);
    for (int c = 0; c < g.N; ++c) v[static_cast<std::size_t>(b) * g.N + c] = F(r, c);
  }
  cols(v, g, +1, exec);
  PartialSpectrum out(g);
  out.values = std::move(v);
  return out;
}

MixedSpectrum forward_mixed(const GridFunction& f, Exec exec) {
  return partial_to_mixed(forward_partial(f, exec), exec);
}

GridFunction inverse_mixed(const MixedSpectrum& F, Exec exec) {
  return inverse_partial(mixed_to_partial(F, exec), exec);
}

GridFunction diff_t(const GridFunction& u, int order, Exec exec) {
  GridFunction out(u.grid);
  const int nyq = -u.grid.M / 2;
  out.values = t_multiplier(u, [&](int k) { return i_pow(k, order, k == nyq); }, exec);
  return out;
}

GridFunction diff_x(const GridFunction& u, int order, Exec exec) {
  GridFunction out(u.grid);
  const int nyq = -u.grid.N / 2;
  out.values = x_multiplier(u, [&](int m, double xi) { return i_pow(xi, order, m == nyq); }, exec);
  return out;
}

GridFunction apply_operator(const OperatorSpec& op, const GridFunction& u, Exec exec) {
  const auto& g = u.grid;
  GridFunction out(g);
  if (auto* s = std::get_if<ConstSplit>(&op)) {
    const int nx = -g.N / 2, nt = -g.M / 2;
    auto px = x_multiplier(u, [&](int m, double xi) { return poly_nyquist(s->p, xi, m == nx); }, exec);
    auto qt = t_multiplier(u, [&](int k) { return poly_nyquist(s->q, k, k == nt); }, exec);
    for (std::size_t i = 0; i < g.size(); ++i) out.values[i] = px[i] + qt[i];
    return out;
  }
  const auto ux = diff_x(u, 1, exec);
  const auto ut = diff_t(u, 1, exec);
  if (auto* f = std::get_if<FirstOrderT>(&op)) {
    for (std::size_t i = 0; i < g.size(); ++i)
      out.values[i] = f->c1 * ux.values[i] + f->c2 * ut.values[i] + f->c3 * u.values[i];
    return out;
  }
  const auto& tube = std::get<TubeT>(op);
  for (int j = 0; j < g.M; ++j) {
    const double t = g.t(j);
    const cplx c = tube.a(t) + cplx(0, 1) * tube.b(t);
    const cplx q = tube.q(t);
    for (int i = 0; i < g.N; ++i) {
      const std::size_t n = static_cast<std::size_t>(j) * g.N + i;
      out.values[n] = ut.values[n] + c * ux.values[n] + q * u.values[n];
    }
  }
  return out;
}

double max_abs(const std::vector<cplx>& v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.size() != b.size()) throw precondition_error("size_mismatch", "arrays differ in size");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double l2_norm_sq(const GridFunction& f) {
  double s = 0.0;
  for (const auto& z : f.values) s += std::norm(z);
  return s * f.grid.dt() * f.grid.dx();
}

double l2_norm_sq(const MixedSpectrum& F) {
  double s = 0.0;
  for (const auto& z : F.values) s += std::norm(z);
  return s * F.grid.dxi();
}

}  // namespace cylhypo
