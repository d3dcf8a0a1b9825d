#include "cylhypo/zeroset.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <boost/math/tools/minima.hpp>

#include "cylhypo/error.hpp"
#include "cylhypo/realroots.hpp"

namespace cylhypo {

namespace {

constexpr double kIntTol = 1e-9;

bool near_integer(double v, double tol, long long& n) {
  if (!std::isfinite(v) || std::abs(v) > 1e15) return false;
  n = std::llround(v);
  return std::abs(v - static_cast<double>(n)) <= tol;
}

std::vector<double> shift_const(std::vector<double> c, double add) {
  if (c.empty()) c.push_back(0.0);
  c[0] += add;
  return realpoly::trimmed(std::move(c));
}

bool is_const(const std::vector<double>& c) { return realpoly::trimmed(c).size() <= 1; }

double const_term(const std::vector<double>& c) { return c.empty() ? 0.0 : c[0]; }

// ----------------------------------------------------------- first order

ZeroSearch zeros_first_order(const FirstOrderT& op) {
  ZeroSearch out;
  out.completeness = Completeness::Exhaustive;
  out.basis = "closed-form linear system";
  if (op.c1 == cplx{} && op.c2 == cplx{} && op.c3 == cplx{})
    throw precondition_error("degenerate_operator", "operator is identically zero");
  if (auto w = first_order_witness(op)) {
    out.witnesses.push_back(*w);
    // a line of zeros whenever the coefficient matrix is singular
    const double det = op.c1.real() * op.c2.imag() - op.c2.real() * op.c1.imag();
    out.continuum = det == 0.0;
  }
  return out;
}

// ----------------------------------------------------------- split form

struct SplitParts {
  std::vector<double> re_p, im_p, re_q, im_q;
};

SplitParts parts(const ConstSplit& op) {
  return {op.p.real_part(), op.p.imag_part(), op.q.real_part(), op.q.imag_part()};
}

// All zeros with this k. Appends to out in ascending xi.
void zeros_at_k(const ConstSplit& op, const SplitParts& sp, int k, std::vector<ZeroWitness>& out, bool& continuum) {
  const cplx qk = op.q(static_cast<double>(k));
  auto R = sp.re_p;
  auto I = sp.im_p;
  const double r0 = R.empty() ? 0.0 : R[0];
  const double i0 = I.empty() ? 0.0 : I[0];
  R = shift_const(R, qk.real());
  I = shift_const(I, qk.imag());
  // cancellation in a constant remainder is exact zero up to rounding
  if (R.size() == 1 && std::abs(R[0]) <= 1e-12 * (std::abs(r0) + std::abs(qk.real()))) R.clear();
  if (I.size() == 1 && std::abs(I[0]) <= 1e-12 * (std::abs(i0) + std::abs(qk.imag()))) I.clear();

  auto accept = [&](double xi) {
    const cplx pv = op.p(xi);
    const double other = R.empty() ? 0.0 : std::abs(realpoly::eval(R, xi));
    const double im = I.empty() ? 0.0 : std::abs(realpoly::eval(I, xi));
    const double scale = 1.0 + std::abs(pv);
    if (std::max(other, im) <= kZeroTol * scale) out.push_back({k, xi, std::abs(pv + qk)});
  };

  if (R.empty() && I.empty()) {
    continuum = true;
    out.push_back({k, 0.0, std::abs(op.p(0.0) + qk)});
    return;
  }
  const auto& base = R.empty() ? I : R;
  for (double xi : realpoly::real_roots(base)) accept(xi);
}

void add_integer_roots(const std::vector<double>& c, std::set<int>& ks) {
  for (double r : realpoly::real_roots(c)) {
    long long n;
    if (near_integer(r, 1e-6 * std::max(1.0, std::abs(r)), n) && std::abs(n) < (1LL << 30))
      ks.insert(static_cast<int>(n));
  }
}

// Candidate k values when the zero set is provably confined to finitely many k.
std::optional<std::set<int>> a_priori_candidates(const SplitParts& sp, std::string& basis) {
  const bool q_const = is_const(sp.re_q) && is_const(sp.im_q);
  if (q_const) {
    basis = "symbol independent of k; zeros repeat for every k, reported at k=0";
    return std::set<int>{0};
  }
  for (int pass = 0; pass < 2; ++pass) {
    const auto& p_part = pass == 0 ? sp.im_p : sp.re_p;
    const auto& q_part = pass == 0 ? sp.im_q : sp.re_q;
    const char* name = pass == 0 ? "Im" : "Re";
    if (!is_const(p_part)) continue;
    auto g = shift_const(q_part, const_term(p_part));
    if (g.empty()) continue;  // this part vanishes identically, no information
    std::set<int> ks;
    if (g.size() > 1) add_integer_roots(g, ks);
    basis = std::string(name) + " p constant; k confined to integer roots of " + name + " q(k) + " + name + " p";
    return ks;
  }
  for (int pass = 0; pass < 2; ++pass) {
    const auto& q_part = pass == 0 ? sp.im_q : sp.re_q;
    const auto& p_part = pass == 0 ? sp.im_p : sp.re_p;
    const auto& q_other = pass == 0 ? sp.re_q : sp.im_q;
    const auto& p_other = pass == 0 ? sp.re_p : sp.im_p;
    const char* name = pass == 0 ? "Im" : "Re";
    if (!is_const(q_part) || is_const(p_part) || is_const(q_other)) continue;
    auto g = shift_const(p_part, const_term(q_part));
    std::set<int> ks;
    for (double xi : realpoly::real_roots(g)) {
      add_integer_roots(shift_const(q_other, realpoly::eval(p_other, xi)), ks);
    }
    basis = std::string(name) + " q constant; xi confined to finitely many roots, k to integer roots at each";
    return ks;
  }
  return std::nullopt;
}

ZeroSearch zeros_split(const ConstSplit& op, int k_budget) {
  if (op.p.degree() <= 0 && op.q.degree() <= 0 && op.p.coeff(0) + op.q.coeff(0) == cplx{})
    throw precondition_error("degenerate_operator", "symbol is identically zero");
  ZeroSearch out;
  out.k_budget = k_budget;
  const auto sp = parts(op);

  std::vector<int> ks;
  if (auto cand = a_priori_candidates(sp, out.basis)) {
    out.completeness = Completeness::Exhaustive;
    ks.assign(cand->begin(), cand->end());
  } else {
    out.completeness = Completeness::BudgetLimited;
    out.basis = "no a-priori k bound; searched |k| <= k_budget";
    for (int k = -k_budget; k <= k_budget; ++k) ks.push_back(k);
  }

  std::vector<std::vector<ZeroWitness>> per_k(ks.size());
  std::vector<char> cont(ks.size(), 0);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < ks.size(); ++i) {
    bool c = false;
    zeros_at_k(op, sp, ks[i], per_k[i], c);
    cont[i] = c;
  }
  for (std::size_t i = 0; i < ks.size(); ++i) {
    out.witnesses.insert(out.witnesses.end(), per_k[i].begin(), per_k[i].end());
    out.continuum = out.continuum || cont[i];
  }
  return out;
}

// minimum of f over [lo, hi]: grid then Brent around each sampled local minimum
template <class F>
std::pair<double, double> grid_minimise(F&& f, const std::vector<double>& xs) {
  std::vector<double> v(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) v[i] = f(xs[i]);
  double best_x = xs[0], best = v[0];
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const bool local = (i == 0 || v[i] <= v[i - 1]) && (i + 1 == xs.size() || v[i] <= v[i + 1]);
    if (!local) continue;
    const double a = xs[i == 0 ? 0 : i - 1], b = xs[i + 1 == xs.size() ? i : i + 1];
    double x = xs[i], fx = v[i];
    if (b > a) {
      auto r = boost::math::tools::brent_find_minima(f, a, b, 50);
      if (r.second < fx) {
        x = r.first;
        fx = r.second;
      }
    }
    if (fx < best) {
      best = fx;
      best_x = x;
    }
  }
  return {best_x, best};
}

}  // namespace

std::optional<ZeroWitness> first_order_witness(const FirstOrderT& op) {
  // Re: Re(c1) xi + Re(c2) k = -Im(c3);  Im: Im(c1) xi + Im(c2) k = Re(c3)
  const double a11 = op.c1.real(), a12 = op.c2.real(), h1 = -op.c3.imag();
  const double a21 = op.c1.imag(), a22 = op.c2.imag(), h2 = op.c3.real();
  const double det = a11 * a22 - a12 * a21;
  const OperatorSpec spec{op};
  auto make = [&](int k, double xi) { return ZeroWitness{k, xi, std::abs(symbol_at(spec, k, xi))}; };
  // best xi for a fixed k, least squares in the complex equation c1 xi = -(c2 k - i c3)
  auto xi_for = [&](int k) {
    const cplx rhs = -(op.c2 * static_cast<double>(k) - cplx(0, 1) * op.c3);
    return std::norm(op.c1) > 0 ? (std::conj(op.c1) * rhs).real() / std::norm(op.c1) : 0.0;
  };

  const double scale = std::max({std::abs(a11), std::abs(a12), std::abs(a21), std::abs(a22)});
  if (scale == 0.0) {
    if (op.c3 == cplx{}) return ZeroWitness{0, 0.0, 0.0};
    return std::nullopt;
  }
  if (std::abs(det) > 1e-14 * scale * scale) {
    const double k = (a11 * h2 - a21 * h1) / det;
    long long n;
    if (!near_integer(k, kIntTol, n)) return std::nullopt;
    auto w = make(static_cast<int>(n), xi_for(static_cast<int>(n)));
    if (w.residual > 1e-8 * (1.0 + std::abs(op.c3))) return std::nullopt;
    return w;
  }
  // rank one: pick the dominant row, check the other is consistent
  const bool first = std::hypot(a11, a12) >= std::hypot(a21, a22);
  const double vx = first ? a11 : a21, vk = first ? a12 : a22, h = first ? h1 : h2;
  const double ox = first ? a21 : a11, ok = first ? a22 : a12, oh = first ? h2 : h1;
  const double lam = std::abs(vx) >= std::abs(vk) ? ox / vx : ok / vk;
  if (std::abs(oh - lam * h) > 1e-12 * (1.0 + std::abs(oh) + std::abs(h))) return std::nullopt;
  if (vx != 0.0) {
    // xi = (h - vk k) / vx for every k
    if (vk == 0.0) return make(0, h / vx);
    return make(1, xi_for(1));
  }
  long long n;
  if (!near_integer(h / vk, kIntTol, n)) return std::nullopt;
  return make(static_cast<int>(n), 0.0);
}

ZeroSearch find_zeros(const OperatorSpec& op, int k_budget) {
  if (k_budget < 0) throw precondition_error("invalid_budget", "k_budget must be nonnegative");
  if (auto* f = std::get_if<FirstOrderT>(&op)) {
    auto z = zeros_first_order(*f);
    z.k_budget = k_budget;
    return z;
  }
  if (auto* s = std::get_if<ConstSplit>(&op)) return zeros_split(*s, k_budget);
  const auto& tube = std::get<TubeT>(op);
  auto f = constant_tube_form(tube);
  if (!f)
    throw precondition_error("symbol_not_pointwise",
                             "zero search needs a pointwise symbol; variable-coefficient tube operators are "
                             "handled by the classifier and solver");
  auto z = zeros_first_order(*f);
  z.k_budget = k_budget;
  return z;
}

std::vector<ZeroWitness> zeros_in_box(const OperatorSpec& op, int k_lo, int k_hi, double xi_max) {
  ConstSplit split;
  if (auto* s = std::get_if<ConstSplit>(&op)) {
    split = *s;
  } else if (auto* f = std::get_if<FirstOrderT>(&op)) {
    split = to_const_split(*f);
  } else {
    auto f2 = constant_tube_form(std::get<TubeT>(op));
    if (!f2) throw precondition_error("symbol_not_pointwise", "zero search needs a pointwise symbol");
    split = to_const_split(*f2);
  }
  if (split.p.degree() <= 0 && split.q.degree() <= 0 && split.p.coeff(0) + split.q.coeff(0) == cplx{})
    throw precondition_error("degenerate_operator", "symbol is identically zero");
  const auto sp = parts(split);
  std::vector<ZeroWitness> out;
  for (int k = k_lo; k <= k_hi; ++k) {
    std::vector<ZeroWitness> here;
    bool cont = false;
    zeros_at_k(split, sp, k, here, cont);
    for (const auto& w : here)
      if (std::abs(w.xi) <= xi_max) out.push_back(w);
  }
  return out;
}

LowerBoundResult certify_lower_bound(const ConstSplit& op, double R, int k_budget, int xi_samples) {
  const int N = op.p.degree();
  if (N <= 1) throw precondition_error("degree_too_low", "growth bound applies only for deg p > 1");
  if (!(R > 0) || k_budget < 0 || xi_samples < 2)
    throw precondition_error("invalid_argument", "need R > 0, k_budget >= 0, xi_samples >= 2");

  const double dq = std::max(0, op.q.degree());
  const double R_max = R * std::max(1e3, 4.0 * std::pow(k_budget + 1.0, std::max(1.0, dq / N)));
  std::vector<double> grid(xi_samples);
  const double lr = std::log(R), span = std::log(R_max) - lr;
  for (int i = 0; i < xi_samples; ++i) grid[i] = std::exp(lr + span * i / (xi_samples - 1));
  grid.front() = R;
  grid.back() = R_max;

  const int nk = 2 * k_budget + 1;
  std::vector<LowerBoundSample> best(nk);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < nk; ++i) {
    const int k = i - k_budget;
    const cplx qk = op.q(static_cast<double>(k));
    LowerBoundSample b{k, R, std::numeric_limits<double>::infinity()};
    for (double sgn : {1.0, -1.0}) {
      auto ratio = [&](double x) { return std::abs(op.p(sgn * x) + qk) / std::pow(x, N - 1); };
      auto [x, v] = grid_minimise(ratio, grid);
      if (v < b.ratio) b = {k, sgn * x, v};
    }
    best[i] = b;
  }

  LowerBoundSample arg = best[0];
  for (const auto& b : best)
    if (b.ratio < arg.ratio) arg = b;

  auto min_over = [&](int lo, int hi) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& b : best)
      if (std::abs(b.k) >= lo && std::abs(b.k) <= hi) m = std::min(m, b.ratio);
    return m;
  };
  const double inner = min_over(0, k_budget / 4);
  const double outer = min_over(std::max(1, k_budget / 2), k_budget);

  LowerBoundResult res;
  if (arg.ratio <= 0.0 || (k_budget >= 2 && outer < 0.25 * inner)) {
    LowerBoundRefutation ref{{}, inner, outer};
    for (int a = 0; a <= k_budget; ++a) {
      const auto& p = best[a + k_budget];
      const auto& m = best[k_budget - a];
      ref.path.push_back(p.ratio <= m.ratio ? p : m);
    }
    res.refutation = std::move(ref);
  } else {
    res.certificate = LowerBoundCertificate{arg.ratio, R, R_max, k_budget, arg.ratio, xi_samples, arg};
  }
  return res;
}

double uniform_gap(const OperatorSpec& op, int k_budget, double xi_range) {
  if (!(xi_range > 0)) throw precondition_error("invalid_argument", "xi_range must be positive");
  const int n = 4001;
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) grid[i] = -xi_range + 2.0 * xi_range * i / (n - 1);
  const int nk = 2 * k_budget + 1;
  std::vector<double> mins(nk);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < nk; ++i) {
    const int k = i - k_budget;
    mins[i] = grid_minimise([&](double xi) { return std::abs(symbol_at(op, k, xi)); }, grid).second;
  }
  return *std::min_element(mins.begin(), mins.end());
}

}  // namespace cylhypo
