#include "cylhypo/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "cylhypo/error.hpp"

namespace cylhypo {

namespace {

constexpr MuRange kMuHalf{0.5, true};
constexpr MuRange kMuOne{1.0, true};
constexpr MuRange kMuAboveOne{1.0, false};

// Among the witnesses prefer the smallest nonzero |k| (positive first), else k = 0.
std::optional<ZeroWitness> preferred(const std::vector<ZeroWitness>& ws) {
  const ZeroWitness* best = nullptr;
  auto key = [](const ZeroWitness& w) {
    int k = std::abs(w.k);
    return std::make_tuple(k == 0 ? 1 : 0, k, w.k < 0 ? 1 : 0, std::abs(w.xi));
  };
  for (const auto& w : ws)
    if (!best || key(w) < key(*best)) best = &w;
  if (!best) return std::nullopt;
  return *best;
}

Classification first_order_common(const FirstOrderT& form, Classification c) {
  if (c.verdict == Verdict::NotGH) {
    c.witness = first_order_witness(form);
    if (!c.witness) c.notes.push_back("boundary case: criterion value is an integer only within tolerance");
  }
  return c;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::GH: return "GH";
    case Verdict::NotGH: return "NotGH";
    default: return "Undecided";
  }
}

std::string to_string(Notion n) { return n == Notion::S_sigma_mu ? "S_sigma_mu" : "F_mu"; }

std::string to_string(SignPattern s) {
  switch (s) {
    case SignPattern::Nonnegative: return "nonnegative";
    case SignPattern::Nonpositive: return "nonpositive";
    case SignPattern::ChangesSign: return "changes_sign";
    default: return "identically_zero";
  }
}

std::string MuRange::text() const {
  std::ostringstream os;
  os << (lo_closed ? "[" : "(");
  if (lo == 0.5)
    os << "1/2";
  else
    os << lo;
  os << ",inf)";
  return os.str();
}

bool is_integer(double v, double tol, bool* boundary) {
  const double d = std::abs(v - std::round(v));
  if (boundary) *boundary = d > 0.0 && d <= tol;
  return d <= tol;
}

Classification classify_first_order_t(double a, double b, cplx c, const Tolerances& tol) {
  Classification out;
  out.mu_validity = kMuHalf;
  CriterionTrace tr;
  if (b != 0.0) {
    const double v = (a / b) * c.real() + c.imag();
    tr.condition = "(a/b) Re(c) + Im(c) not an integer";
    tr.values = {{"a", a}, {"b", b}, {"re_c", c.real()}, {"im_c", c.imag()}, {"value", v}};
    tr.holds = !is_integer(v, tol.int_tol, &tr.boundary_case);
    out.theorem = "first-order constant coefficients, d_t + (a+ib) d_x + c, case b != 0";
  } else {
    bool boundary = false;
    const bool im_int = is_integer(c.imag(), tol.int_tol, &boundary);
    tr.condition = "Re(c) != 0, or a = Re(c) = 0 and Im(c) not an integer";
    tr.values = {{"a", a}, {"b", b}, {"re_c", c.real()}, {"im_c", c.imag()}};
    tr.holds = c.real() != 0.0 || (a == 0.0 && !im_int);
    tr.boundary_case = c.real() == 0.0 && a == 0.0 && boundary;
    out.theorem = "first-order constant coefficients, d_t + (a+ib) d_x + c, case b = 0";
  }
  out.verdict = tr.holds ? Verdict::GH : Verdict::NotGH;
  if (tr.boundary_case) out.notes.push_back("boundary case: value within int_tol of an integer");
  out.trace.push_back(std::move(tr));
  return first_order_common(first_order_t_form(a, b, c), std::move(out));
}

Classification classify_first_order_x(double a, double b, cplx c, const Tolerances& tol) {
  Classification out;
  out.mu_validity = kMuHalf;
  CriterionTrace tr;
  if (b != 0.0) {
    const double v = c.real() / b;
    tr.condition = "Re(c)/b not an integer";
    tr.values = {{"a", a}, {"b", b}, {"re_c", c.real()}, {"im_c", c.imag()}, {"value", v}};
    tr.holds = !is_integer(v, tol.int_tol, &tr.boundary_case);
    out.theorem = "first-order constant coefficients, d_x + (a+ib) d_t + c, case b != 0";
  } else {
    tr.condition = "Re(c) != 0";
    tr.values = {{"a", a}, {"b", b}, {"re_c", c.real()}, {"im_c", c.imag()}};
    tr.holds = c.real() != 0.0;
    out.theorem = "first-order constant coefficients, d_x + (a+ib) d_t + c, case b = 0";
  }
  out.verdict = tr.holds ? Verdict::GH : Verdict::NotGH;
  if (tr.boundary_case) out.notes.push_back("boundary case: value within int_tol of an integer");
  out.trace.push_back(std::move(tr));
  return first_order_common(first_order_x_form(a, b, c), std::move(out));
}

Classification classify_const_deg_le1(const ConstSplit& op, const Budgets& budgets) {
  if (op.p.degree() > 1) throw precondition_error("degree_too_high", "classify_const_deg_le1 needs deg p <= 1");
  Classification out;
  out.mu_validity = kMuHalf;
  out.theorem = "constant coefficients with deg p <= 1: GH iff the symbol has no zero on Z x R";
  auto z = find_zeros(OperatorSpec{op}, budgets.k_budget);
  if (!z.empty()) {
    out.verdict = Verdict::NotGH;
    out.witness = preferred(z.witnesses);
    out.theorem = "necessity: a zero of the symbol on Z x R gives a non-regular solution of Pu = 0";
  } else if (z.exhaustive()) {
    out.verdict = Verdict::GH;
    out.gap = uniform_gap(OperatorSpec{op}, budgets.k_budget, 10.0);
  } else {
    out.verdict = Verdict::Undecided;
    out.notes.push_back("no zero for |k| <= k_budget, but the search is budget-limited");
  }
  out.zero_search = std::move(z);
  return out;
}

Classification classify_const_general(const ConstSplit& op, const Budgets& budgets) {
  if (op.p.degree() <= 1) throw precondition_error("degree_too_low", "classify_const_general needs deg p > 1");
  Classification out;
  auto z = find_zeros(OperatorSpec{op}, budgets.k_budget);
  if (!z.empty()) {
    out.verdict = Verdict::NotGH;
    out.mu_validity = kMuHalf;
    out.witness = preferred(z.witnesses);
    out.theorem = "necessity: a zero of the symbol on Z x R gives a non-regular solution of Pu = 0";
    out.zero_search = std::move(z);
    return out;
  }
  auto lb = certify_lower_bound(op, budgets.R, budgets.k_budget, budgets.xi_samples);
  out.theorem = "constant coefficients with deg p = N > 1: no zeros and |p(xi)+q(k)| >= C|xi|^{N-1}";
  if (lb.certified() && z.exhaustive()) {
    out.verdict = Verdict::GH;
    out.mu_validity = kMuOne;
    out.notes.push_back("growth bound is a sampled certificate");
  } else {
    out.verdict = Verdict::Undecided;
    out.mu_validity = kMuOne;
    if (!lb.certified()) out.notes.push_back("growth bound refuted on samples: ratio tends to 0 along the reported path");
    if (!z.exhaustive()) out.notes.push_back("zero search is budget-limited");
  }
  out.zero_search = std::move(z);
  out.lower_bound = std::move(lb);
  return out;
}

SignReport sign_change(const TrigPolynomial& b, double sign_tol) {
  SignReport rep;
  if (b.is_zero()) return rep;
  const int n = std::max(256, 16 * b.max_frequency() + 32);
  const double h = 2 * M_PI / n;
  auto f = [&](double t) { return b(t).real(); };
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = f(i * h);
  const auto lo = std::min_element(v.begin(), v.end()) - v.begin();
  const auto hi = std::max_element(v.begin(), v.end()) - v.begin();
  rep.min = v[lo];
  rep.t_min = lo * h;
  rep.max = v[hi];
  rep.t_max = hi * h;
  const double scale = std::max(std::abs(rep.min), std::abs(rep.max));
  const double tol = sign_tol * scale;
  // local refinement of the extrema
  auto rmin = boost::math::tools::brent_find_minima(f, (lo - 1) * h, (lo + 1) * h, 50);
  if (rmin.second < rep.min) {
    rep.min = rmin.second;
    rep.t_min = std::fmod(rmin.first + 2 * M_PI, 2 * M_PI);
  }
  auto rmax = boost::math::tools::brent_find_minima([&](double t) { return -f(t); }, (hi - 1) * h, (hi + 1) * h, 50);
  if (-rmax.second > rep.max) {
    rep.max = -rmax.second;
    rep.t_max = std::fmod(rmax.first + 2 * M_PI, 2 * M_PI);
  }
  if (rep.min < -tol && rep.max > tol)
    rep.pattern = SignPattern::ChangesSign;
  else if (rep.min >= -tol)
    rep.pattern = SignPattern::Nonnegative;
  else
    rep.pattern = SignPattern::Nonpositive;
  return rep;
}

Classification classify_tube(const TubeT& op, const Budgets& budgets, const Tolerances& tol) {
  (void)budgets;
  if (!op.a.is_real_valued() || !op.b.is_real_valued())
    throw precondition_error("nonreal_coefficient", "tube operator requires real-valued a(t) and b(t)");
  const double a0 = average(op.a).real(), b0 = average(op.b).real();
  const cplx q0 = average(op.q);

  if (op.a.is_constant() && op.b.is_constant() && op.q.is_constant()) {
    auto c = classify_first_order_t(a0, b0, q0, tol);
    c.notion = Notion::F_mu;
    c.theorem = "constant-coefficient tube operator: F_mu-GH iff S_sigma_mu-GH; " + c.theorem;
    return c;
  }

  Classification out;
  out.notion = Notion::F_mu;
  out.sigma_validity = "any Gevrey order sigma (loss of t-regularity allowed)";
  if (op.b.is_zero()) {
    bool boundary = false;
    const bool im_int = is_integer(q0.imag(), tol.int_tol, &boundary);
    CriterionTrace tr{"Re(q0) != 0, or a0 = Re(q0) = 0 and Im(q0) not an integer",
                      {{"a0", a0}, {"re_q0", q0.real()}, {"im_q0", q0.imag()}},
                      q0.real() != 0.0 || (a0 == 0.0 && !im_int),
                      q0.real() == 0.0 && a0 == 0.0 && boundary};
    out.theorem = "real tube operator d_t + a(t) d_x + q(t): reduction to d_t + a0 d_x + q0";
    out.mu_validity = kMuHalf;
    out.verdict = tr.holds ? Verdict::GH : Verdict::NotGH;
    if (!tr.holds) out.witness = first_order_witness(first_order_t_form(a0, 0.0, q0));
    out.trace.push_back(std::move(tr));
    return out;
  }

  auto tilde = classify_first_order_t(a0, b0, q0, tol);
  CriterionTrace avg_tr = tilde.trace.front();
  avg_tr.condition = "averaged operator d_t + (a0+ib0) d_x + q0 is GH: " + avg_tr.condition;
  out.trace.push_back(avg_tr);
  if (tilde.verdict == Verdict::NotGH) {
    out.verdict = Verdict::NotGH;
    out.mu_validity = kMuHalf;
    out.witness = tilde.witness;
    out.theorem = "tube operator: GH forces the averaged constant operator to be GH";
    return out;
  }
  const auto s = sign_change(op.b, tol.sign_tol);
  CriterionTrace sign_tr{"b does not change sign",
                         {{"min_b", s.min}, {"max_b", s.max}, {"t_min", s.t_min}, {"t_max", s.t_max}},
                         s.pattern != SignPattern::ChangesSign,
                         false};
  out.trace.push_back(sign_tr);
  if (s.pattern == SignPattern::ChangesSign) {
    out.verdict = Verdict::NotGH;
    out.mu_validity = kMuAboveOne;
    out.theorem = "tube operator: b changes sign, so P is not F_mu-GH for mu > 1";
    return out;
  }
  out.verdict = Verdict::GH;
  out.mu_validity = kMuHalf;
  out.theorem = "tube operator with b of constant sign and (a0/b0) Re(q0) + Im(q0) not an integer";
  out.notes.push_back("sufficiency holds for mu >= 1/2; the characterisation is an iff for mu > 1");
  return out;
}

Classification classify(const OperatorSpec& op, const Budgets& budgets, const Tolerances& tol) {
  if (auto* s = std::get_if<ConstSplit>(&op))
    return s->p.degree() <= 1 ? classify_const_deg_le1(*s, budgets) : classify_const_general(*s, budgets);
  if (auto* f = std::get_if<FirstOrderT>(&op)) {
    if (f->c2 != cplx{}) {
      const cplx ab = f->c1 / f->c2;
      return classify_first_order_t(ab.real(), ab.imag(), f->c3 / f->c2, tol);
    }
    if (f->c1 != cplx{}) return classify_first_order_x(0.0, 0.0, f->c3 / f->c1, tol);
    return classify_const_deg_le1(to_const_split(*f), budgets);
  }
  return classify_tube(std::get<TubeT>(op), budgets, tol);
}

}  // namespace cylhypo
