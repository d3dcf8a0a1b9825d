#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>

#include "cylhypo/error.hpp"
#include "cylhypo/spectral.hpp"

namespace cylhypo {

namespace {

struct LineFit {
  double a = 0.0;     // intercept (log C)
  double rate = 0.0;  // minus the slope
  double rms = std::numeric_limits<double>::infinity();
};

LineFit fit_at(const std::vector<double>& x, const std::vector<double>& y, double order) {
  const std::size_t n = x.size();
  double sz = 0, sy = 0, szz = 0, szy = 0;
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = std::pow(x[i], 1.0 / order);
    sz += z[i];
    sy += y[i];
    szz += z[i] * z[i];
    szy += z[i] * y[i];
  }
  const double den = n * szz - sz * sz;
  LineFit f;
  if (!(den > 0)) return f;
  const double slope = (n * szy - sz * sy) / den;
  f.a = (sy - slope * sz) / n;
  f.rate = -slope;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.a + slope * z[i]);
    ss += r * r;
  }
  f.rms = std::sqrt(ss / n);
  return f;
}

}  // namespace

std::string to_string(Axis a) { return a == Axis::K ? "k" : "xi"; }

DecayFit fit_decay_samples(const std::vector<double>& index, const std::vector<double>& magnitude, Axis axis) {
  if (index.size() != magnitude.size()) throw precondition_error("size_mismatch", "index/magnitude size mismatch");
  if (index.size() < 6) throw precondition_error("fit_window_too_small", "decay fit needs at least 6 points");
  std::vector<double> x(index.size()), y(index.size());
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (!(magnitude[i] > 0)) throw precondition_error("nonpositive_magnitude", "decay fit needs positive magnitudes");
    x[i] = std::abs(index[i]);
    y[i] = std::log(magnitude[i]);
  }
  double best_order = kOrderMin;
  LineFit best;
  const int steps = static_cast<int>(std::lround((kOrderMax - kOrderMin) / 0.05));
  for (int s = 0; s <= steps; ++s) {
    const double o = kOrderMin + 0.05 * s;
    auto f = fit_at(x, y, o);
    if (f.rms < best.rms) {
      best = f;
      best_order = o;
    }
  }
  // refine between the neighbouring grid orders
  const double lo = std::max(kOrderMin, best_order - 0.05), hi = std::min(kOrderMax, best_order + 0.05);
  auto r = boost::math::tools::brent_find_minima([&](double o) { return fit_at(x, y, o).rms; }, lo, hi, 40);
  if (r.second < best.rms) {
    best = fit_at(x, y, r.first);
    best_order = r.first;
  }
  DecayFit out;
  out.axis = axis;
  out.C = std::exp(best.a);
  out.rate = best.rate;
  out.order = best_order;
  out.rms_residual = best.rms;
  out.points = static_cast<int>(x.size());
  return out;
}

DecayFit fit_decay(const MixedSpectrum& F, Axis axis, const FitWindow& window) {
  const auto& g = F.grid;
  const int len = axis == Axis::K ? g.M : g.N;
  std::vector<double> env(len, 0.0);
  for (int r = 0; r < g.M; ++r)
    for (int c = 0; c < g.N; ++c) {
      double& e = env[axis == Axis::K ? r : c];
      e = std::max(e, std::abs(F(r, c)));
    }
  const double smax = *std::max_element(env.begin(), env.end());
  if (!(smax > 0)) throw precondition_error("zero_spectrum", "spectrum vanishes on the fit window");
  const double cutoff = (1.0 - window.tail_fraction) * (len / 2);
  if (window.tail_max) {
    double run_pos = 0.0, run_neg = 0.0;
    for (int d = len / 2; d >= 0; --d) {
      if (d > cutoff) continue;
      const int ip = len / 2 + d, in = len / 2 - d;
      if (ip < len) env[ip] = run_pos = std::max(run_pos, env[ip]);
      if (in >= 0 && d > 0) env[in] = run_neg = std::max(run_neg, env[in]);
    }
  }
  std::vector<double> idx, mag;
  for (int i = 0; i < len; ++i) {
    const int n = i - len / 2;
    if (std::abs(n) < window.min_index || std::abs(n) > cutoff) continue;
    if (env[i] < window.floor_rel * smax || env[i] <= 0) continue;
    idx.push_back(axis == Axis::K ? static_cast<double>(n) : g.xi(i));
    mag.push_back(env[i]);
  }
  if (idx.size() < 6) throw precondition_error("fit_window_too_small", "fewer than 6 usable points on the " + to_string(axis) + " axis");
  return fit_decay_samples(idx, mag, axis);
}

MembershipReport membership_report(const MixedSpectrum& F, double sigma_claim, double mu_claim,
                                   const FitWindow& window) {
  MembershipReport rep;
  rep.sigma_claim = sigma_claim;
  rep.mu_claim = mu_claim;
  const auto& g = F.grid;
  std::vector<double> ek(g.M, 0.0), ex(g.N, 0.0);
  for (int r = 0; r < g.M; ++r)
    for (int c = 0; c < g.N; ++c) {
      const double a = std::abs(F(r, c));
      ek[r] = std::max(ek[r], a);
      ex[c] = std::max(ex[c], a);
    }
  for (int r = 0; r < g.M; ++r) rep.k_profile.emplace_back(g.k(r), ek[r]);
  for (int c = 0; c < g.N; ++c) rep.xi_profile.emplace_back(g.xi(c), ex[c]);

  auto judge = [&](Axis axis, double claim, std::optional<DecayFit>& fit, std::string& note) {
    try {
      fit = fit_decay(F, axis, window);
    } catch (const Error& e) {
      if (e.code() == "zero_spectrum") {
        note = "zero spectrum";
        return true;
      }
      // too few bins above the floor: the data is band-limited on this axis
      note = "degenerate fit (" + std::string(e.what()) + "); band-limited along this axis";
      return true;
    }
    if (!fit->decaying()) {
      note = "no decay";
      return false;
    }
    if (fit->rms_residual >= kRmsLimit) {
      note = "rms residual too large for the decay model";
      return false;
    }
    if (fit->order > claim + kOrderSlack) {
      note = "fitted order exceeds claim";
      return false;
    }
    note = "fitted order within claim";
    return true;
  };
  rep.k_consistent = judge(Axis::K, sigma_claim, rep.k_fit, rep.k_note);
  rep.xi_consistent = judge(Axis::Xi, mu_claim, rep.xi_fit, rep.xi_note);
  rep.consistent = rep.k_consistent && rep.xi_consistent;
  return rep;
}

MembershipReport membership_report(const GridFunction& f, double sigma_claim, double mu_claim,
                                   const FitWindow& window) {
  auto rep = membership_report(forward_mixed(f), sigma_claim, mu_claim, window);
  const auto& g = f.grid;
  for (int j = 0; j < g.M; ++j)
    for (int i = 0; i < g.N; ++i)
      if (std::abs(g.x(i)) > g.X - 1.0) rep.edge_max = std::max(rep.edge_max, std::abs(f(j, i)));
  rep.truncation_warning = rep.edge_max >= 1e-12;
  // samples that do not decay inside the window say nothing about membership
  if (rep.truncation_warning) rep.consistent = false;
  return rep;
}

}  // namespace cylhypo
