#include "cylhypo/realroots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cylhypo::realpoly {

double eval(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::vector<double> derivative(const std::vector<double>& c) {
  if (c.size() <= 1) return {};
  std::vector<double> d(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<double>(i);
  return d;
}

std::vector<double> trimmed(std::vector<double> c) {
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  return c;
}

namespace {

double max_abs(const std::vector<double>& c) {
  double m = 0.0;
  for (double v : c) m = std::max(m, std::abs(v));
  return m;
}

// Remainder of a / b. Tiny coefficients relative to the dividend are
// treated as cancellation noise and dropped.
std::vector<double> remainder(std::vector<double> a, const std::vector<double>& b) {
  const double scale = std::max(max_abs(a), max_abs(b));
  const std::size_t db = b.size() - 1;
  while (a.size() > db && !a.empty()) {
    const double f = a.back() / b.back();
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i) a[shift + i] -= f * b[i];
    a.pop_back();
  }
  for (double& v : a)
    if (std::abs(v) <= 1e-12 * scale) v = 0.0;
  return trimmed(std::move(a));
}

int sign_of(double v) { return (v > 0) - (v < 0); }

int variations(const std::vector<std::vector<double>>& seq, double x) {
  int count = 0, last = 0;
  for (const auto& p : seq) {
    int s = sign_of(eval(p, x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

double newton_polish(const std::vector<double>& c, const std::vector<double>& dc, double x, double lo, double hi) {
  for (int it = 0; it < 8; ++it) {
    const double d = eval(dc, x);
    if (d == 0.0) break;
    const double nx = x - eval(c, x) / d;
    if (!(nx >= lo && nx <= hi)) break;
    if (std::abs(nx - x) <= 4 * std::numeric_limits<double>::epsilon() * std::abs(x)) {
      x = nx;
      break;
    }
    x = nx;
  }
  return x;
}

void isolate(const std::vector<std::vector<double>>& seq, double a, double b, int va, int vb,
             std::vector<std::pair<double, double>>& out, int depth) {
  const int n = va - vb;
  if (n <= 0) return;
  const double width = b - a;
  if (n == 1 || depth > 200 || width <= 1e-15 * std::max(1.0, std::max(std::abs(a), std::abs(b)))) {
    out.emplace_back(a, b);
    return;
  }
  double m = a + 0.5 * width;
  int vm = variations(seq, m);
  isolate(seq, a, m, va, vm, out, depth + 1);
  isolate(seq, m, b, vm, vb, out, depth + 1);
}

}  // namespace

std::vector<std::vector<double>> sturm_sequence(const std::vector<double>& c) {
  std::vector<std::vector<double>> seq;
  auto p0 = trimmed(c);
  if (p0.empty()) return seq;
  seq.push_back(p0);
  auto p1 = trimmed(derivative(p0));
  if (p1.empty()) return seq;
  seq.push_back(p1);
  while (seq.back().size() > 1) {
    auto r = remainder(seq[seq.size() - 2], seq.back());
    if (r.empty()) break;
    for (double& v : r) v = -v;
    seq.push_back(std::move(r));
  }
  return seq;
}

int sturm_count(const std::vector<std::vector<double>>& seq, double a, double b) {
  return variations(seq, a) - variations(seq, b);
}

int sturm_count(const std::vector<double>& c, double a, double b) { return sturm_count(sturm_sequence(c), a, b); }

double root_bound(const std::vector<double>& c) {
  auto t = trimmed(c);
  if (t.size() <= 1) return 0.0;
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) m = std::max(m, std::abs(t[i] / t.back()));
  return 1.0 + m;
}

std::vector<double> real_roots(const std::vector<double>& c) {
  auto p = trimmed(c);
  std::vector<double> roots;
  if (p.size() <= 1) return roots;
  if (p.size() == 2) {
    roots.push_back(-p[0] / p[1]);
    return roots;
  }
  const auto seq = sturm_sequence(p);
  // strictly outside the bound so no root sits on an endpoint
  const double bound = root_bound(p) * (1.0 + 1e-9) + 1e-300;
  std::vector<std::pair<double, double>> boxes;
  isolate(seq, -bound, bound, variations(seq, -bound), variations(seq, bound), boxes, 0);

  const auto dp = derivative(p);
  for (auto [a, b] : boxes) {
    double fa = eval(p, a), fb = eval(p, b);
    double x;
    if (fa == 0.0) {
      x = a;
    } else if (fb == 0.0) {
      x = b;
    } else if (sign_of(fa) != sign_of(fb)) {
      // bracketed simple root: bisect to full precision
      for (int it = 0; it < 200 && b - a > 0; ++it) {
        double m = a + 0.5 * (b - a);
        if (m <= a || m >= b) break;
        double fm = eval(p, m);
        if (fm == 0.0) {
          a = b = m;
          break;
        }
        if (sign_of(fm) == sign_of(fa)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      x = a + 0.5 * (b - a);
    } else {
      // even multiplicity: count-bisection until the box is tiny
      for (int it = 0; it < 200; ++it) {
        double m = a + 0.5 * (b - a);
        if (m <= a || m >= b) break;
        if (sturm_count(seq, a, m) > 0)
          b = m;
        else
          a = m;
      }
      x = a + 0.5 * (b - a);
    }
    roots.push_back(newton_polish(p, dp, x, a - 1e-12 * (1 + std::abs(a)), b + 1e-12 * (1 + std::abs(b))));
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace cylhypo::realpoly
