#include <cmath>
#include <sstream>

#include "cylhypo/error.hpp"
#include "cylhypo/spectral.hpp"

namespace cylhypo {

namespace {
bool pow2(int n) { return n >= 2 && (n & (n - 1)) == 0; }
}  // namespace

double CylinderGrid::dt() const { return 2.0 * M_PI / M; }
double CylinderGrid::dx() const { return 2.0 * X / N; }
double CylinderGrid::dxi() const { return M_PI / X; }
double CylinderGrid::t(int j) const { return j * dt(); }
double CylinderGrid::x(int i) const { return -X + i * dx(); }
double CylinderGrid::xi(int c) const { return M_PI * (c - N / 2) / X; }
int CylinderGrid::k(int r) const { return r - M / 2; }

void CylinderGrid::validate() const {
  std::ostringstream err;
  if (!pow2(M)) err << "grid.M must be a power of two >= 2 (got " << M << "); ";
  if (!pow2(N)) err << "grid.N must be a power of two >= 2 (got " << N << "); ";
  if (!(X > 0) || !std::isfinite(X)) err << "grid.X must be positive (got " << X << "); ";
  if (!err.str().empty()) throw Error(ErrorKind::Usage, "invalid_grid", err.str());
}

GridFunction GridFunction::sample(const CylinderGrid& g, const std::function<cplx(double, double)>& f) {
  GridFunction out(g);
  for (int j = 0; j < g.M; ++j)
    for (int i = 0; i < g.N; ++i) out(j, i) = f(g.t(j), g.x(i));
  return out;
}

cplx MixedSpectrum::at(int k, int c) const {
  const int r = k + grid.M / 2;
  if (r < 0 || r >= grid.M || c < 0 || c >= grid.N) return {};
  return (*this)(r, c);
}

}  // namespace cylhypo
