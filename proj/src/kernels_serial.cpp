#include <cmath>
#include <vector>

#include "cylhypo/kernels.hpp"

namespace cylhypo::kernels {

namespace {

std::vector<cplx> twiddles(int n, int sign) {
  std::vector<cplx> w(n);
  for (int j = 0; j < n; ++j) {
    const double ang = 2.0 * M_PI * j / n;
    w[j] = {std::cos(ang), sign * std::sin(ang)};
  }
  return w;
}

void dft_strided(cplx* x, int n, int stride, const std::vector<cplx>& w, std::vector<cplx>& tmp) {
  for (int m = 0; m < n; ++m) {
    cplx acc{};
    long idx = 0;
    for (int j = 0; j < n; ++j) {
      acc += x[static_cast<long>(j) * stride] * w[idx];
      idx += m;
      if (idx >= n) idx -= n;
    }
    tmp[m] = acc;
  }
  for (int m = 0; m < n; ++m) x[static_cast<long>(m) * stride] = tmp[m];
}

}  // namespace

void dft_rows_serial(cplx* data, int rows, int n, int sign) {
  const auto w = twiddles(n, sign);
  std::vector<cplx> tmp(n);
  for (int r = 0; r < rows; ++r) dft_strided(data + static_cast<long>(r) * n, n, 1, w, tmp);
}

void dft_cols_serial(cplx* data, int rows, int n, int sign) {
  const auto w = twiddles(rows, sign);
  std::vector<cplx> tmp(rows);
  for (int c = 0; c < n; ++c) dft_strided(data + c, rows, n, w, tmp);
}

}  // namespace cylhypo::kernels
