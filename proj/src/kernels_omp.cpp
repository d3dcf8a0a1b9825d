#include <fftw3.h>

#include <map>
#include <mutex>
#include <vector>

#include "cylhypo/kernels.hpp"

namespace cylhypo::kernels {

namespace {

// FFTW planning is not thread-safe; execution of an existing plan is.
std::mutex plan_mutex;

fftw_plan plan_for(int n, int sign) {
  static std::map<std::pair<int, int>, fftw_plan> cache;
  std::lock_guard lock(plan_mutex);
  auto key = std::make_pair(n, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<cplx> buf(n);
  auto* p = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_plan plan = fftw_plan_dft_1d(n, p, p, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache.emplace(key, plan);
  return plan;
}

}  // namespace

void dft_rows_omp(cplx* data, int rows, int n, int sign) {
  fftw_plan plan = plan_for(n, sign);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < rows; ++r) {
    auto* p = reinterpret_cast<fftw_complex*>(data + static_cast<long>(r) * n);
    fftw_execute_dft(plan, p, p);
  }
}

void dft_cols_omp(cplx* data, int rows, int n, int sign) {
  fftw_plan plan = plan_for(rows, sign);
#pragma omp parallel
  {
    std::vector<cplx> col(rows);
#pragma omp for schedule(static)
    for (int c = 0; c < n; ++c) {
      for (int r = 0; r < rows; ++r) col[r] = data[static_cast<long>(r) * n + c];
      auto* p = reinterpret_cast<fftw_complex*>(col.data());
      fftw_execute_dft(plan, p, p);
      for (int r = 0; r < rows; ++r) data[static_cast<long>(r) * n + c] = col[r];
    }
  }
}

}  // namespace cylhypo::kernels
