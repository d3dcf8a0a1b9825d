#pragma once

#include <complex>

namespace cylhypo::kernels {

using cplx = std::complex<double>;

/// Unnormalised in-place DFT  X_m = sum_j x_j exp(sign * 2 pi i j m / n)
/// applied to every row (contiguous, length n) or every column (stride n)
/// of a row-major rows x n array.
///
/// The serial versions are direct O(n^2) sums with an exact twiddle table;
/// they are the reference the FFTW/OpenMP versions are tested against.
void dft_rows_serial(cplx* data, int rows, int n, int sign);
void dft_cols_serial(cplx* data, int rows, int n, int sign);

void dft_rows_omp(cplx* data, int rows, int n, int sign);
void dft_cols_omp(cplx* data, int rows, int n, int sign);

}  // namespace cylhypo::kernels
