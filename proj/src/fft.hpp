#pragma once

#include <complex>

namespace curvemark::detail {

// Unnormalized in-place 2D DFT of a row-major rows x cols array.
// forward: exp(-2 pi i k n / N); inverse: exp(+2 pi i k n / N).
// Safe to call concurrently; plans are cached per (rows, cols, direction).
void fft2_inplace(std::complex<double>* data, int rows, int cols, bool inverse);

} // namespace curvemark::detail
