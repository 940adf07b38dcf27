#pragma once

#include "curvemark/codec.hpp"
#include "curvemark/image.hpp"

namespace curvemark {

/// 10 log10(max(f^2) / MSE(f, fw)) with the peak taken over the reference f.
/// Identical images give +infinity.
double psnr(const GrayImage& reference, const GrayImage& distorted);

/// Normalized correlation under the {0,1} -> {-1,+1} mapping; equals 1 - 2 * ber.
double nc(const Watermark& w, const Watermark& w2);

/// Fraction of differing bits.
double ber(const Watermark& w, const Watermark& w2);

} // namespace curvemark
