#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace curvemark {

/// Pearson correlation of two equally sized sequences (2D inputs are
/// flattened). Throws ArgumentError on size mismatch or zero variance.
double corr2(std::span<const double> a, std::span<const double> b);

/// As corr2, but an empty optional for zero variance instead of throwing.
std::optional<double> try_corr2(std::span<const double> a, std::span<const double> b);

/// Ternary symbols for watermark bits one and zero.
struct PnPair
{
    std::vector<double> seq_one;
    std::vector<double> seq_zero;
    std::uint64_t seed = 0;
    int length = 0;
};

inline constexpr double kPnCorrelationBound = 0.1;
inline constexpr int kPnRetryCap = 10'000;

/// Draws r ~ U[0, 1) from mt19937_64(seed) (53-bit mantissa from the top
/// bits of each output), maps round(2(r - 0.5)) to {-1, 0, 1} with
/// rounding half away from zero, and redraws both sequences while
/// |corr2| > 0.1 or either sequence is constant.
PnPair gen_pn_pair(std::uint64_t seed, int length);

} // namespace curvemark
