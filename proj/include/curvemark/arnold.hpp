#pragma once

#include "curvemark/image.hpp"

#include <cstdint>
#include <utility>

namespace curvemark {

/// Generalized cat map [[1, a], [b, ab + 1]] mod n applied `iterations` times.
/// Coordinates are (row, column).
struct ArnoldParams
{
    std::int64_t a = 1;
    std::int64_t b = 1;
    int n = 0;
    std::int64_t iterations = 20;
};

std::pair<int, int> arnold_step(int x, int y, const ArnoldParams& p);

/// Smallest k >= 1 with M^k == I (mod n).
std::int64_t arnold_period(int n, std::int64_t a, std::int64_t b);

/// Moves the pixel at (x, y) to M^iterations * (x, y) mod n.
GrayImage arnold_map(const GrayImage& img, const ArnoldParams& p);

/// Inverse of arnold_map; implemented as arnold_map with period - iterations.
GrayImage arnold_unmap(const GrayImage& img, const ArnoldParams& p);

} // namespace curvemark
