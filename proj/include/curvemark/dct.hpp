#pragma once

#include "curvemark/image.hpp"

#include <utility>
#include <vector>

namespace curvemark {

/// Orthonormal type-II 2D DCT (alpha(0) = sqrt(1/N), alpha(k) = sqrt(2/N)).
Plane dct2(const Plane& m);
Plane idct2(const Plane& c);

/// DCT positions (u, v) with u + v >= threshold, in lexicographic order.
struct HfRegion
{
    int size = 0;
    int threshold = 0;
    std::vector<std::pair<int, int>> indices;

    int count() const { return static_cast<int>(indices.size()); }
};

HfRegion make_hf_region(int size, int threshold);

std::vector<double> extract_hf(const Plane& c, const HfRegion& region);
Plane replace_hf(Plane c, const std::vector<double>& v, const HfRegion& region);

} // namespace curvemark
