#include "curvemark/dct.hpp"

#include "curvemark/error.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

namespace curvemark {

namespace {

// basis(u, x) = alpha(u) cos((2x + 1) u pi / 2N)
const Plane& dct_basis(int n)
{
    static std::mutex mutex;
    static std::map<int, Plane> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end())
        return it->second;
    Plane basis(n, n);
    for (int u = 0; u < n; ++u) {
        const double alpha = u == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
        for (int x = 0; x < n; ++x)
            basis(u, x) = alpha * std::cos((2.0 * x + 1.0) * u * std::numbers::pi / (2.0 * n));
    }
    return cache.emplace(n, std::move(basis)).first->second;
}

void check_square(const Plane& m, const char* what)
{
    if (m.rows() != m.cols() || m.size() == 0)
        throw ArgumentError(std::string(what) + " needs a non-empty square matrix, got " + std::to_string(m.rows()) +
                            "x" + std::to_string(m.cols()));
}

void check_region(const Plane& c, const HfRegion& region)
{
    if (c.rows() != region.size || c.cols() != region.size)
        throw ArgumentError("matrix is " + std::to_string(c.rows()) + "x" + std::to_string(c.cols()) +
                            " but the HF region is defined for size " + std::to_string(region.size));
}

} // namespace

Plane dct2(const Plane& m)
{
    check_square(m, "dct2");
    const Plane& basis = dct_basis(static_cast<int>(m.rows()));
    return basis * m * basis.transpose();
}

Plane idct2(const Plane& c)
{
    check_square(c, "idct2");
    const Plane& basis = dct_basis(static_cast<int>(c.rows()));
    return basis.transpose() * c * basis;
}

HfRegion make_hf_region(int size, int threshold)
{
    if (size <= 0)
        throw ArgumentError("HF region size must be positive");
    HfRegion region;
    region.size = size;
    region.threshold = threshold;
    for (int u = 0; u < size; ++u)
        for (int v = 0; v < size; ++v)
            if (u + v >= threshold)
                region.indices.emplace_back(u, v);
    if (region.indices.empty())
        throw ArgumentError("HF threshold " + std::to_string(threshold) + " selects no coefficients of a " +
                            std::to_string(size) + "x" + std::to_string(size) + " matrix");
    return region;
}

std::vector<double> extract_hf(const Plane& c, const HfRegion& region)
{
    check_region(c, region);
    std::vector<double> v;
    v.reserve(region.indices.size());
    for (const auto& [u, w] : region.indices)
        v.push_back(c(u, w));
    return v;
}

Plane replace_hf(Plane c, const std::vector<double>& v, const HfRegion& region)
{
    check_region(c, region);
    if (v.size() != region.indices.size())
        throw ArgumentError("HF vector has " + std::to_string(v.size()) + " values, region needs " +
                            std::to_string(region.indices.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
        c(region.indices[i].first, region.indices[i].second) = v[i];
    return c;
}

} // namespace curvemark
