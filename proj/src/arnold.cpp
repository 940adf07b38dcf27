#include "curvemark/arnold.hpp"

#include "curvemark/error.hpp"

#include <array>
#include <string>

namespace curvemark {

namespace {

using Mat2 = std::array<std::int64_t, 4>; // row-major 2x2

std::int64_t mod(std::int64_t v, std::int64_t n)
{
    const std::int64_t r = v % n;
    return r < 0 ? r + n : r;
}

Mat2 mul(const Mat2& l, const Mat2& r, std::int64_t n)
{
    return {mod(l[0] * r[0] + l[1] * r[2], n), mod(l[0] * r[1] + l[1] * r[3], n),
            mod(l[2] * r[0] + l[3] * r[2], n), mod(l[2] * r[1] + l[3] * r[3], n)};
}

Mat2 cat_matrix(std::int64_t a, std::int64_t b, std::int64_t n)
{
    return {mod(1, n), mod(a, n), mod(b, n), mod(mod(a, n) * mod(b, n) + 1, n)};
}

Mat2 power(Mat2 base, std::int64_t e, std::int64_t n)
{
    Mat2 acc = {mod(1, n), 0, 0, mod(1, n)};
    while (e > 0) {
        if (e & 1)
            acc = mul(acc, base, n);
        base = mul(base, base, n);
        e >>= 1;
    }
    return acc;
}

void check_params(const ArnoldParams& p)
{
    if (p.n < 2)
        throw ArgumentError("Arnold map needs n >= 2");
    if (p.a < 1 || p.b < 1)
        throw ArgumentError("Arnold control parameters a and b must be >= 1");
    if (p.iterations < 0)
        throw ArgumentError("Arnold iteration count must be non-negative");
}

} // namespace

std::pair<int, int> arnold_step(int x, int y, const ArnoldParams& p)
{
    check_params(p);
    if (x < 0 || y < 0 || x >= p.n || y >= p.n)
        throw ArgumentError("coordinate (" + std::to_string(x) + ", " + std::to_string(y) + ") outside [0, " +
                            std::to_string(p.n) + ")");
    const Mat2 m = cat_matrix(p.a, p.b, p.n);
    return {static_cast<int>(mod(m[0] * x + m[1] * y, p.n)), static_cast<int>(mod(m[2] * x + m[3] * y, p.n))};
}

std::int64_t arnold_period(int n, std::int64_t a, std::int64_t b)
{
    check_params({a, b, n, 0});
    const Mat2 m = cat_matrix(a, b, n);
    const Mat2 identity = {mod(1, n), 0, 0, mod(1, n)};
    const std::int64_t cap = 3 * static_cast<std::int64_t>(n) * n;
    Mat2 acc = m;
    for (std::int64_t k = 1; k <= cap; ++k) {
        if (acc == identity)
            return k;
        acc = mul(acc, m, n);
    }
    throw Error("Arnold period search exceeded 3n^2 iterations for n=" + std::to_string(n));
}

GrayImage arnold_map(const GrayImage& img, const ArnoldParams& p)
{
    check_params(p);
    if (img.side() != p.n)
        throw ArgumentError("image side " + std::to_string(img.side()) + " does not match Arnold n=" +
                            std::to_string(p.n));
    if (p.iterations == 0)
        return img;
    // k applications of the map equal one application of M^k.
    const Mat2 m = power(cat_matrix(p.a, p.b, p.n), p.iterations, p.n);
    const Plane& src = img.pixels();
    Plane dst(p.n, p.n);
    for (std::int64_t x = 0; x < p.n; ++x) {
        for (std::int64_t y = 0; y < p.n; ++y) {
            const auto nx = mod(m[0] * x + m[1] * y, p.n);
            const auto ny = mod(m[2] * x + m[3] * y, p.n);
            dst(nx, ny) = src(x, y);
        }
    }
    return GrayImage(std::move(dst));
}

GrayImage arnold_unmap(const GrayImage& img, const ArnoldParams& p)
{
    check_params(p);
    const std::int64_t period = arnold_period(p.n, p.a, p.b);
    if (p.iterations >= period)
        throw ArgumentError("Arnold iterations (" + std::to_string(p.iterations) + ") must be below the period (" +
                            std::to_string(period) + ")");
    ArnoldParams inverse = p;
    inverse.iterations = p.iterations == 0 ? 0 : period - p.iterations;
    return arnold_map(img, inverse);
}

} // namespace curvemark
