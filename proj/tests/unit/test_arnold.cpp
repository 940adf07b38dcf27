#include "curvemark/arnold.hpp"
#include "curvemark/error.hpp"

#include <gtest/gtest.h>

#include <array>
#include <random>

using namespace curvemark;

namespace {

using Mat = std::array<std::int64_t, 4>;

Mat mul(const Mat& x, const Mat& y, std::int64_t n)
{
    return {(x[0] * y[0] + x[1] * y[2]) % n, (x[0] * y[1] + x[1] * y[3]) % n, (x[2] * y[0] + x[3] * y[2]) % n,
            (x[2] * y[1] + x[3] * y[3]) % n};
}

// Brute force: multiply the matrix until it returns to the identity.
std::int64_t period_oracle(std::int64_t n, std::int64_t a, std::int64_t b)
{
    const Mat m{1 % n, a % n, b % n, (a * b + 1) % n};
    const Mat id{1 % n, 0, 0, 1 % n};
    Mat p = m;
    for (std::int64_t k = 1;; ++k) {
        if (p == id)
            return k;
        p = mul(p, m, n);
    }
}

GrayImage random_image(int n, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> u(0, 255);
    Plane p(n, n);
    for (Eigen::Index i = 0; i < p.size(); ++i)
        p.data()[i] = u(rng);
    return GrayImage(p);
}

} // namespace

TEST(Arnold, StepMatchesHandComputedExamples)
{
    EXPECT_EQ(arnold_step(1, 1, {1, 1, 4, 1}), std::make_pair(2, 3));
    EXPECT_EQ(arnold_step(2, 1, {1, 2, 5, 1}), std::make_pair(3, 2));
    EXPECT_EQ(arnold_step(0, 0, {1, 1, 7, 1}), std::make_pair(0, 0));
}

TEST(Arnold, PeriodMatchesMatrixPowerOracle)
{
    EXPECT_EQ(arnold_period(2, 1, 1), 3);
    EXPECT_EQ(arnold_period(512, 1, 1), 384);
    for (int n : {3, 5, 8, 10, 64, 100, 128, 256})
        for (std::int64_t a : {1, 2, 3})
            for (std::int64_t b : {1, 2, 5})
                EXPECT_EQ(arnold_period(n, a, b), period_oracle(n, a, b)) << n << " " << a << " " << b;
}

TEST(Arnold, MapIsAPermutation)
{
    const GrayImage img = random_image(32, 1);
    const GrayImage mapped = arnold_map(img, {1, 1, 32, 5});
    std::vector<double> x(img.pixels().data(), img.pixels().data() + img.pixels().size());
    std::vector<double> y(mapped.pixels().data(), mapped.pixels().data() + mapped.pixels().size());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    EXPECT_EQ(x, y);
}

TEST(Arnold, MapMovesPixelsAccordingToStep)
{
    const GrayImage img = random_image(16, 2);
    const ArnoldParams p{2, 3, 16, 1};
    const GrayImage mapped = arnold_map(img, p);
    for (int x = 0; x < 16; ++x) {
        for (int y = 0; y < 16; ++y) {
            const auto [u, v] = arnold_step(x, y, p);
            EXPECT_EQ(mapped(u, v), img(x, y));
        }
    }
}

TEST(Arnold, UnmapInvertsMapExactly)
{
    for (int n : {64, 128, 512}) {
        const GrayImage img = random_image(n, static_cast<unsigned>(n));
        for (std::int64_t k : {1, 7, 20}) {
            const ArnoldParams p{1, 1, n, k};
            EXPECT_EQ(arnold_unmap(arnold_map(img, p), p), img);
            EXPECT_EQ(arnold_map(arnold_unmap(img, p), p), img);
        }
    }
}

TEST(Arnold, FullPeriodIsIdentity)
{
    const GrayImage img = random_image(10, 3);
    const std::int64_t t = arnold_period(10, 1, 1);
    EXPECT_EQ(arnold_map(img, {1, 1, 10, t}), img);
}

TEST(Arnold, RejectsBadArguments)
{
    const GrayImage img = random_image(8, 4);
    EXPECT_THROW(arnold_map(img, {1, 1, 16, 1}), ArgumentError);
    EXPECT_THROW(arnold_unmap(img, {1, 1, 8, arnold_period(8, 1, 1)}), ArgumentError);
    EXPECT_THROW(arnold_period(0, 1, 1), ArgumentError);
}
