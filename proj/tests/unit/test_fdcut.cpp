#include "curvemark/error.hpp"
#include "curvemark/fdcut.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

using namespace curvemark;

namespace {

Plane random_block(int n, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0, 255);
    Plane p(n, n);
    for (Eigen::Index i = 0; i < p.size(); ++i)
        p.data()[i] = u(rng);
    return p;
}

// Meyer-type transition written out from its definition.
double falling(double x)
{
    if (x <= 0)
        return 1.0;
    if (x >= 1)
        return 0.0;
    const double f = std::exp(1.0 - 1.0 / (1.0 - std::exp(1.0 - 1.0 / x)));
    const double r = std::exp(1.0 - 1.0 / (1.0 - std::exp(1.0 - 1.0 / (1.0 - x))));
    return f / std::hypot(f, r);
}

// Coarse-band lowpass for a 64 block with three scales, indexed by frequency -10..10.
double coarse_lowpass(int k)
{
    const int a = std::abs(k);
    if (a <= 5)
        return 1.0;
    return falling((a - 6) / 4.0);
}

// Naive centered unitary DFT; origin at floor(n / 2) in both domains.
using CMat = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic>;
CMat cdft(const CMat& x, int sign)
{
    const int n = static_cast<int>(x.rows());
    const int c = n / 2;
    CMat w(n, n);
    for (int k = 0; k < n; ++k)
        for (int t = 0; t < n; ++t)
            w(k, t) = std::polar(1.0 / std::sqrt(static_cast<double>(n)),
                                 sign * 2.0 * std::numbers::pi * (k - c) * (t - c) / n);
    return w * x * w.transpose();
}

Plane coarse_oracle(const Plane& block)
{
    const CMat spec = cdft(block.cast<std::complex<double>>(), -1);
    CMat low(21, 21);
    for (int i = 0; i < 21; ++i)
        for (int j = 0; j < 21; ++j)
            low(i, j) = spec(32 - 10 + i, 32 - 10 + j) * coarse_lowpass(i - 10) * coarse_lowpass(j - 10);
    return cdft(low, 1).real();
}

} // namespace

TEST(Fdcut, LayoutFor64Blocks)
{
    const CurveletTransform& t = CurveletTransform::cached(64);
    EXPECT_EQ(t.coarse_side(), 21);
    EXPECT_EQ(t.wedge_count(0), 16);
    const CurveletPyramid pyr = t.forward(random_block(64, 1));
    EXPECT_EQ(pyr.coarse.rows(), 21);
    ASSERT_EQ(pyr.bands.size(), 1u);
    EXPECT_EQ(pyr.bands[0].size(), 16u);
    EXPECT_EQ(pyr.fine.rows(), 64);
}

TEST(Fdcut, PerfectReconstructionAndTightFrame)
{
    for (bool real : {true, false}) {
        for (int n : {16, 32, 64, 128}) {
            CurveletParams p;
            p.real_input = real;
            p.scales = n >= 64 ? 3 + (n == 128) : 2;
            const Plane x = random_block(n, static_cast<unsigned>(n));
            const CurveletPyramid pyr = fdcut_forward(x, p);
            EXPECT_LT((fdcut_inverse(pyr) - x).cwiseAbs().maxCoeff(), 1e-8) << n;
            EXPECT_NEAR(pyr.energy(), x.squaredNorm(), 1e-9 * x.squaredNorm()) << n;
        }
    }
}

TEST(Fdcut, RealModeCoefficientsAreReal)
{
    const CurveletPyramid pyr = fdcut_forward(random_block(64, 2));
    for (const auto& w : pyr.bands[0])
        EXPECT_EQ(w.imag().cwiseAbs().maxCoeff(), 0.0);
}

TEST(Fdcut, Linearity)
{
    const Plane x = random_block(64, 3);
    const Plane y = random_block(64, 4);
    const CurveletPyramid a = fdcut_forward(x);
    const CurveletPyramid b = fdcut_forward(y);
    const CurveletPyramid c = fdcut_forward(2.0 * x - 3.0 * y);
    EXPECT_LT((c.coarse - (2.0 * a.coarse - 3.0 * b.coarse)).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT((c.fine - (2.0 * a.fine - 3.0 * b.fine)).cwiseAbs().maxCoeff(), 1e-9);
    for (std::size_t w = 0; w < c.bands[0].size(); ++w)
        EXPECT_LT((c.bands[0][w] - (2.0 * a.bands[0][w] - 3.0 * b.bands[0][w])).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Fdcut, ConstantBlockMapsToFlatCoarseBand)
{
    const CurveletPyramid pyr = fdcut_forward(Plane::Ones(64, 64));
    EXPECT_LT((pyr.coarse.array() - 64.0 / 21.0).abs().maxCoeff(), 1e-12);
    EXPECT_LT(pyr.fine.cwiseAbs().maxCoeff(), 1e-12);
    for (const auto& w : pyr.bands[0])
        EXPECT_LT(w.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Fdcut, CoarseBandMatchesLowpassOracle)
{
    for (unsigned s = 0; s < 3; ++s) {
        const Plane x = random_block(64, 10 + s);
        const Plane expected = coarse_oracle(x);
        const CurveletPyramid pyr = fdcut_forward(x);
        EXPECT_LT((pyr.coarse - expected).cwiseAbs().maxCoeff(), 1e-9);
        EXPECT_EQ(CurveletTransform::cached(64).approx(x), pyr.coarse);
    }
}

TEST(Fdcut, CoarseImpulseIsCentered)
{
    Plane x = Plane::Zero(64, 64);
    x(32, 32) = 1.0;
    const Plane c = fdcut_forward(x).coarse;
    Eigen::Index r = 0, col = 0;
    c.maxCoeff(&r, &col);
    EXPECT_EQ(r, 10);
    EXPECT_EQ(col, 10);
}

TEST(Fdcut, SetApproxRoundTripIsLowpassSquared)
{
    // Analysis after synthesis acts on the coarse band as the multiplier L^2.
    const Plane x = random_block(64, 20);
    CurveletPyramid pyr = fdcut_forward(x);
    std::mt19937 rng(21);
    std::normal_distribution<double> g(0, 50);
    Plane m = pyr.coarse;
    for (Eigen::Index i = 0; i < m.size(); ++i)
        m.data()[i] += g(rng);
    const Plane again = fdcut_forward(fdcut_inverse(set_approx(pyr, m))).coarse;

    const CMat d = cdft((m - pyr.coarse).cast<std::complex<double>>(), -1);
    CMat filtered(21, 21);
    for (int i = 0; i < 21; ++i)
        for (int j = 0; j < 21; ++j)
            filtered(i, j) = d(i, j) * std::pow(coarse_lowpass(i - 10) * coarse_lowpass(j - 10), 2);
    const Plane expected = pyr.coarse + Plane(cdft(filtered, 1).real());
    EXPECT_LT((again - expected).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_EQ(get_approx(set_approx(pyr, m)), m);
}

TEST(Fdcut, ErrorsOnBadShapes)
{
    EXPECT_THROW(CurveletTransform(48), ArgumentError);
    EXPECT_THROW(fdcut_forward(Plane::Zero(64, 32)), ArgumentError);
    CurveletPyramid pyr = fdcut_forward(random_block(64, 5));
    EXPECT_THROW(set_approx(pyr, Plane::Zero(20, 20)), ArgumentError);
    pyr.bands[0].pop_back();
    EXPECT_THROW(fdcut_inverse(pyr), ArgumentError);
}
