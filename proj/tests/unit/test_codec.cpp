#include "curvemark/arnold.hpp"
#include "curvemark/codec.hpp"
#include "curvemark/error.hpp"
#include "curvemark/metrics.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <random>

using namespace curvemark;

namespace {

GrayImage host(const char* name)
{
    return load_image(std::filesystem::path(CURVEMARK_TEST_DATA) / name);
}

GrayImage textured(int n, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> u(40, 215);
    Plane p(n, n);
    for (Eigen::Index i = 0; i < p.size(); ++i)
        p.data()[i] = u(rng);
    return GrayImage(p);
}

} // namespace

TEST(Watermark, HexAndBinaryForms)
{
    const Watermark w = Watermark::parse("8000000000000001");
    ASSERT_EQ(w.size(), 64);
    EXPECT_EQ(w[0], 1);
    EXPECT_EQ(w[1], 0);
    EXPECT_EQ(w[63], 1);
    EXPECT_EQ(w.to_hex(), "8000000000000001");
    EXPECT_EQ(Watermark::parse("0x8000000000000001"), w);
    EXPECT_EQ(Watermark::parse(w.to_binary()), w);
    EXPECT_EQ(Watermark::parse("0b1010").to_hex(), "a");
    EXPECT_THROW(Watermark::parse("xyz"), ArgumentError);
    EXPECT_THROW(Watermark::parse(""), ArgumentError);
    EXPECT_EQ(Watermark::random(64, 5), Watermark::random(64, 5));
    EXPECT_NE(Watermark::random(64, 5), Watermark::random(64, 6));
}

TEST(KeySetText, RoundTripAndValidation)
{
    KeySet k;
    k.key1 = 0xdeadbeefcafef00dULL;
    k.key2 = 33;
    k.a = 2;
    k.b = 3;
    k.gain = 98.5;
    k.hf_threshold = 28;
    EXPECT_EQ(keyset_from_text(keyset_to_text(k)), k);
    EXPECT_EQ(keyset_hash(k), keyset_hash(keyset_from_text(keyset_to_text(k))));
    EXPECT_NE(keyset_hash(k), keyset_hash(KeySet{}));
    EXPECT_EQ(keyset_hash(k).size(), 16u);
    EXPECT_THROW(keyset_from_text("version = 1\nbogus = 3\n"), ArgumentError);
    EXPECT_THROW(keyset_from_text("version = 9\n"), ArgumentError);
    EXPECT_EQ(parse_seed("0x10"), 16u);
    EXPECT_EQ(parse_seed("10"), 10u);
    EXPECT_THROW(parse_seed("ten"), ArgumentError);

    KeySet bad;
    bad.key2 = arnold_period(512, 1, 1);
    EXPECT_THROW(bad.validate(512), ArgumentError);
    bad = KeySet{};
    bad.gain = 0;
    EXPECT_THROW(bad.validate(512), ArgumentError);
}

TEST(Codec, RoundTripOnSmallHost)
{
    const GrayImage img = textured(128, 1);
    const KeySet k;
    for (std::uint64_t s = 0; s < 10; ++s) {
        const Watermark wm = Watermark::random(4, s);
        const GrayImage marked = embed(img, wm, k);
        EXPECT_EQ(marked, marked.quantized());
        EXPECT_EQ(extract(marked, k), wm);
    }
}

TEST(Codec, RoundTripOnLena)
{
    const GrayImage img = host("lena.png");
    const KeySet k;
    const Watermark wm = Watermark::parse("c0ffee0123456789");
    const GrayImage marked = embed(img, wm, k);
    EXPECT_EQ(extract(marked, k), wm);
    const double p = psnr(img, marked);
    EXPECT_GE(p, 37.0);
    EXPECT_LE(p, 44.0);
}

TEST(Codec, DistortionGrowsWithGain)
{
    const GrayImage img = textured(128, 2);
    const Watermark wm = Watermark::random(4, 1);
    double last = 0.0;
    for (double g : {25.0, 50.0, 75.0, 100.0, 125.0}) {
        KeySet k;
        k.gain = g;
        const double mse = (embed(img, wm, k).pixels() - img.pixels()).squaredNorm();
        EXPECT_GT(mse, last);
        last = mse;
    }
}

TEST(Codec, TinyGainLeavesFlatHostUnchanged)
{
    // A flat host has an empty HF band, so replacing it with ~0 changes nothing.
    const GrayImage img = GrayImage::filled(128, 128.0);
    KeySet k;
    k.gain = 1e-4;
    EXPECT_EQ(embed(img, Watermark::random(4, 3), k), img);
}

TEST(Codec, ZeroVarianceBlocksDecodeAsOne)
{
    const Watermark got = extract(GrayImage::filled(128, 77.0), KeySet{});
    EXPECT_EQ(got, Watermark(std::vector<std::uint8_t>(4, 1)));
    for (const BlockDecision& d : extract_detailed(GrayImage::filled(64, 0.0), KeySet{}))
        EXPECT_EQ(d.bit, 1);
}

TEST(Codec, DecisionIgnoresGainScale)
{
    const GrayImage img = textured(128, 4);
    const Watermark wm = Watermark::random(4, 9);
    const GrayImage marked = embed(img, wm, KeySet{});
    for (double g : {1.0, 7.0, 1000.0}) {
        KeySet k;
        k.gain = g;
        EXPECT_EQ(extract(marked, k), wm);
    }
}

TEST(Codec, BitFlipOnlyTouchesItsBlockFootprint)
{
    const GrayImage img = textured(128, 5);
    const KeySet k;
    std::vector<std::uint8_t> bits{0, 1, 1, 0};
    const GrayImage a = embed(img, Watermark(bits), k);
    bits[2] ^= 1;
    const GrayImage b = embed(img, Watermark(bits), k);
    const ArnoldParams p{k.a, k.b, 128, k.key2};
    const Plane diff = (arnold_map(a, p).pixels() - arnold_map(b, p).pixels()).cwiseAbs();
    // Block 2 is the bottom-left 64x64 tile in the scrambled domain.
    Plane outside = diff;
    outside.block(64, 0, 64, 64).setZero();
    EXPECT_EQ(outside.maxCoeff(), 0.0);
    EXPECT_GT(diff.block(64, 0, 64, 64).maxCoeff(), 0.0);
    EXPECT_EQ(extract(b, k), Watermark(bits));
}

TEST(Codec, WrongKeysDoNotRecoverTheMark)
{
    const GrayImage img = host("lena.png");
    const KeySet k;
    const Watermark wm = Watermark::random(64, 77);
    const GrayImage marked = embed(img, wm, k);
    KeySet wrong = k;
    wrong.key1 = 2;
    EXPECT_LT(nc(wm, extract(marked, wrong)), 0.5);
    wrong = k;
    wrong.key2 = 21;
    EXPECT_LT(nc(wm, extract(marked, wrong)), 0.5);
}

TEST(Codec, SizeErrors)
{
    EXPECT_THROW(embed(textured(96, 1), Watermark::random(1, 1), KeySet{}), ArgumentError);
    EXPECT_THROW(embed(textured(128, 1), Watermark::random(64, 1), KeySet{}), ArgumentError);
    EXPECT_THROW(extract(textured(100, 1), KeySet{}), ArgumentError);
    EXPECT_EQ(watermark_capacity(512), 64);
}
