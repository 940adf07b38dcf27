#include "curvemark/error.hpp"
#include "curvemark/image.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace curvemark;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "curvemark_unit";
    fs::create_directories(dir);
    return dir / name;
}

GrayImage ramp(int n)
{
    Plane p(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            p(i, j) = (i * 7 + j * 3) % 256;
    return GrayImage(p);
}

} // namespace

TEST(Image, RejectsNonSquare)
{
    EXPECT_THROW(GrayImage(Plane::Zero(4, 5)), ArgumentError);
    EXPECT_THROW(GrayImage{Plane()}, ArgumentError);
}

TEST(Image, QuantizeClampsAndRounds)
{
    Plane p(2, 2);
    p << -3.2, 254.6, 10.5, 300.0;
    const GrayImage q = GrayImage(p).quantized();
    EXPECT_EQ(q(0, 0), 0.0);
    EXPECT_EQ(q(0, 1), 255.0);
    EXPECT_EQ(q(1, 0), 11.0);
    EXPECT_EQ(q(1, 1), 255.0);
}

TEST(Image, PngAndPgmRoundTrip)
{
    const GrayImage img = ramp(64);
    for (const char* name : {"ramp.png", "ramp.pgm"}) {
        const fs::path path = scratch(name);
        save_image(img, path);
        EXPECT_EQ(load_image(path), img) << name;
    }
}

TEST(Image, ColorPpmBecomesLuma)
{
    const fs::path path = scratch("color.ppm");
    {
        std::ofstream out(path, std::ios::binary);
        out << "P6\n# comment\n2 2\n255\n";
        const unsigned char px[12] = {255, 0, 0, 0, 255, 0, 0, 0, 255, 10, 10, 10};
        out.write(reinterpret_cast<const char*>(px), 12);
    }
    const GrayImage img = load_image(path);
    EXPECT_EQ(img(0, 0), std::round(0.299 * 255));
    EXPECT_EQ(img(0, 1), std::round(0.587 * 255));
    EXPECT_EQ(img(1, 0), std::round(0.114 * 255));
    EXPECT_EQ(img(1, 1), 10.0);
}

TEST(Image, LoadErrors)
{
    EXPECT_THROW(load_image(scratch("missing.png")), IoError);
    const fs::path junk = scratch("junk.bin");
    std::ofstream(junk) << "hello";
    EXPECT_THROW(load_image(junk), IoError);
    const fs::path wide = scratch("wide.pgm");
    {
        std::ofstream out(wide, std::ios::binary);
        out << "P5 3 2 255\n" << std::string(6, 'a');
    }
    EXPECT_THROW(load_image(wide), ArgumentError);
}

TEST(Image, BlocksRoundTrip)
{
    const GrayImage img = ramp(128);
    const BlockGrid grid = divide_blocks(img, 64);
    ASSERT_EQ(grid.blocks.size(), 4u);
    EXPECT_EQ(grid.blocks[1](0, 0), img(0, 64));
    EXPECT_EQ(grid.blocks[2](0, 0), img(64, 0));
    EXPECT_EQ(accumulate_blocks(grid), img);
    EXPECT_THROW(divide_blocks(ramp(96), 64), ArgumentError);
}
