#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <vector>

namespace curvemark {

// Row-major real raster. All transform work happens in double precision.
using Plane = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Square grayscale image. Values are real-valued in memory and only
/// quantized to 8 bits when written to disk (see quantized()).
class GrayImage
{
public:
    GrayImage() = default;

    /// Throws ArgumentError for an empty or non-square plane.
    explicit GrayImage(Plane pixels);

    static GrayImage filled(int side, double value);

    int side() const { return static_cast<int>(pixels_.rows()); }
    int width() const { return static_cast<int>(pixels_.cols()); }
    int height() const { return static_cast<int>(pixels_.rows()); }
    bool empty() const { return pixels_.size() == 0; }

    const Plane& pixels() const { return pixels_; }
    double operator()(int row, int col) const { return pixels_(row, col); }

    /// Clamp to [0, 255] and round half away from zero.
    GrayImage quantized() const;

    friend bool operator==(const GrayImage& a, const GrayImage& b)
    {
        return a.pixels_.rows() == b.pixels_.rows() && a.pixels_.cols() == b.pixels_.cols() &&
               a.pixels_ == b.pixels_;
    }

private:
    Plane pixels_;
};

/// Non-overlapping square tiling of an image, blocks stored row-major.
struct BlockGrid
{
    int block_side = 0;
    int side_count = 0;
    std::vector<Plane> blocks;
};

double quantize_pixel(double v);

/// Reads binary PGM (P5), PPM (P6) or PNG. Color input is converted with
/// BT.601 luma weights and a warning is printed to stderr.
GrayImage load_image(const std::filesystem::path& path);

/// Writes PNG when the extension is .png, binary PGM otherwise.
/// Pixels are clamped and rounded first.
void save_image(const GrayImage& img, const std::filesystem::path& path);

BlockGrid divide_blocks(const GrayImage& img, int block_side);
GrayImage accumulate_blocks(const BlockGrid& grid);

} // namespace curvemark
