#include "curvemark/image.hpp"

#include "curvemark/error.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iostream>
#include <iterator>
#include <string>

namespace curvemark {

namespace {

// BT.601 luma on gamma-encoded samples.
double luma(double r, double g, double b)
{
    return 0.299 * r + 0.587 * g + 0.114 * b;
}

void warn_color(const std::filesystem::path& path)
{
    std::cerr << "warning: " << path.string() << " is a color image; converting to BT.601 luma\n";
}

Plane plane_from_gray(const std::uint8_t* data, int rows, int cols)
{
    Plane p(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            p(r, c) = data[static_cast<std::size_t>(r) * cols + c];
    return p;
}

Plane plane_from_rgb(const std::uint8_t* data, int rows, int cols)
{
    Plane p(rows, cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const std::uint8_t* px = data + 3 * (static_cast<std::size_t>(r) * cols + c);
            p(r, c) = quantize_pixel(luma(px[0], px[1], px[2]));
        }
    }
    return p;
}

std::vector<std::uint8_t> to_bytes(const GrayImage& img)
{
    const Plane& p = img.pixels();
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(p.size()));
    for (Eigen::Index i = 0; i < p.size(); ++i)
        bytes[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(quantize_pixel(p.data()[i]));
    return bytes;
}

// Netpbm header token reader; skips whitespace and '#' comments.
class PnmHeader
{
public:
    explicit PnmHeader(const std::vector<char>& buf) : buf_(buf) {}

    int next_int()
    {
        skip();
        if (pos_ >= buf_.size() || !std::isdigit(static_cast<unsigned char>(buf_[pos_])))
            throw IoError("malformed PNM header");
        long v = 0;
        while (pos_ < buf_.size() && std::isdigit(static_cast<unsigned char>(buf_[pos_]))) {
            v = v * 10 + (buf_[pos_++] - '0');
            if (v > 1'000'000)
                throw IoError("PNM header value out of range");
        }
        return static_cast<int>(v);
    }

    // Exactly one whitespace byte separates the header from the raster.
    std::size_t raster_offset() const { return pos_ + 1; }

private:
    void skip()
    {
        while (pos_ < buf_.size()) {
            if (buf_[pos_] == '#') {
                while (pos_ < buf_.size() && buf_[pos_] != '\n')
                    ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(buf_[pos_]))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    const std::vector<char>& buf_;
    std::size_t pos_ = 2;
};

Plane read_pnm(const std::vector<char>& buf, const std::filesystem::path& path)
{
    const bool color = buf[1] == '6';
    PnmHeader header(buf);
    const int cols = header.next_int();
    const int rows = header.next_int();
    const int maxval = header.next_int();
    if (cols <= 0 || rows <= 0)
        throw IoError("empty image in " + path.string());
    if (maxval <= 0 || maxval > 255)
        throw IoError("only 8-bit PNM files are supported: " + path.string());
    const std::size_t channels = color ? 3 : 1;
    const std::size_t need = static_cast<std::size_t>(rows) * cols * channels;
    const std::size_t offset = header.raster_offset();
    if (buf.size() < offset + need)
        throw IoError("truncated PNM raster in " + path.string());
    const auto* data = reinterpret_cast<const std::uint8_t*>(buf.data() + offset);
    Plane p;
    if (color) {
        warn_color(path);
        p = plane_from_rgb(data, rows, cols);
    } else {
        p = plane_from_gray(data, rows, cols);
    }
    if (maxval != 255)
        p = (p * (255.0 / maxval)).unaryExpr(&quantize_pixel);
    return p;
}

Plane read_png(const std::filesystem::path& path)
{
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.c_str()))
        throw IoError("cannot decode PNG " + path.string() + ": " + image.message);
    const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
    image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
        std::string msg = image.message;
        png_image_free(&image);
        throw IoError("cannot decode PNG " + path.string() + ": " + msg);
    }
    const int rows = static_cast<int>(image.height);
    const int cols = static_cast<int>(image.width);
    if (color) {
        warn_color(path);
        return plane_from_rgb(buffer.data(), rows, cols);
    }
    return plane_from_gray(buffer.data(), rows, cols);
}

void write_png(const GrayImage& img, const std::filesystem::path& path)
{
    std::vector<std::uint8_t> bytes = to_bytes(img);
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width());
    image.height = static_cast<png_uint_32>(img.height());
    image.format = PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&image, path.c_str(), 0, bytes.data(), 0, nullptr))
        throw IoError("cannot write PNG " + path.string() + ": " + image.message);
}

void write_pgm(const GrayImage& img, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    std::vector<std::uint8_t> bytes = to_bytes(img);
    out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw IoError("failed writing " + path.string());
}

} // namespace

double quantize_pixel(double v)
{
    return std::round(std::clamp(v, 0.0, 255.0));
}

GrayImage::GrayImage(Plane pixels) : pixels_(std::move(pixels))
{
    if (pixels_.size() == 0)
        throw ArgumentError("image is empty");
    if (pixels_.rows() != pixels_.cols())
        throw ArgumentError("image must be square, got " + std::to_string(pixels_.rows()) + "x" +
                            std::to_string(pixels_.cols()) + " (rows x cols)");
}

GrayImage GrayImage::filled(int side, double value)
{
    if (side <= 0)
        throw ArgumentError("image side must be positive");
    return GrayImage(Plane::Constant(side, side, value));
}

GrayImage GrayImage::quantized() const
{
    return GrayImage(pixels_.unaryExpr(&quantize_pixel));
}

GrayImage load_image(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    static constexpr unsigned char png_magic[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    Plane pixels;
    if (buf.size() >= 8 && std::memcmp(buf.data(), png_magic, 8) == 0)
        pixels = read_png(path);
    else if (buf.size() >= 2 && buf[0] == 'P' && (buf[1] == '5' || buf[1] == '6'))
        pixels = read_pnm(buf, path);
    else
        throw IoError("unsupported image format: " + path.string() + " (expected PGM P5, PPM P6 or PNG)");
    if (pixels.rows() != pixels.cols())
        throw ArgumentError(path.string() + " is not square (" + std::to_string(pixels.cols()) + "x" +
                            std::to_string(pixels.rows()) + ")");
    return GrayImage(std::move(pixels));
}

void save_image(const GrayImage& img, const std::filesystem::path& path)
{
    if (img.empty())
        throw ArgumentError("cannot save an empty image");
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (ext == ".png")
        write_png(img, path);
    else
        write_pgm(img, path);
}

BlockGrid divide_blocks(const GrayImage& img, int block_side)
{
    if (block_side <= 0 || img.empty() || img.side() % block_side != 0)
        throw ArgumentError("image side " + std::to_string(img.side()) + " is not divisible by block size " +
                            std::to_string(block_side));
    BlockGrid grid;
    grid.block_side = block_side;
    grid.side_count = img.side() / block_side;
    grid.blocks.reserve(static_cast<std::size_t>(grid.side_count) * grid.side_count);
    for (int br = 0; br < grid.side_count; ++br)
        for (int bc = 0; bc < grid.side_count; ++bc)
            grid.blocks.emplace_back(img.pixels().block(br * block_side, bc * block_side, block_side, block_side));
    return grid;
}

GrayImage accumulate_blocks(const BlockGrid& grid)
{
    const std::size_t expected = static_cast<std::size_t>(grid.side_count) * grid.side_count;
    if (grid.side_count <= 0 || grid.block_side <= 0 || grid.blocks.size() != expected)
        throw ArgumentError("block grid has " + std::to_string(grid.blocks.size()) + " blocks, expected " +
                            std::to_string(expected));
    const int side = grid.side_count * grid.block_side;
    Plane out(side, side);
    for (int br = 0; br < grid.side_count; ++br) {
        for (int bc = 0; bc < grid.side_count; ++bc) {
            const Plane& b = grid.blocks[static_cast<std::size_t>(br) * grid.side_count + bc];
            if (b.rows() != grid.block_side || b.cols() != grid.block_side)
                throw ArgumentError("block size does not match grid");
            out.block(br * grid.block_side, bc * grid.block_side, grid.block_side, grid.block_side) = b;
        }
    }
    return GrayImage(std::move(out));
}

} // namespace curvemark
