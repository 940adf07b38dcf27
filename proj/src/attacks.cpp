#include "curvemark/attacks.hpp"

#include "curvemark/error.hpp"

#include <jpeglib.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <random>
#include <sstream>
#include <string>

namespace curvemark {

namespace {

namespace fs = std::filesystem;

constexpr std::array<std::pair<AttackKind, std::string_view>, 11> kNames{{
    {AttackKind::jpeg, "jpeg"},
    {AttackKind::jpeg2000, "jpeg2000"},
    {AttackKind::gaussian_noise, "gaussian_noise"},
    {AttackKind::salt_pepper, "salt_pepper"},
    {AttackKind::speckle, "speckle"},
    {AttackKind::average_filter, "average_filter"},
    {AttackKind::median_filter, "median_filter"},
    {AttackKind::gaussian_filter, "gaussian_filter"},
    {AttackKind::histogram_eq, "histogram_eq"},
    {AttackKind::crop, "crop"},
    {AttackKind::scale, "scale"},
}};

constexpr double kGaussianSigma = 0.5;

std::string param_text(double v)
{
    std::ostringstream os;
    os << v;
    return os.str();
}

[[noreturn]] void bad_param(const AttackSpec& spec, const std::string& expected)
{
    throw ArgumentError(std::string(attack_name(spec.kind)) + " parameter " + param_text(spec.param) + " out of range (" +
                        expected + ")");
}

bool is_integer(double v)
{
    return std::isfinite(v) && v == std::floor(v);
}

std::vector<std::uint8_t> to_bytes(const Plane& p)
{
    std::vector<std::uint8_t> out(static_cast<std::size_t>(p.size()));
    for (Eigen::Index i = 0; i < p.size(); ++i)
        out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(quantize_pixel(p.data()[i]));
    return out;
}

// ---- JPEG ------------------------------------------------------------------

struct JpegErrorManager
{
    jpeg_error_mgr pub;
    std::jmp_buf jump;
    char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo)
{
    auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, err->message);
    std::longjmp(err->jump, 1);
}

// Plain C-style helpers: no objects with destructors live across setjmp.
bool jpeg_encode(const std::uint8_t* pixels, int side, int quality, unsigned char** out, unsigned long* out_size,
                 char* message)
{
    jpeg_compress_struct cinfo;
    JpegErrorManager err;
    cinfo.err = jpeg_std_error(&err.pub);
    err.pub.error_exit = jpeg_error_exit;
    if (setjmp(err.jump)) {
        std::snprintf(message, JMSG_LENGTH_MAX, "%s", err.message);
        jpeg_destroy_compress(&cinfo);
        return false;
    }
    jpeg_create_compress(&cinfo);
    jpeg_mem_dest(&cinfo, out, out_size);
    cinfo.image_width = static_cast<JDIMENSION>(side);
    cinfo.image_height = static_cast<JDIMENSION>(side);
    cinfo.input_components = 1;
    cinfo.in_color_space = JCS_GRAYSCALE;
    jpeg_set_defaults(&cinfo);
    jpeg_set_quality(&cinfo, quality, TRUE);
    jpeg_start_compress(&cinfo, TRUE);
    while (cinfo.next_scanline < cinfo.image_height) {
        auto* row = const_cast<JSAMPLE*>(pixels + static_cast<std::size_t>(cinfo.next_scanline) * side);
        jpeg_write_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_compress(&cinfo);
    jpeg_destroy_compress(&cinfo);
    return true;
}

bool jpeg_decode(unsigned char* data, unsigned long size, std::uint8_t* pixels, int side, char* message)
{
    jpeg_decompress_struct cinfo;
    JpegErrorManager err;
    cinfo.err = jpeg_std_error(&err.pub);
    err.pub.error_exit = jpeg_error_exit;
    if (setjmp(err.jump)) {
        std::snprintf(message, JMSG_LENGTH_MAX, "%s", err.message);
        jpeg_destroy_decompress(&cinfo);
        return false;
    }
    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, data, size);
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_GRAYSCALE;
    jpeg_start_decompress(&cinfo);
    if (static_cast<int>(cinfo.output_width) != side || static_cast<int>(cinfo.output_height) != side) {
        std::snprintf(message, JMSG_LENGTH_MAX, "decoded size mismatch");
        jpeg_destroy_decompress(&cinfo);
        return false;
    }
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPLE* row = pixels + static_cast<std::size_t>(cinfo.output_scanline) * side;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return true;
}

Plane attack_jpeg(const Plane& p, int quality)
{
    const int side = static_cast<int>(p.rows());
    const std::vector<std::uint8_t> in = to_bytes(p);
    unsigned char* encoded = nullptr;
    unsigned long encoded_size = 0;
    char message[JMSG_LENGTH_MAX] = {};
    if (!jpeg_encode(in.data(), side, quality, &encoded, &encoded_size, message)) {
        std::free(encoded);
        throw IoError(std::string("JPEG encode failed: ") + message);
    }
    std::vector<std::uint8_t> out(in.size());
    const bool ok = jpeg_decode(encoded, encoded_size, out.data(), side, message);
    std::free(encoded);
    if (!ok)
        throw IoError(std::string("JPEG decode failed: ") + message);
    Plane result(side, side);
    for (Eigen::Index i = 0; i < result.size(); ++i)
        result.data()[i] = out[static_cast<std::size_t>(i)];
    return result;
}

// ---- JPEG 2000 (external) --------------------------------------------------

std::string shell_quote(const std::string& s)
{
    std::string out = "'";
    for (char c : s) {
        if (c == '\'')
            out += "'\\''";
        else
            out += c;
    }
    return out + "'";
}

std::optional<fs::path> find_on_path(const std::string& name)
{
    const char* path = std::getenv("PATH");
    if (!path)
        return std::nullopt;
    std::stringstream ss(path);
    std::string dir;
    while (std::getline(ss, dir, ':')) {
        if (dir.empty())
            continue;
        fs::path candidate = fs::path(dir) / name;
        if (::access(candidate.c_str(), X_OK) == 0)
            return candidate;
    }
    return std::nullopt;
}

class TempDir
{
public:
    TempDir()
    {
        static std::atomic<unsigned> counter{0};
        const fs::path base = fs::temp_directory_path();
        for (int attempt = 0; attempt < 100; ++attempt) {
            path_ = base / ("curvemark-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
            std::error_code ec;
            if (fs::create_directory(path_, ec))
                return;
        }
        throw IoError("cannot create a temporary directory under " + base.string());
    }
    ~TempDir()
    {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

void run(const std::string& command)
{
    const int status = std::system((command + " >/dev/null 2>&1").c_str());
    if (status != 0)
        throw IoError("external JPEG 2000 codec failed (status " + std::to_string(status) + "): " + command);
}

Plane attack_jpeg2000(const Plane& p, double ratio)
{
    const char* env = std::getenv("CURVEMARK_JP2_CODEC");
    std::optional<fs::path> codec;
    std::optional<fs::path> opj_compress;
    std::optional<fs::path> opj_decompress;
    if (env && *env) {
        codec = fs::path(env);
        if (::access(codec->c_str(), X_OK) != 0)
            throw UnavailableError("CURVEMARK_JP2_CODEC=" + codec->string() + " is not executable");
    } else {
        opj_compress = find_on_path("opj_compress");
        opj_decompress = find_on_path("opj_decompress");
        if (!opj_compress || !opj_decompress)
            throw UnavailableError("no JPEG 2000 codec: set CURVEMARK_JP2_CODEC or install opj_compress/opj_decompress");
    }

    TempDir tmp;
    const fs::path in = tmp.path() / "in.pgm";
    const fs::path out = tmp.path() / "out.pgm";
    save_image(GrayImage(p), in);
    const std::string r = param_text(ratio);
    if (codec) {
        run(shell_quote(codec->string()) + " " + shell_quote(in.string()) + " " + shell_quote(out.string()) + " " + r);
    } else {
        const fs::path j2k = tmp.path() / "x.j2k";
        run(shell_quote(opj_compress->string()) + " -i " + shell_quote(in.string()) + " -o " +
            shell_quote(j2k.string()) + " -r " + r);
        run(shell_quote(opj_decompress->string()) + " -i " + shell_quote(j2k.string()) + " -o " +
            shell_quote(out.string()));
    }
    GrayImage decoded = load_image(out);
    if (decoded.side() != p.rows())
        throw IoError("JPEG 2000 codec changed the image size");
    return decoded.pixels();
}

// ---- noise -----------------------------------------------------------------

Plane attack_gaussian_noise(const Plane& p, double variance, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, std::sqrt(variance));
    Plane out(p.rows(), p.cols());
    for (Eigen::Index i = 0; i < p.size(); ++i)
        out.data()[i] = std::clamp(p.data()[i] / 255.0 + noise(rng), 0.0, 1.0) * 255.0;
    return out;
}

Plane attack_salt_pepper(const Plane& p, double density, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Plane out = p;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        const double r = u(rng);
        if (r < density / 2.0)
            out.data()[i] = 0.0;
        else if (r < density)
            out.data()[i] = 255.0;
    }
    return out;
}

Plane attack_speckle(const Plane& p, double variance, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    const double spread = std::sqrt(12.0 * variance);
    Plane out(p.rows(), p.cols());
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        const double x = p.data()[i] / 255.0;
        out.data()[i] = std::clamp(x + x * spread * u(rng), 0.0, 1.0) * 255.0;
    }
    return out;
}

// ---- filters ---------------------------------------------------------------

// Calls f(row, col, window) with the k*k neighbourhood, edges replicated.
// Even kernels put the output pixel at the top-left of the window centre.
template <typename F>
Plane sliding_window(const Plane& p, int k, F&& f)
{
    const int n = static_cast<int>(p.rows());
    const int lo = (k - 1) / 2;
    std::vector<double> window(static_cast<std::size_t>(k) * k);
    Plane out(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            std::size_t idx = 0;
            for (int i = 0; i < k; ++i) {
                const int rr = std::clamp(r - lo + i, 0, n - 1);
                for (int j = 0; j < k; ++j)
                    window[idx++] = p(rr, std::clamp(c - lo + j, 0, n - 1));
            }
            out(r, c) = f(window);
        }
    }
    return out;
}

Plane attack_average(const Plane& p, int k)
{
    const double norm = 1.0 / (static_cast<double>(k) * k);
    return sliding_window(p, k, [norm](const std::vector<double>& w) {
        double s = 0.0;
        for (double v : w)
            s += v;
        return s * norm;
    });
}

Plane attack_median(const Plane& p, int k)
{
    return sliding_window(p, k, [](std::vector<double>& w) {
        const std::size_t mid = w.size() / 2;
        std::nth_element(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(mid), w.end());
        const double upper = w[mid];
        if (w.size() % 2 == 1)
            return upper;
        const double lower = *std::max_element(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(mid));
        return 0.5 * (lower + upper);
    });
}

Plane attack_gaussian_filter(const Plane& p, int k)
{
    std::vector<double> kernel(static_cast<std::size_t>(k) * k);
    const double centre = (k - 1) / 2.0;
    double sum = 0.0;
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            const double d2 = (i - centre) * (i - centre) + (j - centre) * (j - centre);
            const double v = std::exp(-d2 / (2.0 * kGaussianSigma * kGaussianSigma));
            kernel[static_cast<std::size_t>(i) * k + j] = v;
            sum += v;
        }
    }
    for (double& v : kernel)
        v /= sum;
    return sliding_window(p, k, [&kernel](const std::vector<double>& w) {
        double s = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i)
            s += w[i] * kernel[i];
        return s;
    });
}

Plane attack_histogram_eq(const Plane& p)
{
    const std::vector<std::uint8_t> bytes = to_bytes(p);
    std::array<std::size_t, 256> hist{};
    for (std::uint8_t v : bytes)
        ++hist[v];
    std::array<std::size_t, 256> cdf{};
    std::size_t running = 0;
    std::size_t cdf_min = 0;
    for (int v = 0; v < 256; ++v) {
        running += hist[static_cast<std::size_t>(v)];
        cdf[static_cast<std::size_t>(v)] = running;
        if (cdf_min == 0 && running > 0)
            cdf_min = running;
    }
    const std::size_t total = bytes.size();
    Plane out(p.rows(), p.cols());
    if (total == cdf_min) {
        for (Eigen::Index i = 0; i < out.size(); ++i)
            out.data()[i] = bytes[static_cast<std::size_t>(i)];
        return out;
    }
    const double scale = 255.0 / static_cast<double>(total - cdf_min);
    for (Eigen::Index i = 0; i < out.size(); ++i)
        out.data()[i] = std::round(static_cast<double>(cdf[bytes[static_cast<std::size_t>(i)]] - cdf_min) * scale);
    return out;
}

Plane attack_crop(const Plane& p, double fraction)
{
    const int n = static_cast<int>(p.rows());
    const int side = std::min(n, static_cast<int>(std::lround(n * std::sqrt(fraction))));
    Plane out = p;
    out.topLeftCorner(side, side).setZero();
    return out;
}

Plane attack_scale(const Plane& p, double fraction)
{
    const int n = static_cast<int>(p.rows());
    const int small = std::max(1, static_cast<int>(std::lround(n * std::sqrt(fraction))));
    if (small == n)
        return p;
    const Plane down = resize_bicubic(p, small, small).unaryExpr(&quantize_pixel);
    return resize_bicubic(down, n, n);
}

// ---- bicubic resampling ----------------------------------------------------

double cubic(double x)
{
    const double ax = std::abs(x);
    const double ax2 = ax * ax;
    const double ax3 = ax2 * ax;
    if (ax <= 1.0)
        return 1.5 * ax3 - 2.5 * ax2 + 1.0;
    if (ax <= 2.0)
        return -0.5 * ax3 + 2.5 * ax2 - 4.0 * ax + 2.0;
    return 0.0;
}

struct Contributions
{
    std::vector<std::vector<int>> index;
    std::vector<std::vector<double>> weight;
};

Contributions contributions(int in_size, int out_size)
{
    const double scale = static_cast<double>(out_size) / in_size;
    const double stretch = scale < 1.0 ? scale : 1.0;
    const double width = 4.0 / stretch;
    Contributions c;
    c.index.resize(static_cast<std::size_t>(out_size));
    c.weight.resize(static_cast<std::size_t>(out_size));
    for (int o = 0; o < out_size; ++o) {
        const double u = (o + 0.5) / scale - 0.5;
        const int left = static_cast<int>(std::floor(u - width / 2.0));
        const int taps = static_cast<int>(std::ceil(width)) + 2;
        double sum = 0.0;
        auto& idx = c.index[static_cast<std::size_t>(o)];
        auto& w = c.weight[static_cast<std::size_t>(o)];
        for (int t = 0; t < taps; ++t) {
            const int j = left + t;
            const double v = stretch * cubic(stretch * (u - j));
            if (v == 0.0)
                continue;
            idx.push_back(std::clamp(j, 0, in_size - 1));
            w.push_back(v);
            sum += v;
        }
        for (double& v : w)
            v /= sum;
    }
    return c;
}

} // namespace

std::string_view attack_name(AttackKind kind)
{
    for (const auto& [k, name] : kNames)
        if (k == kind)
            return name;
    throw ArgumentError("unknown attack kind");
}

AttackKind parse_attack_kind(std::string_view name)
{
    for (const auto& [k, n] : kNames)
        if (n == name)
            return k;
    std::string known;
    for (const auto& [k, n] : kNames)
        known += (known.empty() ? "" : ", ") + std::string(n);
    throw ArgumentError("unknown attack '" + std::string(name) + "' (known: " + known + ")");
}

const std::vector<AttackKind>& all_attack_kinds()
{
    static const std::vector<AttackKind> kinds = [] {
        std::vector<AttackKind> v;
        for (const auto& [k, n] : kNames)
            v.push_back(k);
        return v;
    }();
    return kinds;
}

void validate_attack(const AttackSpec& spec)
{
    const double v = spec.param;
    switch (spec.kind) {
    case AttackKind::jpeg:
        if (!is_integer(v) || v < 1 || v > 100)
            bad_param(spec, "integer quality 1..100");
        break;
    case AttackKind::jpeg2000:
        if (!std::isfinite(v) || v < 1)
            bad_param(spec, "compression ratio >= 1");
        break;
    case AttackKind::gaussian_noise:
    case AttackKind::speckle:
    case AttackKind::salt_pepper:
    case AttackKind::crop:
        if (!(v >= 0.0 && v <= 1.0))
            bad_param(spec, "0..1");
        break;
    case AttackKind::average_filter:
    case AttackKind::median_filter:
    case AttackKind::gaussian_filter:
        if (!is_integer(v) || v < 1 || v > 64)
            bad_param(spec, "integer kernel side 1..64");
        break;
    case AttackKind::histogram_eq:
        break;
    case AttackKind::scale:
        if (!(v > 0.0 && v <= 1.0))
            bad_param(spec, "area fraction in (0, 1]");
        break;
    }
}

GrayImage apply_attack(const GrayImage& img, const AttackSpec& spec, std::uint64_t rng_seed)
{
    if (img.empty())
        throw ArgumentError("cannot attack an empty image");
    validate_attack(spec);
    const Plane p = img.quantized().pixels();
    const int k = static_cast<int>(spec.param);
    Plane out;
    switch (spec.kind) {
    case AttackKind::jpeg:
        out = attack_jpeg(p, k);
        break;
    case AttackKind::jpeg2000:
        out = attack_jpeg2000(p, spec.param);
        break;
    case AttackKind::gaussian_noise:
        out = attack_gaussian_noise(p, spec.param, rng_seed);
        break;
    case AttackKind::salt_pepper:
        out = attack_salt_pepper(p, spec.param, rng_seed);
        break;
    case AttackKind::speckle:
        out = attack_speckle(p, spec.param, rng_seed);
        break;
    case AttackKind::average_filter:
        out = k == 1 ? p : attack_average(p, k);
        break;
    case AttackKind::median_filter:
        out = k == 1 ? p : attack_median(p, k);
        break;
    case AttackKind::gaussian_filter:
        out = k == 1 ? p : attack_gaussian_filter(p, k);
        break;
    case AttackKind::histogram_eq:
        out = attack_histogram_eq(p);
        break;
    case AttackKind::crop:
        out = attack_crop(p, spec.param);
        break;
    case AttackKind::scale:
        out = attack_scale(p, spec.param);
        break;
    }
    return GrayImage(std::move(out)).quantized();
}

Plane resize_bicubic(const Plane& src, int rows, int cols)
{
    if (src.size() == 0 || rows <= 0 || cols <= 0)
        throw ArgumentError("resize needs a non-empty source and positive target size");
    const Contributions cc = contributions(static_cast<int>(src.cols()), cols);
    Plane tmp(src.rows(), cols);
    for (Eigen::Index r = 0; r < src.rows(); ++r) {
        for (int c = 0; c < cols; ++c) {
            const auto& idx = cc.index[static_cast<std::size_t>(c)];
            const auto& w = cc.weight[static_cast<std::size_t>(c)];
            double s = 0.0;
            for (std::size_t t = 0; t < idx.size(); ++t)
                s += src(r, idx[t]) * w[t];
            tmp(r, c) = s;
        }
    }
    const Contributions rc = contributions(static_cast<int>(src.rows()), rows);
    Plane out(rows, cols);
    for (int r = 0; r < rows; ++r) {
        const auto& idx = rc.index[static_cast<std::size_t>(r)];
        const auto& w = rc.weight[static_cast<std::size_t>(r)];
        for (int c = 0; c < cols; ++c) {
            double s = 0.0;
            for (std::size_t t = 0; t < idx.size(); ++t)
                s += tmp(idx[t], c) * w[t];
            out(r, c) = s;
        }
    }
    return out;
}

} // namespace curvemark
