#include "curvemark/codec.hpp"

#include "curvemark/arnold.hpp"
#include "curvemark/dct.hpp"
#include "curvemark/error.hpp"
#include "curvemark/pn.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

namespace curvemark {

namespace {

constexpr int kKeysetVersion = 1;
constexpr const char* kPrngName = "mt19937_64";

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

template <typename T>
T parse_integer(std::string_view text, const char* what)
{
    T value{};
    text = trim(text);
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value, 10);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw ArgumentError(std::string("invalid ") + what + ": '" + std::string(text) + "'");
    return value;
}

double parse_double(std::string_view text, const char* what)
{
    double value = 0.0;
    text = trim(text);
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw ArgumentError(std::string("invalid ") + what + ": '" + std::string(text) + "'");
    return value;
}

std::string format_double(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

int hex_value(char c)
{
    if (c >= '0' && c <= '9')
        return c - '0';
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    return -1;
}

struct Pipeline
{
    const CurveletTransform& transform;
    HfRegion region;
    PnPair pn;
};

Pipeline make_pipeline(const GrayImage& img, const KeySet& keys)
{
    if (img.empty() || img.side() % kBlockSide != 0)
        throw ArgumentError("image side must be a positive multiple of " + std::to_string(kBlockSide) + ", got " +
                            std::to_string(img.side()));
    keys.validate(img.side());
    const CurveletTransform& transform = CurveletTransform::cached(kBlockSide);
    HfRegion region = make_hf_region(transform.coarse_side(), keys.hf_threshold);
    PnPair pn = gen_pn_pair(keys.key1, region.count());
    return {transform, std::move(region), std::move(pn)};
}

ArnoldParams arnold_params(const KeySet& keys, int side)
{
    return {keys.a, keys.b, side, keys.key2};
}

std::vector<double> scaled(const std::vector<double>& seq, double gain)
{
    std::vector<double> out(seq.size());
    std::transform(seq.begin(), seq.end(), out.begin(), [gain](double s) { return gain * s; });
    return out;
}

} // namespace

void KeySet::validate(int side) const
{
    if (!(gain > 0.0))
        throw ArgumentError("gain must be positive");
    if (a < 1 || b < 1)
        throw ArgumentError("Arnold parameters a and b must be >= 1");
    if (key2 < 0)
        throw ArgumentError("key2 (Arnold iterations) must be non-negative");
    const std::int64_t period = arnold_period(side, a, b);
    if (key2 >= period)
        throw ArgumentError("key2 (" + std::to_string(key2) + ") must be below the Arnold period " +
                            std::to_string(period) + " for side " + std::to_string(side));
}

std::string keyset_to_text(const KeySet& keys)
{
    char key1[32];
    std::snprintf(key1, sizeof(key1), "0x%016llx", static_cast<unsigned long long>(keys.key1));
    std::ostringstream out;
    out << "# curvemark keyset\n"
        << "version = " << kKeysetVersion << "\n"
        << "prng = " << kPrngName << "\n"
        << "key1 = " << key1 << "\n"
        << "key2 = " << keys.key2 << "\n"
        << "a = " << keys.a << "\n"
        << "b = " << keys.b << "\n"
        << "gain = " << format_double(keys.gain) << "\n"
        << "hf_threshold = " << keys.hf_threshold << "\n";
    return out.str();
}

KeySet keyset_from_text(std::string_view text)
{
    std::map<std::string, std::string, std::less<>> fields;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const std::size_t eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        ++line_no;
        if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ArgumentError("keyset line " + std::to_string(line_no) + ": expected 'name = value'");
        std::string name(trim(line.substr(0, eq)));
        if (!fields.emplace(name, std::string(trim(line.substr(eq + 1)))).second)
            throw ArgumentError("keyset line " + std::to_string(line_no) + ": duplicate field '" + name + "'");
    }

    auto it = fields.find("version");
    if (it == fields.end())
        throw ArgumentError("keyset is missing its version field");
    if (parse_integer<int>(it->second, "keyset version") != kKeysetVersion)
        throw ArgumentError("unsupported keyset version " + it->second);
    if (auto prng = fields.find("prng"); prng != fields.end() && prng->second != kPrngName)
        throw ArgumentError("keyset uses PRNG '" + prng->second + "', only " + kPrngName + " is supported");

    KeySet keys;
    for (const auto& [name, value] : fields) {
        if (name == "version" || name == "prng")
            continue;
        if (name == "key1")
            keys.key1 = parse_seed(value);
        else if (name == "key2")
            keys.key2 = parse_integer<std::int64_t>(value, "key2");
        else if (name == "a")
            keys.a = parse_integer<std::int64_t>(value, "a");
        else if (name == "b")
            keys.b = parse_integer<std::int64_t>(value, "b");
        else if (name == "gain")
            keys.gain = parse_double(value, "gain");
        else if (name == "hf_threshold")
            keys.hf_threshold = parse_integer<int>(value, "hf_threshold");
        else
            throw ArgumentError("unknown keyset field '" + name + "'");
    }
    return keys;
}

KeySet load_keyset(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open keyset " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return keyset_from_text(buf.str());
}

void save_keyset(const KeySet& keys, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write keyset " + path.string());
    out << keyset_to_text(keys);
}

std::string keyset_hash(const KeySet& keys)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : keyset_to_text(keys)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::uint64_t parse_seed(std::string_view text)
{
    text = trim(text);
    int base = 10;
    if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
        text.remove_prefix(2);
        base = 16;
    }
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value, base);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
        throw ArgumentError("invalid seed '" + std::string(text) + "' (expected decimal or 0x-hex)");
    return value;
}

Watermark::Watermark(std::vector<std::uint8_t> bits) : bits_(std::move(bits))
{
    for (std::uint8_t b : bits_)
        if (b > 1)
            throw ArgumentError("watermark bits must be 0 or 1");
}

Watermark Watermark::parse(std::string_view text)
{
    text = trim(text);
    std::vector<std::uint8_t> bits;
    const bool prefixed_bits = text.size() > 2 && text[0] == '0' && (text[1] == 'b' || text[1] == 'B');
    const bool prefixed_hex = text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X');
    if (prefixed_bits || (!prefixed_hex && text.size() > 16)) {
        if (prefixed_bits)
            text.remove_prefix(2);
        for (char c : text) {
            if (c != '0' && c != '1')
                throw ArgumentError("watermark bit string may only contain '0' and '1'");
            bits.push_back(static_cast<std::uint8_t>(c - '0'));
        }
    } else {
        if (prefixed_hex)
            text.remove_prefix(2);
        for (char c : text) {
            const int v = hex_value(c);
            if (v < 0)
                throw ArgumentError("invalid hex digit '" + std::string(1, c) + "' in watermark");
            for (int shift = 3; shift >= 0; --shift)
                bits.push_back(static_cast<std::uint8_t>((v >> shift) & 1));
        }
    }
    if (bits.empty())
        throw ArgumentError("watermark string is empty");
    return Watermark(std::move(bits));
}

Watermark Watermark::random(int bits, std::uint64_t seed)
{
    if (bits <= 0)
        throw ArgumentError("watermark length must be positive");
    std::mt19937_64 rng(seed);
    std::vector<std::uint8_t> out(static_cast<std::size_t>(bits));
    for (auto& b : out)
        b = static_cast<std::uint8_t>(rng() >> 63);
    return Watermark(std::move(out));
}

std::string Watermark::to_hex() const
{
    if (bits_.size() % 4 != 0)
        throw ArgumentError("watermark of " + std::to_string(bits_.size()) + " bits has no hex form");
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    for (std::size_t i = 0; i < bits_.size(); i += 4)
        out.push_back(digits[(bits_[i] << 3) | (bits_[i + 1] << 2) | (bits_[i + 2] << 1) | bits_[i + 3]]);
    return out;
}

std::string Watermark::to_binary() const
{
    std::string out;
    for (std::uint8_t b : bits_)
        out.push_back(static_cast<char>('0' + b));
    return out;
}

int watermark_capacity(int side)
{
    if (side <= 0 || side % kBlockSide != 0)
        throw ArgumentError("image side must be a positive multiple of " + std::to_string(kBlockSide));
    const int per_side = side / kBlockSide;
    return per_side * per_side;
}

GrayImage embed(const GrayImage& img, const Watermark& wm, const KeySet& keys)
{
    Pipeline pipe = make_pipeline(img, keys);
    const int capacity = watermark_capacity(img.side());
    if (wm.size() != capacity)
        throw ArgumentError("watermark has " + std::to_string(wm.size()) + " bits but a " +
                            std::to_string(img.side()) + "x" + std::to_string(img.side()) + " image carries " +
                            std::to_string(capacity));
    const std::vector<double> noise_one = scaled(pipe.pn.seq_one, keys.gain);
    const std::vector<double> noise_zero = scaled(pipe.pn.seq_zero, keys.gain);

    const ArnoldParams arnold = arnold_params(keys, img.side());
    BlockGrid grid = divide_blocks(arnold_map(img, arnold), kBlockSide);
    for (std::size_t i = 0; i < grid.blocks.size(); ++i) {
        CurveletPyramid pyr = pipe.transform.forward(grid.blocks[i]);
        const Plane spectrum = dct2(get_approx(pyr));
        const auto& noise = wm[static_cast<int>(i)] == 0 ? noise_zero : noise_one;
        pyr = set_approx(std::move(pyr), idct2(replace_hf(spectrum, noise, pipe.region)));
        grid.blocks[i] = pipe.transform.inverse(pyr);
    }
    return arnold_unmap(accumulate_blocks(grid), arnold).quantized();
}

namespace {

// Roundoff leaves ~1e-13 in the HF band of a flat block; treat that as zero variance.
bool numerically_flat(const std::vector<double>& v, double scale)
{
    double mean = 0.0;
    for (double x : v)
        mean += x;
    mean /= static_cast<double>(v.size());
    double spread = 0.0;
    for (double x : v)
        spread = std::max(spread, std::abs(x - mean));
    return spread <= 1e-9 * std::max(1.0, scale);
}

} // namespace

std::vector<BlockDecision> extract_detailed(const GrayImage& img, const KeySet& keys)
{
    Pipeline pipe = make_pipeline(img, keys);
    const std::vector<double> noise_one = scaled(pipe.pn.seq_one, keys.gain);
    const std::vector<double> noise_zero = scaled(pipe.pn.seq_zero, keys.gain);

    const BlockGrid grid = divide_blocks(arnold_map(img, arnold_params(keys, img.side())), kBlockSide);
    std::vector<BlockDecision> decisions;
    decisions.reserve(grid.blocks.size());
    for (const Plane& block : grid.blocks) {
        const Plane coeffs = dct2(pipe.transform.approx(block));
        const std::vector<double> hf = extract_hf(coeffs, pipe.region);
        BlockDecision d;
        if (numerically_flat(hf, coeffs.cwiseAbs().maxCoeff())) {
            d.corr_zero = d.corr_one = std::nan("");
            decisions.push_back(d);
            continue;
        }
        const auto c0 = try_corr2(noise_zero, hf);
        const auto c1 = try_corr2(noise_one, hf);
        d.corr_zero = c0.value_or(std::nan(""));
        d.corr_one = c1.value_or(std::nan(""));
        d.bit = (c0 && c1 && *c0 > *c1) ? 0 : 1;
        decisions.push_back(d);
    }
    return decisions;
}

Watermark extract(const GrayImage& img, const KeySet& keys)
{
    std::vector<std::uint8_t> bits;
    for (const BlockDecision& d : extract_detailed(img, keys))
        bits.push_back(d.bit);
    return Watermark(std::move(bits));
}

} // namespace curvemark
