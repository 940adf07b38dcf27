#pragma once

#include "curvemark/fdcut.hpp"
#include "curvemark/image.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace curvemark {

inline constexpr int kBlockSide = 64;

/// Everything needed to embed or blindly extract a watermark.
struct KeySet
{
    std::uint64_t key1 = 1; // pseudo-noise seed
    std::int64_t key2 = 20; // Arnold iterations
    std::int64_t a = 1;
    std::int64_t b = 1;
    double gain = 125.0;
    int hf_threshold = 30;

    /// Throws ArgumentError unless gain > 0, a, b >= 1 and key2 is below the
    /// Arnold period for an image of the given side.
    void validate(int side) const;

    friend bool operator==(const KeySet&, const KeySet&) = default;
};

/// Versioned key = value text; see README for the schema.
std::string keyset_to_text(const KeySet& keys);
KeySet keyset_from_text(std::string_view text);
KeySet load_keyset(const std::filesystem::path& path);
void save_keyset(const KeySet& keys, const std::filesystem::path& path);

/// 16 hex digits (FNV-1a 64) of the canonical keyset text.
std::string keyset_hash(const KeySet& keys);

/// Accepts decimal or 0x-prefixed hexadecimal.
std::uint64_t parse_seed(std::string_view text);

/// One bit per 64x64 block, block-row-major.
class Watermark
{
public:
    Watermark() = default;
    explicit Watermark(std::vector<std::uint8_t> bits);

    /// Hex digits (optionally 0x-prefixed; bit 0 is the MSB of the first
    /// digit) or, when longer than 16 characters or 0b-prefixed, a string of
    /// '0'/'1' characters.
    static Watermark parse(std::string_view text);
    static Watermark random(int bits, std::uint64_t seed);

    int size() const { return static_cast<int>(bits_.size()); }
    std::uint8_t operator[](int i) const { return bits_[static_cast<std::size_t>(i)]; }
    const std::vector<std::uint8_t>& bits() const { return bits_; }

    std::string to_hex() const;
    std::string to_binary() const;

    friend bool operator==(const Watermark&, const Watermark&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

/// Bits carried by an image of the given side.
int watermark_capacity(int side);

GrayImage embed(const GrayImage& img, const Watermark& wm, const KeySet& keys);

struct BlockDecision
{
    double corr_zero = 0.0;
    double corr_one = 0.0;
    std::uint8_t bit = 1;
};

/// Blind detection: bit 0 iff corr(hf, gain * seq_zero) > corr(hf, gain * seq_one).
/// Ties and undefined correlations give bit 1.
std::vector<BlockDecision> extract_detailed(const GrayImage& img, const KeySet& keys);
Watermark extract(const GrayImage& img, const KeySet& keys);

} // namespace curvemark
