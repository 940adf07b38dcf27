#pragma once

#include "curvemark/image.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace curvemark {

enum class AttackKind
{
    jpeg,            // quality factor, integer in [1, 100]
    jpeg2000,        // compression ratio >= 1
    gaussian_noise,  // variance on the [0, 1] intensity scale
    salt_pepper,     // density in [0, 1]
    speckle,         // variance on the [0, 1] intensity scale
    average_filter,  // odd or even kernel side >= 1
    median_filter,
    gaussian_filter, // kernel side, sigma 0.5
    histogram_eq,    // parameter ignored
    crop,            // area fraction in [0, 1] zeroed from the top-left corner
    scale,           // area fraction in (0, 1]; down then back up, bicubic
};

struct AttackSpec
{
    AttackKind kind = AttackKind::jpeg;
    double param = 0.0;

    friend bool operator==(const AttackSpec&, const AttackSpec&) = default;
};

std::string_view attack_name(AttackKind kind);

/// Throws ArgumentError for unknown names.
AttackKind parse_attack_kind(std::string_view name);

const std::vector<AttackKind>& all_attack_kinds();

/// Throws ArgumentError when spec.param is outside the kind's range.
void validate_attack(const AttackSpec& spec);

/// Applies one attack and returns an 8-bit image of the same side.
/// Randomized kinds draw from a generator seeded with rng_seed only.
///
/// jpeg2000 runs an external codec: the executable named by
/// CURVEMARK_JP2_CODEC (called as `codec in.pgm out.pgm ratio`), or
/// opj_compress/opj_decompress from PATH. Throws UnavailableError when
/// neither exists.
GrayImage apply_attack(const GrayImage& img, const AttackSpec& spec, std::uint64_t rng_seed = 0);

/// Bicubic resampling (a = -0.5) with an antialiasing kernel on downscale.
Plane resize_bicubic(const Plane& src, int rows, int cols);

} // namespace curvemark
