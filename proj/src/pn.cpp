#include "curvemark/pn.hpp"

#include "curvemark/error.hpp"

#include <cmath>
#include <random>
#include <string>

namespace curvemark {

namespace {

// Returns NaN for a zero-variance input instead of throwing.
double pearson(std::span<const double> a, std::span<const double> b)
{
    const double n = static_cast<double>(a.size());
    double mean_a = 0.0;
    double mean_b = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        mean_a += a[i];
        mean_b += b[i];
    }
    mean_a /= n;
    mean_b /= n;
    double cross = 0.0;
    double var_a = 0.0;
    double var_b = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - mean_a;
        const double db = b[i] - mean_b;
        cross += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if (var_a == 0.0 || var_b == 0.0)
        return std::nan("");
    return cross / std::sqrt(var_a * var_b);
}

double next_unit(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1p-53;
}

void draw(std::mt19937_64& rng, std::vector<double>& seq)
{
    for (double& s : seq)
        s = std::round(2.0 * (next_unit(rng) - 0.5));
}

} // namespace

double corr2(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size())
        throw ArgumentError("corr2 inputs differ in size (" + std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()) + ")");
    if (a.empty())
        throw ArgumentError("corr2 inputs are empty");
    const double r = pearson(a, b);
    if (std::isnan(r))
        throw ArgumentError("corr2 is undefined for a constant input");
    return r;
}

std::optional<double> try_corr2(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size() || a.empty())
        return corr2(a, b);
    const double r = pearson(a, b);
    if (std::isnan(r))
        return std::nullopt;
    return r;
}

PnPair gen_pn_pair(std::uint64_t seed, int length)
{
    if (length < 8)
        throw ArgumentError("pseudo-noise length must be at least 8, got " + std::to_string(length));
    std::mt19937_64 rng(seed);
    PnPair pair;
    pair.seed = seed;
    pair.length = length;
    pair.seq_one.resize(static_cast<std::size_t>(length));
    pair.seq_zero.resize(static_cast<std::size_t>(length));
    for (int attempt = 0; attempt <= kPnRetryCap; ++attempt) {
        draw(rng, pair.seq_one);
        draw(rng, pair.seq_zero);
        const double r = pearson(pair.seq_one, pair.seq_zero);
        if (!std::isnan(r) && std::abs(r) <= kPnCorrelationBound)
            return pair;
    }
    throw Error("no weakly correlated pseudo-noise pair found within " + std::to_string(kPnRetryCap) +
                " regenerations (length " + std::to_string(length) + ")");
}

} // namespace curvemark
