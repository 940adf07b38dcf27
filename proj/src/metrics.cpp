#include "curvemark/metrics.hpp"

#include "curvemark/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace curvemark {

namespace {

void check_lengths(const Watermark& w, const Watermark& w2)
{
    if (w.size() != w2.size() || w.size() == 0)
        throw ArgumentError("watermarks differ in length (" + std::to_string(w.size()) + " vs " +
                            std::to_string(w2.size()) + ")");
}

} // namespace

double psnr(const GrayImage& reference, const GrayImage& distorted)
{
    if (reference.empty() || reference.side() != distorted.side())
        throw ArgumentError("PSNR needs two non-empty images of the same size");
    const double mse = (reference.pixels() - distorted.pixels()).squaredNorm() /
                       static_cast<double>(reference.pixels().size());
    if (mse == 0.0)
        return std::numeric_limits<double>::infinity();
    const double peak = reference.pixels().cwiseAbs2().maxCoeff();
    return 10.0 * std::log10(peak / mse);
}

double nc(const Watermark& w, const Watermark& w2)
{
    check_lengths(w, w2);
    long sum = 0;
    for (int i = 0; i < w.size(); ++i)
        sum += (w[i] == w2[i]) ? 1 : -1;
    return static_cast<double>(sum) / w.size();
}

double ber(const Watermark& w, const Watermark& w2)
{
    check_lengths(w, w2);
    int wrong = 0;
    for (int i = 0; i < w.size(); ++i)
        wrong += w[i] != w2[i];
    return static_cast<double>(wrong) / w.size();
}

} // namespace curvemark
