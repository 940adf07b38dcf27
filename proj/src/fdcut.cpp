#include "curvemark/fdcut.hpp"

#include "curvemark/error.hpp"
#include "fft.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>

namespace curvemark {

namespace {

struct MeyerPair
{
    double rising;
    double falling;
};

// Smooth complementary pair on [0, 1]: rising^2 + falling^2 == 1.
MeyerPair meyer_window(double x)
{
    if (std::abs(x) < 0x1p-52)
        x = 0.0;
    double rising = 0.0;
    double falling = 0.0;
    if (x > 0.0 && x < 1.0) {
        falling = std::exp(1.0 - 1.0 / (1.0 - std::exp(1.0 - 1.0 / x)));
        rising = std::exp(1.0 - 1.0 / (1.0 - std::exp(1.0 - 1.0 / (1.0 - x))));
    }
    if (x <= 0.0)
        falling = 1.0;
    if (x >= 1.0)
        rising = 1.0;
    const double norm = std::sqrt(rising * rising + falling * falling);
    return {rising / norm, falling / norm};
}

// Length 2*floor(2m)+1 profile: rising edge, flat top of 2*floor(m)+1, falling edge.
std::vector<double> lowpass_profile(double m)
{
    const int outer = static_cast<int>(std::floor(2.0 * m));
    const int inner = static_cast<int>(std::floor(m));
    const int transition = outer - inner - 1;
    if (transition < 1)
        throw ArgumentError("too many curvelet scales for this block size");
    std::vector<double> profile;
    profile.reserve(static_cast<std::size_t>(2 * outer + 1));
    for (int i = 0; i <= transition; ++i)
        profile.push_back(meyer_window(static_cast<double>(i) / transition).rising);
    profile.insert(profile.end(), static_cast<std::size_t>(2 * inner + 1), 1.0);
    for (int i = 0; i <= transition; ++i)
        profile.push_back(meyer_window(static_cast<double>(i) / transition).falling);
    return profile;
}

void separable_pair(const std::vector<double>& profile, std::vector<double>& low, std::vector<double>& high)
{
    const std::size_t n = profile.size();
    low.resize(n * n);
    high.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double l = profile[i] * profile[j];
            low[i * n + j] = l;
            high[i * n + j] = std::sqrt(std::max(0.0, 1.0 - l * l));
        }
    }
}

// Unitary DFT with the origin at index floor(size / 2) on both the spatial
// and the frequency side.
CPlane centered_dft(const CPlane& x, bool inverse)
{
    const int rows = static_cast<int>(x.rows());
    const int cols = static_cast<int>(x.cols());
    const int cr = rows / 2;
    const int cc = cols / 2;
    CPlane a(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            a(i, j) = x((i + cr) % rows, (j + cc) % cols);
    detail::fft2_inplace(a.data(), rows, cols, inverse);
    const double scale = 1.0 / std::sqrt(static_cast<double>(rows) * cols);
    CPlane out(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            out(i, j) = a((i - cr + rows) % rows, (j - cc + cols) % cols) * scale;
    return out;
}

// Offset that aligns the origin of a centered inner grid with the outer one.
int center_offset(int outer, int inner)
{
    return outer / 2 - inner / 2;
}

void multiply_center(CPlane& spectrum, const std::vector<double>& mask, int mask_side)
{
    const int offset = center_offset(static_cast<int>(spectrum.rows()), mask_side);
    for (int i = 0; i < mask_side; ++i)
        for (int j = 0; j < mask_side; ++j)
            spectrum(offset + i, offset + j) *= mask[static_cast<std::size_t>(i) * mask_side + j];
}

CPlane crop_center(const CPlane& spectrum, int side)
{
    const int offset = center_offset(static_cast<int>(spectrum.rows()), side);
    return spectrum.block(offset, offset, side, side);
}

// Position along the boundary of the unit square, in [0, 8), continuous
// except at the origin (which is never inside a wedge support).
double square_angle(int k1, int k2)
{
    const int m = std::max(std::abs(k1), std::abs(k2));
    const double u = static_cast<double>(k1) / m;
    const double v = static_cast<double>(k2) / m;
    if (k1 == m)
        return 1.0 + v;
    if (k2 == m)
        return 3.0 - u;
    if (k1 == -m)
        return 5.0 - v;
    return 7.0 + u;
}

double angular_weight(int wedge, int angles, double s)
{
    const double step = 8.0 / angles;
    double d = s - wedge * step;
    if (d >= 4.0)
        d -= 8.0;
    else if (d < -4.0)
        d += 8.0;
    return meyer_window((d + step / 2.0) / step).rising * meyer_window((d - step / 2.0) / step).falling;
}

bool is_power_of_two(int n)
{
    return n > 0 && (n & (n - 1)) == 0;
}

} // namespace

double CurveletPyramid::energy() const
{
    double e = coarse.squaredNorm() + fine.squaredNorm();
    for (const auto& scale : bands)
        for (const auto& wedge : scale)
            e += wedge.squaredNorm();
    return e;
}

CurveletTransform::CurveletTransform(int side, CurveletParams params) : side_(side), params_(params)
{
    if (!is_power_of_two(side) || side < 8)
        throw ArgumentError("curvelet block side must be a power of two >= 8, got " + std::to_string(side));
    if (params_.scales < 2)
        throw ArgumentError("curvelet transform needs at least 2 scales");
    if (params_.angles_coarsest_detail < 4 || params_.angles_coarsest_detail % 4 != 0)
        throw ArgumentError("angles at the coarsest directional scale must be a positive multiple of 4");

    double m = side / 3.0 / 2.0;
    const std::vector<double> fine_profile = lowpass_profile(m);
    fine_region_side_ = static_cast<int>(fine_profile.size());
    separable_pair(fine_profile, fine_lowpass_, fine_hipass_);

    const std::vector<double>* outer_low = &fine_lowpass_;
    int region_side = fine_region_side_;
    // Directional scales j = scales-1 .. 2 (1 is coarse, `scales` is the finest band).
    for (int j = params_.scales - 1; j >= 2; --j) {
        m /= 2.0;
        DetailLevel level;
        level.region_side = region_side;
        const std::vector<double> profile = lowpass_profile(m);
        level.inner_side = static_cast<int>(profile.size());
        separable_pair(profile, level.lowpass, level.hipass);

        const int angles = params_.angles_coarsest_detail * (1 << ((j - 2 + 1) / 2));
        const int half = region_side / 2;
        const int offset = center_offset(region_side, level.inner_side);
        std::vector<double> radial(*outer_low);
        for (int i = 0; i < level.inner_side; ++i)
            for (int k = 0; k < level.inner_side; ++k)
                radial[static_cast<std::size_t>(i + offset) * region_side + (k + offset)] *=
                    level.hipass[static_cast<std::size_t>(i) * level.inner_side + k];

        for (int w = 0; w < angles; ++w) {
            struct Point
            {
                int k1, k2, index;
                double weight;
            };
            std::vector<Point> points;
            for (int i = 0; i < region_side; ++i) {
                for (int k = 0; k < region_side; ++k) {
                    const int index = i * region_side + k;
                    if (radial[static_cast<std::size_t>(index)] == 0.0)
                        continue;
                    const int k1 = i - half;
                    const int k2 = k - half;
                    // The second half of the wedges is the point reflection of the first.
                    const double weight = w < angles / 2
                                              ? angular_weight(w, angles, square_angle(k1, k2))
                                              : angular_weight(w - angles / 2, angles, square_angle(-k1, -k2));
                    if (weight != 0.0)
                        points.push_back({k1, k2, index, weight});
                }
            }

            // Smallest wrap rectangle: one axis spans the full extent, the
            // other the widest cross-section along it.
            std::map<int, std::pair<int, int>> by_row;
            std::map<int, std::pair<int, int>> by_col;
            for (const Point& p : points) {
                auto [r, inserted_r] = by_row.try_emplace(p.k1, p.k2, p.k2);
                r->second = {std::min(r->second.first, p.k2), std::max(r->second.second, p.k2)};
                auto [c, inserted_c] = by_col.try_emplace(p.k2, p.k1, p.k1);
                c->second = {std::min(c->second.first, p.k1), std::max(c->second.second, p.k1)};
            }
            int widest_row = 0;
            for (const auto& [k, range] : by_row)
                widest_row = std::max(widest_row, range.second - range.first + 1);
            int widest_col = 0;
            for (const auto& [k, range] : by_col)
                widest_col = std::max(widest_col, range.second - range.first + 1);
            const int row_extent = by_row.rbegin()->first - by_row.begin()->first + 1;
            const int col_extent = by_col.rbegin()->first - by_col.begin()->first + 1;

            Wedge wedge;
            if (row_extent * widest_row <= widest_col * col_extent) {
                wedge.rows = row_extent;
                wedge.cols = widest_row;
            } else {
                wedge.rows = widest_col;
                wedge.cols = col_extent;
            }
            for (const Point& p : points) {
                const int r = ((p.k1 % wedge.rows) + wedge.rows) % wedge.rows;
                const int c = ((p.k2 % wedge.cols) + wedge.cols) % wedge.cols;
                wedge.region_index.push_back(p.index);
                wedge.wrapped_index.push_back(r * wedge.cols + c);
                wedge.weight.push_back(p.weight);
            }
            level.wedges.push_back(std::move(wedge));
        }
        levels_.push_back(std::move(level));
        outer_low = &levels_.back().lowpass;
        region_side = levels_.back().inner_side;
    }
    coarse_side_ = region_side;
}

const CurveletTransform& CurveletTransform::cached(int side, const CurveletParams& params)
{
    static std::mutex mutex;
    static std::map<std::tuple<int, int, int, bool>, std::unique_ptr<CurveletTransform>> plans;
    const auto key = std::make_tuple(side, params.scales, params.angles_coarsest_detail, params.real_input);
    std::lock_guard<std::mutex> lock(mutex);
    auto it = plans.find(key);
    if (it == plans.end())
        it = plans.emplace(key, std::make_unique<CurveletTransform>(side, params)).first;
    return *it->second;
}

int CurveletTransform::wedge_count(int scale) const
{
    const int n = static_cast<int>(levels_.size());
    if (scale < 0 || scale >= n)
        throw ArgumentError("directional scale index out of range");
    return static_cast<int>(levels_[static_cast<std::size_t>(n - 1 - scale)].wedges.size());
}

void CurveletTransform::check_block(const Plane& block) const
{
    if (block.rows() != side_ || block.cols() != side_)
        throw ArgumentError("curvelet transform expects a " + std::to_string(side_) + "x" + std::to_string(side_) +
                            " block, got " + std::to_string(block.rows()) + "x" + std::to_string(block.cols()));
}

void CurveletTransform::check_pyramid(const CurveletPyramid& pyr) const
{
    auto fail = [](const std::string& what) { throw ArgumentError("inconsistent curvelet pyramid: " + what); };
    if (pyr.source_side != side_ || !(pyr.params == params_))
        fail("parameters do not match the transform");
    if (pyr.coarse.rows() != coarse_side_ || pyr.coarse.cols() != coarse_side_)
        fail("coarse band size");
    if (pyr.fine.rows() != side_ || pyr.fine.cols() != side_)
        fail("fine band size");
    if (pyr.bands.size() != levels_.size())
        fail("number of directional scales");
    for (std::size_t s = 0; s < levels_.size(); ++s) {
        const DetailLevel& level = levels_[levels_.size() - 1 - s];
        if (pyr.bands[s].size() != level.wedges.size())
            fail("wedge count at scale " + std::to_string(s));
        for (std::size_t w = 0; w < level.wedges.size(); ++w)
            if (pyr.bands[s][w].rows() != level.wedges[w].rows || pyr.bands[s][w].cols() != level.wedges[w].cols)
                fail("wedge size at scale " + std::to_string(s));
    }
}

CPlane CurveletTransform::wedge_forward(const Wedge& w, const CPlane& region) const
{
    CPlane wrapped = CPlane::Zero(w.rows, w.cols);
    for (std::size_t i = 0; i < w.weight.size(); ++i)
        wrapped.data()[w.wrapped_index[i]] = region.data()[w.region_index[i]] * w.weight[i];
    detail::fft2_inplace(wrapped.data(), w.rows, w.cols, true);
    wrapped *= 1.0 / std::sqrt(static_cast<double>(w.rows) * w.cols);
    return wrapped;
}

void CurveletTransform::wedge_adjoint(const Wedge& w, const CPlane& coeffs, CPlane& region) const
{
    CPlane wrapped = coeffs;
    detail::fft2_inplace(wrapped.data(), w.rows, w.cols, false);
    wrapped *= 1.0 / std::sqrt(static_cast<double>(w.rows) * w.cols);
    for (std::size_t i = 0; i < w.weight.size(); ++i)
        region.data()[w.region_index[i]] += wrapped.data()[w.wrapped_index[i]] * w.weight[i];
}

CurveletPyramid CurveletTransform::forward(const Plane& block) const
{
    check_block(block);
    CurveletPyramid pyr;
    pyr.params = params_;
    pyr.source_side = side_;

    const CPlane spectrum = centered_dft(block.cast<std::complex<double>>(), false);
    CPlane high = spectrum;
    multiply_center(high, fine_hipass_, fine_region_side_);
    pyr.fine = centered_dft(high, true).real();

    CPlane low = crop_center(spectrum, fine_region_side_);
    multiply_center(low, fine_lowpass_, fine_region_side_);

    const double root2 = std::sqrt(2.0);
    pyr.bands.resize(levels_.size());
    for (std::size_t li = 0; li < levels_.size(); ++li) {
        const DetailLevel& level = levels_[li];
        CPlane region = low;
        low = crop_center(region, level.inner_side);
        multiply_center(region, level.hipass, level.inner_side);
        multiply_center(low, level.lowpass, level.inner_side);

        auto& out = pyr.bands[levels_.size() - 1 - li];
        const std::size_t angles = level.wedges.size();
        out.resize(angles);
        if (params_.real_input) {
            for (std::size_t w = 0; w < angles / 2; ++w) {
                const CPlane c = wedge_forward(level.wedges[w], region);
                out[w] = (root2 * c.real()).cast<std::complex<double>>();
                out[w + angles / 2] = (root2 * c.imag()).cast<std::complex<double>>();
            }
        } else {
            for (std::size_t w = 0; w < angles; ++w)
                out[w] = wedge_forward(level.wedges[w], region);
        }
    }
    pyr.coarse = centered_dft(low, true).real();
    return pyr;
}

Plane CurveletTransform::inverse(const CurveletPyramid& pyr) const
{
    check_pyramid(pyr);
    CPlane low = centered_dft(pyr.coarse.cast<std::complex<double>>(), false);

    const double root2 = std::sqrt(2.0);
    for (std::size_t li = levels_.size(); li-- > 0;) {
        const DetailLevel& level = levels_[li];
        const auto& in = pyr.bands[levels_.size() - 1 - li];
        const std::size_t angles = level.wedges.size();
        CPlane region = CPlane::Zero(level.region_side, level.region_side);
        if (params_.real_input) {
            for (std::size_t w = 0; w < angles / 2; ++w) {
                CPlane c(in[w].rows(), in[w].cols());
                c.real() = root2 * in[w].real();
                c.imag() = root2 * in[w + angles / 2].real();
                wedge_adjoint(level.wedges[w], c, region);
            }
        } else {
            for (std::size_t w = 0; w < angles; ++w)
                wedge_adjoint(level.wedges[w], in[w], region);
        }
        multiply_center(region, level.hipass, level.inner_side);
        multiply_center(low, level.lowpass, level.inner_side);
        const int offset = center_offset(level.region_side, level.inner_side);
        region.block(offset, offset, level.inner_side, level.inner_side) += low;
        low = std::move(region);
    }

    CPlane spectrum = centered_dft(pyr.fine.cast<std::complex<double>>(), false);
    multiply_center(spectrum, fine_hipass_, fine_region_side_);
    multiply_center(low, fine_lowpass_, fine_region_side_);
    const int offset = center_offset(side_, fine_region_side_);
    spectrum.block(offset, offset, fine_region_side_, fine_region_side_) += low;
    return centered_dft(spectrum, true).real();
}

Plane CurveletTransform::approx(const Plane& block) const
{
    check_block(block);
    const CPlane spectrum = centered_dft(block.cast<std::complex<double>>(), false);
    CPlane low = crop_center(spectrum, fine_region_side_);
    multiply_center(low, fine_lowpass_, fine_region_side_);
    for (const DetailLevel& level : levels_) {
        low = crop_center(low, level.inner_side);
        multiply_center(low, level.lowpass, level.inner_side);
    }
    return centered_dft(low, true).real();
}

CurveletPyramid fdcut_forward(const Plane& block, const CurveletParams& params)
{
    if (block.rows() != block.cols())
        throw ArgumentError("curvelet transform expects a square block");
    return CurveletTransform::cached(static_cast<int>(block.rows()), params).forward(block);
}

Plane fdcut_inverse(const CurveletPyramid& pyr)
{
    return CurveletTransform::cached(pyr.source_side, pyr.params).inverse(pyr);
}

Plane get_approx(const CurveletPyramid& pyr)
{
    return pyr.coarse;
}

CurveletPyramid set_approx(CurveletPyramid pyr, const Plane& m)
{
    if (m.rows() != pyr.coarse.rows() || m.cols() != pyr.coarse.cols())
        throw ArgumentError("approximation band must be " + std::to_string(pyr.coarse.rows()) + "x" +
                            std::to_string(pyr.coarse.cols()) + ", got " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()));
    pyr.coarse = m;
    return pyr;
}

} // namespace curvemark
