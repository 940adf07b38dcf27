#pragma once

#include "curvemark/image.hpp"

#include <complex>
#include <vector>

namespace curvemark {

using CPlane = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct CurveletParams
{
    int scales = 3;                  // including the coarse band and the finest (non-directional) band
    int angles_coarsest_detail = 16; // wedges at the coarsest directional scale
    bool real_input = true;          // store wedge pairs as sqrt(2)*Re / sqrt(2)*Im

    friend bool operator==(const CurveletParams&, const CurveletParams&) = default;
};

/// Coefficients of one block.
///
/// bands[s][w] holds wedge w of directional scale s, ordered coarse to fine.
/// With real_input the matrices are real-valued (zero imaginary part) and
/// wedge w + n/2 carries the imaginary half of wedge w.
struct CurveletPyramid
{
    Plane coarse;
    std::vector<std::vector<CPlane>> bands;
    Plane fine;
    CurveletParams params;
    int source_side = 0;

    /// Sum of squared coefficient magnitudes over all bands.
    double energy() const;
};

/// Wrapping-based fast discrete curvelet transform for square dyadic blocks.
///
/// Radial windows follow the standard wrapping construction (finest level
/// non-directional, lowpass/hipass pairs with sqrt(1 - l^2) complements), so a
/// 64x64 block with three scales has a 21x21 coarse band. Each directional
/// scale is split into wedges by a Meyer-type angular partition of unity;
/// every windowed wedge spectrum is wrapped around the origin into the
/// smallest rectangle that holds it without overlap and inverse-transformed.
/// The result is a Parseval tight frame and inverse() is its adjoint.
///
/// Instances are immutable after construction and safe to share across threads.
class CurveletTransform
{
public:
    explicit CurveletTransform(int side, CurveletParams params = {});

    /// Shared instance for (side, params), built on first use.
    static const CurveletTransform& cached(int side, const CurveletParams& params = {});

    int side() const { return side_; }
    const CurveletParams& params() const { return params_; }
    int coarse_side() const { return coarse_side_; }
    int wedge_count(int scale) const;

    CurveletPyramid forward(const Plane& block) const;
    Plane inverse(const CurveletPyramid& pyr) const;

    /// Coarse band only; identical to forward(block).coarse.
    Plane approx(const Plane& block) const;

private:
    struct Wedge
    {
        int rows = 0;
        int cols = 0;
        std::vector<int> region_index;
        std::vector<int> wrapped_index;
        std::vector<double> weight;
    };

    struct DetailLevel
    {
        int region_side = 0; // side of the spectrum this level splits
        int inner_side = 0;  // side of the lowpass handed to the next level
        std::vector<double> lowpass;
        std::vector<double> hipass;
        std::vector<Wedge> wedges;
    };

    void check_block(const Plane& block) const;
    void check_pyramid(const CurveletPyramid& pyr) const;
    CPlane wedge_forward(const Wedge& w, const CPlane& region) const;
    void wedge_adjoint(const Wedge& w, const CPlane& coeffs, CPlane& region) const;

    int side_ = 0;
    CurveletParams params_;
    int fine_region_side_ = 0;
    std::vector<double> fine_lowpass_;
    std::vector<double> fine_hipass_;
    std::vector<DetailLevel> levels_; // finest directional scale first
    int coarse_side_ = 0;
};

CurveletPyramid fdcut_forward(const Plane& block, const CurveletParams& params = {});
Plane fdcut_inverse(const CurveletPyramid& pyr);
Plane get_approx(const CurveletPyramid& pyr);
CurveletPyramid set_approx(CurveletPyramid pyr, const Plane& m);

} // namespace curvemark
