#include "mspad/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mspad {

FusionWeights FusionWeights::uniform() {
    FusionWeights fw;
    fw.w.fill(1.0 / kNumBands);
    return fw;
}

void FusionWeights::validate() const {
    double sum = 0.0;
    for (double x : w) {
        if (!(x >= 0.0)) throw std::invalid_argument("fusion weights must be non-negative");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("fusion weights must sum to 1");
}

namespace {

void accumulate(Image& acc, const Image& src, double w) {
    for (size_t i = 0; i < acc.data.size(); ++i) acc.data[i] += w * src.data[i];
}

}  // namespace

Image fuse_cube_raw(const SpectralCube& cube, const FusionWeights& weights) {
    cube.validate();
    weights.validate();

    WaveletCoeffs2 fused;
    bool first = true;
    // Accumulate in band-index order for bitwise determinism.
    for (int b = 0; b < kNumBands; ++b) {
        WaveletCoeffs2 c = dwt2_level2(cube.band_unit(b));
        const double wb = weights.w[static_cast<size_t>(b)];
        if (first) {
            fused = c;
            for (Image* blk : {&fused.approx, &fused.h1, &fused.v1, &fused.d1, &fused.h2, &fused.v2, &fused.d2})
                for (double& x : blk->data) x *= wb;
            first = false;
        } else {
            accumulate(fused.approx, c.approx, wb);
            accumulate(fused.h1, c.h1, wb);
            accumulate(fused.v1, c.v1, wb);
            accumulate(fused.d1, c.d1, wb);
            accumulate(fused.h2, c.h2, wb);
            accumulate(fused.v2, c.v2, wb);
            accumulate(fused.d2, c.d2, wb);
        }
    }
    return idwt2_level2(fused);
}

Image fuse_cube(const SpectralCube& cube, const FusionWeights& weights) {
    Image out = fuse_cube_raw(cube, weights);
    for (double& x : out.data) x = std::clamp(x, 0.0, 1.0);
    return out;
}

}  // namespace mspad
