#pragma once

#include <array>

#include "mspad/dataset.hpp"
#include "mspad/dwt.hpp"
#include "mspad/types.hpp"

namespace mspad {

// Per-band weights for wavelet-domain averaging fusion. Non-negative, sum 1.
struct FusionWeights {
    std::array<double, kNumBands> w;

    static FusionWeights uniform();
    void validate() const;  // throws std::invalid_argument
};

// Decompose every band, sum the seven coefficient blocks with the band
// weights, invert. Unclamped variant exposed for linearity checks; fuse_cube
// clamps the reconstruction to [0,1].
Image fuse_cube_raw(const SpectralCube& cube, const FusionWeights& weights);
Image fuse_cube(const SpectralCube& cube, const FusionWeights& weights);

}  // namespace mspad
