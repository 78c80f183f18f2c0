#pragma once

#include <array>

#include "mspad/image.hpp"

namespace mspad {

// L1-normalized 256-bin LBP code histogram.
struct FeatureVector {
    std::array<double, 256> hist{};
    bool normalized = false;
};

// 3x3 LBP over interior pixels. Bit i is set iff neighbor_i >= center, with
// neighbors ordered clockwise from the top-left:
//   bit 7: (-1,-1)  bit 6: (-1, 0)  bit 5: (-1,+1)  bit 4: ( 0,+1)
//   bit 3: (+1,+1)  bit 2: (+1, 0)  bit 1: (+1,-1)  bit 0: ( 0,-1)
// Borders are excluded; the histogram is divided by (H-2)(W-2).
FeatureVector lbp_histogram(const Image& image);

}  // namespace mspad
