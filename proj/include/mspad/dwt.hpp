#pragma once

#include <string>

#include "mspad/image.hpp"

namespace mspad {

// 2-level separable Haar decomposition. Seven blocks: one approximation at
// quarter resolution plus horizontal/vertical/diagonal details at each level.
// Filters are l2-orthonormal (+-1/sqrt(2)), so the transform preserves energy
// and inverts exactly.
struct WaveletCoeffs2 {
    Image approx;         // H/4 x W/4
    Image h1, v1, d1;     // level-1 details, H/2 x W/2
    Image h2, v2, d2;     // level-2 details, H/4 x W/4
    int orig_rows = 0;
    int orig_cols = 0;
    std::string family = "haar";
};

// Single-level building blocks, exposed for tests.
void dwt2_level1(const Image& image, Image& ll, Image& h, Image& v, Image& d);
Image idwt2_level1(const Image& ll, const Image& h, const Image& v, const Image& d);

WaveletCoeffs2 dwt2_level2(const Image& image);  // throws if dims not divisible by 4
Image idwt2_level2(const WaveletCoeffs2& coeffs);

double coeff_energy(const WaveletCoeffs2& coeffs);

}  // namespace mspad
