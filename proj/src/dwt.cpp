#include "mspad/dwt.hpp"

#include <cmath>
#include <stdexcept>

namespace mspad {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

void check_even(const Image& img) {
    if (img.rows <= 0 || img.cols <= 0 || img.rows % 2 != 0 || img.cols % 2 != 0)
        throw std::invalid_argument("dwt level requires positive even dimensions");
}

}  // namespace

void dwt2_level1(const Image& image, Image& ll, Image& h, Image& v, Image& d) {
    check_even(image);
    const int hr = image.rows / 2, hc = image.cols / 2;

    // Rows first: per row, lowpass into the left half, highpass into the right.
    Image tmp(image.rows, image.cols);
    for (int r = 0; r < image.rows; ++r) {
        for (int c = 0; c < hc; ++c) {
            const double a = image.at(r, 2 * c), b = image.at(r, 2 * c + 1);
            tmp.at(r, c) = (a + b) * kInvSqrt2;
            tmp.at(r, c + hc) = (a - b) * kInvSqrt2;
        }
    }

    ll = Image(hr, hc);
    h = Image(hr, hc);   // lowpass rows, highpass columns
    v = Image(hr, hc);   // highpass rows, lowpass columns
    d = Image(hr, hc);
    for (int c = 0; c < image.cols; ++c) {
        for (int r = 0; r < hr; ++r) {
            const double a = tmp.at(2 * r, c), b = tmp.at(2 * r + 1, c);
            const double lo = (a + b) * kInvSqrt2;
            const double hi = (a - b) * kInvSqrt2;
            if (c < hc) {
                ll.at(r, c) = lo;
                h.at(r, c) = hi;
            } else {
                v.at(r, c - hc) = lo;
                d.at(r, c - hc) = hi;
            }
        }
    }
}

Image idwt2_level1(const Image& ll, const Image& h, const Image& v, const Image& d) {
    const int hr = ll.rows, hc = ll.cols;
    if (h.rows != hr || h.cols != hc || v.rows != hr || v.cols != hc || d.rows != hr || d.cols != hc)
        throw std::invalid_argument("inconsistent detail block dimensions");

    Image tmp(2 * hr, 2 * hc);
    for (int c = 0; c < hc; ++c) {
        for (int r = 0; r < hr; ++r) {
            const double lo0 = ll.at(r, c), hi0 = h.at(r, c);
            tmp.at(2 * r, c) = (lo0 + hi0) * kInvSqrt2;
            tmp.at(2 * r + 1, c) = (lo0 - hi0) * kInvSqrt2;
            const double lo1 = v.at(r, c), hi1 = d.at(r, c);
            tmp.at(2 * r, c + hc) = (lo1 + hi1) * kInvSqrt2;
            tmp.at(2 * r + 1, c + hc) = (lo1 - hi1) * kInvSqrt2;
        }
    }
    Image out(2 * hr, 2 * hc);
    for (int r = 0; r < out.rows; ++r) {
        for (int c = 0; c < hc; ++c) {
            const double a = tmp.at(r, c), b = tmp.at(r, c + hc);
            out.at(r, 2 * c) = (a + b) * kInvSqrt2;
            out.at(r, 2 * c + 1) = (a - b) * kInvSqrt2;
        }
    }
    return out;
}

WaveletCoeffs2 dwt2_level2(const Image& image) {
    if (image.rows % 4 != 0 || image.cols % 4 != 0 || image.rows == 0 || image.cols == 0)
        throw std::invalid_argument("dwt2_level2 requires dimensions divisible by 4");
    WaveletCoeffs2 c;
    c.orig_rows = image.rows;
    c.orig_cols = image.cols;
    Image ll1;
    dwt2_level1(image, ll1, c.h1, c.v1, c.d1);
    dwt2_level1(ll1, c.approx, c.h2, c.v2, c.d2);
    return c;
}

Image idwt2_level2(const WaveletCoeffs2& coeffs) {
    Image ll1 = idwt2_level1(coeffs.approx, coeffs.h2, coeffs.v2, coeffs.d2);
    Image out = idwt2_level1(ll1, coeffs.h1, coeffs.v1, coeffs.d1);
    if (out.rows != coeffs.orig_rows || out.cols != coeffs.orig_cols)
        throw std::invalid_argument("coefficient blocks inconsistent with original_size");
    return out;
}

double coeff_energy(const WaveletCoeffs2& coeffs) {
    double e = 0.0;
    for (const Image* blk : {&coeffs.approx, &coeffs.h1, &coeffs.v1, &coeffs.d1, &coeffs.h2, &coeffs.v2, &coeffs.d2})
        for (double x : blk->data) e += x * x;
    return e;
}

}  // namespace mspad
