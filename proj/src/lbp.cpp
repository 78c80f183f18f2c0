#include "mspad/lbp.hpp"

#include <stdexcept>

namespace mspad {

FeatureVector lbp_histogram(const Image& image) {
    if (image.rows < 3 || image.cols < 3) throw std::invalid_argument("lbp_histogram needs at least a 3x3 image");

    // Offsets in bit order 7..0, clockwise from top-left.
    static constexpr int dr[8] = {-1, -1, -1, 0, 1, 1, 1, 0};
    static constexpr int dc[8] = {-1, 0, 1, 1, 1, 0, -1, -1};

    FeatureVector fv;
    for (int r = 1; r < image.rows - 1; ++r) {
        for (int c = 1; c < image.cols - 1; ++c) {
            const double center = image.at(r, c);
            unsigned code = 0;
            for (int k = 0; k < 8; ++k) {
                code <<= 1;
                if (image.at(r + dr[k], c + dc[k]) >= center) code |= 1u;
            }
            fv.hist[code] += 1.0;
        }
    }
    const double n = static_cast<double>(image.rows - 2) * (image.cols - 2);
    for (double& x : fv.hist) x /= n;
    fv.normalized = true;
    return fv;
}

}  // namespace mspad
