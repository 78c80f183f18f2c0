#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace mspad {

// Row-major matrix of doubles. Pixel images use the [0,1] range by
// convention once they enter the numeric pipeline.
struct Image {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Image() = default;
    Image(int r, int c, double fill = 0.0) : rows(r), cols(c), data(static_cast<size_t>(r) * c, fill) {}

    double& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }
    size_t size() const { return data.size(); }
};

// 16-bit grayscale image as stored on disk.
struct ImageU16 {
    int rows = 0;
    int cols = 0;
    std::vector<uint16_t> data;

    ImageU16() = default;
    ImageU16(int r, int c, uint16_t fill = 0) : rows(r), cols(c), data(static_cast<size_t>(r) * c, fill) {}

    uint16_t& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
    uint16_t at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }

    bool operator==(const ImageU16&) const = default;
};

// Scale to [0,1] by dividing by 65535.
Image to_unit(const ImageU16& img);

// Quantize a [0,1] image back to 16-bit (values clamped).
ImageU16 to_u16(const Image& img);

// Binary PGM (P5), maxval 65535, big-endian sample order.
void write_pgm16(const std::filesystem::path& path, const ImageU16& img);
ImageU16 read_pgm16(const std::filesystem::path& path);

}  // namespace mspad
