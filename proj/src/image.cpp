#include "mspad/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mspad {

Image to_unit(const ImageU16& img) {
    Image out(img.rows, img.cols);
    for (size_t i = 0; i < img.data.size(); ++i) out.data[i] = img.data[i] / 65535.0;
    return out;
}

ImageU16 to_u16(const Image& img) {
    ImageU16 out(img.rows, img.cols);
    for (size_t i = 0; i < img.data.size(); ++i) {
        double v = std::clamp(img.data[i], 0.0, 1.0);
        out.data[i] = static_cast<uint16_t>(std::lround(v * 65535.0));
    }
    return out;
}

void write_pgm16(const std::filesystem::path& path, const ImageU16& img) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
    f << "P5\n" << img.cols << " " << img.rows << "\n65535\n";
    std::vector<unsigned char> buf(img.data.size() * 2);
    for (size_t i = 0; i < img.data.size(); ++i) {
        buf[2 * i] = static_cast<unsigned char>(img.data[i] >> 8);
        buf[2 * i + 1] = static_cast<unsigned char>(img.data[i] & 0xff);
    }
    f.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!f) throw std::runtime_error("write failed: " + path.string());
}

namespace {

int next_header_int(std::istream& in, const std::filesystem::path& path) {
    // Skips whitespace and '#' comment lines between header tokens.
    for (;;) {
        int c = in.peek();
        if (c == EOF) throw std::runtime_error("truncated PGM header: " + path.string());
        if (std::isspace(c)) {
            in.get();
        } else if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else {
            break;
        }
    }
    int v = 0;
    if (!(in >> v)) throw std::runtime_error("malformed PGM header: " + path.string());
    return v;
}

}  // namespace

ImageU16 read_pgm16(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open: " + path.string());
    char m0 = 0, m1 = 0;
    f.get(m0);
    f.get(m1);
    if (m0 != 'P' || m1 != '5') throw std::runtime_error("not a P5 PGM: " + path.string());
    int cols = next_header_int(f, path);
    int rows = next_header_int(f, path);
    int maxval = next_header_int(f, path);
    if (maxval != 65535) throw std::runtime_error("expected maxval 65535: " + path.string());
    if (cols <= 0 || rows <= 0) throw std::runtime_error("bad PGM dimensions: " + path.string());
    f.get();  // single whitespace separating header from raster
    ImageU16 img(rows, cols);
    std::vector<unsigned char> buf(img.data.size() * 2);
    f.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (f.gcount() != static_cast<std::streamsize>(buf.size()))
        throw std::runtime_error("truncated PGM raster: " + path.string());
    for (size_t i = 0; i < img.data.size(); ++i)
        img.data[i] = static_cast<uint16_t>((buf[2 * i] << 8) | buf[2 * i + 1]);
    return img;
}

}  // namespace mspad
