// Grayscale image container plus binary PGM (P5, 8-bit) reader/writer.
#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "scbcs/errors.hpp"

namespace scbcs {

// Row-major grayscale image. Values are real during processing; nominal
// intensity range is [0, 255].
struct Image {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    Image() = default;
    Image(int w, int h, double fill = 0.0)
        : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {
        if (w < 1 || h < 1)
            throw DimensionMismatch("image dimensions must be at least 1x1");
    }

    double& at(int row, int col) { return data[static_cast<size_t>(row) * width + col]; }
    double at(int row, int col) const { return data[static_cast<size_t>(row) * width + col]; }
    size_t size() const { return data.size(); }
};

// Clamp to [0,255] then round half away from zero; the quantization applied
// when an image is written as 8-bit PGM.
inline uint8_t quantize_pixel(double v) {
    double c = std::clamp(v, 0.0, 255.0);
    return static_cast<uint8_t>(std::llround(c));
}

inline Image quantize_u8(const Image& img) {
    Image out(img.width, img.height);
    for (size_t i = 0; i < img.data.size(); ++i)
        out.data[i] = static_cast<double>(quantize_pixel(img.data[i]));
    return out;
}

inline void clip_to_range(Image& img, double lo = 0.0, double hi = 255.0) {
    for (double& v : img.data) v = std::clamp(v, lo, hi);
}

namespace detail {

inline int pgm_next_token(std::istream& in, std::string& tok) {
    tok.clear();
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    while (c != EOF && !std::isspace(c)) {
        tok.push_back(static_cast<char>(c));
        c = in.get();
    }
    return c;
}

}  // namespace detail

inline Image read_pgm(std::istream& in) {
    std::string tok;
    detail::pgm_next_token(in, tok);
    if (tok != "P5") throw IoError("not a binary PGM (P5) stream");
    detail::pgm_next_token(in, tok);
    int w = std::atoi(tok.c_str());
    detail::pgm_next_token(in, tok);
    int h = std::atoi(tok.c_str());
    detail::pgm_next_token(in, tok);
    int maxval = std::atoi(tok.c_str());
    if (w < 1 || h < 1) throw IoError("PGM has invalid dimensions");
    if (maxval < 1 || maxval > 255) throw IoError("only 8-bit PGM (maxval <= 255) is supported");
    // The token reader consumed the single whitespace byte after maxval.
    Image img(w, h);
    std::vector<uint8_t> raw(static_cast<size_t>(w) * h);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<size_t>(in.gcount()) != raw.size()) throw IoError("PGM pixel payload truncated");
    for (size_t i = 0; i < raw.size(); ++i) img.data[i] = static_cast<double>(raw[i]);
    return img;
}

inline Image read_pgm(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for reading");
    return read_pgm(f);
}

inline void write_pgm(std::ostream& out, const Image& img) {
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    std::vector<uint8_t> raw(img.data.size());
    for (size_t i = 0; i < img.data.size(); ++i) raw[i] = quantize_pixel(img.data[i]);
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!out) throw IoError("failed writing PGM payload");
}

inline void write_pgm(const std::string& path, const Image& img) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    write_pgm(f, img);
}

}  // namespace scbcs
