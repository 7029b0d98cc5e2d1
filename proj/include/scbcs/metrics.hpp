// PSNR and SSIM image quality metrics (peak 255).
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "scbcs/errors.hpp"
#include "scbcs/image.hpp"

namespace scbcs {

struct QualityReport {
    std::string image_id;
    std::string scheme;
    int m = 0;
    uint64_t seed = 0;
    double psnr_db = 0.0;
    double ssim = 0.0;
};

inline double psnr(const Image& reference, const Image& test) {
    if (reference.width != test.width || reference.height != test.height)
        throw DimensionMismatch("psnr inputs must have equal dimensions");
    double mse = 0.0;
    for (size_t i = 0; i < reference.data.size(); ++i) {
        double d = reference.data[i] - test.data[i];
        mse += d * d;
    }
    mse /= static_cast<double>(reference.data.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

namespace detail {

inline std::vector<double> ssim_window() {
    // 11-tap Gaussian, sigma 1.5, normalized.
    std::vector<double> w(11);
    double sum = 0.0;
    for (int i = 0; i < 11; ++i) {
        double d = i - 5.0;
        w[static_cast<size_t>(i)] = std::exp(-d * d / (2.0 * 1.5 * 1.5));
        sum += w[static_cast<size_t>(i)];
    }
    for (double& v : w) v /= sum;
    return w;
}

// Separable valid-region convolution with the 11-tap window: output is
// (h-10) x (w-10).
inline std::vector<double> ssim_filter(const std::vector<double>& img, int w, int h,
                                       const std::vector<double>& win, int& ow, int& oh) {
    const int k = static_cast<int>(win.size());
    ow = w - k + 1;
    oh = h - k + 1;
    std::vector<double> rows_done(static_cast<size_t>(ow) * h);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < ow; ++c) {
            double acc = 0.0;
            for (int t = 0; t < k; ++t) acc += win[static_cast<size_t>(t)] * img[static_cast<size_t>(r) * w + c + t];
            rows_done[static_cast<size_t>(r) * ow + c] = acc;
        }
    std::vector<double> out(static_cast<size_t>(ow) * oh);
    for (int r = 0; r < oh; ++r)
        for (int c = 0; c < ow; ++c) {
            double acc = 0.0;
            for (int t = 0; t < k; ++t) acc += win[static_cast<size_t>(t)] * rows_done[static_cast<size_t>(r + t) * ow + c];
            out[static_cast<size_t>(r) * ow + c] = acc;
        }
    return out;
}

}  // namespace detail

// Mean local SSIM with the reference defaults: 11x11 Gaussian window with
// sigma 1.5 applied valid-region, K1 = 0.01, K2 = 0.03, L = 255, population
// (weighted-moment) variances.
inline double ssim(const Image& reference, const Image& test) {
    if (reference.width != test.width || reference.height != test.height)
        throw DimensionMismatch("ssim inputs must have equal dimensions");
    if (reference.width < 11 || reference.height < 11)
        throw TooSmall("ssim needs images at least 11x11");

    const double c1 = (0.01 * 255.0) * (0.01 * 255.0);
    const double c2 = (0.03 * 255.0) * (0.03 * 255.0);
    const std::vector<double> win = detail::ssim_window();
    const int w = reference.width, h = reference.height;

    std::vector<double> xx(reference.data.size()), yy(reference.data.size()),
        xy(reference.data.size());
    for (size_t i = 0; i < reference.data.size(); ++i) {
        xx[i] = reference.data[i] * reference.data[i];
        yy[i] = test.data[i] * test.data[i];
        xy[i] = reference.data[i] * test.data[i];
    }
    int ow = 0, oh = 0;
    std::vector<double> mu_x = detail::ssim_filter(reference.data, w, h, win, ow, oh);
    std::vector<double> mu_y = detail::ssim_filter(test.data, w, h, win, ow, oh);
    std::vector<double> e_xx = detail::ssim_filter(xx, w, h, win, ow, oh);
    std::vector<double> e_yy = detail::ssim_filter(yy, w, h, win, ow, oh);
    std::vector<double> e_xy = detail::ssim_filter(xy, w, h, win, ow, oh);

    double acc = 0.0;
    for (size_t i = 0; i < mu_x.size(); ++i) {
        double var_x = e_xx[i] - mu_x[i] * mu_x[i];
        double var_y = e_yy[i] - mu_y[i] * mu_y[i];
        double cov = e_xy[i] - mu_x[i] * mu_y[i];
        double num = (2.0 * mu_x[i] * mu_y[i] + c1) * (2.0 * cov + c2);
        double den = (mu_x[i] * mu_x[i] + mu_y[i] * mu_y[i] + c1) * (var_x + var_y + c2);
        acc += num / den;
    }
    return acc / static_cast<double>(mu_x.size());
}

}  // namespace scbcs
