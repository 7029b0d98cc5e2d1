// Fast low-resolution previews, block upsampling, preview merging and the
// border smoothness radii estimated from preview disagreement.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <vector>

#include "scbcs/errors.hpp"
#include "scbcs/geometry.hpp"
#include "scbcs/hadamard.hpp"
#include "scbcs/image.hpp"

namespace scbcs {

struct BlockPreview {
    int block_id = 0;
    Eigen::MatrixXd lowres;     // sqrt(M) x sqrt(M) patch-mean estimates
    Eigen::MatrixXd upsampled;  // B x B
};

// Per-block RMS preview disagreement with each existing neighbor, measured
// over the shared overlap strip.
struct SideDisagreement {
    std::optional<double> top, bottom, left, right;
};

struct PreviewImage {
    Image pixels;  // merged full-image preview, real-valued
    std::vector<SideDisagreement> sides;  // one entry per block
};

// Per-block smoothness radii toward each existing neighbor.
struct EpsilonSet {
    std::vector<SideDisagreement> radii;  // reuse the per-side optional layout
};

// Inverse-Hadamard preview of one measurement vector, reshaped row-major into
// sqrt(M) x sqrt(M). H is symmetric, so H^-1 y = fwht(y) / M.
inline Eigen::MatrixXd block_preview(const Eigen::VectorXd& y) {
    const int m = static_cast<int>(y.size());
    if (!is_power_of_two(m)) throw InvalidLength("measurement count must be a power of 2");
    const int side = integer_sqrt(m);
    if (side * side != m) throw InvalidLength("measurement count must be a perfect square");
    Eigen::VectorXd t = fwht(y) / static_cast<double>(m);
    Eigen::MatrixXd lowres(side, side);
    for (int r = 0; r < side; ++r)
        for (int c = 0; c < side; ++c) lowres(r, c) = t(r * side + c);
    return lowres;
}

// Bilinear interpolation to full block size, treating lowres sample (a, b) as
// located at the center of its patch: pixel (a*p + (p-1)/2, b*p + (p-1)/2).
// Pixels beyond the outermost centers clamp to the nearest sample row/column.
inline Eigen::MatrixXd upsample_preview(const Eigen::MatrixXd& lowres, int block_size) {
    const int side = static_cast<int>(lowres.rows());
    if (side < 1 || lowres.cols() != side) throw InvalidShape("lowres preview must be square");
    if (block_size % side != 0)
        throw InvalidShape("block side must be a multiple of the preview side");
    const int p = block_size / side;
    const double offset = (p - 1) / 2.0;
    Eigen::MatrixXd up(block_size, block_size);
    auto sample_coord = [&](int pixel) {
        double u = (pixel - offset) / p;
        return std::clamp(u, 0.0, static_cast<double>(side - 1));
    };
    for (int r = 0; r < block_size; ++r) {
        double ur = sample_coord(r);
        int r0 = static_cast<int>(ur);
        int r1 = std::min(r0 + 1, side - 1);
        double fr = ur - r0;
        for (int c = 0; c < block_size; ++c) {
            double uc = sample_coord(c);
            int c0 = static_cast<int>(uc);
            int c1 = std::min(c0 + 1, side - 1);
            double fc = uc - c0;
            up(r, c) = (1 - fr) * ((1 - fc) * lowres(r0, c0) + fc * lowres(r0, c1)) +
                       fr * ((1 - fc) * lowres(r1, c0) + fc * lowres(r1, c1));
        }
    }
    return up;
}

// Averages the overlapping upsampled block previews into one full-resolution
// image and records, per block side, the RMS disagreement between the two
// covering previews over the shared strip.
inline PreviewImage merge_previews(const BlockGrid& grid,
                                   const std::vector<Eigen::MatrixXd>& upsampled) {
    if (static_cast<int>(upsampled.size()) != grid.num_blocks())
        throw MissingBlock("expected one preview per block");
    for (int id = 0; id < grid.num_blocks(); ++id)
        if (upsampled[id].rows() != grid.block_size || upsampled[id].cols() != grid.block_size)
            throw MissingBlock("preview for block " + std::to_string(id) + " missing or misshapen");

    PreviewImage out;
    out.pixels = Image(grid.image_width, grid.image_height);
    std::vector<int> cover(out.pixels.size(), 0);
    for (int id = 0; id < grid.num_blocks(); ++id) {
        const BlockSpec& s = grid.blocks[id];
        for (int r = s.row_begin; r < s.row_end; ++r)
            for (int c = s.col_begin; c < s.col_end; ++c) {
                out.pixels.at(r, c) += upsampled[id](r - s.row_begin, c - s.col_begin);
                ++cover[static_cast<size_t>(r) * grid.image_width + c];
            }
    }
    for (size_t i = 0; i < out.pixels.size(); ++i) out.pixels.data[i] /= cover[i];

    out.sides.resize(static_cast<size_t>(grid.num_blocks()));
    auto strip_rms = [&](const BlockSpec& a, const BlockSpec& b) {
        int r0 = std::max(a.row_begin, b.row_begin);
        int r1 = std::min(a.row_end, b.row_end);
        int c0 = std::max(a.col_begin, b.col_begin);
        int c1 = std::min(a.col_end, b.col_end);
        double acc = 0.0;
        int count = 0;
        for (int r = r0; r < r1; ++r)
            for (int c = c0; c < c1; ++c) {
                double va = upsampled[grid.block_id(a.block_row, a.block_col)](r - a.row_begin,
                                                                               c - a.col_begin);
                double vb = upsampled[grid.block_id(b.block_row, b.block_col)](r - b.row_begin,
                                                                               c - b.col_begin);
                acc += (va - vb) * (va - vb);
                ++count;
            }
        return count > 0 ? std::sqrt(acc / count) : 0.0;
    };
    for (int i = 0; i < grid.grid_rows; ++i) {
        for (int j = 0; j < grid.grid_cols; ++j) {
            const BlockSpec& s = grid.block(i, j);
            if (s.right) {
                double rms = strip_rms(s, grid.blocks[*s.right]);
                out.sides[grid.block_id(i, j)].right = rms;
                out.sides[*s.right].left = rms;
            }
            if (s.bottom) {
                double rms = strip_rms(s, grid.blocks[*s.bottom]);
                out.sides[grid.block_id(i, j)].bottom = rms;
                out.sides[*s.bottom].top = rms;
            }
        }
    }
    return out;
}

// Smoothness radius per existing side: eps = alpha * sqrt(L) * max(s, floor),
// L the constrained segment length and s the recorded preview disagreement.
inline EpsilonSet estimate_border_epsilons(const BlockGrid& grid, const PreviewImage& preview,
                                           double alpha = 1.0, double s_floor = 1.0) {
    if (!(alpha > 0.0)) throw InvalidConfig("epsilon scale alpha must be positive");
    if (!(s_floor > 0.0)) throw InvalidConfig("epsilon floor must be positive");
    if (static_cast<int>(preview.sides.size()) != grid.num_blocks())
        throw MissingBlock("preview side statistics missing");
    EpsilonSet eps;
    eps.radii.resize(static_cast<size_t>(grid.num_blocks()));
    for (int id = 0; id < grid.num_blocks(); ++id) {
        const BlockSpec& s = grid.blocks[id];
        const SideDisagreement& d = preview.sides[id];
        auto radius = [&](const std::optional<double>& stat, int length) {
            return alpha * std::sqrt(static_cast<double>(length)) *
                   std::max(stat.value_or(0.0), s_floor);
        };
        if (s.top) eps.radii[id].top = radius(d.top, s.inside_cols());
        if (s.bottom) eps.radii[id].bottom = radius(d.bottom, s.inside_cols());
        if (s.left) eps.radii[id].left = radius(d.left, s.inside_rows());
        if (s.right) eps.radii[id].right = radius(d.right, s.inside_rows());
    }
    return eps;
}

}  // namespace scbcs
