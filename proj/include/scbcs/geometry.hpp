// Overlapping block tiling and the inside/border pixel bookkeeping.
//
// A grid with interior step `interior` and overlap ring `ring` tiles an image
// whose dimensions satisfy dim = g * interior + 2 * ring. Block (i, j) covers
// pixel rows [interior*i, interior*i + B) with B = interior + 2*ring, so
// adjacent blocks share a strip 2*ring pixels wide. Every pixel is owned by
// (inside) exactly one block: the interior core of each block, extended to the
// image frame for blocks on the image edge, which have no neighbor to own
// those ring pixels.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scbcs/errors.hpp"
#include "scbcs/image.hpp"

namespace scbcs {

struct BlockSpec {
    int block_row = 0;
    int block_col = 0;
    // Covered pixel ranges in image coordinates, half-open.
    int row_begin = 0, row_end = 0;
    int col_begin = 0, col_end = 0;
    // Inside (owned) rectangle in block-local coordinates, half-open.
    int in_row_begin = 0, in_row_end = 0;
    int in_col_begin = 0, in_col_end = 0;
    // Block-local raster indices (row-major, ascending).
    std::vector<int> inside_indices;
    std::vector<int> border_indices;
    std::optional<int> top, bottom, left, right;  // neighbor block ids

    int block_size() const { return row_end - row_begin; }
    int inside_rows() const { return in_row_end - in_row_begin; }
    int inside_cols() const { return in_col_end - in_col_begin; }
    int inside_count() const { return inside_rows() * inside_cols(); }
};

struct BlockGrid {
    int image_width = 0;
    int image_height = 0;
    int block_size = 0;  // B
    int interior = 0;    // stride between block origins
    int ring = 0;        // overlap ring width per side
    int grid_rows = 0;
    int grid_cols = 0;
    std::vector<BlockSpec> blocks;  // row-major

    int num_blocks() const { return grid_rows * grid_cols; }
    int block_id(int i, int j) const { return i * grid_cols + j; }
    const BlockSpec& block(int i, int j) const { return blocks[block_id(i, j)]; }
};

inline BlockGrid build_block_grid(int image_width, int image_height, int interior, int ring) {
    if (interior < 1 || ring < 0)
        throw InvalidShape("block grid needs interior >= 1 and ring >= 0");
    const int b = interior + 2 * ring;
    auto grid_count = [&](int dim, const char* name) {
        int span = dim - 2 * ring;
        if (span < interior || span % interior != 0)
            throw DimensionMismatch(std::string("image ") + name + " " + std::to_string(dim) +
                                    " does not satisfy dim = g*" + std::to_string(interior) +
                                    " + 2*" + std::to_string(ring));
        return span / interior;
    };
    const int gr = grid_count(image_height, "height");
    const int gc = grid_count(image_width, "width");

    BlockGrid grid;
    grid.image_width = image_width;
    grid.image_height = image_height;
    grid.block_size = b;
    grid.interior = interior;
    grid.ring = ring;
    grid.grid_rows = gr;
    grid.grid_cols = gc;
    grid.blocks.resize(static_cast<size_t>(gr) * gc);

    for (int i = 0; i < gr; ++i) {
        for (int j = 0; j < gc; ++j) {
            BlockSpec& s = grid.blocks[grid.block_id(i, j)];
            s.block_row = i;
            s.block_col = j;
            s.row_begin = interior * i;
            s.row_end = s.row_begin + b;
            s.col_begin = interior * j;
            s.col_end = s.col_begin + b;
            // Edge blocks absorb the image-frame ring into their inside set.
            s.in_row_begin = (i == 0) ? 0 : ring;
            s.in_row_end = (i == gr - 1) ? b : b - ring;
            s.in_col_begin = (j == 0) ? 0 : ring;
            s.in_col_end = (j == gc - 1) ? b : b - ring;
            if (i > 0) s.top = grid.block_id(i - 1, j);
            if (i < gr - 1) s.bottom = grid.block_id(i + 1, j);
            if (j > 0) s.left = grid.block_id(i, j - 1);
            if (j < gc - 1) s.right = grid.block_id(i, j + 1);

            s.inside_indices.reserve(static_cast<size_t>(s.inside_count()));
            s.border_indices.reserve(static_cast<size_t>(b) * b - s.inside_count());
            for (int r = 0; r < b; ++r) {
                for (int c = 0; c < b; ++c) {
                    bool inside = r >= s.in_row_begin && r < s.in_row_end &&
                                  c >= s.in_col_begin && c < s.in_col_end;
                    (inside ? s.inside_indices : s.border_indices).push_back(r * b + c);
                }
            }
        }
    }
    return grid;
}

// Block pixels in row-major raster order (the stacked columns of the
// transposed block equal this scan).
inline std::vector<double> extract_block(const Image& img, const BlockSpec& spec) {
    if (spec.row_begin < 0 || spec.col_begin < 0 || spec.row_end > img.height ||
        spec.col_end > img.width)
        throw OutOfBounds("block range exceeds image bounds");
    std::vector<double> out;
    out.reserve(static_cast<size_t>(spec.block_size()) * spec.block_size());
    for (int r = spec.row_begin; r < spec.row_end; ++r)
        for (int c = spec.col_begin; c < spec.col_end; ++c)
            out.push_back(img.at(r, c));
    return out;
}

// Mosaics per-block inside-region pixels back into a full image. Each entry of
// `inside_pixels` holds one block's owned pixels in inside_indices order; an
// empty entry marks a missing reconstruction. Output is clipped to [0, 255].
inline Image assemble_image(const BlockGrid& grid,
                            const std::vector<std::vector<double>>& inside_pixels) {
    if (static_cast<int>(inside_pixels.size()) != grid.num_blocks())
        throw MissingBlock("expected " + std::to_string(grid.num_blocks()) +
                           " block reconstructions, got " + std::to_string(inside_pixels.size()));
    Image out(grid.image_width, grid.image_height);
    const int b = grid.block_size;
    for (int id = 0; id < grid.num_blocks(); ++id) {
        const BlockSpec& s = grid.blocks[id];
        const std::vector<double>& px = inside_pixels[id];
        if (px.empty()) throw MissingBlock("block " + std::to_string(id) + " reconstruction absent");
        if (px.size() != s.inside_indices.size())
            throw DimensionMismatch("block " + std::to_string(id) + " pixel count mismatch");
        for (size_t k = 0; k < px.size(); ++k) {
            int local = s.inside_indices[k];
            int r = s.row_begin + local / b;
            int c = s.col_begin + local % b;
            out.at(r, c) = px[k];
        }
    }
    clip_to_range(out);
    return out;
}

}  // namespace scbcs
