#include <catch2/catch_amalgamated.hpp>

#include "scbcs/geometry.hpp"

using namespace scbcs;

namespace {

// Independent ownership oracle for ring=1 grids: pixel row r belongs to the
// block row clamp(floor((r-1)/interior), 0, g-1); same for columns. Derived
// from first principles, no BlockGrid involved.
int oracle_owner_1d(int r, int interior, int g) {
    int i = (r - 1 >= 0) ? (r - 1) / interior : -1;
    return std::clamp(i, 0, g - 1);
}

Image ramp_image(int w, int h) {
    Image img(w, h);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) img.at(r, c) = std::fmod(0.37 * r + 0.61 * c, 255.0);
    return img;
}

}  // namespace

TEST_CASE("512x512 with interior 30 tiles into a 17x17 grid of 32x32 blocks") {
    BlockGrid grid = build_block_grid(512, 512, 30, 1);
    CHECK(grid.grid_rows == 17);
    CHECK(grid.grid_cols == 17);
    CHECK(grid.num_blocks() == 289);
    CHECK(grid.block_size == 32);
    for (const BlockSpec& s : grid.blocks) {
        CHECK(s.block_size() == 32);
        CHECK(s.inside_indices.size() + s.border_indices.size() == 1024);
    }
    // Interior blocks own the 30x30 core.
    CHECK(grid.block(8, 8).inside_count() == 900);
}

TEST_CASE("32x32 single-block grid owns every pixel and has no neighbors") {
    BlockGrid grid = build_block_grid(32, 32, 30, 1);
    REQUIRE(grid.num_blocks() == 1);
    const BlockSpec& s = grid.blocks[0];
    CHECK(s.inside_indices.size() == 1024);
    CHECK(s.border_indices.empty());
    CHECK_FALSE(s.top.has_value());
    CHECK_FALSE(s.bottom.has_value());
    CHECK_FALSE(s.left.has_value());
    CHECK_FALSE(s.right.has_value());
}

TEST_CASE("92x92 grid matches the exhaustive ownership oracle") {
    BlockGrid grid = build_block_grid(92, 92, 30, 1);
    REQUIRE(grid.grid_rows == 3);
    REQUIRE(grid.grid_cols == 3);

    // Oracle counts per block.
    std::vector<int> oracle_counts(9, 0);
    for (int r = 0; r < 92; ++r)
        for (int c = 0; c < 92; ++c) {
            int i = oracle_owner_1d(r, 30, 3);
            int j = oracle_owner_1d(c, 30, 3);
            ++oracle_counts[static_cast<size_t>(i * 3 + j)];
        }
    CHECK(oracle_counts[4] == 900);   // center
    CHECK(oracle_counts[0] == 961);   // corner
    CHECK(oracle_counts[1] == 930);   // edge, non-corner

    // The grid's inside sets must agree with the oracle pixel by pixel.
    std::vector<int> owner(92 * 92, -1);
    for (int id = 0; id < grid.num_blocks(); ++id) {
        const BlockSpec& s = grid.blocks[static_cast<size_t>(id)];
        for (int local : s.inside_indices) {
            int r = s.row_begin + local / 32;
            int c = s.col_begin + local % 32;
            REQUIRE(owner[static_cast<size_t>(r) * 92 + c] == -1);
            owner[static_cast<size_t>(r) * 92 + c] = id;
        }
    }
    for (int r = 0; r < 92; ++r)
        for (int c = 0; c < 92; ++c) {
            int expected = oracle_owner_1d(r, 30, 3) * 3 + oracle_owner_1d(c, 30, 3);
            REQUIRE(owner[static_cast<size_t>(r) * 92 + c] == expected);
        }
}

TEST_CASE("pixel ownership partitions the image and overlaps are 2 pixels wide") {
    struct Case {
        int w, h, interior, ring;
    } cases[] = {{32, 32, 30, 1}, {92, 92, 30, 1}, {152, 122, 30, 1}, {64, 64, 32, 0},
                 {512, 512, 30, 1}};
    for (const Case& tc : cases) {
        BlockGrid grid = build_block_grid(tc.w, tc.h, tc.interior, tc.ring);
        size_t total = 0;
        for (const BlockSpec& s : grid.blocks) total += s.inside_indices.size();
        CHECK(total == static_cast<size_t>(tc.w) * tc.h);
        for (const BlockSpec& s : grid.blocks) {
            if (s.right) {
                const BlockSpec& nb = grid.blocks[static_cast<size_t>(*s.right)];
                CHECK(s.col_end - nb.col_begin == 2 * tc.ring);
            }
            if (s.bottom) {
                const BlockSpec& nb = grid.blocks[static_cast<size_t>(*s.bottom)];
                CHECK(s.row_end - nb.row_begin == 2 * tc.ring);
            }
        }
    }
}

TEST_CASE("non-conforming dimensions are rejected") {
    CHECK_THROWS_AS(build_block_grid(91, 92, 30, 1), DimensionMismatch);
    CHECK_THROWS_AS(build_block_grid(92, 91, 30, 1), DimensionMismatch);
    CHECK_THROWS_AS(build_block_grid(30, 30, 30, 1), DimensionMismatch);
    CHECK_THROWS_AS(build_block_grid(0, 0, 30, 1), DimensionMismatch);
}

TEST_CASE("extract_block rasterizes row-major") {
    SECTION("constant image") {
        Image img(92, 92, 7.5);
        BlockGrid grid = build_block_grid(92, 92, 30, 1);
        std::vector<double> px = extract_block(img, grid.block(1, 1));
        REQUIRE(px.size() == 1024);
        for (double v : px) CHECK(v == 7.5);
    }
    SECTION("2x2 block") {
        Image img(2, 2);
        img.at(0, 0) = 1;
        img.at(0, 1) = 2;
        img.at(1, 0) = 3;
        img.at(1, 1) = 4;
        BlockGrid grid = build_block_grid(2, 2, 2, 0);
        std::vector<double> px = extract_block(img, grid.blocks[0]);
        CHECK(px == std::vector<double>{1, 2, 3, 4});
    }
    SECTION("out of bounds") {
        Image img(20, 20);
        BlockSpec bad;
        bad.row_begin = 0;
        bad.row_end = 32;
        bad.col_begin = 0;
        bad.col_end = 32;
        CHECK_THROWS_AS(extract_block(img, bad), OutOfBounds);
    }
}

TEST_CASE("extract/assemble round-trip is the identity on inside sets") {
    Image img = ramp_image(92, 92);
    BlockGrid grid = build_block_grid(92, 92, 30, 1);
    std::vector<std::vector<double>> inside(static_cast<size_t>(grid.num_blocks()));
    for (int id = 0; id < grid.num_blocks(); ++id) {
        const BlockSpec& s = grid.blocks[static_cast<size_t>(id)];
        std::vector<double> full = extract_block(img, s);
        for (int local : s.inside_indices) inside[static_cast<size_t>(id)].push_back(full[static_cast<size_t>(local)]);
    }
    Image out = assemble_image(grid, inside);
    REQUIRE(out.width == 92);
    REQUIRE(out.height == 92);
    for (size_t i = 0; i < out.data.size(); ++i) REQUIRE(out.data[i] == img.data[i]);
}

TEST_CASE("assemble_image rejects missing blocks and clips output") {
    BlockGrid grid = build_block_grid(32, 32, 30, 1);
    SECTION("missing reconstruction") {
        std::vector<std::vector<double>> px(1);
        CHECK_THROWS_AS(assemble_image(grid, px), MissingBlock);
        CHECK_THROWS_AS(assemble_image(grid, {}), MissingBlock);
    }
    SECTION("clipping") {
        std::vector<std::vector<double>> px(1, std::vector<double>(1024, 300.0));
        px[0][0] = -5.0;
        Image out = assemble_image(grid, px);
        CHECK(out.data[0] == 0.0);
        CHECK(out.data[1] == 255.0);
    }
    SECTION("single block grid passes pixels through") {
        std::vector<std::vector<double>> px(1);
        for (int i = 0; i < 1024; ++i) px[0].push_back(static_cast<double>(i % 200));
        Image out = assemble_image(grid, px);
        for (int i = 0; i < 1024; ++i) CHECK(out.data[static_cast<size_t>(i)] == px[0][static_cast<size_t>(i)]);
    }
}
