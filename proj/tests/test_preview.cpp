#include <catch2/catch_amalgamated.hpp>

#include "scbcs/preview.hpp"
#include "scbcs/rng.hpp"
#include "scbcs/sensing.hpp"

using namespace scbcs;

TEST_CASE("fwht equals the dense Hadamard multiply") {
    SECTION("unit vector spreads to ones") {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(16);
        e[0] = 1.0;
        Eigen::VectorXd out = fwht(e);
        for (int i = 0; i < 16; ++i) CHECK(out[i] == 1.0);
    }
    SECTION("all ones concentrates") {
        Eigen::VectorXd ones = Eigen::VectorXd::Ones(16);
        Eigen::VectorXd out = fwht(ones);
        CHECK(out[0] == 16.0);
        for (int i = 1; i < 16; ++i) CHECK(out[i] == 0.0);
    }
    SECTION("involution up to scale") {
        Rng rng(3);
        Eigen::VectorXd v(64);
        for (int i = 0; i < 64; ++i) v[i] = rng.gaussian();
        Eigen::VectorXd round = fwht(fwht(v)) / 64.0;
        CHECK((round - v).cwiseAbs().maxCoeff() <= 1e-12);
    }
    SECTION("dense agreement for M in {2,...,256}") {
        Rng rng(17);
        for (int m = 2; m <= 256; m *= 2) {
            Eigen::VectorXd v(m);
            for (int i = 0; i < m; ++i) v[i] = 255.0 * rng.uniform01() - 127.0;
            Eigen::VectorXd dense = hadamard(m) * v;
            CHECK((fwht(v) - dense).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, dense.cwiseAbs().maxCoeff()));
        }
    }
    SECTION("invalid length") {
        CHECK_THROWS_AS(fwht(Eigen::VectorXd::Zero(12)), InvalidLength);
    }
}

namespace {

Eigen::VectorXd patch_constant_block(int block_size, const Eigen::MatrixXd& means) {
    const int side = static_cast<int>(means.rows());
    const int p = block_size / side;
    Eigen::VectorXd x(block_size * block_size);
    for (int r = 0; r < block_size; ++r)
        for (int c = 0; c < block_size; ++c) x[r * block_size + c] = means(r / p, c / p);
    return x;
}

}  // namespace

TEST_CASE("block_preview recovers patch means") {
    SECTION("patch-constant block is recovered exactly") {
        SensingMatrix phi = build_dss_matrix(32, 64, 21);
        Eigen::MatrixXd means(8, 8);
        for (int r = 0; r < 8; ++r)
            for (int c = 0; c < 8; ++c) means(r, c) = 10.0 * r + 3.0 * c + 1.0;
        Eigen::VectorXd y = measure(phi, patch_constant_block(32, means));
        Eigen::MatrixXd lowres = block_preview(y);
        REQUIRE(lowres.rows() == 8);
        REQUIRE(lowres.cols() == 8);
        CHECK((lowres - means).cwiseAbs().maxCoeff() <= 1e-10);
    }
    SECTION("zero measurements give a zero preview") {
        Eigen::MatrixXd lowres = block_preview(Eigen::VectorXd::Zero(64));
        CHECK(lowres.cwiseAbs().maxCoeff() == 0.0);
    }
    SECTION("general block agrees with the dense oracle D x + H^-1 F x") {
        SensingMatrix phi = build_dss_matrix(32, 64, 5);
        Rng rng(9);
        Eigen::VectorXd x(1024);
        for (int i = 0; i < 1024; ++i) x[i] = 255.0 * rng.uniform01();
        Eigen::VectorXd y = measure(phi, x);
        Eigen::MatrixXd hinv = phi.hadamard_factor / 64.0;  // Sylvester H is symmetric
        Eigen::VectorXd oracle = phi.downsampler * x + hinv * (phi.residual * x);
        Eigen::MatrixXd lowres = block_preview(y);
        for (int r = 0; r < 8; ++r)
            for (int c = 0; c < 8; ++c)
                CHECK(lowres(r, c) == Catch::Approx(oracle[r * 8 + c]).margin(1e-9));
    }
    SECTION("non-square measurement count is rejected") {
        CHECK_THROWS_AS(block_preview(Eigen::VectorXd::Zero(128)), InvalidLength);
    }
}

TEST_CASE("upsample_preview interpolates bilinearly at patch centers") {
    SECTION("constants are preserved") {
        Eigen::MatrixXd lowres = Eigen::MatrixXd::Constant(4, 4, 42.0);
        Eigen::MatrixXd up = upsample_preview(lowres, 16);
        CHECK((up.array() - 42.0).abs().maxCoeff() <= 1e-12);
    }
    SECTION("2x2 [[0,2],[0,2]] to B=4") {
        // p = 2, sample centers at 0.5 and 2.5. Hand evaluation:
        //   col 0 -> clamp -> 0; col 1 -> 0 + 0.25*(2-0) = 0.5;
        //   col 2 -> 0 + 0.75*2 = 1.5; col 3 -> clamp -> 2. Rows identical.
        Eigen::MatrixXd lowres(2, 2);
        lowres << 0, 2, 0, 2;
        Eigen::MatrixXd up = upsample_preview(lowres, 4);
        for (int r = 0; r < 4; ++r) {
            CHECK(up(r, 0) == Catch::Approx(0.0).margin(1e-12));
            CHECK(up(r, 1) == Catch::Approx(0.5).margin(1e-12));
            CHECK(up(r, 2) == Catch::Approx(1.5).margin(1e-12));
            CHECK(up(r, 3) == Catch::Approx(2.0).margin(1e-12));
        }
    }
    SECTION("linear ramps are reproduced between sample centers") {
        Eigen::MatrixXd lowres(4, 4);
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) lowres(r, c) = 3.0 * r + 7.0 * c;
        Eigen::MatrixXd up = upsample_preview(lowres, 16);  // p = 4, centers at 1.5 + 4k
        for (int r = 2; r < 14; ++r)
            for (int c = 2; c < 14; ++c) {
                double expect = 3.0 * (r - 1.5) / 4.0 + 7.0 * (c - 1.5) / 4.0;
                CHECK(up(r, c) == Catch::Approx(expect).margin(1e-12));
            }
    }
    SECTION("shape validation") {
        CHECK_THROWS_AS(upsample_preview(Eigen::MatrixXd::Zero(3, 3), 32), InvalidShape);
        CHECK_THROWS_AS(upsample_preview(Eigen::MatrixXd::Zero(2, 3), 4), InvalidShape);
    }
}

TEST_CASE("merge_previews averages covers and records strip disagreement") {
    SECTION("identical constant previews merge seamlessly") {
        BlockGrid grid = build_block_grid(92, 92, 30, 1);
        std::vector<Eigen::MatrixXd> ups(9, Eigen::MatrixXd::Constant(32, 32, 50.0));
        PreviewImage merged = merge_previews(grid, ups);
        for (double v : merged.pixels.data) CHECK(v == Catch::Approx(50.0).margin(1e-12));
        for (const SideDisagreement& d : merged.sides) {
            if (d.right) CHECK(*d.right == 0.0);
            if (d.bottom) CHECK(*d.bottom == 0.0);
        }
    }
    SECTION("two horizontally adjacent constant previews") {
        BlockGrid grid = build_block_grid(62, 32, 30, 1);
        REQUIRE(grid.grid_rows == 1);
        REQUIRE(grid.grid_cols == 2);
        std::vector<Eigen::MatrixXd> ups = {Eigen::MatrixXd::Constant(32, 32, 10.0),
                                            Eigen::MatrixXd::Constant(32, 32, 20.0)};
        PreviewImage merged = merge_previews(grid, ups);
        // Overlap strip = columns 30..31, mean of 10 and 20.
        for (int r = 0; r < 32; ++r) {
            CHECK(merged.pixels.at(r, 29) == 10.0);
            CHECK(merged.pixels.at(r, 30) == 15.0);
            CHECK(merged.pixels.at(r, 31) == 15.0);
            CHECK(merged.pixels.at(r, 32) == 20.0);
        }
        REQUIRE(merged.sides[0].right.has_value());
        CHECK(*merged.sides[0].right == Catch::Approx(10.0).margin(1e-12));
        REQUIRE(merged.sides[1].left.has_value());
        CHECK(*merged.sides[1].left == Catch::Approx(10.0).margin(1e-12));
        CHECK_FALSE(merged.sides[0].left.has_value());
        CHECK_FALSE(merged.sides[0].top.has_value());
    }
    SECTION("single block copies through with no side stats") {
        BlockGrid grid = build_block_grid(32, 32, 30, 1);
        Eigen::MatrixXd up(32, 32);
        for (int r = 0; r < 32; ++r)
            for (int c = 0; c < 32; ++c) up(r, c) = r + 0.5 * c;
        PreviewImage merged = merge_previews(grid, {up});
        for (int r = 0; r < 32; ++r)
            for (int c = 0; c < 32; ++c) CHECK(merged.pixels.at(r, c) == up(r, c));
        CHECK_FALSE(merged.sides[0].top.has_value());
        CHECK_FALSE(merged.sides[0].right.has_value());
    }
    SECTION("single-coverage pixels equal the covering preview exactly") {
        BlockGrid grid = build_block_grid(92, 92, 30, 1);
        std::vector<Eigen::MatrixXd> ups;
        Rng rng(4);
        for (int i = 0; i < 9; ++i) {
            Eigen::MatrixXd up(32, 32);
            for (int r = 0; r < 32; ++r)
                for (int c = 0; c < 32; ++c) up(r, c) = 255.0 * rng.uniform01();
            ups.push_back(up);
        }
        PreviewImage merged = merge_previews(grid, ups);
        // Pixels strictly inside the center block's non-overlapped area: rows
        // and cols 32..59 are covered only by block (1,1).
        const BlockSpec& center = grid.block(1, 1);
        for (int r = 32; r < 60; ++r)
            for (int c = 32; c < 60; ++c)
                REQUIRE(merged.pixels.at(r, c) ==
                        ups[4](r - center.row_begin, c - center.col_begin));
    }
    SECTION("missing preview") {
        BlockGrid grid = build_block_grid(92, 92, 30, 1);
        std::vector<Eigen::MatrixXd> ups(8, Eigen::MatrixXd::Zero(32, 32));
        CHECK_THROWS_AS(merge_previews(grid, ups), MissingBlock);
    }
}

TEST_CASE("estimate_border_epsilons applies alpha * sqrt(L) * max(s, floor)") {
    BlockGrid grid = build_block_grid(92, 92, 30, 1);
    PreviewImage preview;
    preview.pixels = Image(92, 92);
    preview.sides.resize(9);
    const int center = grid.block_id(1, 1);
    preview.sides[center].top = 10.0;
    preview.sides[center].bottom = 0.0;
    preview.sides[center].left = 2.0;
    preview.sides[center].right = 0.5;

    SECTION("formula evaluation, floor active on small disagreement") {
        EpsilonSet eps = estimate_border_epsilons(grid, preview, 1.0, 1.0);
        // Center block inside region is 30x30, so every side has L = 30.
        CHECK(*eps.radii[center].top == Catch::Approx(10.0 * std::sqrt(30.0)).margin(1e-12));
        CHECK(*eps.radii[center].bottom == Catch::Approx(std::sqrt(30.0)).margin(1e-12));
        CHECK(*eps.radii[center].left == Catch::Approx(2.0 * std::sqrt(30.0)).margin(1e-12));
        CHECK(*eps.radii[center].right == Catch::Approx(std::sqrt(30.0)).margin(1e-12));
    }
    SECTION("radii are strictly positive and scale linearly with alpha") {
        EpsilonSet one = estimate_border_epsilons(grid, preview, 1.0, 1.0);
        EpsilonSet three = estimate_border_epsilons(grid, preview, 3.0, 1.0);
        for (int id = 0; id < grid.num_blocks(); ++id) {
            auto check_side = [&](const std::optional<double>& a, const std::optional<double>& b) {
                REQUIRE(a.has_value() == b.has_value());
                if (a) {
                    CHECK(*a > 0.0);
                    CHECK(*b == Catch::Approx(3.0 * *a).margin(1e-12));
                }
            };
            check_side(one.radii[id].top, three.radii[id].top);
            check_side(one.radii[id].bottom, three.radii[id].bottom);
            check_side(one.radii[id].left, three.radii[id].left);
            check_side(one.radii[id].right, three.radii[id].right);
        }
    }
    SECTION("absent sides carry no radius") {
        EpsilonSet eps = estimate_border_epsilons(grid, preview, 1.0, 1.0);
        CHECK_FALSE(eps.radii[grid.block_id(0, 0)].top.has_value());
        CHECK_FALSE(eps.radii[grid.block_id(0, 0)].left.has_value());
        CHECK(eps.radii[grid.block_id(0, 0)].right.has_value());
    }
    SECTION("alpha = 0 is rejected") {
        CHECK_THROWS_AS(estimate_border_epsilons(grid, preview, 0.0, 1.0), InvalidConfig);
        CHECK_THROWS_AS(estimate_border_epsilons(grid, preview, 1.0, 0.0), InvalidConfig);
    }
}
