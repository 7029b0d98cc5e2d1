// Sensing matrices (dual-scale and Gaussian) and per-block measurement.
//
// The dual-scale matrix is Phi = H*D + F where H is an MxM Sylvester Hadamard,
// D averages the block over a sqrt(M) x sqrt(M) grid of p x p patches
// (weight 1/p^2, so D*D^T = I/p^2), and F is a seeded Gaussian draw projected
// onto the orthogonal complement of D's row space, giving F*D^T = 0. Inverting
// H on the measurements then yields the patch means plus a term that vanishes
// on patch-constant blocks, which is what makes the fast preview work.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "scbcs/errors.hpp"
#include "scbcs/geometry.hpp"
#include "scbcs/hadamard.hpp"
#include "scbcs/rng.hpp"

namespace scbcs {

enum class MatrixKind : uint8_t { Dss = 0, Gaussian = 1 };

inline const char* matrix_kind_name(MatrixKind k) {
    return k == MatrixKind::Dss ? "dss" : "gaussian";
}

struct SensingMatrix {
    MatrixKind kind = MatrixKind::Dss;
    int m = 0;  // measurements
    int n = 0;  // block pixels
    Eigen::MatrixXd entries;  // M x N
    // DSS factors; empty for Gaussian matrices.
    Eigen::MatrixXd hadamard_factor;  // M x M
    Eigen::MatrixXd downsampler;      // M x N
    Eigen::MatrixXd residual;         // M x N, rows orthogonal to downsampler rows
    uint64_t seed = 0;
    std::string generator_id = kGeneratorId;
};

// Patch-averaging downsampler: row m has weight 1/p^2 on the p x p patch m of
// the B x B block (patches in row-major order), zero elsewhere.
inline Eigen::MatrixXd build_downsampler(int block_size, int m) {
    if (m < 1 || block_size < 1) throw InvalidShape("downsampler needs positive sizes");
    const int side = integer_sqrt(m);
    if (side * side != m) throw InvalidShape("measurement count must be a perfect square");
    if (block_size % side != 0)
        throw InvalidShape("block side must be divisible by sqrt(measurements)");
    const int p = block_size / side;
    const double w = 1.0 / (p * p);
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m, block_size * block_size);
    for (int patch = 0; patch < m; ++patch) {
        const int pr = (patch / side) * p;
        const int pc = (patch % side) * p;
        for (int r = pr; r < pr + p; ++r)
            for (int c = pc; c < pc + p; ++c) d(patch, r * block_size + c) = w;
    }
    return d;
}

inline Eigen::MatrixXd gaussian_entries(int rows, int cols, uint64_t seed, double stddev) {
    Rng rng(seed);
    Eigen::MatrixXd g(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) g(r, c) = rng.gaussian() * stddev;
    return g;
}

inline SensingMatrix build_dss_matrix(int block_size, int m, uint64_t seed) {
    Eigen::MatrixXd h = hadamard(m);  // validates power of 2
    Eigen::MatrixXd d = build_downsampler(block_size, m);  // validates square/patch fit
    const int n = block_size * block_size;
    const int side = integer_sqrt(m);
    const int p = block_size / side;

    // Random pattern: variance-1/M Gaussian draw, projected row-wise onto the
    // orthogonal complement of D's row space. (D*D^T)^-1 = p^2 * I.
    Eigen::MatrixXd g = gaussian_entries(m, n, seed, 1.0 / std::sqrt(static_cast<double>(m)));
    Eigen::MatrixXd f = g - static_cast<double>(p) * p * (g * d.transpose()) * d;

    SensingMatrix phi;
    phi.kind = MatrixKind::Dss;
    phi.m = m;
    phi.n = n;
    phi.entries = h * d + f;
    phi.hadamard_factor = std::move(h);
    phi.downsampler = std::move(d);
    phi.residual = std::move(f);
    phi.seed = seed;
    return phi;
}

inline SensingMatrix build_gaussian_matrix(int n, int m, uint64_t seed) {
    if (m < 1 || n < 1) throw InvalidShape("matrix dimensions must be positive");
    SensingMatrix phi;
    phi.kind = MatrixKind::Gaussian;
    phi.m = m;
    phi.n = n;
    phi.entries = gaussian_entries(m, n, seed, 1.0 / std::sqrt(static_cast<double>(m)));
    phi.seed = seed;
    return phi;
}

inline Eigen::VectorXd measure(const SensingMatrix& phi, const Eigen::VectorXd& block) {
    if (block.size() != phi.n)
        throw DimensionMismatch("block length " + std::to_string(block.size()) +
                                " does not match sensing matrix width " + std::to_string(phi.n));
    return phi.entries * block;
}

struct ColumnSplit {
    Eigen::MatrixXd inside;  // M x |inside|
    Eigen::MatrixXd border;  // M x |border|
};

// Partitions Phi's columns by the block's inside/border index sets.
inline ColumnSplit split_matrix_columns(const SensingMatrix& phi, const BlockSpec& spec) {
    const int b = spec.block_size();
    if (b * b != phi.n)
        throw DimensionMismatch("block spec does not match sensing matrix width");
    ColumnSplit split;
    split.inside.resize(phi.m, static_cast<Eigen::Index>(spec.inside_indices.size()));
    split.border.resize(phi.m, static_cast<Eigen::Index>(spec.border_indices.size()));
    for (size_t k = 0; k < spec.inside_indices.size(); ++k)
        split.inside.col(static_cast<Eigen::Index>(k)) = phi.entries.col(spec.inside_indices[k]);
    for (size_t k = 0; k < spec.border_indices.size(); ++k)
        split.border.col(static_cast<Eigen::Index>(k)) = phi.entries.col(spec.border_indices[k]);
    return split;
}

// Per-block measurements together with everything needed to regenerate the
// matrices that produced them.
struct MeasurementSet {
    int image_width = 0;
    int image_height = 0;
    int block_size = 0;
    int interior = 0;
    int m = 0;
    MatrixKind kind = MatrixKind::Dss;
    uint64_t seed = 0;
    bool per_block_seed = false;
    std::string generator_id = kGeneratorId;
    std::vector<Eigen::VectorXd> y;  // one vector per block, grid row-major

    int ring() const { return (block_size - interior) / 2; }
};

// Rebuilds the sensing matrix for one block of a measurement set.
inline SensingMatrix sensing_matrix_for_block(const MeasurementSet& set, int block_id) {
    if (set.generator_id != kGeneratorId)
        throw InvalidConfig("unknown generator id '" + set.generator_id + "'");
    uint64_t seed = set.per_block_seed ? block_seed(set.seed, static_cast<uint64_t>(block_id))
                                       : set.seed;
    if (set.kind == MatrixKind::Dss) return build_dss_matrix(set.block_size, set.m, seed);
    return build_gaussian_matrix(set.block_size * set.block_size, set.m, seed);
}

}  // namespace scbcs
