// Versioned binary container for per-block measurements.
//
// Layout (all integers and floats little-endian):
//   magic "SCBM" | u32 version=1 | u32 width | u32 height | u32 block_size |
//   u32 interior | u32 m | u8 kind (0 dss, 1 gaussian) | u8 per_block_seed |
//   u16 generator_id length | generator_id bytes | u64 seed | u32 block_count |
//   block_count * m float64 measurement payload, blocks in grid row-major
//   order.
// Matrices are regenerated from the header, never stored.
#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "scbcs/errors.hpp"
#include "scbcs/geometry.hpp"
#include "scbcs/sensing.hpp"

namespace scbcs {

namespace detail {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big,
              "mixed-endian platforms are not supported");

template <typename T>
inline void write_le(std::ostream& out, T value) {
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        for (size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(buf[i], buf[sizeof(T) - 1 - i]);
    }
    out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
inline T read_le(std::istream& in) {
    unsigned char buf[sizeof(T)];
    in.read(reinterpret_cast<char*>(buf), sizeof(T));
    if (!in) throw IoError("measurement file truncated");
    if constexpr (std::endian::native == std::endian::big) {
        for (size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(buf[i], buf[sizeof(T) - 1 - i]);
    }
    T value;
    std::memcpy(&value, buf, sizeof(T));
    return value;
}

}  // namespace detail

inline constexpr char kMeasurementMagic[4] = {'S', 'C', 'B', 'M'};
inline constexpr uint32_t kMeasurementVersion = 1;

inline void write_measurements(std::ostream& out, const MeasurementSet& set) {
    out.write(kMeasurementMagic, 4);
    detail::write_le<uint32_t>(out, kMeasurementVersion);
    detail::write_le<uint32_t>(out, static_cast<uint32_t>(set.image_width));
    detail::write_le<uint32_t>(out, static_cast<uint32_t>(set.image_height));
    detail::write_le<uint32_t>(out, static_cast<uint32_t>(set.block_size));
    detail::write_le<uint32_t>(out, static_cast<uint32_t>(set.interior));
    detail::write_le<uint32_t>(out, static_cast<uint32_t>(set.m));
    detail::write_le<uint8_t>(out, static_cast<uint8_t>(set.kind));
    detail::write_le<uint8_t>(out, set.per_block_seed ? 1 : 0);
    detail::write_le<uint16_t>(out, static_cast<uint16_t>(set.generator_id.size()));
    out.write(set.generator_id.data(), static_cast<std::streamsize>(set.generator_id.size()));
    detail::write_le<uint64_t>(out, set.seed);
    detail::write_le<uint32_t>(out, static_cast<uint32_t>(set.y.size()));
    for (const Eigen::VectorXd& block : set.y) {
        if (block.size() != set.m) throw DimensionMismatch("measurement vector length mismatch");
        for (Eigen::Index i = 0; i < block.size(); ++i) detail::write_le<double>(out, block[i]);
    }
    if (!out) throw IoError("failed writing measurement payload");
}

inline void write_measurements(const std::string& path, const MeasurementSet& set) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    write_measurements(f, set);
}

inline MeasurementSet read_measurements(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMeasurementMagic, 4) != 0)
        throw IoError("not a measurement file (bad magic)");
    uint32_t version = detail::read_le<uint32_t>(in);
    if (version != kMeasurementVersion)
        throw IoError("unsupported measurement file version " + std::to_string(version));
    MeasurementSet set;
    set.image_width = static_cast<int>(detail::read_le<uint32_t>(in));
    set.image_height = static_cast<int>(detail::read_le<uint32_t>(in));
    set.block_size = static_cast<int>(detail::read_le<uint32_t>(in));
    set.interior = static_cast<int>(detail::read_le<uint32_t>(in));
    set.m = static_cast<int>(detail::read_le<uint32_t>(in));
    uint8_t kind = detail::read_le<uint8_t>(in);
    if (kind > 1) throw IoError("unknown matrix kind in measurement file");
    set.kind = static_cast<MatrixKind>(kind);
    set.per_block_seed = detail::read_le<uint8_t>(in) != 0;
    uint16_t id_len = detail::read_le<uint16_t>(in);
    set.generator_id.resize(id_len);
    in.read(set.generator_id.data(), id_len);
    set.seed = detail::read_le<uint64_t>(in);
    uint32_t block_count = detail::read_le<uint32_t>(in);

    // Header consistency: the grid derived from the header must produce
    // exactly block_count blocks.
    int ring = set.block_size - set.interior;
    if (ring < 0 || ring % 2 != 0) throw IoError("inconsistent block/interior sizes");
    BlockGrid grid = build_block_grid(set.image_width, set.image_height, set.interior, ring / 2);
    if (grid.num_blocks() != static_cast<int>(block_count))
        throw IoError("block count does not match header geometry");

    set.y.resize(block_count);
    for (uint32_t b = 0; b < block_count; ++b) {
        Eigen::VectorXd v(set.m);
        for (int i = 0; i < set.m; ++i) v[i] = detail::read_le<double>(in);
        set.y[b] = std::move(v);
    }
    return set;
}

inline MeasurementSet read_measurements(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for reading");
    return read_measurements(f);
}

}  // namespace scbcs
