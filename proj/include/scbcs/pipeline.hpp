// End-to-end orchestration: sensing, previewing, two-phase parallel
// reconstruction, evaluation and batch benchmarking.
#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "scbcs/errors.hpp"
#include "scbcs/geometry.hpp"
#include "scbcs/image.hpp"
#include "scbcs/measurement_io.hpp"
#include "scbcs/metrics.hpp"
#include "scbcs/preview.hpp"
#include "scbcs/sensing.hpp"
#include "scbcs/solver.hpp"

namespace scbcs {

inline constexpr const char* kSchemeIndependent = "independent";
inline constexpr const char* kSchemeScBcs = "sc-bcs";
inline constexpr const char* kSchemeScBaseline = "sc-baseline";
inline constexpr const char* kSchemeScGenie = "sc-genie";

inline SolveMode scheme_mode(const std::string& scheme) {
    if (scheme == kSchemeIndependent) return SolveMode::Independent;
    if (scheme == kSchemeScBcs) return SolveMode::ScPredicted;
    if (scheme == kSchemeScBaseline) return SolveMode::ScBaseline;
    if (scheme == kSchemeScGenie) return SolveMode::Genie;
    throw InvalidConfig("unknown scheme '" + scheme + "'");
}

inline bool scheme_is_sc(const std::string& scheme) {
    return scheme == kSchemeScBcs || scheme == kSchemeScBaseline || scheme == kSchemeScGenie;
}

struct RunConfig {
    std::string scheme = kSchemeScBcs;
    int block_size = 32;
    int interior = 30;  // for the independent scheme this defaults to block_size
    int m = 64;
    std::optional<MatrixKind> kind;  // default derived from the scheme
    uint64_t seed = 1;
    bool per_block_seed = false;
    double alpha = 1.0;
    double s_floor = 1.0;
    SolverConfig solver;
    int workers = 0;  // 0 -> hardware concurrency

    MatrixKind matrix_kind() const {
        if (kind) return *kind;
        return scheme_is_sc(scheme) ? MatrixKind::Dss : MatrixKind::Gaussian;
    }

    int ring() const { return (block_size - interior) / 2; }

    void validate() const {
        solver.validate();
        if (block_size < 1 || interior < 1) throw InvalidConfig("block sizes must be positive");
        if ((block_size - interior) % 2 != 0 || block_size < interior)
            throw InvalidConfig("block minus interior must be an even nonnegative overlap");
        if (m < 1) throw InvalidConfig("measurement count must be positive");
        if (!(alpha > 0.0)) throw InvalidConfig("alpha must be positive");
        if (!(s_floor > 0.0)) throw InvalidConfig("s_floor must be positive");
        if (workers < 0) throw InvalidConfig("worker count cannot be negative");
        if (scheme_is_sc(scheme) && matrix_kind() != MatrixKind::Dss)
            throw InvalidConfig("sc-* schemes require the dss matrix kind");
        scheme_mode(scheme);  // validates the name
    }
};

// Applies the per-scheme defaults the CLI documents: the independent scheme
// acquires non-overlapping blocks with a Gaussian matrix unless overridden.
inline void apply_scheme_defaults(RunConfig& config, bool interior_explicit, bool kind_explicit) {
    if (config.scheme == kSchemeIndependent) {
        if (!interior_explicit) config.interior = config.block_size;
        if (!kind_explicit) config.kind = MatrixKind::Gaussian;
    } else {
        if (!kind_explicit) config.kind = MatrixKind::Dss;
    }
}

// Test hooks observing the pipeline phases.
struct PhaseHooks {
    std::function<void(int)> on_block_preview;
    std::function<void()> on_merge_done;
    std::function<void(int)> on_block_solve;
};

// Runs fn(0..count-1) on `workers` threads. Tasks are independent; each writes
// only its own output slot, so scheduling order cannot affect results.
inline void parallel_for(int count, int workers, const std::function<void(int)>& fn) {
    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    pool.reserve(static_cast<size_t>(workers));
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= count || failed.load()) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!failed.exchange(true)) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (failed.load()) std::rethrow_exception(error);
}

inline BlockGrid grid_for(const MeasurementSet& set) {
    return build_block_grid(set.image_width, set.image_height, set.interior, set.ring());
}

// Acquisition: tiles the image, builds the sensing matrices and measures every
// block.
inline MeasurementSet sense_image(const Image& image, const RunConfig& config) {
    config.validate();
    BlockGrid grid = build_block_grid(image.width, image.height, config.interior, config.ring());

    MeasurementSet set;
    set.image_width = image.width;
    set.image_height = image.height;
    set.block_size = config.block_size;
    set.interior = config.interior;
    set.m = config.m;
    set.kind = config.matrix_kind();
    set.seed = config.seed;
    set.per_block_seed = config.per_block_seed;
    set.y.resize(static_cast<size_t>(grid.num_blocks()));

    SensingMatrix shared;
    if (!config.per_block_seed) shared = sensing_matrix_for_block(set, 0);
    parallel_for(grid.num_blocks(), config.workers, [&](int id) {
        const SensingMatrix* phi = &shared;
        SensingMatrix own;
        if (config.per_block_seed) {
            own = sensing_matrix_for_block(set, id);
            phi = &own;
        }
        std::vector<double> px = extract_block(image, grid.blocks[static_cast<size_t>(id)]);
        Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(px.data(),
                                                              static_cast<Eigen::Index>(px.size()));
        set.y[static_cast<size_t>(id)] = measure(*phi, x);
    });
    return set;
}

inline double compression_ratio(const MeasurementSet& set) {
    return static_cast<double>(set.y.size()) * set.m /
           (static_cast<double>(set.image_width) * set.image_height);
}

// Phase one of the reconstruction: per-block previews in parallel, then the
// single-threaded merge barrier.
inline PreviewImage compute_preview(const MeasurementSet& set, int workers,
                                    const PhaseHooks& hooks = {}) {
    if (set.kind != MatrixKind::Dss)
        throw WrongMatrixKind("previews need dual-scale measurements");
    BlockGrid grid = grid_for(set);
    std::vector<Eigen::MatrixXd> upsampled(static_cast<size_t>(grid.num_blocks()));
    parallel_for(grid.num_blocks(), workers, [&](int id) {
        Eigen::MatrixXd lowres = block_preview(set.y[static_cast<size_t>(id)]);
        upsampled[static_cast<size_t>(id)] = upsample_preview(lowres, grid.block_size);
        if (hooks.on_block_preview) hooks.on_block_preview(id);
    });
    PreviewImage merged = merge_previews(grid, upsampled);
    if (hooks.on_merge_done) hooks.on_merge_done();
    return merged;
}

struct BlockStats {
    int iterations = 0;
    double rel_change = 0.0;
    bool converged = true;
    bool epsilon_doubled = false;
    bool feasible = true;
};

struct ReconstructionResult {
    Image image;  // assembled, clipped, still real-valued
    std::vector<BlockStats> blocks;
    double wall_seconds = 0.0;

    int unconverged_count() const {
        int n = 0;
        for (const BlockStats& b : blocks) n += b.converged ? 0 : 1;
        return n;
    }
    int epsilon_doubled_count() const {
        int n = 0;
        for (const BlockStats& b : blocks) n += b.epsilon_doubled ? 1 : 0;
        return n;
    }
    int max_iterations() const {
        int n = 0;
        for (const BlockStats& b : blocks) n = std::max(n, b.iterations);
        return n;
    }
    double mean_iterations() const {
        if (blocks.empty()) return 0.0;
        double n = 0;
        for (const BlockStats& b : blocks) n += b.iterations;
        return n / static_cast<double>(blocks.size());
    }
};

// Phase two: independent per-block solves after the preview barrier, then the
// final mosaic. `ground_truth` is required by the sc-genie scheme only.
inline ReconstructionResult reconstruct_image(const MeasurementSet& set, const RunConfig& config,
                                              const Image* ground_truth = nullptr,
                                              const PhaseHooks& hooks = {}) {
    config.validate();
    auto t0 = std::chrono::steady_clock::now();
    BlockGrid grid = grid_for(set);
    SolverConfig solver = config.solver;
    solver.mode = scheme_mode(config.scheme);
    if (solver.mode == SolveMode::Genie && !ground_truth)
        throw InvalidConfig("the sc-genie scheme needs the original image");
    if (scheme_is_sc(config.scheme) && set.kind != MatrixKind::Dss)
        throw WrongMatrixKind("sc-* schemes need dual-scale measurements");
    if (ground_truth &&
        (ground_truth->width != set.image_width || ground_truth->height != set.image_height))
        throw DimensionMismatch("original image dimensions do not match the measurements");

    std::optional<PreviewImage> preview;
    std::optional<EpsilonSet> epsilons;
    if (set.kind == MatrixKind::Dss) {
        preview = compute_preview(set, config.workers, hooks);
        epsilons = estimate_border_epsilons(grid, *preview, config.alpha, config.s_floor);
    }

    SensingMatrix shared;
    if (!set.per_block_seed) shared = sensing_matrix_for_block(set, 0);

    std::vector<std::vector<double>> pixels(static_cast<size_t>(grid.num_blocks()));
    ReconstructionResult result;
    result.blocks.resize(static_cast<size_t>(grid.num_blocks()));
    parallel_for(grid.num_blocks(), config.workers, [&](int id) {
        if (hooks.on_block_solve) hooks.on_block_solve(id);
        const SensingMatrix* phi = &shared;
        SensingMatrix own;
        if (set.per_block_seed) {
            own = sensing_matrix_for_block(set, id);
            phi = &own;
        }
        SolveResult solve = reconstruct_block(grid, id, set, *phi,
                                              preview ? &*preview : nullptr,
                                              epsilons ? &*epsilons : nullptr, solver,
                                              ground_truth);
        const BlockSpec& spec = grid.blocks[static_cast<size_t>(id)];
        std::vector<double>& out = pixels[static_cast<size_t>(id)];
        out.resize(spec.inside_indices.size());
        for (int r = 0; r < spec.inside_rows(); ++r)
            for (int c = 0; c < spec.inside_cols(); ++c)
                out[static_cast<size_t>(r) * spec.inside_cols() + c] = solve.block(r, c);
        BlockStats& stats = result.blocks[static_cast<size_t>(id)];
        stats.iterations = solve.diag.iterations;
        stats.rel_change = solve.diag.rel_change;
        stats.converged = solve.diag.converged;
        stats.epsilon_doubled = solve.diag.epsilon_doubled;
        stats.feasible = solve.diag.feasible;
    });
    result.image = assemble_image(grid, pixels);
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

inline std::string format_psnr(double v) {
    if (std::isinf(v)) return "inf";
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << v;
    return os.str();
}

inline std::string format_ssim(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6) << v;
    return os.str();
}

inline constexpr const char* kCsvHeader = "image,scheme,M,seed,psnr_db,ssim";

inline std::string csv_row(const QualityReport& report) {
    std::ostringstream os;
    os << report.image_id << ',' << report.scheme << ',' << report.m << ',' << report.seed << ','
       << format_psnr(report.psnr_db) << ',' << format_ssim(report.ssim);
    return os.str();
}

// One benchmark cell: sense, reconstruct and evaluate against the 8-bit data a
// PGM writer would emit, so reported numbers match the artifact on disk.
inline QualityReport run_cell(const Image& original, const std::string& image_id,
                              const std::string& scheme, int m, uint64_t seed,
                              const RunConfig& base) {
    RunConfig config = base;
    config.scheme = scheme;
    config.m = m;
    config.seed = seed;
    config.kind.reset();
    apply_scheme_defaults(config, /*interior_explicit=*/false, /*kind_explicit=*/false);
    if (scheme == kSchemeIndependent) config.interior = config.block_size;
    config.validate();

    MeasurementSet set = sense_image(original, config);
    const Image* gt = (scheme_mode(scheme) == SolveMode::Genie) ? &original : nullptr;
    ReconstructionResult rec = reconstruct_image(set, config, gt);
    Image quantized = quantize_u8(rec.image);

    QualityReport report;
    report.image_id = image_id;
    report.scheme = scheme;
    report.m = m;
    report.seed = seed;
    report.psnr_db = psnr(original, quantized);
    report.ssim = ssim(original, quantized);
    return report;
}

struct BenchCell {
    std::string scheme;
    int m = 0;
};

struct BenchRequest {
    std::vector<std::string> image_paths;
    std::vector<BenchCell> cells;
    std::vector<uint64_t> seeds;
    bool aggregate = false;
    RunConfig base;
};

inline std::string bench_image_id(const std::string& path) {
    size_t slash = path.find_last_of("/\\");
    std::string name = (slash == std::string::npos) ? path : path.substr(slash + 1);
    size_t dot = name.find_last_of('.');
    if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
    return name;
}

struct BenchRow {
    QualityReport report;
    bool failed = false;
    std::string error;
};

// Full cross product of images x cells x seeds. Per-cell failures are recorded
// with an ERROR marker and the run continues.
inline std::vector<BenchRow> run_bench(const BenchRequest& request, std::ostream& csv,
                                       std::ostream* log = nullptr) {
    if (request.cells.empty()) throw InvalidConfig("bench needs at least one scheme cell");
    if (request.image_paths.empty()) throw InvalidConfig("bench needs at least one image");
    if (request.seeds.empty()) throw InvalidConfig("bench needs at least one seed");

    std::vector<BenchRow> rows;
    csv << kCsvHeader << '\n';
    for (const std::string& path : request.image_paths) {
        Image original = read_pgm(path);
        std::string id = bench_image_id(path);
        for (const BenchCell& cell : request.cells) {
            std::vector<const BenchRow*> seed_rows;
            for (uint64_t seed : request.seeds) {
                BenchRow row;
                try {
                    row.report = run_cell(original, id, cell.scheme, cell.m, seed, request.base);
                } catch (const std::exception& e) {
                    row.failed = true;
                    row.error = e.what();
                    row.report.image_id = id;
                    row.report.scheme = cell.scheme;
                    row.report.m = cell.m;
                    row.report.seed = seed;
                }
                if (row.failed) {
                    csv << id << ',' << cell.scheme << ',' << cell.m << ',' << seed
                        << ",ERROR,ERROR\n";
                    if (log) *log << "cell failed (" << id << ", " << cell.scheme << ", M="
                                  << cell.m << ", seed=" << seed << "): " << row.error << '\n';
                } else {
                    csv << csv_row(row.report) << '\n';
                }
                rows.push_back(std::move(row));
                if (!rows.back().failed) seed_rows.push_back(&rows.back());
            }
            if (request.aggregate && !seed_rows.empty()) {
                double psnr_sum = 0.0, ssim_sum = 0.0;
                for (const BenchRow* r : seed_rows) {
                    psnr_sum += r->report.psnr_db;
                    ssim_sum += r->report.ssim;
                }
                csv << id << ',' << cell.scheme << ',' << cell.m << ",mean,"
                    << format_psnr(psnr_sum / static_cast<double>(seed_rows.size())) << ','
                    << format_ssim(ssim_sum / static_cast<double>(seed_rows.size())) << '\n';
            }
        }
    }
    return rows;
}

}  // namespace scbcs
