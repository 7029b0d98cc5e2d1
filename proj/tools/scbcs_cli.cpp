// scbcs command-line front end: sense | preview | reconstruct | evaluate | bench.
#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "scbcs/scbcs.hpp"

namespace {

using namespace scbcs;

struct CommonOpts {
    std::string scheme = kSchemeScBcs;
    int block = 32;
    int interior = 30;
    int measurements = 64;
    std::string kind;  // "", "dss", "gaussian"
    uint64_t seed = 1;
    bool per_block_seed = false;
    double alpha = 1.0;
    double s_floor = 1.0;
    int workers = 0;
    int max_iter = 2000;
    double tol = 1e-4;
    double delta_eq = 1e-4;
};

void add_solver_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--alpha", o.alpha, "Border radius scale");
    cmd->add_option("--s-floor", o.s_floor, "Border disagreement floor (intensity units)");
    cmd->add_option("--workers", o.workers, "Worker threads (0 = hardware)");
    cmd->add_option("--max-iter", o.max_iter, "Solver iteration cap");
    cmd->add_option("--tol", o.tol, "Solver relative-change stopping tolerance");
    cmd->add_option("--delta-eq", o.delta_eq, "Measurement ball radius as fraction of ||y||");
}

RunConfig make_config(const CommonOpts& o, bool interior_set, bool kind_set) {
    RunConfig config;
    config.scheme = o.scheme;
    config.block_size = o.block;
    config.interior = o.interior;
    config.m = o.measurements;
    if (o.kind == "dss") config.kind = MatrixKind::Dss;
    else if (o.kind == "gaussian") config.kind = MatrixKind::Gaussian;
    else if (!o.kind.empty()) throw InvalidConfig("unknown matrix kind '" + o.kind + "'");
    config.seed = o.seed;
    config.per_block_seed = o.per_block_seed;
    config.alpha = o.alpha;
    config.s_floor = o.s_floor;
    config.workers = o.workers;
    config.solver.max_iterations = o.max_iter;
    config.solver.tol = o.tol;
    config.solver.delta_eq = o.delta_eq;
    apply_scheme_defaults(config, interior_set, kind_set);
    return config;
}

int cmd_sense(const std::string& input, const std::string& output, const RunConfig& config) {
    Image image = read_pgm(input);
    MeasurementSet set = sense_image(image, config);
    write_measurements(output, set);
    double ratio = compression_ratio(set);
    std::cout << "blocks: " << set.y.size() << ", measurements per block: " << set.m << "\n";
    std::cout << std::fixed << std::setprecision(2) << "measurement ratio: " << 100.0 * ratio
              << "% (" << 100.0 * (1.0 - ratio) << "% compression)\n";
    std::cout << "wrote " << output << "\n";
    return 0;
}

int cmd_preview(const std::string& input, const std::string& output, int workers) {
    MeasurementSet set = read_measurements(input);
    PreviewImage preview = compute_preview(set, workers);
    write_pgm(output, preview.pixels);
    double mean_s = 0.0, max_s = 0.0;
    int count = 0;
    for (const SideDisagreement& d : preview.sides) {
        for (const auto& side : {d.right, d.bottom}) {
            if (!side) continue;
            mean_s += *side;
            max_s = std::max(max_s, *side);
            ++count;
        }
    }
    if (count > 0) mean_s /= count;
    std::cout << std::fixed << std::setprecision(3) << "border disagreement over " << count
              << " shared sides: mean " << mean_s << ", max " << max_s << "\n";
    std::cout << "wrote " << output << "\n";
    return 0;
}

int cmd_reconstruct(const std::string& input, const std::string& output,
                    const std::string& original, const RunConfig& config) {
    MeasurementSet set = read_measurements(input);
    Image gt;
    const Image* gt_ptr = nullptr;
    if (!original.empty()) {
        gt = read_pgm(original);
        gt_ptr = &gt;
    }
    ReconstructionResult rec = reconstruct_image(set, config, gt_ptr);
    write_pgm(output, rec.image);
    std::cout << std::fixed << std::setprecision(2) << "wall time: " << rec.wall_seconds
              << " s over " << rec.blocks.size() << " blocks\n";
    std::cout << "iterations: mean " << std::setprecision(1) << rec.mean_iterations() << ", max "
              << rec.max_iterations() << "; unconverged " << rec.unconverged_count()
              << "; radius-doubled " << rec.epsilon_doubled_count() << "\n";
    std::cout << "wrote " << output << "\n";
    return 0;
}

int cmd_evaluate(const std::string& reference_path, const std::string& test_path,
                 const std::string& output, const std::string& image_id,
                 const std::string& scheme, int m, uint64_t seed) {
    Image reference = read_pgm(reference_path);
    Image test = read_pgm(test_path);
    QualityReport report;
    report.image_id = image_id.empty() ? bench_image_id(test_path) : image_id;
    report.scheme = scheme;
    report.m = m;
    report.seed = seed;
    report.psnr_db = psnr(reference, test);
    report.ssim = ssim(reference, test);
    std::string text = std::string(kCsvHeader) + "\n" + csv_row(report) + "\n";
    if (output.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(output, std::ios::trunc);
        if (!f) throw IoError("cannot open '" + output + "' for writing");
        f << text;
    }
    return 0;
}

std::vector<BenchCell> parse_cells(const std::vector<std::string>& schemes,
                                   const std::vector<int>& m_list) {
    std::vector<BenchCell> cells;
    for (const std::string& token : schemes) {
        size_t at = token.find('@');
        if (at != std::string::npos) {
            BenchCell cell;
            cell.scheme = token.substr(0, at);
            cell.m = std::stoi(token.substr(at + 1));
            scheme_mode(cell.scheme);
            cells.push_back(cell);
        } else {
            scheme_mode(token);
            if (m_list.empty())
                throw InvalidConfig("scheme '" + token +
                                    "' has no @M suffix and no --measurements list was given");
            for (int m : m_list) cells.push_back(BenchCell{token, m});
        }
    }
    return cells;
}

void emit_plot_script(const std::string& prefix, const std::vector<BenchRow>& rows) {
    // Data files: one per (image, scheme), rows "M mean_psnr mean_ssim".
    struct Key {
        std::string image, scheme;
        bool operator<(const Key& o) const {
            return image != o.image ? image < o.image : scheme < o.scheme;
        }
    };
    std::map<Key, std::map<int, std::pair<std::vector<double>, std::vector<double>>>> table;
    for (const BenchRow& row : rows) {
        if (row.failed) continue;
        auto& cell = table[{row.report.image_id, row.report.scheme}][row.report.m];
        cell.first.push_back(row.report.psnr_db);
        cell.second.push_back(row.report.ssim);
    }
    std::ofstream script(prefix + ".gnuplot", std::ios::trunc);
    if (!script) throw IoError("cannot open plot script for writing");
    script << "set xlabel 'measurements per block'\nset ylabel 'PSNR (dB)'\nset key left\n";
    std::string plot_cmd = "plot";
    bool first = true;
    for (const auto& [key, by_m] : table) {
        std::string dat = prefix + "_" + key.image + "_" + key.scheme + ".dat";
        std::ofstream data(dat, std::ios::trunc);
        for (const auto& [m, vals] : by_m) {
            double psnr_mean = 0.0, ssim_mean = 0.0;
            for (double v : vals.first) psnr_mean += v;
            for (double v : vals.second) ssim_mean += v;
            data << m << ' ' << psnr_mean / vals.first.size() << ' '
                 << ssim_mean / vals.second.size() << '\n';
        }
        plot_cmd += std::string(first ? " " : ", ") + "'" + dat + "' using 1:2 with linespoints title '" +
                    key.image + " " + key.scheme + "'";
        first = false;
    }
    script << plot_cmd << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Block compressed sensing with smoothness-constrained reconstruction"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a key=value file");

    CommonOpts opts;
    std::string input, output, original, reference, test_path, image_id, plot_prefix;
    std::vector<std::string> images, schemes;
    std::vector<int> m_list;
    std::vector<uint64_t> seeds;
    bool aggregate = false;

    CLI::App* sense = app.add_subcommand("sense", "Acquire block measurements from a PGM image");
    sense->add_option("--input", input, "Input PGM (P5) image")->required();
    sense->add_option("--output", output, "Output measurement file")->required();
    sense->add_option("--scheme", opts.scheme, "Target scheme (sets matrix/tiling defaults)");
    sense->add_option("--measurements", opts.measurements, "Measurements per block");
    sense->add_option("--block", opts.block, "Block side length");
    auto* sense_interior = sense->add_option("--interior", opts.interior, "Interior (stride) size");
    auto* sense_kind = sense->add_option("--kind", opts.kind, "Matrix kind: dss or gaussian");
    sense->add_option("--seed", opts.seed, "Matrix generator seed");
    sense->add_flag("--per-block-seed", opts.per_block_seed,
                    "Draw an independent matrix per block");
    sense->add_option("--workers", opts.workers, "Worker threads (0 = hardware)");

    CLI::App* preview = app.add_subcommand("preview", "Write the merged fast preview as PGM");
    preview->add_option("--input", input, "Measurement file")->required();
    preview->add_option("--output", output, "Output PGM path")->required();
    preview->add_option("--workers", opts.workers, "Worker threads (0 = hardware)");

    CLI::App* reconstruct = app.add_subcommand("reconstruct", "Reconstruct an image from measurements");
    reconstruct->add_option("--input", input, "Measurement file")->required();
    reconstruct->add_option("--output", output, "Output PGM path")->required();
    reconstruct->add_option("--scheme", opts.scheme,
                            "independent | sc-bcs | sc-baseline | sc-genie");
    reconstruct->add_option("--original", original, "Original image (required by sc-genie)");
    add_solver_flags(reconstruct, opts);

    CLI::App* evaluate = app.add_subcommand("evaluate", "PSNR/SSIM of a test image vs a reference");
    evaluate->add_option("--reference", reference, "Reference PGM")->required();
    evaluate->add_option("--test", test_path, "Test PGM")->required();
    evaluate->add_option("--output", output, "CSV output path (default stdout)");
    evaluate->add_option("--image-id", image_id, "Image id column value");
    evaluate->add_option("--scheme", opts.scheme, "Scheme column value");
    evaluate->add_option("--measurements", opts.measurements, "M column value");
    evaluate->add_option("--seed", opts.seed, "Seed column value");

    CLI::App* bench = app.add_subcommand("bench", "Cross-product benchmark to CSV");
    bench->add_option("--images", images, "Input PGM images")->required()->expected(-1);
    bench->add_option("--schemes", schemes,
                      "Scheme list; entries may pin M as scheme@M")->required()->expected(-1);
    bench->add_option("--measurements", m_list, "M values for schemes without @M")->expected(-1);
    bench->add_option("--seeds", seeds, "Seed list (default 1)")->expected(-1);
    bench->add_option("--output", output, "CSV output path (default stdout)");
    bench->add_flag("--aggregate", aggregate, "Append mean-over-seeds rows");
    bench->add_option("--plot", plot_prefix, "Emit gnuplot script + data files with this prefix");
    bench->add_option("--block", opts.block, "Block side length");
    bench->add_option("--seed", opts.seed, "Unused when --seeds given");
    add_solver_flags(bench, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sense->parsed()) {
            RunConfig config = make_config(opts, sense_interior->count() > 0, sense_kind->count() > 0);
            return cmd_sense(input, output, config);
        }
        if (preview->parsed()) return cmd_preview(input, output, opts.workers);
        if (reconstruct->parsed()) {
            RunConfig config = make_config(opts, true, true);
            config.kind.reset();  // kind comes from the measurement file
            if (config.scheme == kSchemeScGenie && original.empty())
                throw InvalidConfig("sc-genie needs --original");
            return cmd_reconstruct(input, output, original, config);
        }
        if (evaluate->parsed())
            return cmd_evaluate(reference, test_path, output, image_id, opts.scheme,
                                opts.measurements, opts.seed);
        if (bench->parsed()) {
            BenchRequest request;
            request.image_paths = images;
            request.cells = parse_cells(schemes, m_list);
            request.seeds = seeds.empty() ? std::vector<uint64_t>{opts.seed} : seeds;
            request.aggregate = aggregate;
            request.base.block_size = opts.block;
            request.base.interior = opts.block == 32 ? 30 : opts.block - 2;
            request.base.alpha = opts.alpha;
            request.base.s_floor = opts.s_floor;
            request.base.workers = opts.workers;
            request.base.solver.max_iterations = opts.max_iter;
            request.base.solver.tol = opts.tol;
            request.base.solver.delta_eq = opts.delta_eq;
            std::vector<BenchRow> rows;
            if (output.empty()) {
                rows = run_bench(request, std::cout, &std::cerr);
            } else {
                std::ofstream f(output, std::ios::trunc);
                if (!f) throw IoError("cannot open '" + output + "' for writing");
                rows = run_bench(request, f, &std::cerr);
            }
            if (!plot_prefix.empty()) emit_plot_script(plot_prefix, rows);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
