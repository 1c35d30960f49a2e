// polcli: simulator front end for the four-detector photon-counting
// polarimeter.  Subcommands: design, calibrate, reconstruct, sweep.

#include <clocale>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tetrapol/config.hpp"
#include "tetrapol/report.hpp"
#include "tetrapol/sweep.hpp"

namespace {

using namespace tetrapol;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

DeviceConfig load_device(const std::string& config_path) {
    if (config_path.empty())
        return DeviceConfig{}; // ideal optimal device
    return DeviceConfig::from_file(config_path);
}

std::string design_report(double tolerance) {
    const auto [xsq_closed, ysq_closed] = optimal_splitting_ratio();
    const PolarimeterModel ideal = PolarimeterModel::ideal();
    const double xsq_opt = maximize_determinant(ideal.analyzer_t, ideal.analyzer_r, tolerance);
    const TetrahedronFrame frame = effective_frame(ideal);
    const InstrumentMatrix im = instrument_matrix_from_frame(frame);

    std::ostringstream os;
    os << "closed_form_xsq = " << fmt_double(xsq_closed) << '\n';
    os << "closed_form_ysq = " << fmt_double(ysq_closed) << '\n';
    os << "optimized_xsq = " << fmt_double(xsq_opt) << '\n';
    os << "abs_difference = " << fmt_double(std::abs(xsq_opt - xsq_closed)) << '\n';
    os << "det_at_optimum = " << fmt_double(instrument_det(xsq_opt, ideal.analyzer_t,
                                                           ideal.analyzer_r)) << '\n';
    for (int j = 0; j < 4; ++j)
        for (int k = j + 1; k < 4; ++k)
            os << "frame_dot_" << j + 1 << k + 1 << " = "
               << fmt_double(frame.b[j].dot(frame.b[k])) << '\n';
    ReducedStokes sum{};
    for (const auto& b : frame.b)
        sum = sum + b;
    os << "frame_sum_norm = " << fmt_double(sum.norm()) << '\n';
    os << "cond = " << fmt_double(im.cond) << '\n';
    return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write: " + path);
    out << text;
    if (!out)
        throw IoError("write failed: " + path);
}

int cmd_design(double tolerance, const std::string& out_path) {
    const std::string report = design_report(tolerance);
    std::cout << "optimal splitting ratio, closed form vs determinant search\n" << report;
    if (!out_path.empty())
        write_text_file(out_path, report);
    return 0;
}

int cmd_calibrate(const std::string& config_path, const std::string& counts_spec,
                  std::uint64_t seed, const std::string& out_path) {
    const DeviceConfig dev = load_device(config_path);
    const auto [mean_total, exact] = parse_counts_spec(counts_spec);
    const CalibrationResult raw = calibrate_simulated(dev.to_model(), mean_total, exact, seed);

    // report in per-unit-intensity units so B^-1 is comparable across
    // acquisition scales
    CalibrationFile file;
    file.scale = raw.mean_record_total;
    file.cal = scale_calibration(raw, 1.0 / raw.mean_record_total);
    file.cal.mean_record_total = raw.mean_record_total;
    file.seed = seed;
    file.counts_spec = counts_spec;
    file.device_echo = dev.echo();
    write_calibration_file(out_path, file);

    double max_sigma = 0.0;
    for (const auto& row : file.cal.instrument.sigma_inv)
        for (double v : row)
            max_sigma = std::max(max_sigma, v);
    std::cout << "calibration written to " << out_path << '\n'
              << "cond = " << fmt_double(file.cal.instrument.cond) << '\n'
              << "residual = " << fmt_double(file.cal.residual) << '\n'
              << "max_sigma_binv = " << fmt_double(max_sigma) << '\n';
    return 0;
}

int cmd_reconstruct(const std::string& cal_path, const std::vector<std::uint64_t>& counts_in) {
    const CalibrationFile file = read_calibration_file(cal_path);
    CountVector counts;
    for (int i = 0; i < 4; ++i)
        counts.n[i] = counts_in[static_cast<std::size_t>(i)];
    const ReconstructionResult r = reconstruct(counts, file.cal);

    std::cout << "raw = " << fmt_double(r.raw.s_m) << ' ' << fmt_double(r.raw.s_x) << ' '
              << fmt_double(r.raw.s_y) << ' ' << fmt_double(r.raw.s_z) << '\n';
    std::cout << "sigma = " << fmt_double(r.sigma[0]) << ' ' << fmt_double(r.sigma[1]) << ' '
              << fmt_double(r.sigma[2]) << ' ' << fmt_double(r.sigma[3]) << '\n';
    std::cout << "reduced = " << fmt_double(r.reduced.r_x) << ' ' << fmt_double(r.reduced.r_y)
              << ' ' << fmt_double(r.reduced.r_z) << '\n';
    std::cout << "sigma_reduced = " << fmt_double(r.sigma_reduced[0]) << ' '
              << fmt_double(r.sigma_reduced[1]) << ' ' << fmt_double(r.sigma_reduced[2]) << '\n';
    std::cout << "dop = " << fmt_double(r.reduced.norm()) << '\n';
    std::cout << "physical = " << (r.physical ? "yes" : "no") << '\n';
    std::cout << "projected = " << fmt_double(r.projected.r_x) << ' '
              << fmt_double(r.projected.r_y) << ' ' << fmt_double(r.projected.r_z) << '\n';
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& cal_path,
              const std::string& counts_spec, std::uint64_t seed, const std::string& grid_spec,
              double misalign_mrad, int threads, const std::string& out_path) {
    const DeviceConfig dev = load_device(config_path);
    const CalibrationFile cal = read_calibration_file(cal_path);

    SweepConfig cfg;
    std::tie(cfg.hwp, cfg.qwp) = parse_grid(grid_spec);
    std::tie(cfg.mean_total, cfg.exact) = parse_counts_spec(counts_spec);
    if (misalign_mrad < 0.0)
        throw ConfigError("--misalign-mrad must be non-negative");
    cfg.misalign_sigma = misalign_mrad * 1e-3;
    cfg.seed = seed;

    const SweepResult result = run_sweep(dev.to_model(), cfg, cal.cal, threads);

    SweepFileMeta meta;
    meta.device_echo = dev.echo();
    meta.grid_spec = grid_spec;
    meta.counts_spec = counts_spec;
    meta.misalign_mrad = misalign_mrad;
    meta.seed = seed;
    write_sweep_csv(out_path, meta, result.points, result.summary);

    std::cout << "sweep written to " << out_path << '\n'
              << "points = " << result.points.size() << '\n'
              << "mean_fidelity = " << fmt_double(result.summary.mean) << '\n'
              << "min_fidelity = " << fmt_double(result.summary.min) << '\n'
              << "max_fidelity = " << fmt_double(result.summary.max) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");

    CLI::App app{"Optimal four-detector photon-counting polarimeter simulator"};
    app.require_subcommand(1);

    // design
    auto* design = app.add_subcommand("design", "Optimal splitting ratio and frame report");
    double tolerance = 1e-9;
    std::string design_out;
    design->add_option("--tolerance", tolerance, "bracket tolerance for the search")
        ->check(CLI::PositiveNumber);
    design->add_option("--out", design_out, "also write the report to a file");

    // calibrate
    auto* calibrate = app.add_subcommand("calibrate", "Simulate a quartet calibration run");
    std::string cal_config, cal_counts = "100000", cal_out;
    std::uint64_t cal_seed = 1;
    calibrate->add_option("--config", cal_config, "device config file (default: ideal device)");
    calibrate->add_option("--counts", cal_counts, "mean counts per state, or 'exact'");
    calibrate->add_option("--seed", cal_seed, "master seed");
    calibrate->add_option("--out", cal_out, "calibration output file")->required();

    // reconstruct
    auto* reconstruct = app.add_subcommand("reconstruct", "Reconstruct one Stokes vector");
    std::string rec_cal;
    std::vector<std::uint64_t> rec_counts;
    reconstruct->add_option("--cal", rec_cal, "calibration file")->required();
    reconstruct->add_option("counts", rec_counts, "four detector counts")
        ->expected(4)
        ->required();

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Fidelity map over waveplate settings");
    std::string sw_config, sw_cal, sw_counts = "100000", sw_grid = "0:174:6,0:174:6", sw_out;
    std::uint64_t sw_seed = 1;
    double sw_misalign = 0.0;
    int sw_threads = 1;
    sweep->add_option("--config", sw_config, "device config file (default: ideal device)");
    sweep->add_option("--cal", sw_cal, "calibration file")->required();
    sweep->add_option("--counts", sw_counts, "mean counts per grid point, or 'exact'");
    sweep->add_option("--seed", sw_seed, "master seed");
    sweep->add_option("--grid", sw_grid, "hwp and qwp axes: h0:h1:hstep,q0:q1:qstep (degrees)");
    sweep->add_option("--misalign-mrad", sw_misalign, "waveplate misalignment sigma, mrad");
    sweep->add_option("--threads", sw_threads, "worker threads (output is independent of this)")
        ->check(CLI::PositiveNumber);
    sweep->add_option("--out", sw_out, "sweep CSV output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (design->parsed())
            return cmd_design(tolerance, design_out);
        if (calibrate->parsed())
            return cmd_calibrate(cal_config, cal_counts, cal_seed, cal_out);
        if (reconstruct->parsed())
            return cmd_reconstruct(rec_cal, rec_counts);
        if (sweep->parsed())
            return cmd_sweep(sw_config, sw_cal, sw_counts, sw_seed, sw_grid, sw_misalign,
                             sw_threads, sw_out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return 0;
}
