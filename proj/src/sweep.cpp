#include "tetrapol/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "tetrapol/coherency.hpp"
#include "tetrapol/rng.hpp"

namespace tetrapol {

namespace {

constexpr double kDeg = M_PI / 180.0;

// sub-seed streams, fixed so files are stable across versions
constexpr std::uint64_t kStreamOffsets = 1;
constexpr std::uint64_t kStreamCounts = 2;
constexpr std::uint64_t kStreamCalibration = 100;

SweepPoint evaluate_point(const PolarimeterModel& m, const SweepConfig& cfg,
                          const CalibrationResult& cal, int i, int j) {
    const double hwp_deg = cfg.hwp.at(i);
    const double qwp_deg = cfg.qwp.at(j);
    const double hwp = hwp_deg * kDeg;
    const double qwp = qwp_deg * kDeg;
    const std::uint64_t point_seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(i),
                                              static_cast<std::uint64_t>(j));

    double dh = 0.0, dq = 0.0;
    if (cfg.misalign_sigma > 0.0) {
        Rng offsets(mix_seed(point_seed, kStreamOffsets));
        dh = cfg.misalign_sigma * offsets.gaussian();
        dq = cfg.misalign_sigma * offsets.gaussian();
    }

    const StokesVector intended = jones_to_stokes(generate_state(hwp, qwp));
    const ReducedStokes target = intended.reduced();
    const StokesVector actual = jones_to_stokes(generate_state(hwp, qwp, dh, dq));

    ReconstructionResult rec;
    double n_total = 0.0;
    if (cfg.exact) {
        const auto meas = expected_intensities(actual, m, 1.0);
        rec = reconstruct_intensities(meas, {0.0, 0.0, 0.0, 0.0}, cal);
        n_total = meas[0] + meas[1] + meas[2] + meas[3];
    } else {
        const CountVector counts =
            simulate_counts(actual, m, cfg.mean_total, mix_seed(point_seed, kStreamCounts));
        if (counts.total() == 0) {
            // an empty acquisition carries no polarization information;
            // score it as indifferent rather than aborting the sweep
            return {hwp_deg, qwp_deg, 0.5, 0.5, 0.0};
        }
        rec = reconstruct(counts, cal);
        n_total = static_cast<double>(counts.total());
    }

    // overlap of the normalized Stokes vectors, scored on the raw
    // reconstruction; clamped into [0, 1] for emission
    const double overlap = 0.5 * (1.0 + rec.reduced.dot(target));
    const std::array<double, 3> t{target.r_x, target.r_y, target.r_z};
    double var_overlap = 0.0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            var_overlap += t[a] * rec.cov_reduced[a][b] * t[b];
    const double sigma_f = 0.5 * std::sqrt(std::max(var_overlap, 0.0));

    return {hwp_deg, qwp_deg, std::clamp(overlap, 0.0, 1.0), sigma_f, n_total};
}

} // namespace

CalibrationResult calibrate_simulated(const PolarimeterModel& m, double mean_total,
                                      bool exact, std::uint64_t seed) {
    const auto quartet = calibration_quartet();
    std::vector<StokesVector> prepared(quartet.begin(), quartet.end());
    std::vector<std::array<double, 4>> intensities;
    intensities.reserve(4);
    for (std::size_t k = 0; k < 4; ++k) {
        if (exact) {
            intensities.push_back(expected_intensities(quartet[k], m, 1.0));
        } else {
            const CountVector counts = simulate_counts(
                quartet[k], m, mean_total, mix_seed(seed, kStreamCalibration + k));
            intensities.push_back(counts.as_doubles());
        }
    }
    return calibrate_intensities(prepared, intensities, exact ? nullptr : &intensities);
}

SweepResult run_sweep(const PolarimeterModel& m, const SweepConfig& cfg,
                      const CalibrationResult& cal, int threads) {
    const int nh = cfg.hwp.count();
    const int nq = cfg.qwp.count();
    const int n_points = nh * nq;

    SweepResult result;
    result.points.resize(static_cast<std::size_t>(n_points));

    const int n_workers = std::clamp(threads, 1, n_points);
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&]() {
        for (;;) {
            const int idx = next.fetch_add(1);
            if (idx >= n_points)
                return;
            try {
                result.points[static_cast<std::size_t>(idx)] =
                    evaluate_point(m, cfg, cal, idx / nq, idx % nq);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                return;
            }
        }
    };

    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_workers));
        for (int t = 0; t < n_workers; ++t)
            pool.emplace_back(worker);
        for (std::thread& t : pool)
            t.join();
    }
    if (first_error)
        std::rethrow_exception(first_error);

    result.summary = summarize(result.points);
    return result;
}

} // namespace tetrapol
