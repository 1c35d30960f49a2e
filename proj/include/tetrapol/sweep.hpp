#pragma once

#include "tetrapol/config.hpp"
#include "tetrapol/report.hpp"

namespace tetrapol {

/// Simulates the four-state calibration run: each quartet state is sent
/// through the device and the resulting counts are fit.  With
/// exact = true the Poisson stage is bypassed and expected intensities
/// (per unit input) are fit instead, giving the noiseless instrument
/// matrix with zero uncertainties.
CalibrationResult calibrate_simulated(const PolarimeterModel& m, double mean_total,
                                      bool exact, std::uint64_t seed);

struct SweepResult {
    std::vector<SweepPoint> points; ///< grid order: hwp outer, qwp inner
    SweepSummary summary;
};

/// Runs the fidelity-map experiment: for every (hwp, qwp) grid point,
/// generate the state (with per-point misalignment offsets when
/// configured), measure it through the device, reconstruct, and score
/// against the intended state.  Grid points are independent; `threads`
/// only distributes the work and never changes the output.
SweepResult run_sweep(const PolarimeterModel& m, const SweepConfig& cfg,
                      const CalibrationResult& cal, int threads = 1);

} // namespace tetrapol
