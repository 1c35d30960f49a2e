#pragma once

#include <vector>

#include "tetrapol/instrument.hpp"

namespace tetrapol {

using Mat3 = std::array<std::array<double, 3>, 3>;

/// One calibration measurement: a known pure input state and the counts
/// it produced.
struct CalibrationRecord {
    StokesVector prepared; ///< normalized, pure within 1e-6
    CountVector counts;
};

/// Fitted instrument matrix with propagated count uncertainties.
struct CalibrationResult {
    InstrumentMatrix instrument;
    double residual = 0.0;          ///< Frobenius misfit; 0 when exactly determined
    double mean_record_total = 0.0; ///< mean summed counts per record (intensity scale)
};

/// Stokes vector estimated from one count vector.
struct ReconstructionResult {
    StokesVector raw;                     ///< B^-1 . counts, unnormalized
    std::array<double, 4> sigma{};        ///< 1-sigma uncertainties of raw
    ReducedStokes reduced;                ///< raw polarization / raw intensity
    std::array<double, 3> sigma_reduced{}; ///< ratio-propagated uncertainties
    Mat3 cov_reduced{};                   ///< full covariance of reduced
    bool physical = true;                 ///< |reduced| <= 1 within 3 sigma
    ReducedStokes projected;              ///< reduced, radially clipped to the unit ball
};

/// The four normalized calibration states: a regular tetrahedron
/// (1, sqrt(1/3), +-sqrt(2/3), 0) and (1, -sqrt(1/3), 0, -+sqrt(2/3)).
std::array<StokesVector, 4> calibration_quartet();

/// Core fit on real-valued intensities.  `prepared` and `intensities`
/// hold one entry per record; `variances` gives the per-count variances
/// used for uncertainty propagation (pass nullptr for a noiseless fit
/// with zero sigma).  Exactly four records solve B Sbar = Ibar directly;
/// more records are fit by unweighted least squares.
CalibrationResult calibrate_intensities(const std::vector<StokesVector>& prepared,
                                        const std::vector<std::array<double, 4>>& intensities,
                                        const std::vector<std::array<double, 4>>* variances);

/// Calibration from photon-count records; Poisson variances (= counts)
/// are propagated into sigma_inv.  Throws Coplanar when fewer than four
/// records are given or the prepared states do not span, Singular when
/// the fitted matrix is not invertible.
CalibrationResult calibrate(const std::vector<CalibrationRecord>& records);

/// Reconstruction from real-valued intensities with explicit variances.
ReconstructionResult reconstruct_intensities(const std::array<double, 4>& measured,
                                             const std::array<double, 4>& variances,
                                             const CalibrationResult& cal);

/// Stokes reconstruction from one count vector: raw = B^-1 n with
/// first-order Poisson error propagation.  Throws EmptyCounts when all
/// counts are zero, NegativeIntensity when the recovered intensity is
/// non-positive.
ReconstructionResult reconstruct(const CountVector& counts, const CalibrationResult& cal);

/// Uncertainties of the raw Stokes 4-vector (the reduced-vector ones,
/// including the intensity-ratio term, live in the result itself).
std::array<double, 4> reconstruction_uncertainty(const ReconstructionResult& r);

} // namespace tetrapol
