#pragma once

#include <array>
#include <cstdint>

#include "tetrapol/elements.hpp"
#include "tetrapol/stokes.hpp"

namespace tetrapol {

using Mat4 = std::array<std::array<double, 4>, 4>;

/// The four Poincare-sphere unit vectors associated with the detectors.
/// For the optimal device they form a regular tetrahedron.
struct TetrahedronFrame {
    std::array<ReducedStokes, 4> b;

    /// Max deviation of the pairwise dot products from -1/3 and of the
    /// vector sum from zero; ~0 for a regular frame.
    double regularity_defect() const;

    bool is_regular(double tol = 1e-9) const { return regularity_defect() <= tol; }
};

/// Physical description of the four-detector polarimeter: PPBS, one
/// analyzer per output arm, detector efficiencies, dark counts.
struct PolarimeterModel {
    PpbsSpec ppbs;
    AnalyzerSpec analyzer_t{M_PI / 4.0, 0.0};          ///< transmitted arm
    AnalyzerSpec analyzer_r{M_PI / 4.0, M_PI / 2.0};   ///< reflected arm
    std::array<double, 4> efficiencies{1.0, 1.0, 1.0, 1.0};
    std::array<double, 4> dark_rate{0.0, 0.0, 0.0, 0.0};

    /// Optimal lossless device: best splitting ratio, 45-degree linear
    /// analysis in the transmitted arm, circular in the reflected arm.
    static PolarimeterModel ideal();
};

/// Linear map between Stokes vectors and the four detector intensities,
/// I = B . S, together with its inverse and per-element uncertainties
/// of the inverse (zero when built from geometry rather than data).
struct InstrumentMatrix {
    Mat4 b{};
    Mat4 b_inv{};
    double cond = 0.0;
    Mat4 sigma_inv{};

    std::array<double, 4> apply(const StokesVector& s) const;
    std::array<double, 4> apply_inverse(const std::array<double, 4>& i) const;
};

/// Photon counts registered by the four detectors in one acquisition.
struct CountVector {
    std::array<std::uint64_t, 4> n{0, 0, 0, 0};

    std::uint64_t total() const { return n[0] + n[1] + n[2] + n[3]; }
    std::array<double, 4> as_doubles() const {
        return {static_cast<double>(n[0]), static_cast<double>(n[1]),
                static_cast<double>(n[2]), static_cast<double>(n[3])};
    }
};

/// Exact splitting ratio of the optimal PPBS:
/// x^2 = 1/2 + 1/(2 sqrt(3)), y^2 = 1/2 - 1/(2 sqrt(3)).
std::pair<double, double> optimal_splitting_ratio();

/// Unnormalized detection states u_j: detector j fires with intensity
/// |<u_j|v>|^2 (before efficiency and dark counts).  Throws
/// DegenerateFrame when a channel has zero amplitude.
std::array<JonesVector, 4> detection_states(const PolarimeterModel& m);

/// Intensities at the four detectors for a pure input state, including
/// efficiencies and dark rates.  With unit efficiency and no darks the
/// values sum to the input intensity.
std::array<double, 4> detector_intensities(const JonesVector& v, const PolarimeterModel& m);

/// Expected detector intensities for a (possibly mixed) Stokes input,
/// normalized to a pre-detector input intensity `input_intensity`.
/// Linear in the Stokes 4-vector; agrees with detector_intensities for
/// pure inputs.
std::array<double, 4> expected_intensities(const StokesVector& s, const PolarimeterModel& m,
                                           double input_intensity = 1.0);

/// Poincare-sphere frame of the normalized detection states.
TetrahedronFrame effective_frame(const PolarimeterModel& m);

/// Instrument matrix with rows (throughput_j / 4) * (1, b_j), inverted
/// with its condition number recorded.  Throws Singular when the frame
/// is coplanar (condition number above 1e8).
InstrumentMatrix instrument_matrix_from_frame(const TetrahedronFrame& f,
                                              const std::array<double, 4>& throughput = {1.0, 1.0, 1.0, 1.0});

/// |det B| for the device with splitting ratio x_sq and the given
/// analyzer bases (the determinant-maximization objective).
double instrument_det(double x_sq, const AnalyzerSpec& basis_t, const AnalyzerSpec& basis_r);

/// Splitting ratio x^2 maximizing |det B| over [0.5, 1), located by
/// golden-section search to within `tolerance`.  Reproduces
/// optimal_splitting_ratio() for the standard analyzer bases.
double maximize_determinant(const AnalyzerSpec& basis_t, const AnalyzerSpec& basis_r,
                            double tolerance);

/// Draws one acquisition of Poisson counts for the given input state.
/// `mean_total` is the expected pre-detector photon number; expected
/// counts are mean_total * eta_j * (detection fraction) + dark_j.
/// Deterministic for a fixed seed.
CountVector simulate_counts(const StokesVector& s, const PolarimeterModel& m,
                            double mean_total, std::uint64_t seed);

} // namespace tetrapol
