#pragma once

#include <utility>

#include "tetrapol/jones.hpp"

namespace tetrapol {

/// Retarder plate: phase `retardance` applied to the slow axis, with the
/// fast axis rotated `fast_axis` radians from horizontal.
struct WaveplateSpec {
    double retardance = 0.0; ///< radians; pi for a HWP, pi/2 for a QWP
    double fast_axis = 0.0;  ///< radians from H, normalized to (-pi/2, pi/2]

    /// Builds a spec with angles folded into the canonical ranges
    /// (retardance mod 2pi, fast axis mod pi).  Folding does not change
    /// the resulting Jones matrix.
    static WaveplateSpec make(double retardance, double fast_axis);

    static WaveplateSpec half_wave(double fast_axis) {
        return make(M_PI, fast_axis);
    }
    static WaveplateSpec quarter_wave(double fast_axis) {
        return make(M_PI / 2.0, fast_axis);
    }
};

/// Partially polarizing beam splitter.  An input state (alpha, beta)
/// produces (y alpha, x beta) in the transmitted arm and (x alpha, y beta)
/// in the reflected arm; x is the majority amplitude (x >= y).
/// phase_t / phase_r are the residual H-V phases left after the quartz
/// compensators, 0 for a perfectly compensated device.
struct PpbsSpec {
    double x = 1.0;
    double y = 0.0;
    double phase_t = 0.0; ///< radians
    double phase_r = 0.0; ///< radians

    /// Lossless splitter from the majority intensity fraction x^2 in [0.5, 1].
    static PpbsSpec lossless(double x_sq, double phase_t = 0.0, double phase_r = 0.0);
};

/// Polarization analyzer projecting onto (cos theta, e^{i phi} sin theta)
/// and its orthogonal complement.
struct AnalyzerSpec {
    double theta = 0.0; ///< radians, [0, pi/2]
    double phi = 0.0;   ///< radians, (-pi, pi]
};

/// R(theta) diag(1, e^{i Gamma}) R(-theta); unitary.
JonesMatrix waveplate_matrix(const WaveplateSpec& w);

/// State produced by sending H light through a half-wave plate at
/// hwp_angle + hwp_offset followed by a quarter-wave plate at
/// qwp_angle + qwp_offset.  The offsets model waveplate misalignment.
JonesVector generate_state(double hwp_angle, double qwp_angle,
                           double hwp_offset = 0.0, double qwp_offset = 0.0);

/// Splits a state on the PPBS; returns {transmitted, reflected}.
/// Lossless: output intensities sum to the input intensity.
std::pair<JonesVector, JonesVector> ppbs_split(const JonesVector& v, const PpbsSpec& p);

/// Complex projection amplitudes {onto the analyzer state, onto its complement}.
std::pair<complexd, complexd> analyzer_amplitudes(const JonesVector& v, const AnalyzerSpec& a);

/// Intensities {i_plus, i_minus} behind the analyzer's two output ports;
/// they sum to the input intensity.
std::pair<double, double> analyzer_intensities(const JonesVector& v, const AnalyzerSpec& a);

} // namespace tetrapol
