#include "tetrapol/elements.hpp"

#include <cmath>

namespace tetrapol {

WaveplateSpec WaveplateSpec::make(double retardance, double fast_axis) {
    double g = std::fmod(retardance, 2.0 * M_PI);
    if (g < 0.0)
        g += 2.0 * M_PI;
    // fast axis is only defined mod pi
    double th = std::fmod(fast_axis, M_PI);
    if (th <= -M_PI / 2.0)
        th += M_PI;
    else if (th > M_PI / 2.0)
        th -= M_PI;
    return {g, th};
}

PpbsSpec PpbsSpec::lossless(double x_sq, double phase_t, double phase_r) {
    if (!(x_sq >= 0.5 && x_sq <= 1.0))
        throw Error("PpbsSpec::lossless: x^2 must lie in [0.5, 1]");
    return {std::sqrt(x_sq), std::sqrt(1.0 - x_sq), phase_t, phase_r};
}

JonesMatrix waveplate_matrix(const WaveplateSpec& w) {
    const double c = std::cos(w.fast_axis);
    const double s = std::sin(w.fast_axis);
    const complexd g = std::polar(1.0, w.retardance);
    const complexd cross = (1.0 - g) * c * s;
    return {c * c + g * s * s, cross,
            cross, s * s + g * c * c};
}

JonesVector generate_state(double hwp_angle, double qwp_angle,
                           double hwp_offset, double qwp_offset) {
    const JonesMatrix hwp = waveplate_matrix(WaveplateSpec::half_wave(hwp_angle + hwp_offset));
    const JonesMatrix qwp = waveplate_matrix(WaveplateSpec::quarter_wave(qwp_angle + qwp_offset));
    return qwp.apply(hwp.apply(JonesVector{1.0, 0.0}));
}

std::pair<JonesVector, JonesVector> ppbs_split(const JonesVector& v, const PpbsSpec& p) {
    if (std::abs(p.x * p.x + p.y * p.y - 1.0) > 1e-9)
        throw Error("ppbs_split: amplitudes violate x^2 + y^2 = 1");
    const JonesVector transmitted{p.y * v.alpha,
                                  std::polar(1.0, p.phase_t) * p.x * v.beta};
    const JonesVector reflected{p.x * v.alpha,
                                std::polar(1.0, p.phase_r) * p.y * v.beta};
    return {transmitted, reflected};
}

std::pair<complexd, complexd> analyzer_amplitudes(const JonesVector& v, const AnalyzerSpec& a) {
    const double c = std::cos(a.theta);
    const double s = std::sin(a.theta);
    const complexd em = std::polar(1.0, -a.phi);
    const complexd ep = std::polar(1.0, a.phi);
    return {c * v.alpha + em * s * v.beta,
            -ep * s * v.alpha + c * v.beta};
}

std::pair<double, double> analyzer_intensities(const JonesVector& v, const AnalyzerSpec& a) {
    const auto [plus, minus] = analyzer_amplitudes(v, a);
    return {std::norm(plus), std::norm(minus)};
}

} // namespace tetrapol
