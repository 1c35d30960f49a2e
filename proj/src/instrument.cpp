#include "tetrapol/instrument.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "tetrapol/coherency.hpp"
#include "tetrapol/rng.hpp"

namespace tetrapol {

namespace {

constexpr double kCondSingular = 1e8;

Eigen::Matrix4d to_eigen(const Mat4& m) {
    Eigen::Matrix4d e;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            e(i, j) = m[i][j];
    return e;
}

Mat4 from_eigen(const Eigen::Matrix4d& e) {
    Mat4 m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            m[i][j] = e(i, j);
    return m;
}

Mat4 frame_design_matrix(const TetrahedronFrame& f, const std::array<double, 4>& throughput) {
    Mat4 b;
    for (int j = 0; j < 4; ++j) {
        const double w = throughput[j] / 4.0;
        b[j] = {w, w * f.b[j].r_x, w * f.b[j].r_y, w * f.b[j].r_z};
    }
    return b;
}

} // namespace

double TetrahedronFrame::regularity_defect() const {
    double defect = 0.0;
    ReducedStokes sum{};
    for (int j = 0; j < 4; ++j) {
        sum = sum + b[j];
        for (int k = j + 1; k < 4; ++k)
            defect = std::max(defect, std::abs(b[j].dot(b[k]) + 1.0 / 3.0));
    }
    return std::max(defect, sum.norm());
}

PolarimeterModel PolarimeterModel::ideal() {
    const auto [x_sq, y_sq] = optimal_splitting_ratio();
    (void)y_sq;
    PolarimeterModel m;
    m.ppbs = PpbsSpec::lossless(x_sq);
    return m;
}

std::array<double, 4> InstrumentMatrix::apply(const StokesVector& s) const {
    const std::array<double, 4> v{s.s_m, s.s_x, s.s_y, s.s_z};
    std::array<double, 4> out{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            out[i] += b[i][j] * v[j];
    return out;
}

std::array<double, 4> InstrumentMatrix::apply_inverse(const std::array<double, 4>& i) const {
    std::array<double, 4> out{};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            out[r] += b_inv[r][c] * i[c];
    return out;
}

std::pair<double, double> optimal_splitting_ratio() {
    const double half_over_sqrt3 = 0.5 / std::sqrt(3.0);
    return {0.5 + half_over_sqrt3, 0.5 - half_over_sqrt3};
}

std::array<JonesVector, 4> detection_states(const PolarimeterModel& m) {
    // Detector responses are linear in the input amplitudes, so probing
    // the chain with the two basis states recovers <u_j| directly.
    const JonesVector e1{1.0, 0.0};
    const JonesVector e2{0.0, 1.0};

    std::array<JonesVector, 4> u;
    for (int basis = 0; basis < 2; ++basis) {
        const JonesVector& probe = basis == 0 ? e1 : e2;
        const auto [t, r] = ppbs_split(probe, m.ppbs);
        const auto [a1, a2] = analyzer_amplitudes(t, m.analyzer_t);
        const auto [a3, a4] = analyzer_amplitudes(r, m.analyzer_r);
        const std::array<complexd, 4> amp{a1, a2, a3, a4};
        for (int j = 0; j < 4; ++j) {
            complexd& slot = basis == 0 ? u[j].alpha : u[j].beta;
            slot = std::conj(amp[j]);
        }
    }
    for (int j = 0; j < 4; ++j) {
        if (u[j].norm2() < 1e-24)
            throw DegenerateFrame("detection_states: channel " + std::to_string(j + 1) +
                                  " has zero amplitude");
    }
    return u;
}

std::array<double, 4> detector_intensities(const JonesVector& v, const PolarimeterModel& m) {
    const auto [t, r] = ppbs_split(v, m.ppbs);
    const auto [i1, i2] = analyzer_intensities(t, m.analyzer_t);
    const auto [i3, i4] = analyzer_intensities(r, m.analyzer_r);
    const std::array<double, 4> raw{i1, i2, i3, i4};
    std::array<double, 4> out;
    for (int j = 0; j < 4; ++j)
        out[j] = m.efficiencies[j] * raw[j] + m.dark_rate[j];
    return out;
}

std::array<double, 4> expected_intensities(const StokesVector& s, const PolarimeterModel& m,
                                           double input_intensity) {
    const ReducedStokes r = s.reduced();
    const auto u = detection_states(m);
    std::array<double, 4> out;
    for (int j = 0; j < 4; ++j) {
        const double weight = u[j].norm2();
        const ReducedStokes bj = jones_to_stokes(u[j].normalized()).reduced();
        const double fraction = weight * 0.5 * (1.0 + bj.dot(r));
        out[j] = input_intensity * m.efficiencies[j] * std::max(fraction, 0.0) + m.dark_rate[j];
    }
    return out;
}

TetrahedronFrame effective_frame(const PolarimeterModel& m) {
    const auto u = detection_states(m);
    TetrahedronFrame f;
    for (int j = 0; j < 4; ++j)
        f.b[j] = jones_to_stokes(u[j].normalized()).reduced();
    return f;
}

InstrumentMatrix instrument_matrix_from_frame(const TetrahedronFrame& f,
                                              const std::array<double, 4>& throughput) {
    for (double t : throughput)
        if (!(t > 0.0))
            throw Error("instrument_matrix_from_frame: throughput entries must be positive");

    InstrumentMatrix im;
    im.b = frame_design_matrix(f, throughput);

    const Eigen::Matrix4d b = to_eigen(im.b);
    const Eigen::JacobiSVD<Eigen::Matrix4d> svd(b);
    const double smin = svd.singularValues()(3);
    const double smax = svd.singularValues()(0);
    im.cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (!std::isfinite(im.cond) || im.cond > kCondSingular)
        throw Singular("instrument_matrix_from_frame: frame is coplanar");
    im.b_inv = from_eigen(b.inverse());
    return im;
}

double instrument_det(double x_sq, const AnalyzerSpec& basis_t, const AnalyzerSpec& basis_r) {
    PolarimeterModel m;
    m.ppbs = PpbsSpec::lossless(x_sq);
    m.analyzer_t = basis_t;
    m.analyzer_r = basis_r;
    const Mat4 b = frame_design_matrix(effective_frame(m), {1.0, 1.0, 1.0, 1.0});
    return std::abs(to_eigen(b).determinant());
}

double maximize_determinant(const AnalyzerSpec& basis_t, const AnalyzerSpec& basis_r,
                            double tolerance) {
    if (!(tolerance > 0.0))
        throw Error("maximize_determinant: tolerance must be positive");

    // golden-section search; the objective is unimodal on the bracket
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.5;
    double hi = 1.0 - 1e-12;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = instrument_det(c, basis_t, basis_r);
    double fd = instrument_det(d, basis_t, basis_r);
    while (hi - lo > tolerance) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = instrument_det(c, basis_t, basis_r);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = instrument_det(d, basis_t, basis_r);
        }
    }
    return 0.5 * (lo + hi);
}

CountVector simulate_counts(const StokesVector& s, const PolarimeterModel& m,
                            double mean_total, std::uint64_t seed) {
    if (!(mean_total > 0.0))
        throw Error("simulate_counts: mean_total must be positive");
    if (degree_of_polarization(s) > 1.0 + 1e-9)
        throw Unphysical("simulate_counts: degree of polarization exceeds 1");

    const auto lambda = expected_intensities(s.normalized(), m, mean_total);
    Rng rng(seed);
    CountVector counts;
    for (int j = 0; j < 4; ++j)
        counts.n[j] = rng.poisson(lambda[j]);
    return counts;
}

} // namespace tetrapol
