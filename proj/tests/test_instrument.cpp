#include <doctest.h>

#include <cmath>
#include <complex>

#include "oracles.hpp"
#include "tetrapol/instrument.hpp"
#include "tetrapol/rng.hpp"

using namespace tetrapol;

namespace {

PolarimeterModel ideal() { return PolarimeterModel::ideal(); }

double sum4(const std::array<double, 4>& a) { return a[0] + a[1] + a[2] + a[3]; }

// Jones state sitting at a given Poincare point (inverse of the reduced map)
JonesVector jones_at(const ReducedStokes& r) {
    const double theta = std::acos(std::min(std::max(r.r_x, -1.0), 1.0));
    const double phi = std::atan2(r.r_z, r.r_y);
    return {std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), phi)};
}

} // namespace

TEST_CASE("optimal_splitting_ratio matches the closed form") {
    const auto [x_sq, y_sq] = optimal_splitting_ratio();
    CHECK(x_sq == doctest::Approx(0.7886751345948129).epsilon(1e-15));
    CHECK(y_sq == doctest::Approx(0.2113248654051871).epsilon(1e-15));
    CHECK(x_sq + y_sq == 1.0); // exact in floating point by construction
    CHECK(x_sq >= y_sq);
}

TEST_CASE("detector_intensities for H at the optimal ratio") {
    const auto intens = detector_intensities({1.0, 0.0}, ideal());
    // y^2/2 twice, x^2/2 twice; equal to (1 -+ 1/sqrt(3))/4
    CHECK(intens[0] == doctest::Approx(0.1056624327025935).epsilon(1e-12));
    CHECK(intens[1] == doctest::Approx(0.1056624327025935).epsilon(1e-12));
    CHECK(intens[2] == doctest::Approx(0.3943375672974065).epsilon(1e-12));
    CHECK(intens[3] == doctest::Approx(0.3943375672974065).epsilon(1e-12));
    CHECK(sum4(intens) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("tetrahedron response: 1/2 at the own detector, 1/6 elsewhere") {
    const PolarimeterModel m = ideal();
    const auto states = detection_states(m);
    for (int j = 0; j < 4; ++j) {
        const auto intens = detector_intensities(states[j].normalized(), m);
        const double total = sum4(intens);
        for (int k = 0; k < 4; ++k) {
            const double expected = k == j ? 0.5 : 1.0 / 6.0;
            CHECK(std::abs(intens[k] / total - expected) < 1e-12);
        }
    }
}

TEST_CASE("conjugate states: dark detector, 1/3 elsewhere") {
    const PolarimeterModel m = ideal();
    const auto states = detection_states(m);
    for (int j = 0; j < 4; ++j) {
        const auto intens = detector_intensities(states[j].orthogonal().normalized(), m);
        const double total = sum4(intens);
        for (int k = 0; k < 4; ++k) {
            const double expected = k == j ? 0.0 : 1.0 / 3.0;
            CHECK(std::abs(intens[k] / total - expected) < 1e-12);
        }
    }
}

TEST_CASE("detection operators form a POVM and conserve energy") {
    const auto states = detection_states(ideal());
    std::complex<double> s00{}, s01{}, s11{};
    for (const JonesVector& u : states) {
        s00 += u.alpha * std::conj(u.alpha);
        s01 += u.alpha * std::conj(u.beta);
        s11 += u.beta * std::conj(u.beta);
    }
    CHECK(std::abs(s00 - 1.0) < 1e-10);
    CHECK(std::abs(s01) < 1e-10);
    CHECK(std::abs(s11 - 1.0) < 1e-10);

    Rng rng(31);
    for (int i = 0; i < 1000; ++i) {
        const JonesVector v{{rng.gaussian(), rng.gaussian()}, {rng.gaussian(), rng.gaussian()}};
        CHECK(sum4(detector_intensities(v, ideal())) == doctest::Approx(v.norm2()).epsilon(1e-12));
    }
}

TEST_CASE("effective_frame is a regular tetrahedron at the optimum") {
    const TetrahedronFrame f = effective_frame(ideal());
    for (const ReducedStokes& b : f.b)
        CHECK(b.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.regularity_defect() < 1e-9);
    CHECK(f.is_regular());
}

TEST_CASE("effective_frame away from the optimum is unit-norm but not regular") {
    PolarimeterModel m = ideal();
    m.ppbs = PpbsSpec::lossless(0.7);
    const TetrahedronFrame f = effective_frame(m);
    for (const ReducedStokes& b : f.b)
        CHECK(b.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(f.is_regular());
    // explicit detection states: arm vectors tilt to (y^2-x^2, +-2xy, 0)
    // and (x^2-y^2, 0, +-2xy)
    const double d12 = f.b[0].dot(f.b[1]);
    CHECK(d12 == doctest::Approx(0.16 - 0.84).epsilon(1e-12));
    CHECK(std::abs(f.b[0].r_x - (0.3 - 0.7)) < 1e-12);
    CHECK(std::abs(f.b[0].r_y - 2.0 * std::sqrt(0.21)) < 1e-12);
}

TEST_CASE("degenerate channel raises DegenerateFrame") {
    PolarimeterModel m = ideal();
    m.ppbs = PpbsSpec{1.0, 0.0, 0.0, 0.0};
    m.analyzer_t = {0.0, 0.0}; // transmitted arm sees only V, projector on H
    CHECK_THROWS_AS(effective_frame(m), DegenerateFrame);
}

TEST_CASE("plain polarizing splitter collapses the frame to one axis") {
    PolarimeterModel m = ideal();
    m.ppbs = PpbsSpec{1.0, 0.0, 0.0, 0.0};
    const TetrahedronFrame f = effective_frame(m);
    CHECK_FALSE(f.is_regular());
    CHECK(f.b[0].r_x == doctest::Approx(-1.0));
    CHECK(f.b[1].r_x == doctest::Approx(-1.0));
    CHECK(f.b[2].r_x == doctest::Approx(1.0));
    CHECK(f.b[3].r_x == doctest::Approx(1.0));
    CHECK_THROWS_AS(instrument_matrix_from_frame(f), Singular);
}

TEST_CASE("forward models agree: element chain vs instrument matrix") {
    const PolarimeterModel m = ideal();
    const InstrumentMatrix im = instrument_matrix_from_frame(effective_frame(m));
    Rng rng(32);
    for (int i = 0; i < 1000; ++i) {
        const JonesVector v = oracles::random_pure(rng);
        const auto direct = detector_intensities(v, m);
        const auto via_matrix = im.apply(jones_to_stokes(v));
        for (int j = 0; j < 4; ++j)
            CHECK(std::abs(direct[j] - via_matrix[j]) < 1e-10);
    }
}

TEST_CASE("expected_intensities extends the forward model linearly to mixed states") {
    const PolarimeterModel m = ideal();
    Rng rng(33);
    for (int i = 0; i < 200; ++i) {
        const StokesVector s = oracles::random_mixed(rng);
        const ReducedStokes r = s.reduced();
        const double p = r.norm();
        if (p < 1e-6)
            continue;
        // a mixed state is a convex blend of the antipodal pure pair on its axis
        const ReducedStokes dir = (1.0 / p) * r;
        const auto plus = detector_intensities(jones_at(dir), m);
        const auto minus = detector_intensities(jones_at(-1.0 * dir), m);
        const auto mixed = expected_intensities(s, m, 1.0);
        const double w = (1.0 + p) / 2.0;
        for (int j = 0; j < 4; ++j)
            CHECK(std::abs(mixed[j] - (w * plus[j] + (1.0 - w) * minus[j])) < 1e-10);
    }
}

TEST_CASE("instrument_matrix_from_frame: rows, inverse, and golden condition number") {
    const TetrahedronFrame f = effective_frame(ideal());
    const InstrumentMatrix im = instrument_matrix_from_frame(f);

    // S = (1,0,0,0) picks out the first column: throughput / 4
    for (int j = 0; j < 4; ++j)
        CHECK(im.b[j][0] == doctest::Approx(0.25).epsilon(1e-12));

    const auto response = im.apply(StokesVector{1.0, 1.0, 0.0, 0.0});
    CHECK(response[0] == doctest::Approx(0.1056624327025935).epsilon(1e-10));
    CHECK(response[1] == doctest::Approx(0.1056624327025935).epsilon(1e-10));
    CHECK(response[2] == doctest::Approx(0.3943375672974065).epsilon(1e-10));
    CHECK(response[3] == doctest::Approx(0.3943375672974065).epsilon(1e-10));

    // golden value for the regular frame, fixed by the grid oracle: sqrt(3)
    CHECK(im.cond == doctest::Approx(1.7320508075688772).epsilon(1e-9));

    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double dot = 0.0;
            for (int k = 0; k < 4; ++k)
                dot += im.b[i][k] * im.b_inv[k][j];
            CHECK(std::abs(dot - (i == j ? 1.0 : 0.0)) < 1e-8 * im.cond);
        }
}

TEST_CASE("instrument_matrix_from_frame rejects coplanar frames and bad throughput") {
    TetrahedronFrame coplanar;
    coplanar.b = {ReducedStokes{1, 0, 0}, ReducedStokes{-1, 0, 0}, ReducedStokes{0, 1, 0},
                  ReducedStokes{0, -1, 0}};
    CHECK_THROWS_AS(instrument_matrix_from_frame(coplanar), Singular);

    const TetrahedronFrame f = effective_frame(ideal());
    CHECK_THROWS_AS(instrument_matrix_from_frame(f, {1.0, 1.0, 0.0, 1.0}), Error);
}

TEST_CASE("determinant objective matches the hand-derived closed form") {
    const PolarimeterModel m = ideal();
    for (double x_sq : {0.55, 0.6, 0.7, 0.7886751345948129, 0.9, 0.95}) {
        const double lib = instrument_det(x_sq, m.analyzer_t, m.analyzer_r);
        CHECK(lib == doctest::Approx(oracles::det_closed_form(x_sq)).epsilon(1e-10));
    }
    // equal splitting folds both arms onto the same axes: coplanar, det 0
    CHECK(instrument_det(0.5, m.analyzer_t, m.analyzer_r) < 1e-15);
    CHECK(instrument_det(1.0 - 1e-12, m.analyzer_t, m.analyzer_r) < 1e-11);
}

TEST_CASE("maximize_determinant agrees with closed form and grid oracle") {
    const PolarimeterModel m = ideal();
    const double opt = maximize_determinant(m.analyzer_t, m.analyzer_r, 1e-6);
    CHECK(std::abs(opt - optimal_splitting_ratio().first) < 1e-6);

    const double grid = oracles::grid_argmax_det(m.analyzer_t, m.analyzer_r, 100000);
    CHECK(std::abs(opt - grid) < 0.5 / 100000 + 1e-6);

    CHECK_THROWS_AS(maximize_determinant(m.analyzer_t, m.analyzer_r, -1.0), Error);
}

TEST_CASE("simulate_counts is deterministic in the seed") {
    const StokesVector h{1.0, 1.0, 0.0, 0.0};
    const CountVector a = simulate_counts(h, ideal(), 1e5, 99);
    const CountVector b = simulate_counts(h, ideal(), 1e5, 99);
    CHECK(a.n == b.n);
    const CountVector c = simulate_counts(h, ideal(), 1e5, 100);
    CHECK(a.n != c.n);
}

TEST_CASE("simulate_counts rejects bad inputs") {
    CHECK_THROWS_AS(simulate_counts({1, 1, 0, 0}, ideal(), 0.0, 1), Error);
    CHECK_THROWS_AS(simulate_counts({1, 1, 0, 0}, ideal(), -5.0, 1), Error);
    CHECK_THROWS_AS(simulate_counts({1.0, 1.1, 0.0, 0.0}, ideal(), 1e4, 1), Unphysical);
    CHECK_THROWS_AS(simulate_counts({0.0, 0.0, 0.0, 0.0}, ideal(), 1e4, 1), ZeroIntensity);
}

TEST_CASE("simulated count fractions match the binomial expectation") {
    const StokesVector h{1.0, 1.0, 0.0, 0.0};
    const double p = 0.1056624327025935;
    double mean_fraction = 0.0;
    const int runs = 1000;
    for (int i = 0; i < runs; ++i) {
        const CountVector c = simulate_counts(h, ideal(), 1e5, mix_seed(404, i));
        mean_fraction += static_cast<double>(c.n[0]) / static_cast<double>(c.total());
    }
    mean_fraction /= runs;
    // 3 sigma of the run-averaged binomial fraction
    const double se = std::sqrt(p * (1.0 - p) / (runs * 1e5));
    CHECK(std::abs(mean_fraction - p) < 3.0 * se);
}

TEST_CASE("simulated counts include dark counts and efficiencies") {
    PolarimeterModel m = ideal();
    m.efficiencies = {0.5, 0.5, 0.5, 0.5};
    m.dark_rate = {50.0, 50.0, 50.0, 50.0};
    const auto lam = expected_intensities(StokesVector{1, 0, 0, 0}, m, 1e4);
    for (int j = 0; j < 4; ++j)
        CHECK(lam[j] == doctest::Approx(0.5 * 0.25 * 1e4 + 50.0).epsilon(1e-12));
}

TEST_CASE("poisson sampler has the right moments") {
    for (double lambda : {0.1, 1.0, 10.0, 1e4}) {
        Rng rng(777);
        const int n = 100000;
        double sum = 0.0, sum_sq = 0.0;
        for (int i = 0; i < n; ++i) {
            const double k = static_cast<double>(rng.poisson(lambda));
            sum += k;
            sum_sq += k * k;
        }
        const double mean = sum / n;
        const double var = sum_sq / n - mean * mean;
        const double se_mean = std::sqrt(lambda / n);
        // Var(sample variance) = (lambda + 2 lambda^2) / n for Poisson
        const double se_var = std::sqrt((lambda + 2.0 * lambda * lambda) / n);
        CHECK(std::abs(mean - lambda) < 5.0 * se_mean);
        CHECK(std::abs(var - lambda) < 5.0 * se_var);
    }
}

TEST_CASE("poisson sampler edge cases") {
    Rng rng(5);
    CHECK(rng.poisson(0.0) == 0);
    CHECK_THROWS_AS(rng.poisson(-1.0), Error);
}
