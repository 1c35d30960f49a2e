#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tetrapol/coherency.hpp"
#include "tetrapol/jones.hpp"
#include "tetrapol/rng.hpp"
#include "tetrapol/stokes.hpp"

using namespace tetrapol;

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
const JonesVector kH{1.0, 0.0};
const JonesVector kV{0.0, 1.0};
const JonesVector kDiag{kInvSqrt2, kInvSqrt2};
const JonesVector kCirc{kInvSqrt2, complexd{0.0, kInvSqrt2}};
} // namespace

TEST_CASE("jones_to_stokes maps the basis states to the pole axes") {
    const StokesVector h = jones_to_stokes(kH);
    CHECK(h.s_m == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(h.s_x == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(h.s_y) < 1e-14);
    CHECK(std::abs(h.s_z) < 1e-14);

    const StokesVector d = jones_to_stokes(kDiag);
    CHECK(d.s_y == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(d.s_x) < 1e-12);
    CHECK(std::abs(d.s_z) < 1e-12);

    const StokesVector c = jones_to_stokes(kCirc);
    CHECK(c.s_z == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(c.s_x) < 1e-12);
    CHECK(std::abs(c.s_y) < 1e-12);
}

TEST_CASE("jones_to_stokes keeps unnormalized intensity and purity") {
    Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
        const JonesVector v{{rng.gaussian(), rng.gaussian()}, {rng.gaussian(), rng.gaussian()}};
        if (v.norm2() < 1e-6)
            continue;
        const StokesVector s = jones_to_stokes(v);
        CHECK(s.s_m == doctest::Approx(v.norm2()).epsilon(1e-12));
        CHECK(degree_of_polarization(s) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("jones_to_stokes is invariant under global phase") {
    Rng rng(12);
    for (int i = 0; i < 1000; ++i) {
        const JonesVector v = oracles::random_pure(rng);
        const complexd phase = std::polar(1.0, 2.0 * M_PI * rng.uniform01());
        const StokesVector a = jones_to_stokes(v);
        const StokesVector b = jones_to_stokes({phase * v.alpha, phase * v.beta});
        CHECK(std::abs(a.s_m - b.s_m) < 1e-12);
        CHECK(std::abs(a.s_x - b.s_x) < 1e-12);
        CHECK(std::abs(a.s_y - b.s_y) < 1e-12);
        CHECK(std::abs(a.s_z - b.s_z) < 1e-12);
    }
}

TEST_CASE("degree_of_polarization") {
    CHECK(degree_of_polarization({1.0, 1.0, 0.0, 0.0}) == doctest::Approx(1.0));
    CHECK(degree_of_polarization({1.0, 0.0, 0.0, 0.0}) == doctest::Approx(0.0));
    CHECK(degree_of_polarization({2.0, 1.0, 0.0, 0.0}) == doctest::Approx(0.5));
    CHECK_THROWS_AS(degree_of_polarization({0.0, 0.0, 0.0, 0.0}), ZeroIntensity);
    CHECK_THROWS_AS(degree_of_polarization({-1.0, 0.0, 0.0, 0.0}), ZeroIntensity);
}

TEST_CASE("normalized divides the intensity out") {
    const StokesVector s{4.0, 2.0, 1.0, -1.0};
    const StokesVector n = s.normalized();
    CHECK(n.s_m == doctest::Approx(1.0));
    CHECK(n.s_x == doctest::Approx(0.5));
    CHECK(n.s_y == doctest::Approx(0.25));
    CHECK(n.s_z == doctest::Approx(-0.25));
    CHECK_THROWS_AS(StokesVector{}.normalized(), ZeroIntensity);
}

TEST_CASE("stokes_to_coherency: unpolarized, pole, and scaled inputs") {
    const CoherencyMatrix u = stokes_to_coherency({1.0, 0.0, 0.0, 0.0});
    CHECK(std::abs(u.m00 - 0.5) < 1e-15);
    CHECK(std::abs(u.m11 - 0.5) < 1e-15);
    CHECK(std::abs(u.m01) < 1e-15);

    const CoherencyMatrix h = stokes_to_coherency({1.0, 1.0, 0.0, 0.0});
    CHECK(std::abs(h.m00 - 1.0) < 1e-15);
    CHECK(std::abs(h.m11) < 1e-15);

    // overall intensity is normalized away
    const CoherencyMatrix h2 = stokes_to_coherency({2.0, 2.0, 0.0, 0.0});
    CHECK(std::abs(h2.m00 - h.m00) < 1e-15);
    CHECK(std::abs(h2.m11 - h.m11) < 1e-15);

    CHECK_THROWS_AS(stokes_to_coherency({0.0, 0.0, 0.0, 0.0}), ZeroIntensity);
}

TEST_CASE("stokes_to_coherency matches the jones route and stays a state") {
    Rng rng(13);
    for (int i = 0; i < 500; ++i) {
        const JonesVector v = oracles::random_pure(rng);
        const CoherencyMatrix a = jones_to_coherency(v);
        const CoherencyMatrix b = stokes_to_coherency(jones_to_stokes(v));
        CHECK(std::abs(a.m00 - b.m00) < 1e-12);
        CHECK(std::abs(a.m01 - b.m01) < 1e-12);
        CHECK(std::abs(a.m11 - b.m11) < 1e-12);
    }
    for (int i = 0; i < 500; ++i) {
        const CoherencyMatrix m = stokes_to_coherency(oracles::random_mixed(rng));
        CHECK(m.trace() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(m.hermiticity_defect() < 1e-15);
        CHECK(m.min_eigenvalue() > -1e-10);
        CHECK(m.min_eigenvalue() < 1.0 + 1e-10);
    }
}

TEST_CASE("fidelity: identical, orthogonal, and half-mixed pairs") {
    const CoherencyMatrix h = jones_to_coherency(kH);
    const CoherencyMatrix v = jones_to_coherency(kV);
    const CoherencyMatrix mixed = stokes_to_coherency({1.0, 0.0, 0.0, 0.0});
    CHECK(fidelity(h, h) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fidelity(h, v) < 1e-12);
    // closed form and the square-root definition both give exactly 1/2
    CHECK(fidelity(h, mixed) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(oracles::fidelity_sqrt(h, mixed) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("fidelity rejects non-states") {
    const CoherencyMatrix bad_trace{complexd{0.9, 0.0}, {}, {}, complexd{0.0, 0.0}};
    CHECK_THROWS_AS(fidelity(bad_trace, bad_trace), NotAState);
    const CoherencyMatrix not_hermitian{complexd{0.5, 0.0}, complexd{0.3, 0.0},
                                        complexd{-0.3, 0.0}, complexd{0.5, 0.0}};
    CHECK_THROWS_AS(fidelity(not_hermitian, not_hermitian), NotAState);
    const CoherencyMatrix not_psd{complexd{1.2, 0.0}, {}, {}, complexd{-0.2, 0.0}};
    CHECK_THROWS_AS(fidelity(not_psd, not_psd), NotAState);
}

TEST_CASE("fidelity is symmetric and matches the square-root definition") {
    Rng rng(14);
    for (int i = 0; i < 1000; ++i) {
        const CoherencyMatrix a = stokes_to_coherency(oracles::random_mixed(rng));
        const CoherencyMatrix b = stokes_to_coherency(oracles::random_mixed(rng));
        const double fab = fidelity(a, b);
        CHECK(std::abs(fab - fidelity(b, a)) < 1e-12);
        CHECK(std::abs(fab - oracles::fidelity_sqrt(a, b)) < 1e-10);
    }
}

TEST_CASE("fidelity_pure: poles and orthogonal states") {
    const StokesVector h = jones_to_stokes(kH);
    const StokesVector v = jones_to_stokes(kV);
    const StokesVector d = jones_to_stokes(kDiag);
    CHECK(fidelity_pure(h, h) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fidelity_pure(h, d) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(fidelity_pure(h, v)) < 1e-12);
    CHECK_THROWS_AS(fidelity_pure(h, StokesVector{1.0, 0.5, 0.0, 0.0}), NotPure);
}

TEST_CASE("fidelity_pure agrees with the coherency-matrix fidelity") {
    Rng rng(15);
    for (int i = 0; i < 1000; ++i) {
        const StokesVector a = jones_to_stokes(oracles::random_pure(rng));
        const StokesVector b = jones_to_stokes(oracles::random_pure(rng));
        const double shortcut = fidelity_pure(a, b);
        const double full = fidelity(stokes_to_coherency(a), stokes_to_coherency(b));
        CHECK(std::abs(shortcut - full) < 1e-12);
    }
}
