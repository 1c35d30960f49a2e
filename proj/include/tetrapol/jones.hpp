#pragma once

#include <cmath>
#include <complex>

#include "tetrapol/stokes.hpp"

namespace tetrapol {

using complexd = std::complex<double>;

/// Pure polarization state as a pair of complex field amplitudes in the
/// fixed (H, V) basis.  Global phase carries no physical meaning.
struct JonesVector {
    complexd alpha{0.0, 0.0}; ///< H amplitude
    complexd beta{0.0, 0.0};  ///< V amplitude

    double norm2() const { return std::norm(alpha) + std::norm(beta); }

    JonesVector normalized() const {
        const double n = std::sqrt(norm2());
        if (n <= 0.0)
            throw ZeroIntensity("JonesVector::normalized: zero vector");
        return {alpha / n, beta / n};
    }

    /// Hermitian inner product <this|other>.
    complexd inner(const JonesVector& other) const {
        return std::conj(alpha) * other.alpha + std::conj(beta) * other.beta;
    }

    /// The state orthogonal to this one (unique up to phase).
    JonesVector orthogonal() const {
        return {-std::conj(beta), std::conj(alpha)};
    }
};

/// 2x2 complex matrix acting on Jones vectors.
struct JonesMatrix {
    complexd a{1.0, 0.0}, b{0.0, 0.0};
    complexd c{0.0, 0.0}, d{1.0, 0.0};

    JonesVector apply(const JonesVector& v) const {
        return {a * v.alpha + b * v.beta, c * v.alpha + d * v.beta};
    }
};

inline JonesMatrix operator*(const JonesMatrix& m, const JonesMatrix& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
            m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
}

/// Max absolute entry of (U^dagger U - I); 0 for a lossless (unitary) element.
inline double unitarity_defect(const JonesMatrix& u) {
    const complexd g00 = std::conj(u.a) * u.a + std::conj(u.c) * u.c - 1.0;
    const complexd g01 = std::conj(u.a) * u.b + std::conj(u.c) * u.d;
    const complexd g11 = std::conj(u.b) * u.b + std::conj(u.d) * u.d - 1.0;
    return std::max({std::abs(g00), std::abs(g01), std::abs(g11)});
}

/// Stokes vector of a pure state.  Unnormalized input is allowed; the
/// result has s_m = |alpha|^2 + |beta|^2 and unit degree of polarization.
inline StokesVector jones_to_stokes(const JonesVector& v) {
    const double pa = std::norm(v.alpha);
    const double pb = std::norm(v.beta);
    const complexd cross = std::conj(v.alpha) * v.beta;
    return {pa + pb, pa - pb, 2.0 * cross.real(), 2.0 * cross.imag()};
}

} // namespace tetrapol
