#pragma once

#include <cmath>

#include "tetrapol/errors.hpp"

namespace tetrapol {

/// Point in (or on) the Poincare sphere: the polarization part of a
/// Stokes vector divided by its intensity.  Unit norm for pure states.
struct ReducedStokes {
    double r_x = 0.0;
    double r_y = 0.0;
    double r_z = 0.0;

    double dot(const ReducedStokes& o) const {
        return r_x * o.r_x + r_y * o.r_y + r_z * o.r_z;
    }
    double norm() const { return std::sqrt(dot(*this)); }
};

inline ReducedStokes operator+(const ReducedStokes& a, const ReducedStokes& b) {
    return {a.r_x + b.r_x, a.r_y + b.r_y, a.r_z + b.r_z};
}

inline ReducedStokes operator*(double s, const ReducedStokes& r) {
    return {s * r.r_x, s * r.r_y, s * r.r_z};
}

/// Full Stokes vector: total intensity s_m plus the three polarization
/// components, all in the same (arbitrary) intensity units.
///
/// Axis convention, fixed throughout the library:
///   s_x : +1 = horizontal, -1 = vertical linear
///   s_y : +1 = +45 degree, -1 = -45 degree linear
///   s_z : +1 = right circular, i.e. the Jones state (1, i)/sqrt(2)
struct StokesVector {
    double s_m = 0.0;
    double s_x = 0.0;
    double s_y = 0.0;
    double s_z = 0.0;

    /// Polarization components divided by intensity.  Requires s_m > 0.
    ReducedStokes reduced() const {
        if (s_m <= 0.0)
            throw ZeroIntensity("StokesVector::reduced: non-positive intensity");
        return {s_x / s_m, s_y / s_m, s_z / s_m};
    }

    /// Unit-intensity form (1, s_x/s_m, s_y/s_m, s_z/s_m).  Requires s_m > 0.
    StokesVector normalized() const {
        const ReducedStokes r = reduced();
        return {1.0, r.r_x, r.r_y, r.r_z};
    }
};

/// sqrt(s_x^2 + s_y^2 + s_z^2) / s_m: 0 for unpolarized light, 1 for pure states.
inline double degree_of_polarization(const StokesVector& s) {
    if (s.s_m <= 0.0)
        throw ZeroIntensity("degree_of_polarization: non-positive intensity");
    return std::sqrt(s.s_x * s.s_x + s.s_y * s.s_y + s.s_z * s.s_z) / s.s_m;
}

/// Builds a (possibly mixed) state from a Poincare-sphere point and intensity.
inline StokesVector stokes_from_reduced(const ReducedStokes& r, double intensity = 1.0) {
    return {intensity, intensity * r.r_x, intensity * r.r_y, intensity * r.r_z};
}

} // namespace tetrapol
