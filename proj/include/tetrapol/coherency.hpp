#pragma once

#include <complex>

#include "tetrapol/jones.hpp"
#include "tetrapol/stokes.hpp"

namespace tetrapol {

/// 2x2 coherency (density) matrix of a possibly mixed polarization state.
/// Hermitian and positive semidefinite; trace 1 when normalized.
struct CoherencyMatrix {
    complexd m00{0.0, 0.0}, m01{0.0, 0.0};
    complexd m10{0.0, 0.0}, m11{0.0, 0.0};

    double trace() const { return (m00 + m11).real(); }

    /// Determinant; real for Hermitian input.
    double det() const { return (m00 * m11 - m01 * m10).real(); }

    /// Max deviation from m10 == conj(m01) and real diagonal.
    double hermiticity_defect() const;

    /// Smaller eigenvalue, assuming Hermitian input.
    double min_eigenvalue() const;
};

/// rho = |v><v| / <v|v>.
CoherencyMatrix jones_to_coherency(const JonesVector& v);

/// Normalized coherency matrix of a Stokes vector (intensity divided out).
/// Throws ZeroIntensity when s_m <= 0.
CoherencyMatrix stokes_to_coherency(const StokesVector& s);

/// Fidelity between two normalized states, F in [0, 1].
///
/// Evaluated with the 2x2 closed form F = Tr(a b) + 2 sqrt(det a det b),
/// equivalent to the matrix-square-root definition for qubit states.
/// Throws NotAState when an argument is not Hermitian positive
/// semidefinite with unit trace (within tolerance).
double fidelity(const CoherencyMatrix& a, const CoherencyMatrix& b);

/// Pure-state fidelity as the overlap of normalized Stokes 4-vectors:
/// (1 + r_a . r_b) / 2.  Both inputs must have degree of polarization
/// within 1e-6 of 1, else NotPure is thrown.
double fidelity_pure(const StokesVector& rec, const StokesVector& th);

} // namespace tetrapol
