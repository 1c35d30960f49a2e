#include "tetrapol/coherency.hpp"

#include <algorithm>
#include <cmath>

namespace tetrapol {

namespace {

constexpr double kHermTol = 1e-12;
constexpr double kEigenTol = 1e-10;

void require_state(const CoherencyMatrix& m, const char* who) {
    if (m.hermiticity_defect() > kHermTol)
        throw NotAState(std::string(who) + ": matrix is not Hermitian");
    if (std::abs(m.trace() - 1.0) > kHermTol)
        throw NotAState(std::string(who) + ": trace differs from 1");
    if (m.min_eigenvalue() < -kEigenTol)
        throw NotAState(std::string(who) + ": negative eigenvalue");
}

} // namespace

double CoherencyMatrix::hermiticity_defect() const {
    const double off = std::abs(m10 - std::conj(m01));
    const double diag = std::max(std::abs(m00.imag()), std::abs(m11.imag()));
    return std::max(off, diag);
}

double CoherencyMatrix::min_eigenvalue() const {
    const double half_tr = 0.5 * trace();
    const double disc = half_tr * half_tr - det();
    return half_tr - std::sqrt(std::max(disc, 0.0));
}

CoherencyMatrix jones_to_coherency(const JonesVector& v) {
    const double n2 = v.norm2();
    if (n2 <= 0.0)
        throw ZeroIntensity("jones_to_coherency: zero vector");
    return {v.alpha * std::conj(v.alpha) / n2, v.alpha * std::conj(v.beta) / n2,
            v.beta * std::conj(v.alpha) / n2, v.beta * std::conj(v.beta) / n2};
}

CoherencyMatrix stokes_to_coherency(const StokesVector& s) {
    const ReducedStokes r = s.reduced();
    return {complexd{(1.0 + r.r_x) / 2.0, 0.0},
            complexd{r.r_y / 2.0, -r.r_z / 2.0},
            complexd{r.r_y / 2.0, r.r_z / 2.0},
            complexd{(1.0 - r.r_x) / 2.0, 0.0}};
}

double fidelity(const CoherencyMatrix& a, const CoherencyMatrix& b) {
    require_state(a, "fidelity");
    require_state(b, "fidelity");
    const double tr_ab = (a.m00 * b.m00 + a.m01 * b.m10 +
                          a.m10 * b.m01 + a.m11 * b.m11).real();
    const double dets = std::max(a.det(), 0.0) * std::max(b.det(), 0.0);
    const double f = tr_ab + 2.0 * std::sqrt(dets);
    return std::clamp(f, 0.0, 1.0);
}

double fidelity_pure(const StokesVector& rec, const StokesVector& th) {
    constexpr double kPurityTol = 1e-6;
    if (std::abs(degree_of_polarization(rec) - 1.0) > kPurityTol)
        throw NotPure("fidelity_pure: first argument is not pure");
    if (std::abs(degree_of_polarization(th) - 1.0) > kPurityTol)
        throw NotPure("fidelity_pure: second argument is not pure");
    return 0.5 * (1.0 + rec.reduced().dot(th.reduced()));
}

} // namespace tetrapol
