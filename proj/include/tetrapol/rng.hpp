#pragma once

#include <cstdint>
#include <random>

namespace tetrapol {

/// Hash-combines a seed with up to two stream identifiers.  Used to derive
/// independent per-record / per-grid-point sub-seeds from one master seed
/// so that individual points are reproducible in isolation.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

/// Deterministic random generator.  The core engine is std::mt19937_64
/// (sequence fixed by the standard); all distributions on top of it are
/// implemented here so results do not depend on the standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal deviate (Box-Muller, pairs cached).
    double gaussian();

    /// Poisson deviate with the given mean.  Exact: sequential inversion
    /// for small means, transformed rejection (PTRS) for mean >= 10.
    std::uint64_t poisson(double mean);

private:
    std::uint64_t poisson_inversion(double mean);
    std::uint64_t poisson_ptrs(double mean);

    std::mt19937_64 gen_;
    double cached_gauss_ = 0.0;
    bool have_cached_gauss_ = false;
};

} // namespace tetrapol
