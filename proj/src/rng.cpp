#include "tetrapol/rng.hpp"

#include <cmath>

#include "tetrapol/errors.hpp"

namespace tetrapol {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ (a + 0x9E3779B97F4A7C15ull));
    h = splitmix64(h ^ (b + 0xD1B54A32D192ED03ull));
    return h;
}

double Rng::gaussian() {
    if (have_cached_gauss_) {
        have_cached_gauss_ = false;
        return cached_gauss_;
    }
    // log1p(-u) keeps the argument strictly negative for u in [0, 1)
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    const double a = 2.0 * M_PI * u2;
    cached_gauss_ = r * std::sin(a);
    have_cached_gauss_ = true;
    return r * std::cos(a);
}

std::uint64_t Rng::poisson(double mean) {
    if (!(mean >= 0.0))
        throw Error("Rng::poisson: mean must be non-negative");
    if (mean == 0.0)
        return 0;
    if (mean < 10.0)
        return poisson_inversion(mean);
    return poisson_ptrs(mean);
}

std::uint64_t Rng::poisson_inversion(double mean) {
    double p = std::exp(-mean);
    double cdf = p;
    const double u = uniform01();
    std::uint64_t k = 0;
    while (u > cdf) {
        ++k;
        p *= mean / static_cast<double>(k);
        cdf += p;
        if (k > 2000) // unreachable for mean < 10; guards fp underflow
            break;
    }
    return k;
}

// Hormann's PTRS transformed-rejection sampler; exact for mean >= 10.
std::uint64_t Rng::poisson_ptrs(double mean) {
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = uniform01() - 0.5;
        const double v = uniform01();
        const double us = 0.5 - std::abs(u);
        const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r)
            return static_cast<std::uint64_t>(k);
        if (k < 0.0 || (us < 0.013 && v > us))
            continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            -mean + k * loglam - std::lgamma(k + 1.0))
            return static_cast<std::uint64_t>(k);
    }
}

} // namespace tetrapol
