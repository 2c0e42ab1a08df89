#pragma once

// Seeded sampling that is identical on every platform: std::mt19937_64 is
// fully specified by the standard, and the transformations below avoid the
// implementation-defined std::*_distribution classes.

#include <complex>
#include <cstdint>
#include <random>

namespace teig {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [lo, hi].
    long uniform_int(long lo, long hi);
    /// Standard normal via Box-Muller (polar-free form, pairs cached).
    double normal();
    /// Real and imaginary parts independent standard normals.
    std::complex<double> cnormal() { return {normal(), normal()}; }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace teig
