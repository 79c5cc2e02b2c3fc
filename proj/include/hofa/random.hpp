#pragma once

// Seeded generators. Only the raw engine output is used, so streams are
// identical across standard library implementations.

#include <cstdint>
#include <random>
#include <vector>

#include "hofa/domain.hpp"

namespace hofa {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }
    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    /// Uniform integer in [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
    /// Standard normal (Box-Muller).
    double normal();

private:
    std::mt19937_64 eng_;
};

/// |f| = 1 with uniformly random phase.
GroupFn random_unimodular(const CyclicDomain& dom, Rng& rng);
/// Random +-1 values.
GroupFn random_signs(const CyclicDomain& dom, Rng& rng);
/// Complex values in the unit disk.
GroupFn random_bounded(const CyclicDomain& dom, Rng& rng);
/// Real values in [-1, 1).
GroupFn random_real(const CyclicDomain& dom, Rng& rng);

/// x -> e(P(x)/N) with P an integer polynomial (coefficients low degree first), d = 1.
GroupFn poly_phase(std::int64_t n, const std::vector<std::int64_t>& coeffs);
/// x -> P(x) mod N as a rational function over N, d = 1.
GroupFn poly_rational(std::int64_t n, const std::vector<std::int64_t>& coeffs);

}  // namespace hofa
