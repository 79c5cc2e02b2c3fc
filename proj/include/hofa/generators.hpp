#pragma once

// Signal generators: phases, brackets, seeded noise, and mixtures.

#include <cstdint>
#include <string>
#include <vector>

#include "hofa/domain.hpp"

namespace hofa {

/// x -> {ax/N}, rational mode over N.
GroupFn bracket_linear(std::int64_t n, std::int64_t a);
/// x -> {ax/N}{bx/N}, rational mode over N^2.
GroupFn bracket_quadratic(std::int64_t n, std::int64_t a, std::int64_t b);
/// x -> e(-(a/N) x floor(bx/N)) for x in [0, N).
GroupFn bracket_phase(std::int64_t n, std::int64_t a, std::int64_t b);

enum class NoiseKind { unimodular, signs, bounded, real, rational };
NoiseKind noise_kind_from_string(const std::string& s);

/// Seeded noise on Z_N; rational noise has numerators uniform in [0, denom).
GroupFn noise(std::int64_t n, NoiseKind kind, std::uint64_t seed, std::int64_t denom = 0);

/// Agrees with `base` on a seeded random set of density about `weight`, and is
/// noise of the matching mode elsewhere (unimodular for complex bases).
GroupFn mix(const GroupFn& base, double weight, std::uint64_t seed);

/// x -> e(f(x)) for a real or rational f (exact reduction in rational mode).
GroupFn exp_phase(const GroupFn& f);

/// Pointwise w f + (1 - w) g as a complex function.
GroupFn blend(const GroupFn& f, const GroupFn& g, double w);

}  // namespace hofa
