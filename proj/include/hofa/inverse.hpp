#pragma once

// U^2 inverse, exhaustive polynomial-phase search, and the character field.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hofa/budget.hpp"
#include "hofa/domain.hpp"
#include "hofa/parallel.hpp"

namespace hofa {

/// |E_x f(x) conj(g(x))|
double correlate(const GroupFn& f, const GroupFn& g);

struct CorrelationResult {
    int degree = 1;
    /// Phase coefficients (a_1, ..., a_s): the witness is x -> e((a_1 x + ... + a_s x^s)/N).
    std::vector<std::int64_t> coeffs;
    double correlation = 0.0;
    /// ||f||_{U^2}^2 for u2_inverse (the guaranteed lower bound when f is 1-bounded), else 0.
    double guarantee = 0.0;

    GroupFn witness(std::int64_t n) const;
};

/// Largest Fourier coefficient (smallest frequency on ties).
CorrelationResult u2_inverse(const GroupFn& f);

/// Exhaustive maximization of correlate(f, e(P/N)) over integer P of degree <= s without constant term.
CorrelationResult poly_phase_search(const GroupFn& f, int s, const Budget& budget = Budget::standard(),
                                    const parallel::Options& par = {});

struct CharacterField {
    std::int64_t n = 0;
    int arity = 0;  // s - 2
    std::vector<std::int64_t> phi;     // selected frequency per point of Z_N^{s-2}
    std::vector<double> magnitude;     // |E_h S(hs, h) conj(chi(h))| at that frequency
    std::vector<double> energy;        // sum over all frequencies of squared magnitudes

    /// Phi as a rational function h -> Phi(h)/N on Z_N^{arity}.
    GroupFn as_function() const;
};

/// For each hs in Z_N^{s-2}, the Fourier transform of h -> E_x Delta_{(hs,h)} f(x)
/// and its largest frequency. Requires s >= 3.
CharacterField character_field(const GroupFn& f, int s, const Budget& budget = Budget::standard(),
                               const parallel::Options& par = {});

/// x -> e(P(h_1 + x, ..., h_m + x)) for a phase P given as a real/rational function on Z_N^m.
GroupFn diagonal_project(const GroupFn& phase, std::span<const std::int64_t> hs);
/// Same with P supplied as a callable returning the phase in R/Z.
GroupFn diagonal_project(std::int64_t n, const std::function<double(std::span<const std::int64_t>)>& phase,
                         std::span<const std::int64_t> hs);

/// Ties within this absolute tolerance go to the earlier candidate.
inline constexpr double kArgmaxTieTol = 1e-12;

}  // namespace hofa
