#pragma once

// Gowers uniformity norms ||f||_{U^{s+1}} on Z_N.

#include <span>
#include <string>
#include <vector>

#include "hofa/budget.hpp"
#include "hofa/domain.hpp"
#include "hofa/parallel.hpp"

namespace hofa {

enum class NormMethod { naive, recursive, ssf, fourier, fast };

const char* to_string(NormMethod m);
NormMethod norm_method_from_string(const std::string& s);

struct NormReport {
    int s = 0;
    double value = 0.0;
    NormMethod method = NormMethod::naive;
    double cost = 0.0;                  // operation count estimate
    std::vector<std::string> warnings;  // e.g. clamped round-off
};

struct NormOptions {
    Budget budget = Budget::standard();
    parallel::Options par{};
};

/// Literal definition: average of the vertex product over (x, h_1..h_{s+1}).
NormReport gowers_naive(const GroupFn& f, int s, const NormOptions& opt = {});
/// value^{2^{s+1}} = E_h ||Delta_h f||_{U^s}^{2^s}, with the U^2 base computed from the spectrum.
/// Runs sequentially; see gowers_fast for the parallel variant.
NormReport gowers_recursive(const GroupFn& f, int s, const NormOptions& opt = {});
/// Production path: recursive identity with the outer average spread over workers.
NormReport gowers_fast(const GroupFn& f, int s, const NormOptions& opt = {});
/// (sum_a |fhat(a)|^4)^{1/4}.
NormReport u2_via_fourier(const GroupFn& f);
/// E_x Delta_{h_1..h_k} f(x); requires k >= 1.
cplx ssf(const GroupFn& f, std::span<const std::int64_t> hs);
/// (E_{h in Z_N^s} |E_x Delta_h f(x)|^2)^{1/2^{s+1}}.
NormReport gowers_via_ssf(const GroupFn& f, int s, const NormOptions& opt = {});

NormReport gowers(const GroupFn& f, int s, NormMethod method, const NormOptions& opt = {});

/// ||f||_{U^{s+1}}^{2^{s+1}} via the recursive identity (no root, no clamping).
double gowers_power(const GroupFn& f, int s, const parallel::Options& par = {.jobs = 1});

}  // namespace hofa
