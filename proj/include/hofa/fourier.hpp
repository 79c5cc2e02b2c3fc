#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "hofa/domain.hpp"

namespace hofa {

/// Unnormalized length-n transform X[k] = sum_j x[j] e(-jk/n) (sign flipped for inverse).
/// Radix-2 for powers of two, chirp-z (Bluestein) otherwise. Immutable after construction.
class FftPlan {
public:
    explicit FftPlan(std::int64_t n);
    ~FftPlan();
    FftPlan(FftPlan&&) noexcept;
    FftPlan& operator=(FftPlan&&) noexcept;

    std::int64_t size() const { return n_; }
    void forward(std::span<cplx> data) const;
    void inverse(std::span<cplx> data) const;

private:
    struct Impl;
    std::int64_t n_;
    std::unique_ptr<Impl> impl_;
};

/// Normalized coefficients fhat(a) = E_x f(x) e(-ax/N).
struct Spectrum {
    std::int64_t n = 0;
    std::vector<cplx> coeffs;
};

Spectrum dft(const GroupFn& f);
/// O(N^2) reference transform.
Spectrum dft_direct(const GroupFn& f);
/// x -> sum_a F(a) e(ax/N).
GroupFn idft(const Spectrum& F);

/// sum_a |F(a)|^2
double spectral_energy(const Spectrum& F);

}  // namespace hofa
