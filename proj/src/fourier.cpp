#include "hofa/fourier.hpp"

#include <cmath>
#include <numbers>

#include "hofa/error.hpp"

namespace hofa {

namespace {

bool is_pow2(std::int64_t n) { return n > 0 && (n & (n - 1)) == 0; }

struct Radix2 {
    std::int64_t n = 0;
    std::vector<cplx> tw;            // e(-k/n), k < n/2
    std::vector<std::int64_t> rev;

    explicit Radix2(std::int64_t len) : n(len) {
        tw.resize(static_cast<std::size_t>(n / 2));
        for (std::int64_t k = 0; k < n / 2; ++k) tw[static_cast<std::size_t>(k)] = expi_frac(-k, n);
        rev.resize(static_cast<std::size_t>(n));
        int bits = 0;
        while ((std::int64_t{1} << bits) < n) ++bits;
        for (std::int64_t i = 0; i < n; ++i) {
            std::int64_t r = 0;
            for (int b = 0; b < bits; ++b)
                if (i >> b & 1) r |= std::int64_t{1} << (bits - 1 - b);
            rev[static_cast<std::size_t>(i)] = r;
        }
    }

    void run(cplx* a, bool inverse) const {
        for (std::int64_t i = 0; i < n; ++i) {
            const std::int64_t r = rev[static_cast<std::size_t>(i)];
            if (i < r) std::swap(a[i], a[r]);
        }
        for (std::int64_t len = 2; len <= n; len <<= 1) {
            const std::int64_t half = len / 2, step = n / len;
            for (std::int64_t i = 0; i < n; i += len) {
                for (std::int64_t j = 0; j < half; ++j) {
                    cplx w = tw[static_cast<std::size_t>(j * step)];
                    if (inverse) w = std::conj(w);
                    const cplx u = a[i + j], v = a[i + j + half] * w;
                    a[i + j] = u + v;
                    a[i + j + half] = u - v;
                }
            }
        }
    }
};

}  // namespace

struct FftPlan::Impl {
    std::unique_ptr<Radix2> direct;
    // Bluestein
    std::unique_ptr<Radix2> conv;
    std::vector<cplx> chirp;      // e(-j^2 / 2n)
    std::vector<cplx> kernel_hat; // transform of conj(chirp) laid out circularly
};

FftPlan::FftPlan(std::int64_t n) : n_(n), impl_(std::make_unique<Impl>()) {
    if (n < 1) throw DomainError("FFT length must be positive");
    if (is_pow2(n)) {
        impl_->direct = std::make_unique<Radix2>(n);
        return;
    }
    std::int64_t m = 1;
    while (m < 2 * n - 1) m <<= 1;
    impl_->conv = std::make_unique<Radix2>(m);
    impl_->chirp.resize(static_cast<std::size_t>(n));
    for (std::int64_t j = 0; j < n; ++j) {
        const std::int64_t sq = static_cast<std::int64_t>((static_cast<__int128>(j) * j) % (2 * n));
        impl_->chirp[static_cast<std::size_t>(j)] = expi_frac(-sq, 2 * n);
    }
    std::vector<cplx> b(static_cast<std::size_t>(m), 0.0);
    b[0] = std::conj(impl_->chirp[0]);
    for (std::int64_t j = 1; j < n; ++j) {
        const cplx c = std::conj(impl_->chirp[static_cast<std::size_t>(j)]);
        b[static_cast<std::size_t>(j)] = c;
        b[static_cast<std::size_t>(m - j)] = c;
    }
    impl_->conv->run(b.data(), false);
    impl_->kernel_hat = std::move(b);
}

FftPlan::~FftPlan() = default;
FftPlan::FftPlan(FftPlan&&) noexcept = default;
FftPlan& FftPlan::operator=(FftPlan&&) noexcept = default;

void FftPlan::forward(std::span<cplx> data) const {
    if (static_cast<std::int64_t>(data.size()) != n_) throw DomainError("FFT input has wrong length");
    if (impl_->direct) impl_->direct->run(data.data(), false);
    else {
        const Radix2& conv = *impl_->conv;
        const std::int64_t m = conv.n;
        std::vector<cplx> a(static_cast<std::size_t>(m), 0.0);
        for (std::int64_t j = 0; j < n_; ++j)
            a[static_cast<std::size_t>(j)] = data[static_cast<std::size_t>(j)] * impl_->chirp[static_cast<std::size_t>(j)];
        conv.run(a.data(), false);
        for (std::int64_t k = 0; k < m; ++k) a[static_cast<std::size_t>(k)] *= impl_->kernel_hat[static_cast<std::size_t>(k)];
        conv.run(a.data(), true);
        const double inv_m = 1.0 / static_cast<double>(m);
        for (std::int64_t k = 0; k < n_; ++k)
            data[static_cast<std::size_t>(k)] = a[static_cast<std::size_t>(k)] * inv_m * impl_->chirp[static_cast<std::size_t>(k)];
    }
}

void FftPlan::inverse(std::span<cplx> data) const {
    // conj(F(conj(x))) flips the sign of the exponent.
    for (auto& v : data) v = std::conj(v);
    forward(data);
    for (auto& v : data) v = std::conj(v);
}

Spectrum dft(const GroupFn& f) {
    const auto& dom = f.domain();
    if (dom.arity() != 1) throw DomainError("dft supports only d = 1");
    if (!f.total()) throw DomainError("dft requires a total function");
    const std::int64_t n = dom.modulus();
    std::vector<cplx> a(static_cast<std::size_t>(n));
    for (std::int64_t x = 0; x < n; ++x) a[static_cast<std::size_t>(x)] = f.complex_at(x);
    FftPlan(n).forward(a);
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& v : a) v *= inv;
    return {n, std::move(a)};
}

Spectrum dft_direct(const GroupFn& f) {
    const auto& dom = f.domain();
    if (dom.arity() != 1) throw DomainError("dft supports only d = 1");
    if (!f.total()) throw DomainError("dft requires a total function");
    const std::int64_t n = dom.modulus();
    std::vector<cplx> out(static_cast<std::size_t>(n));
    for (std::int64_t a = 0; a < n; ++a) {
        cplx s = 0.0;
        for (std::int64_t x = 0; x < n; ++x)
            s += f.complex_at(x) * expi_frac(-static_cast<std::int64_t>((static_cast<__int128>(a) * x) % n), n);
        out[static_cast<std::size_t>(a)] = s / static_cast<double>(n);
    }
    return {n, std::move(out)};
}

GroupFn idft(const Spectrum& F) {
    if (static_cast<std::int64_t>(F.coeffs.size()) != F.n) throw DomainError("spectrum length mismatch");
    std::vector<cplx> a = F.coeffs;
    FftPlan(F.n).inverse(a);
    return GroupFn::complex(CyclicDomain(F.n), std::move(a));
}

double spectral_energy(const Spectrum& F) {
    double s = 0.0;
    for (const auto& c : F.coeffs) s += std::norm(c);
    return s;
}

}  // namespace hofa
