#include "hofa/random.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "hofa/error.hpp"

namespace hofa {

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw DomainError("uniform_int: empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(eng_());
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t r;
    do r = eng_();
    while (r >= limit);
    return lo + static_cast<std::int64_t>(r % span);
}

double Rng::normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

GroupFn random_unimodular(const CyclicDomain& dom, Rng& rng) {
    std::vector<cplx> v(static_cast<std::size_t>(dom.size()));
    for (auto& x : v) x = expi(rng.uniform());
    return GroupFn::complex(dom, std::move(v));
}

GroupFn random_signs(const CyclicDomain& dom, Rng& rng) {
    std::vector<cplx> v(static_cast<std::size_t>(dom.size()));
    for (auto& x : v) x = (rng.next() >> 63) ? 1.0 : -1.0;
    return GroupFn::complex(dom, std::move(v));
}

GroupFn random_bounded(const CyclicDomain& dom, Rng& rng) {
    std::vector<cplx> v(static_cast<std::size_t>(dom.size()));
    for (auto& x : v) {
        const double r = std::sqrt(rng.uniform());
        x = r * expi(rng.uniform());
    }
    return GroupFn::complex(dom, std::move(v));
}

GroupFn random_real(const CyclicDomain& dom, Rng& rng) {
    std::vector<double> v(static_cast<std::size_t>(dom.size()));
    for (auto& x : v) x = 2.0 * rng.uniform() - 1.0;
    return GroupFn::real(dom, std::move(v));
}

namespace {
std::int64_t poly_mod(std::int64_t n, const std::vector<std::int64_t>& coeffs, std::int64_t x) {
    std::int64_t acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        acc = mod(static_cast<std::int64_t>((static_cast<__int128>(acc) * x + mod(*it, n)) % n), n);
    return acc;
}
}  // namespace

GroupFn poly_phase(std::int64_t n, const std::vector<std::int64_t>& coeffs) {
    CyclicDomain dom(n);
    std::vector<cplx> v(static_cast<std::size_t>(n));
    for (std::int64_t x = 0; x < n; ++x) v[static_cast<std::size_t>(x)] = expi_frac(poly_mod(n, coeffs, x), n);
    return GroupFn::complex(dom, std::move(v));
}

GroupFn poly_rational(std::int64_t n, const std::vector<std::int64_t>& coeffs) {
    CyclicDomain dom(n);
    std::vector<std::int64_t> v(static_cast<std::size_t>(n));
    for (std::int64_t x = 0; x < n; ++x) v[static_cast<std::size_t>(x)] = poly_mod(n, coeffs, x);
    return GroupFn::rational(dom, std::move(v), n);
}

}  // namespace hofa
