#include "hofa/generators.hpp"

#include "hofa/error.hpp"
#include "hofa/random.hpp"

namespace hofa {

namespace {

std::int64_t residue(std::int64_t a, std::int64_t x, std::int64_t n) {
    return mod(static_cast<std::int64_t>((static_cast<__int128>(a) * x) % n), n);
}

void require_modulus(std::int64_t n) {
    if (n < 1) throw DomainError("modulus must be positive");
}

}  // namespace

GroupFn bracket_linear(std::int64_t n, std::int64_t a) {
    require_modulus(n);
    std::vector<std::int64_t> v(static_cast<std::size_t>(n));
    for (std::int64_t x = 0; x < n; ++x) v[static_cast<std::size_t>(x)] = residue(a, x, n);
    return GroupFn::rational(CyclicDomain(n), std::move(v), n);
}

GroupFn bracket_quadratic(std::int64_t n, std::int64_t a, std::int64_t b) {
    require_modulus(n);
    if (n > 3'000'000'000LL) throw DomainError("modulus too large for an N^2 denominator");
    std::vector<std::int64_t> v(static_cast<std::size_t>(n));
    for (std::int64_t x = 0; x < n; ++x) v[static_cast<std::size_t>(x)] = residue(a, x, n) * residue(b, x, n);
    return GroupFn::rational(CyclicDomain(n), std::move(v), n * n);
}

GroupFn bracket_phase(std::int64_t n, std::int64_t a, std::int64_t b) {
    require_modulus(n);
    std::vector<cplx> v(static_cast<std::size_t>(n));
    for (std::int64_t x = 0; x < n; ++x) {
        // -(a x / N) floor(b x / N), reduced mod 1 through its numerator over N
        const std::int64_t fl = static_cast<std::int64_t>((static_cast<__int128>(b) * x - residue(b, x, n)) / n);
        const std::int64_t num = mod(static_cast<std::int64_t>(-(static_cast<__int128>(residue(a, x, n)) * mod(fl, n) % n)), n);
        v[static_cast<std::size_t>(x)] = expi_frac(num, n);
    }
    return GroupFn::complex(CyclicDomain(n), std::move(v));
}

NoiseKind noise_kind_from_string(const std::string& s) {
    if (s == "unimodular") return NoiseKind::unimodular;
    if (s == "signs") return NoiseKind::signs;
    if (s == "bounded") return NoiseKind::bounded;
    if (s == "real") return NoiseKind::real;
    if (s == "rational") return NoiseKind::rational;
    throw DomainError("unknown noise kind '" + s + "'");
}

GroupFn noise(std::int64_t n, NoiseKind kind, std::uint64_t seed, std::int64_t denom) {
    require_modulus(n);
    CyclicDomain dom(n);
    Rng rng(seed);
    switch (kind) {
        case NoiseKind::unimodular: return random_unimodular(dom, rng);
        case NoiseKind::signs: return random_signs(dom, rng);
        case NoiseKind::bounded: return random_bounded(dom, rng);
        case NoiseKind::real: return random_real(dom, rng);
        case NoiseKind::rational: {
            const std::int64_t q = denom > 0 ? denom : n;
            std::vector<std::int64_t> v(static_cast<std::size_t>(n));
            for (auto& x : v) x = rng.uniform_int(0, q - 1);
            return GroupFn::rational(dom, std::move(v), q);
        }
    }
    throw InternalError("unhandled noise kind");
}

GroupFn mix(const GroupFn& base, double weight, std::uint64_t seed) {
    if (!(weight >= 0.0 && weight <= 1.0)) throw DomainError("mix weight must lie in [0, 1]");
    if (!base.total()) throw DomainError("mix needs a total base function");
    const std::int64_t size = base.size();
    Rng rng(seed);
    std::vector<std::uint8_t> keep(static_cast<std::size_t>(size));
    for (auto& k : keep) k = rng.uniform() < weight ? 1 : 0;
    switch (base.mode()) {
        case ValueMode::complex: {
            std::vector<cplx> v(base.complex_values().begin(), base.complex_values().end());
            for (std::int64_t i = 0; i < size; ++i)
                if (!keep[static_cast<std::size_t>(i)]) v[static_cast<std::size_t>(i)] = expi(rng.uniform());
            return GroupFn::complex(base.domain(), std::move(v));
        }
        case ValueMode::real: {
            std::vector<double> v(base.real_values().begin(), base.real_values().end());
            for (std::int64_t i = 0; i < size; ++i)
                if (!keep[static_cast<std::size_t>(i)]) v[static_cast<std::size_t>(i)] = rng.uniform();
            return GroupFn::real(base.domain(), std::move(v));
        }
        case ValueMode::rational: {
            std::vector<std::int64_t> v(base.numerators().begin(), base.numerators().end());
            for (std::int64_t i = 0; i < size; ++i)
                if (!keep[static_cast<std::size_t>(i)]) v[static_cast<std::size_t>(i)] = rng.uniform_int(0, base.denom() - 1);
            return GroupFn::rational(base.domain(), std::move(v), base.denom());
        }
    }
    throw InternalError("unhandled value mode");
}

GroupFn exp_phase(const GroupFn& f) {
    if (f.mode() == ValueMode::complex) throw DomainError("exp_phase needs a real or rational function");
    if (!f.total()) throw DomainError("exp_phase needs a total function");
    std::vector<cplx> v(static_cast<std::size_t>(f.size()));
    for (std::int64_t i = 0; i < f.size(); ++i)
        v[static_cast<std::size_t>(i)] =
            f.mode() == ValueMode::rational ? expi_frac(f.numerator(i), f.denom()) : expi(f.real_at(i));
    return GroupFn::complex(f.domain(), std::move(v));
}

GroupFn blend(const GroupFn& f, const GroupFn& g, double w) {
    if (!(f.domain() == g.domain())) throw DomainError("blend: functions live on different domains");
    if (!f.total() || !g.total()) throw DomainError("blend needs total functions");
    std::vector<cplx> v(static_cast<std::size_t>(f.size()));
    for (std::int64_t i = 0; i < f.size(); ++i) v[static_cast<std::size_t>(i)] = w * f.complex_at(i) + (1.0 - w) * g.complex_at(i);
    return GroupFn::complex(f.domain(), std::move(v));
}

}  // namespace hofa
