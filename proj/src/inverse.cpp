#include "hofa/inverse.hpp"

#include <cmath>

#include "hofa/error.hpp"
#include "hofa/fourier.hpp"
#include "hofa/gowers.hpp"
#include "hofa/random.hpp"

namespace hofa {

namespace {

void require_complex_total_1d(const GroupFn& f, const char* what) {
    if (f.mode() != ValueMode::complex) throw DomainError(std::string(what) + " requires a complex function");
    if (!f.total()) throw DomainError(std::string(what) + " requires a total function");
    if (f.domain().arity() != 1) throw DomainError(std::string(what) + " supports only d = 1");
}

// Index of the largest value; earlier index wins within the tie tolerance.
std::size_t argmax(const std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[best] + kArgmaxTieTol) best = i;
    return best;
}

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t n) {
    return mod(static_cast<std::int64_t>((static_cast<__int128>(a) * b) % n), n);
}

}  // namespace

double correlate(const GroupFn& f, const GroupFn& g) {
    if (!(f.domain() == g.domain())) throw DomainError("correlate: domain mismatch");
    if (!f.total() || !g.total()) throw DomainError("correlate requires total functions");
    cplx s = 0;
    for (std::int64_t x = 0; x < f.size(); ++x) s += f.complex_at(x) * std::conj(g.complex_at(x));
    return std::abs(s / static_cast<double>(f.size()));
}

GroupFn CorrelationResult::witness(std::int64_t n) const {
    std::vector<std::int64_t> c{0};
    c.insert(c.end(), coeffs.begin(), coeffs.end());
    return poly_phase(n, c);
}

CorrelationResult u2_inverse(const GroupFn& f) {
    require_complex_total_1d(f, "u2_inverse");
    const std::int64_t n = f.domain().modulus();
    const auto F = dft(f);
    std::vector<double> mag(F.coeffs.size());
    for (std::size_t a = 0; a < mag.size(); ++a) mag[a] = std::abs(F.coeffs[a]);
    CorrelationResult r;
    r.degree = 1;
    r.coeffs = {static_cast<std::int64_t>(argmax(mag))};
    r.correlation = correlate(f, r.witness(n));
    const double u2 = u2_via_fourier(f).value;
    r.guarantee = u2 * u2;
    return r;
}

CorrelationResult poly_phase_search(const GroupFn& f, int s, const Budget& budget, const parallel::Options& par) {
    require_complex_total_1d(f, "poly_phase_search");
    if (s < 1) throw DomainError("poly_phase_search requires s >= 1");
    const std::int64_t n = f.domain().modulus();
    const double card = std::pow(static_cast<double>(n), s);
    budget.require(card * static_cast<double>(n), "poly_phase_search over " + std::to_string(static_cast<long long>(card)) +
                                                      " coefficient vectors");
    std::int64_t groups = 1;
    for (int i = 1; i < s; ++i) groups *= n;
    const FftPlan plan(n);

    // Group t fixes (a_2, ..., a_s); the FFT sweeps a_1. Groups are visited in
    // lexicographic order of (a_s, ..., a_2), so the overall order is lexicographic in (a_s, ..., a_1).
    auto higher = [&](std::int64_t t) {
        std::vector<std::int64_t> c(static_cast<std::size_t>(s - 1));
        for (int i = 0; i < s - 1; ++i) {
            c[static_cast<std::size_t>(i)] = t % n;  // a_{i+2}, with a_2 fastest
            t /= n;
        }
        return c;
    };
    std::vector<double> best_mag(static_cast<std::size_t>(groups));
    std::vector<std::int64_t> best_a1(static_cast<std::size_t>(groups));
    parallel::Options p = par;
    p.chunk = 1;
    parallel::for_chunks(groups, p, [&](std::int64_t, std::int64_t b, std::int64_t e) {
        std::vector<cplx> a(static_cast<std::size_t>(n));
        for (std::int64_t t = b; t < e; ++t) {
            const auto c = higher(t);
            for (std::int64_t x = 0; x < n; ++x) {
                std::int64_t q = 0, xp = mulmod(x, x, n);
                for (auto ai : c) {
                    q = mod(q + mulmod(ai, xp, n), n);
                    xp = mulmod(xp, x, n);
                }
                a[static_cast<std::size_t>(x)] = f.complex_at(x) * expi_frac(-q, n);
            }
            plan.forward(a);
            std::vector<double> mag(static_cast<std::size_t>(n));
            for (std::int64_t k = 0; k < n; ++k) mag[static_cast<std::size_t>(k)] = std::abs(a[static_cast<std::size_t>(k)]) / static_cast<double>(n);
            const auto k = argmax(mag);
            best_mag[static_cast<std::size_t>(t)] = mag[k];
            best_a1[static_cast<std::size_t>(t)] = static_cast<std::int64_t>(k);
        }
    });
    // order groups lexicographically by (a_s, ..., a_2): flat index t already has a_s most significant
    std::size_t g = 0;
    for (std::size_t t = 1; t < best_mag.size(); ++t)
        if (best_mag[t] > best_mag[g] + kArgmaxTieTol) g = t;
    CorrelationResult r;
    r.degree = s;
    r.coeffs.push_back(best_a1[g]);
    for (auto c : higher(static_cast<std::int64_t>(g))) r.coeffs.push_back(c);
    r.correlation = correlate(f, r.witness(n));
    return r;
}

GroupFn CharacterField::as_function() const {
    return GroupFn::rational(CyclicDomain(n, arity), phi, n);
}

CharacterField character_field(const GroupFn& f, int s, const Budget& budget, const parallel::Options& par) {
    require_complex_total_1d(f, "character_field");
    if (s < 3) throw DomainError("character_field requires s >= 3");
    const std::int64_t n = f.domain().modulus();
    const int arity = s - 2;
    const CyclicDomain hdom(n, arity);
    const double cost = static_cast<double>(hdom.size()) * static_cast<double>(n) *
                        (std::log2(static_cast<double>(n)) * 4 + arity);
    budget.require(cost, "character_field");
    CharacterField out;
    out.n = n;
    out.arity = arity;
    const auto m = static_cast<std::size_t>(hdom.size());
    out.phi.resize(m);
    out.magnitude.resize(m);
    out.energy.resize(m);
    const FftPlan plan(n);
    parallel::Options p = par;
    p.chunk = 1;
    parallel::for_chunks(hdom.size(), p, [&](std::int64_t, std::int64_t b, std::int64_t e) {
        for (std::int64_t t = b; t < e; ++t) {
            const auto hs = hdom.coords(t);
            const GroupFn g = mult_derivative(f, hs);
            std::vector<cplx> a(g.complex_values().begin(), g.complex_values().end());
            plan.forward(a);
            // E_h S(hs,h) e(-ah/N) = |ghat(-a)|^2
            std::vector<double> mag(static_cast<std::size_t>(n));
            double energy = 0;
            for (std::int64_t k = 0; k < n; ++k) {
                const cplx gh = a[static_cast<std::size_t>(mod(-k, n))] / static_cast<double>(n);
                mag[static_cast<std::size_t>(k)] = std::norm(gh);
                energy += mag[static_cast<std::size_t>(k)] * mag[static_cast<std::size_t>(k)];
            }
            const auto k = argmax(mag);
            out.phi[static_cast<std::size_t>(t)] = static_cast<std::int64_t>(k);
            out.magnitude[static_cast<std::size_t>(t)] = mag[k];
            out.energy[static_cast<std::size_t>(t)] = energy;
        }
    });
    return out;
}

GroupFn diagonal_project(const GroupFn& phase, std::span<const std::int64_t> hs) {
    if (phase.mode() == ValueMode::complex) throw DomainError("diagonal_project expects a real or rational phase");
    if (!phase.total()) throw DomainError("diagonal_project requires a total phase");
    const auto& dom = phase.domain();
    if (static_cast<int>(hs.size()) != dom.arity()) throw DomainError("diagonal_project: point has wrong arity");
    const std::int64_t n = dom.modulus();
    std::vector<std::int64_t> ones(hs.size(), 1);
    const std::int64_t diag = dom.index(ones);
    std::int64_t pt = dom.index(hs);
    std::vector<cplx> v(static_cast<std::size_t>(n));
    for (std::int64_t x = 0; x < n; ++x) {
        v[static_cast<std::size_t>(x)] = phase.mode() == ValueMode::rational ? expi_frac(phase.numerator(pt), phase.denom())
                                                                             : expi(phase.real_at(pt));
        pt = dom.add(pt, diag);
    }
    return GroupFn::complex(CyclicDomain(n), std::move(v));
}

GroupFn diagonal_project(std::int64_t n, const std::function<double(std::span<const std::int64_t>)>& phase,
                         std::span<const std::int64_t> hs) {
    std::vector<cplx> v(static_cast<std::size_t>(n));
    std::vector<std::int64_t> pt(hs.begin(), hs.end());
    for (std::int64_t x = 0; x < n; ++x) {
        for (std::size_t i = 0; i < pt.size(); ++i) pt[i] = mod(hs[i] + x, n);
        v[static_cast<std::size_t>(x)] = expi(phase(pt));
    }
    return GroupFn::complex(CyclicDomain(n), std::move(v));
}

}  // namespace hofa
