#include "hofa/gowers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "hofa/error.hpp"
#include "hofa/fourier.hpp"

namespace hofa {

const char* to_string(NormMethod m) {
    switch (m) {
        case NormMethod::naive: return "naive";
        case NormMethod::recursive: return "recursive";
        case NormMethod::ssf: return "ssf";
        case NormMethod::fourier: return "fourier";
        case NormMethod::fast: return "fast";
    }
    return "?";
}

NormMethod norm_method_from_string(const std::string& s) {
    for (auto m : {NormMethod::naive, NormMethod::recursive, NormMethod::ssf, NormMethod::fourier, NormMethod::fast})
        if (s == to_string(m)) return m;
    throw DomainError("unknown norm method '" + s + "'");
}

namespace {

void require_norm_input(const GroupFn& f, int s) {
    if (f.mode() != ValueMode::complex) throw DomainError("Gowers norms require a complex function");
    if (!f.total()) throw DomainError("Gowers norms require a total function");
    if (f.domain().arity() != 1) throw DomainError("Gowers norms are implemented on Z_N only (d = 1)");
    if (s < 0) throw DomainError("degree s must be non-negative");
    if (s > 20) throw DomainError("degree s too large");
}

double sup_norm(const GroupFn& f) {
    double m = 0;
    for (const auto& v : f.complex_values()) m = std::max(m, std::abs(v));
    return m;
}

double ipow(double x, int e) {
    double r = 1;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

// Takes the 2^{s+1}-th root of an averaged quantity that must be real and >= 0.
double finish(cplx avg, const GroupFn& f, int s, NormReport& rep) {
    const double scale = std::max(1.0, ipow(sup_norm(f), 1 << (s + 1)));
    if (std::abs(avg.imag()) >= 1e-9 * scale) {
        std::ostringstream os;
        os << "norm power has imaginary part " << avg.imag();
        throw InternalError(os.str());
    }
    double re = avg.real();
    if (re < 0) {
        if (re < -1e-9 * scale) {
            std::ostringstream os;
            os << "norm power is negative: " << re;
            throw InternalError(os.str());
        }
        std::ostringstream os;
        os << "clamped negative round-off " << re << " to 0";
        rep.warnings.push_back(os.str());
        re = 0;
    }
    return std::pow(re, 1.0 / static_cast<double>(1 << (s + 1)));
}

double u2_power(const GroupFn& g, const FftPlan& plan) {
    const std::int64_t n = g.domain().modulus();
    std::vector<cplx> a(g.complex_values().begin(), g.complex_values().end());
    plan.forward(a);
    const double inv = 1.0 / static_cast<double>(n);
    double s4 = 0;
    for (const auto& v : a) {
        const double m = std::norm(v * inv);
        s4 += m * m;
    }
    return s4;
}

// ||f||_{U^{s+1}}^{2^{s+1}}, s >= 1, sequential.
double power_rec(const GroupFn& f, int s, const FftPlan& plan) {
    if (s == 1) return u2_power(f, plan);
    const std::int64_t n = f.domain().modulus();
    double acc = 0;
    for (std::int64_t h = 0; h < n; ++h) acc += power_rec(mult_derivative(f, h), s - 1, plan);
    return acc / static_cast<double>(n);
}

double u1_power(const GroupFn& f) {
    cplx m = 0;
    for (const auto& v : f.complex_values()) m += v;
    m /= static_cast<double>(f.size());
    return std::norm(m);
}

double recursive_cost(std::int64_t n, int s) {
    if (s == 0) return static_cast<double>(n);
    const double fft = static_cast<double>(n) * std::max(1.0, std::log2(static_cast<double>(n))) * 4;
    return std::pow(static_cast<double>(n), s - 1) * (fft + static_cast<double>(n) * (s - 1));
}

}  // namespace

double gowers_power(const GroupFn& f, int s, const parallel::Options& par) {
    require_norm_input(f, s);
    if (s == 0) return u1_power(f);
    const std::int64_t n = f.domain().modulus();
    const FftPlan plan(n);
    if (s == 1) return u2_power(f, plan);
    parallel::Options p = par;
    p.chunk = 1;
    const double total = parallel::reduce_sum<double>(
        n, p, [&](std::int64_t h) { return power_rec(mult_derivative(f, h), s - 1, plan); });
    return total / static_cast<double>(n);
}

NormReport gowers_naive(const GroupFn& f, int s, const NormOptions& opt) {
    require_norm_input(f, s);
    const std::int64_t n = f.domain().modulus();
    const int k = s + 1;
    const std::uint32_t verts = 1u << k;
    NormReport rep;
    rep.s = s;
    rep.method = NormMethod::naive;
    rep.cost = std::pow(static_cast<double>(n), k + 1) * verts;
    opt.budget.require(rep.cost, "gowers_naive");
    const auto v = f.complex_values();
    std::vector<cplx> conj_v(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) conj_v[i] = std::conj(v[i]);

    std::int64_t tuples = 1;
    for (int i = 0; i < k; ++i) tuples *= n;
    // outer index x; inner loop over all direction tuples
    parallel::Options p = opt.par;
    p.chunk = 1;
    const cplx total = parallel::reduce_sum<cplx>(n, p, [&](std::int64_t x) {
        std::vector<std::int64_t> h(static_cast<std::size_t>(k), 0);
        std::vector<std::int64_t> vert(verts);
        cplx acc = 0;
        for (std::int64_t t = 0; t < tuples; ++t) {
            vert[0] = x;
            for (std::uint32_t w = 1; w < verts; ++w) {
                const int low = std::countr_zero(w);
                std::int64_t y = vert[w & (w - 1)] + h[static_cast<std::size_t>(low)];
                if (y >= n) y -= n;
                vert[w] = y;
            }
            cplx prod = 1;
            for (std::uint32_t w = 0; w < verts; ++w)
                prod *= (std::popcount(w) & 1) ? conj_v[static_cast<std::size_t>(vert[w])] : v[static_cast<std::size_t>(vert[w])];
            acc += prod;
            for (int i = 0; i < k; ++i) {
                if (++h[static_cast<std::size_t>(i)] < n) break;
                h[static_cast<std::size_t>(i)] = 0;
            }
        }
        return acc;
    });
    const cplx avg = total / std::pow(static_cast<double>(n), k + 1);
    rep.value = finish(avg, f, s, rep);
    return rep;
}

NormReport gowers_recursive(const GroupFn& f, int s, const NormOptions& opt) {
    require_norm_input(f, s);
    NormReport rep;
    rep.s = s;
    rep.method = NormMethod::recursive;
    rep.cost = recursive_cost(f.domain().modulus(), s);
    opt.budget.require(rep.cost, "gowers_recursive");
    rep.value = finish(gowers_power(f, s, {.jobs = 1}), f, s, rep);
    return rep;
}

NormReport gowers_fast(const GroupFn& f, int s, const NormOptions& opt) {
    require_norm_input(f, s);
    NormReport rep;
    rep.s = s;
    rep.method = NormMethod::fast;
    rep.cost = recursive_cost(f.domain().modulus(), s);
    opt.budget.require(rep.cost, "gowers_fast");
    rep.value = finish(gowers_power(f, s, opt.par), f, s, rep);
    return rep;
}

NormReport u2_via_fourier(const GroupFn& f) {
    require_norm_input(f, 1);
    NormReport rep;
    rep.s = 1;
    rep.method = NormMethod::fourier;
    rep.cost = recursive_cost(f.domain().modulus(), 1);
    const auto F = dft(f);
    double s4 = 0;
    for (const auto& c : F.coeffs) s4 += std::norm(c) * std::norm(c);
    rep.value = finish(s4, f, 1, rep);
    return rep;
}

cplx ssf(const GroupFn& f, std::span<const std::int64_t> hs) {
    require_norm_input(f, 0);
    if (hs.empty()) throw DomainError("ssf requires at least one direction");
    const GroupFn g = mult_derivative(f, hs);
    cplx m = 0;
    for (const auto& v : g.complex_values()) m += v;
    return m / static_cast<double>(g.size());
}

NormReport gowers_via_ssf(const GroupFn& f, int s, const NormOptions& opt) {
    require_norm_input(f, s);
    if (s < 1) throw DomainError("gowers_via_ssf requires s >= 1");
    const std::int64_t n = f.domain().modulus();
    NormReport rep;
    rep.s = s;
    rep.method = NormMethod::ssf;
    rep.cost = std::pow(static_cast<double>(n), s + 1) * 2.0;
    opt.budget.require(rep.cost, "gowers_via_ssf");
    std::int64_t tuples = 1;
    for (int i = 0; i < s - 1; ++i) tuples *= n;
    // the first s-1 directions are applied once per tuple; the last one is swept
    parallel::Options p = opt.par;
    p.chunk = 1;
    const double total = parallel::reduce_sum<double>(tuples, p, [&](std::int64_t t) {
        std::vector<std::int64_t> hs;
        for (int i = 0; i < s - 1; ++i) {
            hs.push_back(t % n);
            t /= n;
        }
        const GroupFn g = mult_derivative(f, hs);
        const auto gv = g.complex_values();
        double acc = 0;
        for (std::int64_t h = 0; h < n; ++h) {
            cplx m = 0;
            std::int64_t y = h;
            for (std::int64_t x = 0; x < n; ++x) {
                m += gv[static_cast<std::size_t>(x)] * std::conj(gv[static_cast<std::size_t>(y)]);
                if (++y == n) y = 0;
            }
            acc += std::norm(m / static_cast<double>(n));
        }
        return acc;
    });
    const double avg = total / std::pow(static_cast<double>(n), s);
    rep.value = finish(avg, f, s, rep);
    return rep;
}

NormReport gowers(const GroupFn& f, int s, NormMethod method, const NormOptions& opt) {
    switch (method) {
        case NormMethod::naive: return gowers_naive(f, s, opt);
        case NormMethod::recursive: return gowers_recursive(f, s, opt);
        case NormMethod::ssf: return gowers_via_ssf(f, s, opt);
        case NormMethod::fourier:
            if (s != 1) throw DomainError("the fourier method computes only the U^2 norm (s = 1)");
            return u2_via_fourier(f);
        case NormMethod::fast: return gowers_fast(f, s, opt);
    }
    throw InternalError("bad norm method");
}

}  // namespace hofa
