#include "hofa/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "hofa/error.hpp"

namespace hofa {

Cube cube_up(const CyclicDomain& dom, const Cube& c, std::int64_t u, int i) {
    if (i < 0 || i >= c.dim()) throw DomainError("cube_up: index out of range");
    Cube out = c;
    out.dirs[static_cast<std::size_t>(i)] = dom.add(c.dirs[static_cast<std::size_t>(i)], u);
    return out;
}

Cube cube_down(const CyclicDomain& dom, const Cube& c, std::int64_t u, int i) {
    if (i < 0 || i >= c.dim()) throw DomainError("cube_down: index out of range");
    Cube out = c;
    out.base = dom.add(c.base, c.dirs[static_cast<std::size_t>(i)]);
    out.dirs[static_cast<std::size_t>(i)] = u;
    return out;
}

CubeFunction::CubeFunction(CyclicDomain dom, int k, std::int64_t denom) : dom_(dom), k_(k), den_(denom) {
    if (denom <= 0) throw DomainError("cube function denominator must be positive");
    const auto total = cube_count(dom, k);
    if (total > CubeSet::kMaxUniverse)
        throw BudgetError("cube function table", static_cast<double>(total), static_cast<double>(CubeSet::kMaxUniverse));
    num_.assign(static_cast<std::size_t>(total), 0);
    def_.assign(static_cast<std::size_t>(total), 0);
}

CubeFunction CubeFunction::derivative_of(const GroupFn& f, int k) {
    if (f.mode() != ValueMode::rational) throw DomainError("derivative_of requires a rational function");
    CubeFunction rho(f.domain(), k, f.denom());
    const auto total = cube_count(f.domain(), k);
    for (std::uint64_t code = 0; code < total; ++code) {
        const Cube c = cube_from_code(f.domain(), k, code);
        if (auto v = cube_derivative_exact(f, c)) {
            rho.num_[static_cast<std::size_t>(code)] = *v;
            rho.def_[static_cast<std::size_t>(code)] = 1;
        }
    }
    return rho;
}

bool CubeFunction::defined(const Cube& c) const {
    return c.dim() == k_ && def_[static_cast<std::size_t>(cube_code(dom_, c))];
}

std::int64_t CubeFunction::numerator(const Cube& c) const {
    if (!defined(c)) throw DomainError("cube function undefined on the requested cube");
    return num_[static_cast<std::size_t>(cube_code(dom_, c))];
}

void CubeFunction::set(const Cube& c, std::int64_t numerator) {
    if (c.dim() != k_) throw DomainError("cube function: wrong cube dimension");
    const auto code = static_cast<std::size_t>(cube_code(dom_, c));
    num_[code] = numerator;
    def_[code] = 1;
}

void CubeFunction::unset(const Cube& c) {
    if (c.dim() != k_) return;
    const auto code = static_cast<std::size_t>(cube_code(dom_, c));
    num_[code] = 0;
    def_[code] = 0;
}

CubeSet CubeFunction::support() const {
    CubeSet s(dom_, k_);
    for (std::size_t i = 0; i < def_.size(); ++i)
        if (def_[i]) s.insert_code(i);
    return s;
}

namespace {

LossReport make_report(int k, double delta, const CyclicDomain& dom) {
    LossReport rep;
    rep.k = k;
    rep.delta = delta;
    rep.normalizer = std::pow(static_cast<double>(dom.size()), k + 2);
    rep.violations.assign(static_cast<std::size_t>(k), 0);
    rep.valid_pairs.assign(static_cast<std::size_t>(k), 0);
    return rep;
}

void finish_report(LossReport& rep) {
    rep.pass = true;
    for (auto v : rep.violations)
        if (static_cast<double>(v) > rep.delta * rep.normalizer) rep.pass = false;
    for (auto v : rep.upper_violations)
        if (static_cast<double>(v) > rep.delta * rep.normalizer) rep.pass = false;
}

// b(up, omega) = b(down, omega) for every omega with bit i set.
bool upper_equal(const CoefficientField& b, const Cube& up, const Cube& down, int i) {
    const auto* bu = b.raw(up);
    const auto* bd = b.raw(down);
    const auto d = static_cast<std::size_t>(b.total_width());
    for (std::size_t w = 0; w < (std::size_t{1} << b.dim()); ++w)
        if ((w >> i & 1u) && !std::equal(bu + w * d, bu + (w + 1) * d, bd + w * d)) return false;
    return true;
}

void note_violation(LossReport& rep, const Cube& c, std::int64_t u, int i) {
    ++rep.violations[static_cast<std::size_t>(i)];
    if (!rep.witness) {
        rep.witness = c;
        rep.witness_u = u;
        rep.witness_direction = i;
    }
}

}  // namespace

LossReport is_cocycle(const CubeFunction& rho, const CubeSet& s, double delta) {
    if (s.dim() != rho.dim() || !(s.domain() == rho.domain())) throw DomainError("is_cocycle: support does not match the cube function");
    const CyclicDomain& dom = s.domain();
    const int k = s.dim();
    LossReport rep = make_report(k, delta, dom);
    s.for_each([&](const Cube& c) {
        if (!rho.defined(c)) throw DomainError("is_cocycle: rho undefined on a cube of S");
        const std::int64_t rc = rho.numerator(c);
        for (int i = 0; i < k; ++i)
            for (std::int64_t u = 0; u < dom.size(); ++u) {
                const Cube up = cube_up(dom, c, u, i), down = cube_down(dom, c, u, i);
                if (!s.contains(up) || !s.contains(down)) continue;
                ++rep.valid_pairs[static_cast<std::size_t>(i)];
                if (rc != rho.numerator(up) - rho.numerator(down)) note_violation(rep, c, u, i);
            }
    });
    finish_report(rep);
    return rep;
}

InversionReport cocycle_invert(const CubeFunction& rho, double min_coverage) {
    const CyclicDomain& dom = rho.domain();
    const int k = rho.dim();
    const std::int64_t m = dom.size();
    const auto per_base = cube_count(dom, k) / static_cast<std::uint64_t>(m);
    std::vector<__int128> sum(static_cast<std::size_t>(m), 0);
    std::vector<std::int64_t> cnt(static_cast<std::size_t>(m), 0);
    const CubeSet support = rho.support();
    double sup_rho = 0;
    support.for_each([&](const Cube& c) {
        const auto v = rho.numerator(c);
        sum[static_cast<std::size_t>(c.base)] += v;
        ++cnt[static_cast<std::size_t>(c.base)];
        sup_rho = std::max(sup_rho, std::abs(static_cast<double>(v) / static_cast<double>(rho.denom())));
    });
    InversionReport rep{GroupFn::real(dom, std::vector<double>(static_cast<std::size_t>(m), 0.0))};
    rep.sup_rho = sup_rho;
    for (std::int64_t x = 0; x < m; ++x) {
        const double cov = static_cast<double>(cnt[static_cast<std::size_t>(x)]) / static_cast<double>(per_base);
        rep.coverage_min = std::min(rep.coverage_min, cov);
    }
    if (rep.coverage_min < min_coverage)
        throw InsufficientDataError("cocycle_invert: a basepoint has only " + std::to_string(rep.coverage_min * 100) +
                                    "% of its cubes defined");
    // common denominator den * lcm(counts)
    std::int64_t l = 1;
    for (auto c : cnt) {
        l = std::lcm(l, c);
        if (l > (std::int64_t{1} << 40)) throw DomainError("cocycle_invert: averaging denominator too large");
    }
    const __int128 den = static_cast<__int128>(rho.denom()) * l;
    if (den > (static_cast<__int128>(1) << 62)) throw DomainError("cocycle_invert: denominator too large");
    std::vector<std::int64_t> num(static_cast<std::size_t>(m));
    for (std::int64_t x = 0; x < m; ++x) {
        const __int128 v = sum[static_cast<std::size_t>(x)] * (l / cnt[static_cast<std::size_t>(x)]);
        if (v > (static_cast<__int128>(1) << 62) || v < -(static_cast<__int128>(1) << 62))
            throw DomainError("cocycle_invert: value too large");
        num[static_cast<std::size_t>(x)] = static_cast<std::int64_t>(v);
        rep.max_abs_lambda = std::max(rep.max_abs_lambda, std::abs(static_cast<double>(v) / static_cast<double>(den)));
    }
    rep.lambda = GroupFn::rational(dom, std::move(num), static_cast<std::int64_t>(den));
    // agreement: d lambda(c) (over den) versus rho(c) (over rho.denom), compared exactly
    support.for_each([&](const Cube& c) {
        const auto dl = *cube_derivative_exact(rep.lambda, c);
        ++rep.checked;
        if (static_cast<__int128>(dl) == static_cast<__int128>(rho.numerator(c)) * l) ++rep.agreeing;
    });
    rep.agreement = rep.checked ? static_cast<double>(rep.agreeing) / static_cast<double>(rep.checked) : 1.0;
    return rep;
}

std::int64_t zr_coefficient(std::uint32_t omega, std::uint32_t omega_prime, int r, int k) {
    if (k < 0 || k > 20) throw DomainError("zr_coefficient: k out of range");
    const std::uint32_t full = (k == 32) ? ~0u : ((1u << k) - 1);
    if ((omega & ~full) || (omega_prime & ~full)) throw DomainError("zr_coefficient: index outside {0,1}^k");
    if ((omega_prime & ~omega) != 0) return 0;
    const std::uint32_t free = omega & ~omega_prime;
    std::int64_t s = 0;
    // eta = omega' | sub, sub ranging over subsets of free
    for (std::uint32_t sub = free;; sub = (sub - 1) & free) {
        const std::uint32_t eta = omega_prime | sub;
        if (popcount(eta) <= r) s += ((popcount(omega) - popcount(eta)) & 1) ? -1 : 1;
        if (sub == 0) break;
    }
    return s;
}

CubeCoefficients zr_transform(const CubeCoefficients& b, int r, int k) {
    const std::size_t nv = std::size_t{1} << k;
    if (b.size() != nv) throw DomainError("zr_transform: need 2^k vectors");
    const std::size_t d = b.empty() ? 0 : b[0].size();
    CubeCoefficients out(nv, std::vector<std::int64_t>(d, 0));
    for (std::uint32_t wp = 0; wp < nv; ++wp)
        for (std::uint32_t w = 0; w < nv; ++w) {
            const auto z = zr_coefficient(w, wp, r, k);
            if (!z) continue;
            for (std::size_t j = 0; j < d; ++j) out[wp][j] += z * b[w][j];
        }
    for (std::uint32_t wp = 0; wp < nv; ++wp)
        if (popcount(wp) > r)
            for (auto v : out[wp])
                if (v != 0) throw InternalError("zr_transform: nonzero entry above level r");
    return out;
}

int Grading::total() const {
    int t = 0;
    for (int w : widths) t += w;
    return t;
}

NormalFormReport is_normal_form(const CubeCoefficients& b, const Grading& g) {
    NormalFormReport rep;
    for (std::uint32_t w = 0; w < b.size(); ++w) {
        if (static_cast<int>(b[w].size()) != g.total()) throw DomainError("is_normal_form: grading does not match vector width");
        int offset = 0;
        for (std::size_t blk = 0; blk < g.widths.size(); ++blk) {
            const int level = g.first_level + static_cast<int>(blk);
            if (popcount(w) > level)
                for (int j = 0; j < g.widths[blk]; ++j)
                    if (b[w][static_cast<std::size_t>(offset + j)] != 0) return {false, w, offset + j};
            offset += g.widths[blk];
        }
    }
    return rep;
}

CubeCoefficients normal_form_transform(const CubeCoefficients& b, const Grading& g, int k) {
    const std::size_t nv = std::size_t{1} << k;
    if (b.size() != nv) throw DomainError("normal_form_transform: need 2^k vectors");
    CubeCoefficients out(nv, std::vector<std::int64_t>(static_cast<std::size_t>(g.total()), 0));
    int offset = 0;
    for (std::size_t blk = 0; blk < g.widths.size(); ++blk) {
        const int level = g.first_level + static_cast<int>(blk);
        CubeCoefficients part(nv);
        for (std::size_t w = 0; w < nv; ++w)
            part[w].assign(b[w].begin() + offset, b[w].begin() + offset + g.widths[blk]);
        const auto t = zr_transform(part, level, k);
        for (std::size_t w = 0; w < nv; ++w)
            for (int j = 0; j < g.widths[blk]; ++j) out[w][static_cast<std::size_t>(offset + j)] = t[w][static_cast<std::size_t>(j)];
        offset += g.widths[blk];
    }
    return out;
}

std::vector<std::int64_t> frak_b(const CoefficientField& b, const Cube& c, std::int64_t u, int i, std::uint32_t omega) {
    const CyclicDomain& dom = b.domain();
    if (omega >> i & 1u) {
        const auto* e = b.raw(cube_down(dom, c, u, i));
        if (!e) throw DomainError("frak_b: c_u is not in the support");
        e += (omega & ~(1u << i)) * static_cast<std::uint32_t>(b.total_width());
        return {e, e + b.total_width()};
    }
    const auto* e = b.raw(cube_up(dom, c, u, i));
    if (!e) throw DomainError("frak_b: c^u is not in the support");
    e += omega * static_cast<std::uint32_t>(b.total_width());
    return {e, e + b.total_width()};
}

CubeCoefficients frak_b_all(const CoefficientField& b, const Cube& c, std::int64_t u, int i) {
    CubeCoefficients out(std::size_t{1} << b.dim());
    for (std::uint32_t w = 0; w < out.size(); ++w) out[w] = frak_b(b, c, u, i, w);
    return out;
}

namespace {
void check_field_support(const CoefficientField& b, const CubeSet& s) {
    if (s.dim() != b.dim() || !(s.domain() == b.domain())) throw DomainError("support does not match the coefficient field");
    s.for_each([&](const Cube& c) {
        if (!b.contains(c)) throw DomainError("coefficient field undefined on a cube of S");
    });
}
}  // namespace

LossReport is_upper_compatible(const CoefficientField& b, const CubeSet& s, double delta, int i) {
    check_field_support(b, s);
    const CyclicDomain& dom = s.domain();
    const int k = s.dim();
    if (i < 0 || i >= k) throw DomainError("is_upper_compatible: direction out of range");
    LossReport rep = make_report(k, delta, dom);
    s.for_each([&](const Cube& c) {
        for (std::int64_t u = 0; u < dom.size(); ++u) {
            const Cube up = cube_up(dom, c, u, i), down = cube_down(dom, c, u, i);
            if (!s.contains(up) || !s.contains(down)) continue;
            ++rep.valid_pairs[static_cast<std::size_t>(i)];
            if (!upper_equal(b, up, down, i)) note_violation(rep, c, u, i);
        }
    });
    finish_report(rep);
    return rep;
}

LossReport is_generalized_cocycle(const CoefficientField& b, const Grading& g, const CubeSet& s, int r, double delta) {
    check_field_support(b, s);
    const CyclicDomain& dom = s.domain();
    const int k = s.dim();
    for (std::size_t idx = 0; idx < b.size(); ++idx) {
        const auto nf = is_normal_form(b.entry(idx), g);
        if (!nf.ok)
            throw DomainError("is_generalized_cocycle: field is not in normal form (omega " + std::to_string(nf.omega) +
                              ", coordinate " + std::to_string(nf.coordinate) + ")");
    }
    LossReport rep = make_report(k, delta, dom);
    rep.upper_violations.assign(static_cast<std::size_t>(k), 0);
    s.for_each([&](const Cube& c) {
        const auto bc = *b.find(c);
        for (int i = 0; i < k; ++i)
            for (std::int64_t u = 0; u < dom.size(); ++u) {
                const Cube up = cube_up(dom, c, u, i), down = cube_down(dom, c, u, i);
                if (!s.contains(up) || !s.contains(down)) continue;
                ++rep.valid_pairs[static_cast<std::size_t>(i)];
                if (zr_transform(frak_b_all(b, c, u, i), r, k) != bc) note_violation(rep, c, u, i);
                if (!upper_equal(b, up, down, i)) ++rep.upper_violations[static_cast<std::size_t>(i)];
            }
    });
    finish_report(rep);
    return rep;
}

CoefficientField lift_polynomial_field(const GroupFn& lambda, const CubeSet& s, int r) {
    if (lambda.mode() != ValueMode::rational) throw DomainError("lift_polynomial_field requires a rational function");
    if (!(lambda.domain() == s.domain())) throw DomainError("lift_polynomial_field: domain mismatch");
    const CyclicDomain& dom = s.domain();
    const int k = s.dim();
    CoefficientField field(dom, k, {1}, 0);
    std::int64_t worst = 0;
    s.for_each([&](const Cube& c) {
        CubeCoefficients vals(std::size_t{1} << k);
        for (std::uint32_t w = 0; w < vals.size(); ++w) {
            const auto v = vertex(dom, c, w);
            if (!lambda.defined(v)) throw DomainError("lift_polynomial_field: lambda undefined at a vertex");
            vals[w] = {lambda.numerator(v)};
        }
        auto t = zr_transform(vals, r, k);
        for (auto& v : t) {
            if (v[0] % lambda.denom() != 0) throw DomainError("lift_polynomial_field: transformed values are not integers");
            v[0] /= lambda.denom();
            worst = std::max<std::int64_t>(worst, std::llabs(v[0]));
        }
        field.set(c, std::move(t));
    });
    field.set_bound(worst);
    return field;
}

}  // namespace hofa
