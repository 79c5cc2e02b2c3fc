#include "hofa/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

#include "hofa/error.hpp"
#include "hofa/random.hpp"

namespace hofa {

namespace {

// Components of f_0 .. f_{t-1} flattened in grading order, with exact scale factors.
struct Family {
    std::vector<const GroupFn*> comps;
    std::vector<int> widths;
    bool exact = true;
    std::int64_t unit = 1;               // common denominator in exact mode
    std::vector<std::int64_t> scale;     // unit / denom per component
    std::int64_t gscale = 1;
};

Family flatten(const GroupFn& g, const std::vector<LevelFn>& lower, int t) {
    if (t < 0) throw DomainError("level t must be non-negative");
    if (static_cast<int>(lower.size()) < t) throw DomainError("family has fewer than t levels");
    if (g.mode() == ValueMode::complex) throw DomainError("derivatives condition needs a real or rational g");
    Family fam;
    fam.exact = g.mode() == ValueMode::rational;
    for (int i = 0; i < t; ++i) {
        const auto& level = lower[static_cast<std::size_t>(i)];
        fam.widths.push_back(static_cast<int>(level.size()));
        for (const auto& f : level) {
            if (!(f.domain() == g.domain())) throw DomainError("family and g live on different domains");
            if (f.mode() == ValueMode::complex) throw DomainError("family functions must be real or rational");
            if (f.mode() != ValueMode::rational) fam.exact = false;
            fam.comps.push_back(&f);
        }
    }
    if (fam.exact) {
        std::int64_t unit = g.denom();
        for (const auto* f : fam.comps) {
            const std::int64_t d = f->denom();
            const std::int64_t gcd = std::gcd(unit, d);
            if (unit / gcd > (std::int64_t{1} << 40) / d) throw DomainError("common denominator too large");
            unit = unit / gcd * d;
        }
        fam.unit = unit;
        fam.gscale = unit / g.denom();
        for (const auto* f : fam.comps) fam.scale.push_back(unit / f->denom());
    }
    return fam;
}

void check_grading(const CoefficientField& b, const Family& fam, int k, const CubeSet& s) {
    if (b.dim() != k || s.dim() != k) throw DomainError("grading mismatch: cube dimension differs from k");
    if (!(b.domain() == s.domain())) throw DomainError("grading mismatch: coefficient field on another domain");
    if (b.total_width() == 0 && fam.comps.empty()) return;
    if (b.widths() != fam.widths)
        throw DomainError("grading mismatch: coefficient widths do not match the family levels");
}

bool all_defined(const GroupFn& g, const Family& fam, std::int64_t v) {
    if (!g.defined(v)) return false;
    for (const auto* f : fam.comps)
        if (!f->defined(v)) return false;
    return true;
}

struct ChunkTally {
    std::uint64_t checked = 0, missing = 0, undefined = 0, bound = 0, identity = 0;
    std::vector<Cube> violating;
};

}  // namespace

DerivativesReport check_derivatives_condition(const GroupFn& g, const std::vector<LevelFn>& lower,
                                              const CoefficientField& b, int k, int t, std::int64_t bound,
                                              const CubeSet& s, const CheckOptions& opt) {
    const Family fam = flatten(g, lower, t);
    check_grading(b, fam, k, s);
    if (!(g.domain() == s.domain())) throw DomainError("g and S live on different domains");
    const CyclicDomain& dom = s.domain();
    const std::size_t nv = std::size_t{1} << k;
    const std::size_t d = fam.comps.size();

    DerivativesReport rep;
    rep.k = k;
    rep.t = t;
    rep.bound = bound;
    rep.exact = fam.exact;
    rep.eta = fam.exact ? 0.0 : opt.eta;

    const auto cubes = s.cubes();
    const auto n = static_cast<std::int64_t>(cubes.size());
    const std::int64_t chunk = std::max<std::int64_t>(1, opt.par.chunk);
    std::vector<ChunkTally> tallies(static_cast<std::size_t>((n + chunk - 1) / chunk));
    parallel::for_chunks(n, opt.par, [&](std::int64_t ci, std::int64_t lo, std::int64_t hi) {
        ChunkTally& tl = tallies[static_cast<std::size_t>(ci)];
        std::vector<std::int64_t> verts(nv);
        for (std::int64_t idx = lo; idx < hi; ++idx) {
            const Cube& c = cubes[static_cast<std::size_t>(idx)];
            ++tl.checked;
            bool bad = false;
            const std::int32_t* e = b.raw(c);
            if (!e && d > 0) {
                ++tl.missing;
                bad = true;
            }
            for (std::size_t w = 0; w < nv && !bad; ++w) {
                verts[w] = vertex(dom, c, static_cast<std::uint32_t>(w));
                if (!all_defined(g, fam, verts[w])) {
                    ++tl.undefined;
                    bad = true;
                }
            }
            if (!bad && e) {
                for (std::size_t w = 0; w < nv; ++w) {
                    std::int64_t l1 = 0;
                    for (std::size_t j = 0; j < d; ++j) l1 += std::llabs(e[w * d + j]);
                    if (l1 > bound) {
                        ++tl.bound;
                        bad = true;
                        break;
                    }
                }
            }
            if (!bad) {
                bool ok;
                if (fam.exact) {
                    __int128 diff = 0;
                    for (std::size_t w = 0; w < nv; ++w) {
                        __int128 term = static_cast<__int128>(g.numerator(verts[w])) * fam.gscale;
                        for (std::size_t j = 0; j < d; ++j)
                            term -= static_cast<__int128>(e[w * d + j]) * fam.comps[j]->numerator(verts[w]) * fam.scale[j];
                        diff += (popcount(static_cast<std::uint32_t>(w)) & 1) ? -term : term;
                    }
                    ok = diff == 0;
                } else {
                    double diff = 0.0, scale = 0.0;
                    for (std::size_t w = 0; w < nv; ++w) {
                        double term = g.real_at(verts[w]);
                        scale += std::abs(term);
                        for (std::size_t j = 0; j < d; ++j) {
                            const double p = static_cast<double>(e[w * d + j]) * fam.comps[j]->real_at(verts[w]);
                            term -= p;
                            scale += std::abs(p);
                        }
                        diff += (popcount(static_cast<std::uint32_t>(w)) & 1) ? -term : term;
                    }
                    ok = std::abs(diff) < opt.eta * std::max(1.0, scale);
                }
                if (!ok) {
                    ++tl.identity;
                    bad = true;
                }
            }
            if (bad && tl.violating.size() < opt.max_witnesses) tl.violating.push_back(c);
        }
    });
    for (auto& tl : tallies) {
        rep.checked += tl.checked;
        rep.missing += tl.missing;
        rep.undefined += tl.undefined;
        rep.bound_violations += tl.bound;
        rep.identity_violations += tl.identity;
        for (auto& c : tl.violating)
            if (rep.violating.size() < opt.max_witnesses) rep.violating.push_back(std::move(c));
    }
    return rep;
}

std::vector<int> PolynomialHierarchy::widths() const {
    std::vector<int> w;
    for (const auto& l : levels) w.push_back(static_cast<int>(l.size()));
    return w;
}

int PolynomialHierarchy::dimension() const {
    int d = 0;
    for (const auto& l : levels) d += static_cast<int>(l.size());
    return d;
}

HierarchyReport check_hierarchy(const PolynomialHierarchy& h, const CheckOptions& opt) {
    HierarchyReport rep;
    const int s = h.height();
    if (static_cast<int>(h.systems.size()) < s + 2) throw DomainError("hierarchy needs cube sets S_0 .. S_{s+1}");
    for (int i = 0; i <= s; ++i) {
        const auto& level = h.levels[static_cast<std::size_t>(i)];
        const CubeSet& si = h.systems[static_cast<std::size_t>(i + 1)];
        const auto& fields = i < static_cast<int>(h.coeffs.size()) ? h.coeffs[static_cast<std::size_t>(i)]
                                                                    : std::vector<CoefficientField>{};
        for (std::size_t j = 0; j < level.size(); ++j) {
            LevelCheck lc;
            lc.level = i;
            lc.component = static_cast<int>(j);
            if (j < fields.size()) {
                lc.report = check_derivatives_condition(level[j], h.levels, fields[j], i + 1, i, h.bound, si, opt);
            } else if (i == 0) {
                const CoefficientField empty(si.domain(), 1, {}, h.bound);
                lc.report = check_derivatives_condition(level[j], h.levels, empty, 1, 0, h.bound, si, opt);
            } else {
                throw DomainError("hierarchy level " + std::to_string(i) + " component " + std::to_string(j) +
                                  " has no coefficient field");
            }
            if (!lc.report.pass() && rep.pass) {
                rep.pass = false;
                rep.failing_level = i;
                rep.failing_component = static_cast<int>(j);
            }
            rep.checks.push_back(std::move(lc));
        }
    }
    return rep;
}

TopReport check_top(const GroupFn& g, const PolynomialHierarchy& h, const CoefficientField& b, std::int64_t bound,
                    const CubeSet& top_set, const CheckOptions& opt) {
    TopReport rep;
    rep.hierarchy = check_hierarchy(h, opt);
    const int s = static_cast<int>(h.levels.size());
    rep.top = check_derivatives_condition(g, h.levels, b, s + 1, s, bound, top_set, opt);
    rep.pass = rep.hierarchy.pass && rep.top.pass();
    return rep;
}

SolveReport solve_coefficients(const GroupFn& g, const std::vector<LevelFn>& lower, int k, int t,
                               std::int64_t max_bound, const CubeSet& s, const SolveOptions& opt) {
    const Family fam = flatten(g, lower, t);
    if (!fam.exact) throw DomainError("solve_coefficients requires rational inputs");
    if (s.dim() != k) throw DomainError("grading mismatch: cube dimension differs from k");
    if (!(g.domain() == s.domain())) throw DomainError("g and S live on different domains");
    if (max_bound < 0) throw DomainError("coefficient bound must be non-negative");
    const CyclicDomain& dom = s.domain();
    const std::size_t nv = std::size_t{1} << k;
    const std::size_t d = fam.comps.size();
    const auto candidates = bounded_vectors(static_cast<int>(d), max_bound);
    opt.budget.require(static_cast<double>(s.count()) * static_cast<double>(nv) *
                           static_cast<double>(candidates.size()) * static_cast<double>(std::max<std::size_t>(d, 1)),
                       "solve_coefficients");

    const auto cubes = s.cubes();
    const auto n = static_cast<std::int64_t>(cubes.size());
    std::vector<std::optional<CubeCoefficients>> sol(cubes.size());
    std::vector<std::uint8_t> undef(cubes.size(), 0);
    parallel::for_chunks(n, opt.par, [&](std::int64_t, std::int64_t lo, std::int64_t hi) {
        std::vector<std::vector<std::int64_t>> values(nv, std::vector<std::int64_t>(d));
        for (std::int64_t idx = lo; idx < hi; ++idx) {
            const Cube& c = cubes[static_cast<std::size_t>(idx)];
            __int128 target = 0;
            bool ok = true;
            for (std::size_t w = 0; w < nv && ok; ++w) {
                const auto v = vertex(dom, c, static_cast<std::uint32_t>(w));
                if (!all_defined(g, fam, v)) {
                    ok = false;
                    break;
                }
                const __int128 gv = static_cast<__int128>(g.numerator(v)) * fam.gscale;
                target += (popcount(static_cast<std::uint32_t>(w)) & 1) ? -gv : gv;
                for (std::size_t j = 0; j < d; ++j) values[w][j] = fam.comps[j]->numerator(v) * fam.scale[j];
            }
            if (!ok) {
                undef[static_cast<std::size_t>(idx)] = 1;
                continue;
            }
            sol[static_cast<std::size_t>(idx)] =
                solve_cube_coefficients(k, values, static_cast<std::int64_t>(target), candidates);
        }
    });

    SolveReport rep{CoefficientField(dom, k, fam.widths, max_bound), 0, {}, 0};
    for (std::size_t i = 0; i < cubes.size(); ++i) {
        if (sol[i]) {
            rep.field.set(cubes[i], *sol[i]);
            ++rep.solved;
        } else {
            rep.failures.push_back(cubes[i]);
            rep.undefined += undef[i];
        }
    }
    return rep;
}

CoefficientField level_block(const CoefficientField& b, int level) {
    const auto& widths = b.widths();
    if (level < 0 || level >= static_cast<int>(widths.size())) throw DomainError("level_block: level out of range");
    std::size_t offset = 0;
    for (int i = 0; i < level; ++i) offset += static_cast<std::size_t>(widths[static_cast<std::size_t>(i)]);
    const auto width = static_cast<std::size_t>(widths[static_cast<std::size_t>(level)]);
    CoefficientField out(b.domain(), b.dim(), {static_cast<int>(width)}, b.bound());
    for (std::size_t i = 0; i < b.size(); ++i) {
        const auto* p = b.raw_entry(i);
        const auto total = static_cast<std::size_t>(b.total_width());
        CubeCoefficients e(std::size_t{1} << b.dim());
        for (std::size_t w = 0; w < e.size(); ++w)
            e[w].assign(p + w * total + offset, p + w * total + offset + width);
        out.set(b.cube(i), std::move(e));
    }
    return out;
}

StrongReport check_strong_derivatives_condition(const GroupFn& g, const std::vector<LevelFn>& lower,
                                                const CoefficientField& b, int k, int t, std::int64_t bound,
                                                double delta, const CubeSet& s, const CheckOptions& opt) {
    StrongReport rep;
    rep.derivatives = check_derivatives_condition(g, lower, b, k, t, bound, s, opt);
    rep.clause[0] = rep.derivatives.pass();
    if (t == 0) return rep;

    const Grading grading{b.widths(), 0};
    for (std::size_t i = 0; i < b.size(); ++i) {
        const auto nf = is_normal_form(b.entry(i), grading);
        if (!nf.ok) {
            rep.normal_form = false;
            rep.normal_form_witness = b.cube(i);
            rep.normal_form_detail = nf;
            break;
        }
    }
    rep.clause[1] = rep.normal_form;

    for (int level = 1; level <= t - 1; ++level) {
        const auto block = level_block(b, level);
        LossReport merged;
        for (int i = 0; i < k; ++i) {
            auto r = is_upper_compatible(block, s, delta, i);
            if (i == 0) {
                merged = r;
                continue;
            }
            merged.violations[static_cast<std::size_t>(i)] = r.violations[static_cast<std::size_t>(i)];
            merged.valid_pairs[static_cast<std::size_t>(i)] = r.valid_pairs[static_cast<std::size_t>(i)];
            merged.pass = merged.pass && r.pass;
            if (!merged.witness && r.witness) {
                merged.witness = r.witness;
                merged.witness_u = r.witness_u;
                merged.witness_direction = r.witness_direction;
            }
        }
        rep.clause[2] = rep.clause[2] && merged.pass;
        rep.upper.push_back(std::move(merged));
    }

    if (rep.normal_form) {
        const auto block = level_block(b, t - 1);
        rep.cocycle = is_generalized_cocycle(block, Grading{{block.widths()[0]}, t - 1}, s, t - 1, delta);
        rep.clause[3] = rep.cocycle->pass;
    } else {
        rep.clause[3] = false;
    }
    return rep;
}

ExtendResult extend_domain_step(const GroupFn& f, int s, int a_size, std::uint64_t seed, const ExtendOptions& opt) {
    if (s < 1) throw DomainError("extend_domain_step: degree must be at least 1");
    if (f.mode() == ValueMode::complex) throw DomainError("extend_domain_step: f must be real or rational");
    const CyclicDomain& dom = f.domain();
    const std::int64_t m = dom.size();
    if (a_size < 1 || a_size > m) throw DomainError("extend_domain_step: |A| out of range");
    const double density = static_cast<double>(f.defined_count()) / static_cast<double>(m);
    if (density < opt.min_density) throw DomainError("extend_domain_step: domain of f below the minimum density");

    Rng rng(seed);
    std::vector<std::int64_t> pool(static_cast<std::size_t>(m));
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < a_size; ++i) {
        const auto j = rng.uniform_int(i, m - 1);
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    std::vector<std::int64_t> shifts(pool.begin(), pool.begin() + a_size);
    std::sort(shifts.begin(), shifts.end());

    const bool rational = f.mode() == ValueMode::rational;
    std::vector<std::int64_t> nums(static_cast<std::size_t>(m), 0);
    std::vector<double> vals(static_cast<std::size_t>(m), 0.0);
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(m), 0);
    std::vector<std::int64_t> chosen(static_cast<std::size_t>(m), -1);
    std::int64_t covered = 0;
    for (std::int64_t y = 0; y < m; ++y) {
        for (auto a : shifts) {
            const auto x = dom.add(y, a);
            if (!f.defined(x)) continue;
            const auto k = static_cast<std::size_t>(y);
            chosen[k] = a;
            mask[k] = 1;
            if (rational) nums[k] = f.numerator(x);
            else vals[k] = f.real_at(x);
            ++covered;
            break;
        }
    }
    const double coverage = static_cast<double>(covered) / static_cast<double>(m);
    if (coverage < opt.coverage_target)
        throw CoverageError("extend_domain_step: X - A covers " + std::to_string(coverage) +
                                " of H, below the target; retry with a larger A",
                            coverage);
    if (covered == m) mask.clear();
    ExtendResult res{std::move(shifts),
                     rational ? GroupFn::rational(dom, std::move(nums), f.denom(), std::move(mask))
                              : GroupFn::real(dom, std::move(vals), std::move(mask)),
                     std::move(chosen), {}, density, coverage};

    const double pairs = static_cast<double>(a_size) * static_cast<double>(a_size - 1) / 2.0;
    if (opt.measure_epsilon) opt.budget.require(pairs * std::pow(static_cast<double>(m), s + 1), "extend_domain_step epsilon");
    for (std::size_t i = 0; i < res.shifts.size(); ++i)
        for (std::size_t j = i + 1; j < res.shifts.size(); ++j) {
            const auto a = res.shifts[i], b = res.shifts[j];
            std::vector<std::int64_t> gn(static_cast<std::size_t>(m), 0);
            std::vector<double> gv(static_cast<std::size_t>(m), 0.0);
            std::vector<std::uint8_t> gm(static_cast<std::size_t>(m), 0);
            for (std::int64_t x = 0; x < m; ++x) {
                const auto xa = dom.add(x, a), xb = dom.add(x, b);
                if (!f.defined(xa) || !f.defined(xb)) continue;
                const auto k = static_cast<std::size_t>(x);
                gm[k] = 1;
                if (rational) gn[k] = f.numerator(xa) - f.numerator(xb);
                else gv[k] = f.real_at(xa) - f.real_at(xb);
            }
            if (std::all_of(gm.begin(), gm.end(), [](std::uint8_t v) { return v != 0; })) gm.clear();
            AuxFunction aux{a, b,
                            rational ? GroupFn::rational(dom, std::move(gn), f.denom(), std::move(gm))
                                     : GroupFn::real(dom, std::move(gv), std::move(gm)),
                            std::nullopt};
            if (opt.measure_epsilon) {
                EpsilonOptions eo;
                eo.budget = opt.budget;
                eo.par = opt.par;
                aux.epsilon = approx_poly_epsilon(aux.g, s - 1, eo);
            }
            res.aux.push_back(std::move(aux));
        }
    return res;
}

}  // namespace hofa
