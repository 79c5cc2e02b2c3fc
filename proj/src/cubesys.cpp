#include "hofa/cubesys.hpp"

#include <cmath>
#include <deque>

#include "hofa/error.hpp"
#include "hofa/random.hpp"

namespace hofa {

CubeSet::CubeSet(CyclicDomain dom, int k) : dom_(dom), k_(k) {
    if (k < 0) throw DomainError("cube dimension must be non-negative");
    universe_ = cube_count(dom, k);
    if (universe_ > kMaxUniverse)
        throw BudgetError("explicit cube set over H^" + std::to_string(k + 1), static_cast<double>(universe_),
                          static_cast<double>(kMaxUniverse));
    bits_.assign(static_cast<std::size_t>((universe_ + 63) / 64), 0);
}

CubeSet CubeSet::full(CyclicDomain dom, int k) {
    CubeSet s(dom, k);
    for (auto& w : s.bits_) w = ~std::uint64_t{0};
    if (s.universe_ % 64) s.bits_.back() = (std::uint64_t{1} << (s.universe_ % 64)) - 1;
    s.count_ = s.universe_;
    return s;
}

bool CubeSet::contains(const Cube& c) const {
    if (c.dim() != k_) return false;
    return contains_code(cube_code(dom_, c));
}

bool CubeSet::insert_code(std::uint64_t code) {
    if (code >= universe_) throw DomainError("cube code out of range");
    auto& w = bits_[code >> 6];
    const std::uint64_t bit = std::uint64_t{1} << (code & 63);
    if (w & bit) return false;
    w |= bit;
    ++count_;
    return true;
}

bool CubeSet::insert(const Cube& c) {
    if (c.dim() != k_) throw DomainError("cube has wrong dimension for this set");
    for (auto h : c.dirs)
        if (h < 0 || h >= dom_.size()) throw DomainError("cube direction outside the group");
    if (c.base < 0 || c.base >= dom_.size()) throw DomainError("cube basepoint outside the group");
    return insert_code(cube_code(dom_, c));
}

bool CubeSet::erase(const Cube& c) {
    if (c.dim() != k_) return false;
    const auto code = cube_code(dom_, c);
    auto& w = bits_[code >> 6];
    const std::uint64_t bit = std::uint64_t{1} << (code & 63);
    if (!(w & bit)) return false;
    w &= ~bit;
    --count_;
    return true;
}

std::vector<Cube> CubeSet::cubes() const {
    std::vector<Cube> out;
    out.reserve(static_cast<std::size_t>(count_));
    for_each([&](const Cube& c) { out.push_back(c); });
    return out;
}

bool CubeSet::subset_of(const CubeSet& o) const {
    if (!(dom_ == o.dom_) || k_ != o.k_) return false;
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i] & ~o.bits_[i]) return false;
    return true;
}

CubeSystem CubeSystem::full(const CyclicDomain& dom, int s) {
    CubeSystem sys;
    for (int i = 0; i <= s + 1; ++i) sys.levels.push_back(CubeSet::full(dom, i));
    sys.delta = 1.0;
    return sys;
}

namespace {

// Images of c under the generators of the symmetry group: adjacent swaps and reflections.
std::vector<Cube> generator_images(const CyclicDomain& dom, const Cube& c) {
    std::vector<Cube> out;
    const int k = c.dim();
    for (int i = 0; i + 1 < k; ++i) {
        Cube p = c;
        std::swap(p.dirs[static_cast<std::size_t>(i)], p.dirs[static_cast<std::size_t>(i + 1)]);
        out.push_back(std::move(p));
    }
    for (int i = 0; i < k; ++i) out.push_back(reflect(dom, c, i));
    return out;
}

std::vector<Cube> codim1_faces(const CyclicDomain& dom, const Cube& c) {
    std::vector<Cube> out;
    const int k = c.dim();
    for (int j = 0; j < k; ++j) {
        Cube f;
        f.base = c.base;
        for (int i = 0; i < k; ++i)
            if (i != j) f.dirs.push_back(c.dirs[static_cast<std::size_t>(i)]);
        out.push_back(f);
        f.base = dom.add(c.base, c.dirs[static_cast<std::size_t>(j)]);
        out.push_back(std::move(f));
    }
    return out;
}

}  // namespace

CubeSystemReport check_cube_system(const std::vector<CubeSet>& levels, double delta) {
    CubeSystemReport rep;
    if (levels.empty()) throw DomainError("cube system needs at least one level");
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (levels[i].dim() != static_cast<int>(i)) throw DomainError("level " + std::to_string(i) + " has the wrong cube dimension");
        if (!(levels[i].domain() == levels[0].domain())) throw DomainError("cube system levels live on different groups");
    }
    const CyclicDomain& dom = levels[0].domain();
    const double need = delta * static_cast<double>(dom.size());
    for (std::size_t i = 0; i < levels.size(); ++i) {
        levels[i].for_each([&](const Cube& c) {
            if (rep.symmetric)
                for (const auto& img : generator_images(dom, c))
                    if (!levels[i].contains(img)) {
                        rep.symmetric = false;
                        rep.symmetry_witness = c;
                        break;
                    }
            if (i > 0 && rep.face_closed)
                for (const auto& f : codim1_faces(dom, c))
                    if (!levels[i - 1].contains(f)) {
                        rep.face_closed = false;
                        rep.face_witness = c;
                        break;
                    }
            if (i + 1 < levels.size()) {
                Cube e = c;
                e.dirs.push_back(0);
                std::int64_t cnt = 0;
                for (std::int64_t u = 0; u < dom.size(); ++u) {
                    e.dirs.back() = u;
                    cnt += levels[i + 1].contains(e);
                }
                const double frac = static_cast<double>(cnt) / static_cast<double>(dom.size());
                rep.min_extension_fraction = std::min(rep.min_extension_fraction, frac);
                if (static_cast<double>(cnt) < need && rep.dense_extensions) {
                    rep.dense_extensions = false;
                    rep.extension_witness = c;
                    rep.extension_witness_count = cnt;
                }
            }
        });
    }
    return rep;
}

CubeSet symmetrize(const CubeSet& s) {
    CubeSet out = s;
    const CyclicDomain& dom = s.domain();
    std::deque<Cube> queue;
    s.for_each([&](const Cube& c) { queue.push_back(c); });
    while (!queue.empty()) {
        const Cube c = queue.front();
        queue.pop_front();
        for (auto& img : generator_images(dom, c))
            if (out.insert(img)) queue.push_back(std::move(img));
    }
    return out;
}

std::vector<CubeSet> face_closure(std::vector<CubeSet> levels) {
    for (std::size_t i = levels.size(); i-- > 1;) {
        const CyclicDomain& dom = levels[i].domain();
        levels[i].for_each([&](const Cube& c) {
            for (const auto& f : codim1_faces(dom, c)) levels[i - 1].insert(f);
        });
    }
    return levels;
}

ClosureReport glue_closure(const CubeSet& s, const std::vector<int>& directions) {
    const CyclicDomain& dom = s.domain();
    const int k = s.dim();
    std::vector<int> dirs = directions;
    if (dirs.empty())
        for (int i = 0; i < k; ++i) dirs.push_back(i);
    for (int i : dirs)
        if (i < 0 || i >= k) throw DomainError("glue_closure: direction index out of range");
    ClosureReport rep{s, s.density(), s.density(), {}};
    CubeSet& cur = rep.result;
    for (;;) {
        bool changed = false;
        const auto snapshot = cur.cubes();
        for (const Cube& a : snapshot) {
            for (int i : dirs) {
                const auto ii = static_cast<std::size_t>(i);
                for (std::int64_t y = 0; y < dom.size(); ++y) {
                    // a = c^u and b = c_u with c = (x; .., h, ..): h = y - x, u = a_i - h
                    const std::int64_t h = dom.sub(y, a.base);
                    const std::int64_t u = dom.sub(a.dirs[ii], h);
                    Cube b = a;
                    b.base = y;
                    b.dirs[ii] = u;
                    if (!cur.contains(b)) continue;
                    Cube c = a;
                    c.dirs[ii] = h;
                    changed |= cur.insert(c);
                }
            }
        }
        rep.density_per_round.push_back(cur.density());
        if (!changed) break;
    }
    rep.density_after = cur.density();
    return rep;
}

ClosureReport translate_closure(const CubeSet& lower, const CubeSet& upper) {
    if (upper.dim() != lower.dim() + 1) throw DomainError("translate_closure: upper level must have one more direction");
    if (!(upper.domain() == lower.domain())) throw DomainError("translate_closure: domain mismatch");
    const CyclicDomain& dom = lower.domain();
    ClosureReport rep{lower, lower.density(), lower.density(), {}};
    CubeSet& cur = rep.result;
    const auto ups = upper.cubes();
    for (;;) {
        bool changed = false;
        for (const Cube& e : ups) {
            Cube c = e;
            const std::int64_t u = c.dirs.back();
            c.dirs.pop_back();
            if (!cur.contains(c)) continue;
            c.base = dom.add(c.base, u);
            changed |= cur.insert(c);
        }
        rep.density_per_round.push_back(cur.density());
        if (!changed) break;
    }
    rep.density_after = cur.density();
    return rep;
}

namespace {

struct CountResult {
    std::uint64_t count = 0;
    std::uint64_t defined = 0;
    CountResult& operator+=(const CountResult& o) {
        count += o.count;
        defined += o.defined;
        return *this;
    }
    friend CountResult operator+(CountResult a, const CountResult& b) { return a += b; }
};

template <class T>
struct Table {
    std::vector<T> v;
    std::vector<std::uint8_t> m;
};

template <class T, class Zero>
void descend(const CyclicDomain& dom, const Table<T>& t, int remaining, const Zero& is_zero, CountResult& out) {
    const std::int64_t m = dom.size();
    if (remaining == 0) {
        for (std::int64_t x = 0; x < m; ++x) {
            if (!t.m[static_cast<std::size_t>(x)]) continue;
            ++out.defined;
            out.count += is_zero(t.v[static_cast<std::size_t>(x)]);
        }
        return;
    }
    Table<T> next{std::vector<T>(static_cast<std::size_t>(m)), std::vector<std::uint8_t>(static_cast<std::size_t>(m))};
    for (std::int64_t h = 0; h < m; ++h) {
        for (std::int64_t x = 0; x < m; ++x) {
            const auto xi = static_cast<std::size_t>(x), yi = static_cast<std::size_t>(dom.add(x, h));
            next.m[xi] = t.m[xi] && t.m[yi];
            next.v[xi] = t.v[xi] - t.v[yi];
        }
        descend(dom, next, remaining - 1, is_zero, out);
    }
}

template <class T, class Zero>
CountResult exhaustive_count(const CyclicDomain& dom, const Table<T>& base, int s, const Zero& is_zero,
                             const parallel::Options& par) {
    const std::int64_t m = dom.size();
    parallel::Options p = par;
    p.chunk = 1;
    return parallel::reduce_sum<CountResult>(m, p, [&](std::int64_t h) {
        Table<T> first{std::vector<T>(static_cast<std::size_t>(m)), std::vector<std::uint8_t>(static_cast<std::size_t>(m))};
        for (std::int64_t x = 0; x < m; ++x) {
            const auto xi = static_cast<std::size_t>(x), yi = static_cast<std::size_t>(dom.add(x, h));
            first.m[xi] = base.m[xi] && base.m[yi];
            first.v[xi] = base.v[xi] - base.v[yi];
        }
        CountResult r;
        descend(dom, first, s, is_zero, r);
        return r;
    });
}

}  // namespace

EpsilonReport approx_poly_epsilon(const GroupFn& f, int s, const EpsilonOptions& opt) {
    if (f.mode() == ValueMode::complex) throw DomainError("approx_poly_epsilon requires a real or rational function");
    if (s < 0) throw DomainError("degree must be non-negative");
    const CyclicDomain& dom = f.domain();
    const std::int64_t m = dom.size();
    EpsilonReport rep;
    rep.s = s;
    rep.exact = f.mode() == ValueMode::rational;
    rep.eta = rep.exact ? 0.0 : opt.eta;
    const double tuples = std::pow(static_cast<double>(m), s + 2);

    if (opt.samples == 0) {
        opt.budget.require(tuples, "approx_poly_epsilon (exhaustive; pass a sample count to estimate instead)");
        rep.exhaustive = true;
        rep.total = static_cast<std::uint64_t>(std::llround(tuples));
        std::vector<std::uint8_t> mask(static_cast<std::size_t>(m));
        for (std::int64_t x = 0; x < m; ++x) mask[static_cast<std::size_t>(x)] = f.defined(x);
        CountResult r;
        if (rep.exact) {
            Table<std::int64_t> t{std::vector<std::int64_t>(f.numerators().begin(), f.numerators().end()), mask};
            r = exhaustive_count(dom, t, s, [](std::int64_t v) { return v == 0; }, opt.par);
        } else {
            Table<double> t{std::vector<double>(f.real_values().begin(), f.real_values().end()), mask};
            const double eta = opt.eta;
            r = exhaustive_count(dom, t, s, [eta](double v) { return std::abs(v) < eta; }, opt.par);
        }
        rep.count = r.count;
        rep.defined = r.defined;
        rep.epsilon = static_cast<double>(rep.count) / tuples;
        return rep;
    }

    rep.exhaustive = false;
    rep.seed = opt.seed;
    rep.total = opt.samples;
    opt.budget.require(static_cast<double>(opt.samples) * std::pow(2.0, s + 1), "approx_poly_epsilon (sampled)");
    Rng rng(opt.seed);
    Cube c;
    c.dirs.resize(static_cast<std::size_t>(s + 1));
    for (std::uint64_t i = 0; i < opt.samples; ++i) {
        c.base = rng.uniform_int(0, m - 1);
        for (auto& h : c.dirs) h = rng.uniform_int(0, m - 1);
        if (rep.exact) {
            const auto v = cube_derivative_exact(f, c);
            if (!v) continue;
            ++rep.defined;
            rep.count += *v == 0;
        } else {
            const auto v = cube_derivative(f, c);
            if (!v) continue;
            ++rep.defined;
            rep.count += std::abs(*v) < opt.eta;
        }
    }
    const double p = static_cast<double>(rep.count) / static_cast<double>(opt.samples);
    rep.epsilon = p;
    rep.half_width = 1.96 * std::sqrt(p * (1 - p) / static_cast<double>(opt.samples));
    return rep;
}

}  // namespace hofa
