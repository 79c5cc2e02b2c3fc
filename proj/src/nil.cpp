#include "hofa/nil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hofa/error.hpp"
#include "hofa/random.hpp"

namespace hofa {

namespace {

Rational rpow(const Rational& x, int e) {
    Rational r = 1;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

double circle_gap(double a, double b) {
    double d = std::fabs(a - b);
    d -= std::floor(d);
    return std::min(d, 1.0 - d);
}

}  // namespace

double to_double(const Rational& q) { return q.convert_to<double>(); }

const char* to_string(GroupLaw law) { return law == GroupLaw::abelian ? "abelian" : "heisenberg"; }

FilteredGroup FilteredGroup::abelian(std::vector<int> dims) {
    if (dims.empty()) throw DomainError("abelian tower needs at least one level");
    for (int d : dims)
        if (d < 0) throw DomainError("negative level width");
    if (std::all_of(dims.begin(), dims.end(), [](int d) { return d == 0; }))
        throw DomainError("abelian tower has dimension 0");
    return FilteredGroup(GroupLaw::abelian, std::move(dims));
}

FilteredGroup FilteredGroup::heisenberg() { return FilteredGroup(GroupLaw::heisenberg, {2, 1}); }

int FilteredGroup::dimension() const {
    int d = 0;
    for (int w : dims_) d += w;
    return d;
}

int FilteredGroup::level_of_coordinate(int c) const {
    for (int i = 0; i < degree(); ++i) {
        if (c < dims_[i]) return i + 1;
        c -= dims_[i];
    }
    throw DomainError("coordinate index out of range");
}

void FilteredGroup::check(const Element& g) const {
    if (static_cast<int>(g.size()) != dimension())
        throw DomainError("element has " + std::to_string(g.size()) + " coordinates, group dimension " +
                          std::to_string(dimension()));
}

Element FilteredGroup::identity() const { return Element(dimension(), Rational(0)); }

Element FilteredGroup::mul(const Element& a, const Element& b) const {
    check(a);
    check(b);
    Element r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    if (law_ == GroupLaw::heisenberg) r[2] += a[0] * b[1];
    return r;
}

Element FilteredGroup::inv(const Element& a) const {
    check(a);
    Element r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    if (law_ == GroupLaw::heisenberg) r[2] += a[0] * a[1];
    return r;
}

Element FilteredGroup::commutator(const Element& a, const Element& b) const {
    return mul(mul(inv(a), inv(b)), mul(a, b));
}

int FilteredGroup::level(const Element& g) const {
    check(g);
    int lvl = degree() + 1;
    for (int c = 0; c < dimension(); ++c)
        if (g[c] != 0) lvl = std::min(lvl, level_of_coordinate(c));
    return lvl;
}

Element FilteredGroup::generator(int i, int j, const Rational& t) const {
    if (i < 0 || i >= degree() || j < 0 || j >= dims_[i]) throw DomainError("generator index out of range");
    Element g = identity();
    if (law_ == GroupLaw::heisenberg) {
        // ordered Y, X, Z
        static constexpr int slot[2][2] = {{1, 0}, {2, -1}};
        g[slot[i][j]] = t;
        return g;
    }
    int off = 0;
    for (int l = 0; l < i; ++l) off += dims_[l];
    g[off + j] = t;
    return g;
}

Element FilteredGroup::from_coordinates(const std::vector<Rational>& a) const {
    check(a);
    Element g = identity();
    std::size_t c = 0;
    for (int i = 0; i < degree(); ++i)
        for (int j = 0; j < dims_[i]; ++j) g = mul(g, generator(i, j, a[c++]));
    return g;
}

std::vector<Rational> FilteredGroup::coordinates(const Element& g) const {
    check(g);
    if (law_ == GroupLaw::heisenberg) return {g[1], g[0], g[2]};
    return g;
}

std::int64_t FilteredGroup::complexity() const {
    std::vector<Element> gens;
    for (int i = 0; i < degree(); ++i)
        for (int j = 0; j < dims_[i]; ++j) gens.push_back(generator(i, j));
    std::int64_t m = 0;
    for (const auto& a : gens)
        for (const auto& b : gens)
            for (const auto& c : commutator(a, b)) {
                if (denominator(c) != 1) throw InternalError("non-integral structure constant");
                m = std::max(m, static_cast<std::int64_t>(abs(numerator(c))));
            }
    return m;
}

Element heisenberg_project(const Rational& x, const Rational& y, const Rational& z) {
    return {frac_of(x), frac_of(y), frac_of(z - x * Rational(floor_of(y)))};
}

Element FilteredGroup::project(const Element& g) const {
    check(g);
    if (law_ == GroupLaw::heisenberg) return heisenberg_project(g[0], g[1], g[2]);
    Element r(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) r[i] = frac_of(g[i]);
    return r;
}

Polynomial Polynomial::constant(const Rational& c, int vars) {
    Polynomial p(vars);
    p.add_term(std::vector<int>(vars, 0), c);
    return p;
}

Polynomial Polynomial::univariate(const std::vector<Rational>& coeffs) {
    Polynomial p(1);
    for (std::size_t k = 0; k < coeffs.size(); ++k)
        if (coeffs[k] != 0) p.add_term({static_cast<int>(k)}, coeffs[k]);
    return p;
}

int Polynomial::degree() const {
    int d = 0;
    for (const auto& t : terms_) {
        int s = 0;
        for (int e : t.exps) s += e;
        d = std::max(d, s);
    }
    return d;
}

Polynomial& Polynomial::add_term(std::vector<int> exps, const Rational& coeff) {
    if (static_cast<int>(exps.size()) != vars_) throw DomainError("monomial arity differs from polynomial arity");
    for (int e : exps)
        if (e < 0) throw DomainError("negative exponent");
    for (auto& t : terms_)
        if (t.exps == exps) {
            t.coeff += coeff;
            return *this;
        }
    terms_.push_back({std::move(exps), coeff});
    return *this;
}

Rational Polynomial::eval(std::span<const Rational> x) const {
    if (static_cast<int>(x.size()) != vars_) throw DomainError("polynomial evaluated at a point of wrong arity");
    Rational r = 0;
    for (const auto& t : terms_) {
        Rational m = t.coeff;
        for (int v = 0; v < vars_; ++v) m *= rpow(x[v], t.exps[v]);
        r += m;
    }
    return r;
}

Rational Polynomial::eval_int(std::span<const std::int64_t> x) const {
    std::vector<Rational> q(x.begin(), x.end());
    return eval(q);
}

Element PolyMap::eval(std::span<const std::int64_t> x) const {
    if (static_cast<int>(coords.size()) != group.dimension())
        throw DomainError("polynomial map has " + std::to_string(coords.size()) + " coordinates, group dimension " +
                          std::to_string(group.dimension()));
    Element g(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) g[i] = coords[i].eval_int(x);
    return g;
}

namespace {

// Delta_{h_j} ... Delta_{h_{m-1}} p at x.
Element map_delta(const PolyMap& p, std::vector<std::int64_t>& x, const std::vector<std::vector<std::int64_t>>& hs,
                  std::size_t j) {
    if (j == hs.size()) return p.eval(x);
    Element a = map_delta(p, x, hs, j + 1);
    for (std::size_t v = 0; v < x.size(); ++v) x[v] += hs[j][v];
    Element b = map_delta(p, x, hs, j + 1);
    for (std::size_t v = 0; v < x.size(); ++v) x[v] -= hs[j][v];
    return p.group.mul(a, p.group.inv(b));
}

}  // namespace

PolyMapReport check_polynomial_map(const PolyMap& p, const PolyMapOptions& opt) {
    if (opt.range < 0) throw DomainError("negative range");
    const int d = p.vars();
    for (const auto& c : p.coords)
        if (c.vars() != d) throw DomainError("polynomial map coordinates disagree on arity");
    const int s = p.group.degree();
    const double side = 2.0 * static_cast<double>(opt.range) + 1.0;
    double total = 0.0;
    for (int m = 1; m <= s + 1; ++m) total += std::pow(side, d * (m + 1));

    PolyMapReport rep;
    rep.exhaustive = total <= static_cast<double>(opt.max_tuples);
    Rng rng(opt.seed);
    for (int m = 1; m <= s + 1 && rep.pass; ++m) {
        const int len = d * (m + 1);
        std::vector<std::int64_t> digits(len, -opt.range);
        std::uint64_t todo = rep.exhaustive ? static_cast<std::uint64_t>(std::pow(side, len)) : opt.samples;
        for (std::uint64_t it = 0; it < todo; ++it) {
            if (!rep.exhaustive)
                for (auto& v : digits) v = rng.uniform_int(-opt.range, opt.range);
            std::vector<std::int64_t> x(digits.begin(), digits.begin() + d);
            std::vector<std::vector<std::int64_t>> hs(m);
            for (int j = 0; j < m; ++j) hs[j].assign(digits.begin() + d * (j + 1), digits.begin() + d * (j + 2));
            Element v = map_delta(p, x, hs, 0);
            ++rep.checked;
            int lvl = p.group.level(v);
            if (lvl < m) {
                rep.pass = false;
                rep.witness = DerivativeWitness{m, x, hs, std::move(v), lvl};
                break;
            }
            if (rep.exhaustive)
                for (int i = 0; i < len; ++i) {
                    if (++digits[i] <= opt.range) break;
                    digits[i] = -opt.range;
                }
        }
    }
    return rep;
}

OutputMap OutputMap::exponential(std::vector<std::int64_t> weights) {
    OutputMap f;
    f.kind_ = Kind::exponential;
    f.weights_ = std::move(weights);
    return f;
}

OutputMap OutputMap::bump(std::int64_t k) {
    OutputMap f;
    f.kind_ = Kind::bump;
    f.k_ = k;
    return f;
}

cplx OutputMap::eval(const FilteredGroup& g, const Element& u) const {
    if (static_cast<int>(u.size()) != g.dimension()) throw DomainError("point has wrong dimension");
    if (kind_ == Kind::exponential) {
        if (weights_.size() != u.size())
            throw DomainError("output map has " + std::to_string(weights_.size()) + " weights, group dimension " +
                              std::to_string(u.size()));
        Rational t = 0;
        for (std::size_t i = 0; i < u.size(); ++i) t += Rational(weights_[i]) * u[i];
        return expi(to_double(frac_of(t)));
    }
    const Rational& ub = g.law() == GroupLaw::heisenberg ? u[1] : u.back();
    const double s = std::sin(std::numbers::pi * to_double(frac_of(ub)));
    return s * s * expi(to_double(frac_of(Rational(k_) * u.back())));
}

double OutputMap::lipschitz(const FilteredGroup& g) const {
    constexpr double tau = 2.0 * std::numbers::pi;
    if (kind_ == Kind::bump) return std::numbers::pi + tau * static_cast<double>(std::llabs(k_));
    if (g.law() == GroupLaw::heisenberg && weights_.size() == 3 && weights_[2] != 0)
        return std::numeric_limits<double>::infinity();
    std::int64_t w = 0;
    for (auto x : weights_) w = std::max<std::int64_t>(w, std::llabs(x));
    return tau * static_cast<double>(w);
}

cplx eval_nilsequence(const Nilsequence& psi, std::int64_t n) { return psi.eval(n); }

PeriodicityReport is_N_periodic(const Nilsequence& psi, std::int64_t n, std::int64_t lo, std::int64_t hi,
                                double tol) {
    if (n <= 0) throw DomainError("period must be positive");
    if (hi < lo) throw DomainError("empty range");
    PeriodicityReport rep;
    for (std::int64_t x = lo; x <= hi; ++x) {
        Element a = psi.orbit(x);
        Element b = psi.orbit(x + n);
        double gap = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) gap = std::max(gap, circle_gap(to_double(a[i]), to_double(b[i])));
        rep.max_gap = std::max(rep.max_gap, gap);
        if (gap > tol && rep.periodic) {
            rep.periodic = false;
            rep.witness = x;
        }
    }
    return rep;
}

Rational Nilpolynomial::eval(std::span<const std::int64_t> x) const {
    if (!rho) throw DomainError("nilpolynomial has no lift");
    Element r = rho(x);
    if (static_cast<int>(r.size()) != p.group.dimension()) throw DomainError("lift has wrong dimension");
    if (f.vars() != p.group.dimension()) throw DomainError("output polynomial arity differs from group dimension");
    return f.eval(r);
}

Rational eval_nilpolynomial(const Nilpolynomial& g, std::span<const std::int64_t> x) { return g.eval(x); }

namespace {

// Delta_{h_j} ... F at x, with Delta_h F(x) = F(x) - F(h x).
Rational output_delta(const Polynomial& f, const FilteredGroup& g, const Element& x, const std::vector<Element>& hs,
                      std::size_t j) {
    if (j == hs.size()) return f.eval(x);
    return output_delta(f, g, x, hs, j + 1) - output_delta(f, g, g.mul(hs[j], x), hs, j + 1);
}

// Level tuples (each in 1..s) with sum >= target that are minimal under dropping an entry.
void minimal_tuples(int s, int target, std::vector<int>& cur, int sum, std::vector<std::vector<int>>& out) {
    if (sum >= target) {
        int mn = *std::min_element(cur.begin(), cur.end());
        if (sum - mn < target) out.push_back(cur);
        return;
    }
    for (int i = 1; i <= s; ++i) {
        cur.push_back(i);
        minimal_tuples(s, target, cur, sum + i, out);
        cur.pop_back();
    }
}

Element random_element(const FilteredGroup& g, int level, Rng& rng) {
    Element e = g.identity();
    for (int c = 0; c < g.dimension(); ++c)
        if (g.level_of_coordinate(c) >= level) e[c] = Rational(rng.uniform_int(-12, 12), rng.uniform_int(1, 4));
    return e;
}

}  // namespace

NilpolyReport verify_nilpolynomial(const Nilpolynomial& g, const NilpolyOptions& opt) {
    if (opt.hi < opt.lo) throw DomainError("empty range");
    if (g.degree < 0) throw DomainError("negative degree");
    if (g.radius < 0) throw DomainError("negative radius");
    const FilteredGroup& grp = g.p.group;
    const int d = g.p.vars();
    const double side = static_cast<double>(opt.hi - opt.lo + 1);
    if (std::pow(side, d) > 1e7) throw BudgetError("nilpolynomial verification box", std::pow(side, d), 1e7);

    NilpolyReport rep;
    std::vector<std::int64_t> x(d, opt.lo);
    for (bool more = true; more;) {
        ++rep.points;
        Element r = g.rho(x);
        if (static_cast<int>(r.size()) != grp.dimension()) throw DomainError("lift has wrong dimension");
        if (rep.projection_ok && grp.project(g.p.eval(x)) != grp.project(r)) {
            rep.projection_ok = false;
            rep.projection_witness = x;
        }
        for (const auto& c : r) {
            Rational a = abs(c);
            if (a > rep.max_radius) rep.max_radius = a;
            if (a > g.radius && rep.radius_ok) {
                rep.radius_ok = false;
                rep.radius_witness = x;
            }
        }
        more = false;
        for (int v = 0; v < d; ++v) {
            if (++x[v] <= opt.hi) {
                more = true;
                break;
            }
            x[v] = opt.lo;
        }
    }

    if (g.f.vars() != grp.dimension()) throw DomainError("output polynomial arity differs from group dimension");
    std::vector<std::vector<int>> tuples;
    std::vector<int> cur;
    minimal_tuples(grp.degree(), g.degree + 1, cur, 0, tuples);
    Rng rng(opt.seed);
    for (const auto& t : tuples) {
        for (std::uint64_t it = 0; it < opt.output_samples && rep.output_ok; ++it) {
            Element base = random_element(grp, 1, rng);
            std::vector<Element> hs;
            for (int lvl : t) hs.push_back(random_element(grp, lvl, rng));
            Rational v = output_delta(g.f, grp, base, hs, 0);
            if (v != 0) {
                rep.output_ok = false;
                int sum = 0;
                for (int lvl : t) sum += lvl;
                rep.output_witness = DerivativeWitness{static_cast<int>(t.size()), {}, {}, {v}, sum};
            }
        }
        if (!rep.output_ok) break;
    }

    rep.map = check_polynomial_map(g.p, opt.map);
    rep.map_ok = rep.map.pass;
    return rep;
}

double manifold_metric(const FilteredGroup& g, const Element& u, const Element& v, int radius) {
    if (radius < 0) throw DomainError("negative lattice radius");
    const int dim = g.dimension();
    if (static_cast<int>(u.size()) != dim || static_cast<int>(v.size()) != dim)
        throw DomainError("point has wrong dimension");
    Element pu = g.project(u), pv = g.project(v);
    std::vector<double> a(dim), b(dim);
    for (int i = 0; i < dim; ++i) {
        a[i] = to_double(pu[i]);
        b[i] = to_double(pv[i]);
    }
    if (g.law() == GroupLaw::abelian) {
        double s = 0.0;
        for (int i = 0; i < dim; ++i) s += circle_gap(a[i], b[i]);
        return s;
    }
    // x and z shifts enter additively, so only the y shifts are searched
    double best = std::numeric_limits<double>::infinity();
    for (int n1 = -radius; n1 <= radius; ++n1)
        for (int n2 = -radius; n2 <= radius; ++n2) {
            double dy = std::fabs(a[1] - b[1] + n1 - n2);
            double dz = circle_gap(a[2] + a[0] * n1, b[2] + b[0] * n2);
            best = std::min(best, circle_gap(a[0], b[0]) + dy + dz);
        }
    return best;
}

}  // namespace hofa
