#include <cmath>
#include <limits>
#include <map>

#include "doctest.h"
#include "hofa/error.hpp"
#include "hofa/nil.hpp"
#include "hofa/random.hpp"

using namespace hofa;

namespace {

Rational rand_q(Rng& rng, std::int64_t span = 20, std::int64_t den = 7) {
    return Rational(rng.uniform_int(-span, span), rng.uniform_int(1, den));
}

Element rand_element(const FilteredGroup& g, Rng& rng) {
    Element e(g.dimension());
    for (auto& c : e) c = rand_q(rng);
    return e;
}

Polynomial coord_poly(int vars, int var) {
    Polynomial p(vars);
    std::vector<int> e(vars, 0);
    e[var] = 1;
    p.add_term(e, 1);
    return p;
}

Nilsequence heisenberg_bracket(const Rational& a, const Rational& b) {
    FilteredGroup h = FilteredGroup::heisenberg();
    return {PolyMap{h, {Polynomial::univariate({0, a}), Polynomial::univariate({0, b}), Polynomial::constant(0)}},
            OutputMap::exponential({0, 0, 1})};
}

// exact e(-a n floor(b n))
cplx bracket_oracle(const Rational& a, const Rational& b, std::int64_t n) {
    Rational t = -a * n * Rational(floor_of(b * n));
    return expi(to_double(frac_of(t)));
}

}  // namespace

TEST_CASE("group shapes and complexity") {
    auto h = FilteredGroup::heisenberg();
    CHECK(h.degree() == 2);
    CHECK(h.dims() == std::vector<int>{2, 1});
    CHECK(h.dimension() == 3);
    CHECK(h.complexity() == 1);
    auto a = FilteredGroup::abelian({1, 1, 1});
    CHECK(a.degree() == 3);
    CHECK(a.complexity() == 0);
    CHECK_THROWS_AS(FilteredGroup::abelian({}), DomainError);
    CHECK_THROWS_AS(FilteredGroup::abelian({0, 0}), DomainError);

    CHECK(h.level(h.identity()) == 3);
    CHECK(h.level({0, 0, 5}) == 2);
    CHECK(h.level({0, 1, 5}) == 1);
    CHECK(a.level({0, 0, Rational(1, 2)}) == 3);
    CHECK(a.level({0, 0, 0}) == 4);
    CHECK_THROWS_AS(h.mul({1, 2}, {1, 2, 3}), DomainError);

    // [G_1, G_1] lands in G_2 and the centre is central
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        auto x = rand_element(h, rng), y = rand_element(h, rng);
        CHECK(h.level(h.commutator(x, y)) >= 2);
        Element z{0, 0, rand_q(rng)};
        CHECK(h.mul(x, z) == h.mul(z, x));
    }
}

TEST_CASE("group laws: associativity, inverses, coordinate round trip") {
    Rng rng(11);
    for (auto g : {FilteredGroup::heisenberg(), FilteredGroup::abelian({2, 1, 3})}) {
        for (int i = 0; i < 2000; ++i) {
            auto x = rand_element(g, rng), y = rand_element(g, rng), z = rand_element(g, rng);
            REQUIRE(g.mul(g.mul(x, y), z) == g.mul(x, g.mul(y, z)));
            REQUIRE(g.mul(x, g.inv(x)) == g.identity());
            REQUIRE(g.mul(g.inv(x), x) == g.identity());
            REQUIRE(g.mul(x, g.identity()) == x);
        }
        for (int i = 0; i < 10000; ++i) {
            auto x = rand_element(g, rng);
            REQUIRE(g.from_coordinates(g.coordinates(x)) == x);
            REQUIRE(g.coordinates(g.from_coordinates(x)) == x);
        }
    }
    // Y^y X^x Z^z is the matrix with entries (x, y, z)
    auto h = FilteredGroup::heisenberg();
    CHECK(h.from_coordinates({3, 5, 7}) == Element{5, 3, 7});
    CHECK(h.mul(h.generator(0, 1, 2), h.generator(0, 0, 3)) == Element{2, 3, 6});
}

TEST_CASE("heisenberg projection") {
    CHECK(heisenberg_project(0, 0, 0) == Element{0, 0, 0});
    CHECK(heisenberg_project(Rational(3, 2), Rational(23, 10), Rational(7, 10)) ==
          Element{Rational(1, 2), Rational(3, 10), Rational(7, 10)});

    auto h = FilteredGroup::heisenberg();
    Rng rng(17);
    for (int i = 0; i < 20; ++i) {
        Element u = rand_element(h, rng);
        Element pu = h.project(u);
        for (const auto& c : pu) CHECK((c >= 0 && c < 1));
        for (int a = -1; a <= 1; ++a)
            for (int b = -1; b <= 1; ++b)
                for (int c = -1; c <= 1; ++c) REQUIRE(h.project(h.mul(u, Element{a, b, c})) == pu);
    }
    // left translation by the lattice is not an invariance
    Element u{Rational(1, 3), Rational(1, 2), 0};
    CHECK(h.project(h.mul(Element{1, 0, 0}, u)) != h.project(u));
}

TEST_CASE("polynomial maps") {
    auto h = FilteredGroup::heisenberg();
    for (auto g : {h, FilteredGroup::abelian({1}), FilteredGroup::abelian({1, 1, 1})}) {
        PolyMap c{g, {}};
        for (int i = 0; i < g.dimension(); ++i) c.coords.push_back(Polynomial::constant(Rational(i + 1, 3)));
        CHECK(check_polynomial_map(c).pass);
    }

    auto br = heisenberg_bracket(Rational(2, 7), Rational(3, 11)).p;
    auto rep = check_polynomial_map(br);
    CHECK(rep.pass);
    CHECK(rep.exhaustive);
    CHECK(rep.checked == 7 * 7 + 343 + 2401);

    // general form: linear, linear, quadratic
    PolyMap gen{h, {Polynomial::univariate({Rational(1, 2), Rational(3, 5)}), Polynomial::univariate({-1, Rational(2, 3)}),
                    Polynomial::univariate({Rational(1, 7), 4, Rational(-5, 3)})}};
    CHECK(check_polynomial_map(gen).pass);

    PolyMap cubic{h, {Polynomial::constant(0), Polynomial::constant(0), Polynomial::univariate({0, 0, 0, 1})}};
    auto bad = check_polynomial_map(cubic);
    REQUIRE_FALSE(bad.pass);
    REQUIRE(bad.witness.has_value());
    CHECK(bad.witness->order == 3);
    CHECK(bad.witness->level < 3);
    // the witness value is the third derivative of n^3: -6 h1 h2 h3 in the centre
    {
        const auto& w = *bad.witness;
        Rational expect = Rational(-6) * w.hs[0][0] * w.hs[1][0] * w.hs[2][0];
        CHECK(w.value == Element{0, 0, expect});
    }

    PolyMap quad_x{h, {Polynomial::univariate({0, 0, 1}), Polynomial::constant(0), Polynomial::constant(0)}};
    auto bq = check_polynomial_map(quad_x);
    REQUIRE_FALSE(bq.pass);
    CHECK(bq.witness->order == 2);

    // abelian tower: coordinate at level j may have degree j
    auto tower = FilteredGroup::abelian({1, 1, 1});
    PolyMap ok{tower, {Polynomial::univariate({0, 1}), Polynomial::univariate({0, 0, 1}),
                       Polynomial::univariate({0, 0, 0, 1})}};
    CHECK(check_polynomial_map(ok).pass);
    PolyMap low{tower, {Polynomial::univariate({0, 0, 1}), Polynomial::constant(0), Polynomial::constant(0)}};
    CHECK_FALSE(check_polynomial_map(low).pass);

    // sampled mode agrees on the verdicts
    PolyMapOptions o;
    o.max_tuples = 10;
    o.samples = 300;
    auto s1 = check_polynomial_map(br, o);
    CHECK_FALSE(s1.exhaustive);
    CHECK(s1.pass);
    CHECK_FALSE(check_polynomial_map(cubic, o).pass);
}

TEST_CASE("heisenberg bracket nilsequence is exact") {
    for (auto [a, b] : std::vector<std::pair<Rational, Rational>>{
             {Rational(2, 7), Rational(3, 11)}, {Rational(1, 2), Rational(1, 3)}, {Rational(-5, 13), Rational(7, 4)}}) {
        auto psi = heisenberg_bracket(a, b);
        for (std::int64_t n = 0; n <= 200; ++n) {
            REQUIRE(psi.orbit(n)[2] == frac_of(-a * n * Rational(floor_of(b * n))));
            REQUIRE(eval_nilsequence(psi, n) == bracket_oracle(a, b, n));
        }
    }
    CHECK(std::isinf(heisenberg_bracket(1, 1).lipschitz()));
}

TEST_CASE("abelian tower nilsequence matches the phase polynomial") {
    auto tower = FilteredGroup::abelian({1, 1, 1});
    std::vector<Rational> c{Rational(1, 9), Rational(3, 17), Rational(-5, 19), Rational(7, 23)};
    Nilsequence psi{PolyMap{tower, {Polynomial::univariate({c[0], c[1]}), Polynomial::univariate({0, 0, c[2]}),
                                    Polynomial::univariate({0, 0, 0, c[3]})}},
                    OutputMap::exponential({1, 1, 1})};
    Polynomial big = Polynomial::univariate(c);
    for (std::int64_t n = -50; n <= 50; ++n) {
        Rational q = n;
        REQUIRE(psi.eval(n) == expi(to_double(frac_of(big.eval(std::span<const Rational>(&q, 1))))));
    }
    CHECK(psi.lipschitz() == doctest::Approx(2 * std::acos(-1.0)));
    CHECK(std::isfinite(psi.lipschitz()));
}

TEST_CASE("N-periodicity") {
    auto circle = FilteredGroup::abelian({1});
    Nilsequence rat{PolyMap{circle, {Polynomial::univariate({0, Rational(3, 13)})}}, OutputMap::exponential({1})};
    auto r = is_N_periodic(rat, 13, -100, 100);
    CHECK(r.periodic);
    CHECK(r.max_gap == 0.0);
    CHECK_FALSE(is_N_periodic(rat, 12, 0, 10).periodic);

    Nilsequence irr{PolyMap{circle, {Polynomial::univariate({0, Rational(1.0 / std::sqrt(2.0))})}},
                    OutputMap::exponential({1})};
    auto ir = is_N_periodic(irr, 13, 0, 100);
    CHECK_FALSE(ir.periodic);
    REQUIRE(ir.witness.has_value());
    CHECK(*ir.witness == 0);

    // quadratic phase with denominator N is N-periodic on the tower too
    auto tower = FilteredGroup::abelian({1, 1});
    Nilsequence q{PolyMap{tower, {Polynomial::univariate({0, Rational(2, 7)}), Polynomial::univariate({0, 0, Rational(3, 7)})}},
                  OutputMap::exponential({1, 1})};
    CHECK(is_N_periodic(q, 7, 0, 60).periodic);
    CHECK_THROWS_AS(is_N_periodic(q, 0, 0, 1), DomainError);
}

TEST_CASE("discontinuity of e(z) across an integer y") {
    auto h = FilteredGroup::heisenberg();
    auto f = OutputMap::exponential({0, 0, 1});
    Element below{Rational(1, 2), Rational(999, 1000), 0};
    Element at{Rational(1, 2), 1, 0};
    CHECK(manifold_metric(h, below, at) <= 0.001 + 1e-12);
    cplx a = f.eval(h, h.project(below)), b = f.eval(h, h.project(at));
    CHECK(std::abs(a - b) > 0.5);

    // along the bracket sequence: adjacent n straddling floor(b n) = 0 -> 1
    auto psi = heisenberg_bracket(Rational(1, 2), Rational(1, 7));
    CHECK(std::abs(psi.eval(6) - psi.eval(7)) > 0.5);

    // the bump map vanishes on that seam and stays continuous
    auto bump = OutputMap::bump(1);
    CHECK(std::abs(bump.eval(h, h.project(below)) - bump.eval(h, h.project(at))) < 0.01);
    CHECK(std::isfinite(bump.lipschitz(h)));
}

TEST_CASE("manifold metric") {
    auto h = FilteredGroup::heisenberg();
    auto circle = FilteredGroup::abelian({1});
    Rng rng(23);
    for (int i = 0; i < 40; ++i) {
        Element u = rand_element(h, rng), v = rand_element(h, rng);
        CHECK(manifold_metric(h, u, u) == 0.0);
        CHECK(manifold_metric(h, u, v) == doctest::Approx(manifold_metric(h, v, u)));
        CHECK(manifold_metric(h, u, h.mul(u, Element{1, -2, 1})) == doctest::Approx(0.0));
        double d1 = manifold_metric(h, u, v, 1), d2 = manifold_metric(h, u, v, 2), d3 = manifold_metric(h, u, v, 3);
        CHECK(d3 <= d2 + 1e-12);
        CHECK(d2 <= d1 + 1e-12);
        CHECK(d2 >= 0.0);
        // nearby points: the search has converged by radius 2
        Element pu = h.project(u);
        Element w{pu[0] + Rational(1, 97), pu[1] - Rational(1, 89), pu[2] + Rational(1, 83)};
        double n2 = manifold_metric(h, u, w, 2);
        CHECK(n2 <= 1.0 / 97 + 1.0 / 89 + 1.0 / 83 + 1e-12);
        CHECK(manifold_metric(h, u, w, 4) == doctest::Approx(n2));
        CHECK(manifold_metric(h, w, u, 2) == doctest::Approx(n2));
    }
    for (int i = 0; i < 100; ++i) {
        Rational a = rand_q(rng), b = rand_q(rng);
        double d = to_double(frac_of(a - b));
        CHECK(manifold_metric(circle, {a}, {b}) == doctest::Approx(std::min(d, 1 - d)));
    }
    CHECK_THROWS_AS(manifold_metric(h, {0, 0}, {0, 0, 0}), DomainError);
}

TEST_CASE("nilpolynomials") {
    auto tower = FilteredGroup::abelian({1, 1, 1});
    Polynomial pn = Polynomial::univariate({Rational(1, 5), Rational(2, 11), 0, Rational(4, 13)});
    PolyMap p{tower, {Polynomial::constant(0), Polynomial::constant(0), pn}};
    Nilpolynomial frac{p,
                       [&](std::span<const std::int64_t> x) {
                           return Element{0, 0, frac_of(pn.eval_int(x))};
                       },
                       coord_poly(3, 2), 3, 1};
    for (std::int64_t n = -20; n <= 20; ++n) {
        std::int64_t xs[1] = {n};
        REQUIRE(eval_nilpolynomial(frac, xs) == frac_of(pn.eval_int(xs)));
    }
    auto rep = verify_nilpolynomial(frac);
    CHECK(rep.pass());
    CHECK(rep.points == 41);
    CHECK(rep.max_radius < 1);

    auto low = frac;
    low.degree = 0;
    auto lr = verify_nilpolynomial(low);
    CHECK_FALSE(lr.output_ok);
    REQUIRE(lr.output_witness.has_value());

    // partition of Z into r = 3 parts, step function c_0 + c_part
    Rng rng(41);
    std::map<std::int64_t, int> part;
    for (std::int64_t x = -20; x <= 20; ++x) part[x] = static_cast<int>(rng.uniform_int(0, 2));
    auto flat = FilteredGroup::abelian({3});
    Polynomial aff(3);
    aff.add_term({0, 0, 0}, Rational(1, 2)).add_term({1, 0, 0}, 2).add_term({0, 1, 0}, -3).add_term({0, 0, 1}, Rational(5, 4));
    Nilpolynomial step{PolyMap{flat, {Polynomial::constant(0), Polynomial::constant(0), Polynomial::constant(0)}},
                       [&](std::span<const std::int64_t> x) {
                           Element e{0, 0, 0};
                           e[part.at(x[0])] = 1;
                           return e;
                       },
                       aff, 1, 1};
    const Rational weights[3] = {2, -3, Rational(5, 4)};
    for (std::int64_t x = -20; x <= 20; ++x) {
        std::int64_t xs[1] = {x};
        REQUIRE(step.eval(xs) == Rational(1, 2) + weights[part[x]]);
    }
    CHECK(verify_nilpolynomial(step).pass());
    CHECK(flat.degree() == 1);
    CHECK(flat.dimension() == 3);
    Polynomial quad(3);
    quad.add_term({2, 0, 0}, 1);
    auto sq = step;
    sq.f = quad;
    CHECK_FALSE(verify_nilpolynomial(sq).output_ok);

    // {p(n)} + r(n), |r| < M
    const std::int64_t m = 4;
    std::map<std::int64_t, std::int64_t> r;
    for (std::int64_t x = -20; x <= 20; ++x) r[x] = rng.uniform_int(-(m - 1), m - 1);
    r[1] = m - 1;
    Nilpolynomial shifted{p,
                          [&](std::span<const std::int64_t> x) {
                              return Element{0, 0, frac_of(pn.eval_int(x)) + r.at(x[0])};
                          },
                          coord_poly(3, 2), 3, m};
    auto sr = verify_nilpolynomial(shifted);
    CHECK(sr.pass());
    CHECK(sr.max_radius > m - 1);
    auto tight = shifted;
    tight.radius = m - 1;
    auto tr = verify_nilpolynomial(tight);
    CHECK_FALSE(tr.radius_ok);
    REQUIRE(tr.radius_witness.has_value());

    // a lift that leaves the coset is caught
    auto wrong = frac;
    wrong.rho = [&](std::span<const std::int64_t> x) {
        Element e{0, 0, frac_of(pn.eval_int(x))};
        if (x[0] == 7) e[2] += Rational(1, 2);
        return e;
    };
    auto wr = verify_nilpolynomial(wrong);
    CHECK_FALSE(wr.projection_ok);
    REQUIRE(wr.projection_witness.has_value());
    CHECK((*wr.projection_witness)[0] == 7);

    // a heisenberg lift of the bracket map
    auto hb = heisenberg_bracket(Rational(2, 7), Rational(3, 11)).p;
    Nilpolynomial hn{hb, [&](std::span<const std::int64_t> x) { return hb.group.project(hb.eval(x)); },
                     coord_poly(3, 2), 2, 1};
    CHECK(verify_nilpolynomial(hn).pass());
}

TEST_CASE("polynomials in several variables") {
    Polynomial p(2);
    p.add_term({1, 1}, 3).add_term({0, 2}, Rational(1, 2)).add_term({1, 1}, -1);
    CHECK(p.degree() == 2);
    CHECK(p.terms().size() == 2);
    std::int64_t x[2] = {3, 4};
    CHECK(p.eval_int(x) == Rational(2 * 12 + 8));
    CHECK_THROWS_AS(p.add_term({1}, 1), DomainError);

    auto plane = FilteredGroup::abelian({1, 1});
    Polynomial lin(2);
    lin.add_term({1, 0}, Rational(1, 3)).add_term({0, 1}, 2);
    PolyMap m{plane, {lin, p}};
    PolyMapOptions o;
    o.range = 2;
    CHECK(check_polynomial_map(m, o).pass);
    PolyMap bad{plane, {p, lin}};
    CHECK_FALSE(check_polynomial_map(bad, o).pass);
}
