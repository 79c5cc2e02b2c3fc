#include <doctest.h>

#include <cstdlib>

#include "hofa/bracket.hpp"
#include "hofa/error.hpp"
#include "hofa/random.hpp"

using namespace hofa;

namespace {
std::int64_t l1(const std::vector<std::int64_t>& v) {
    std::int64_t s = 0;
    for (auto x : v) s += std::llabs(x);
    return s;
}

// fractional part computed with plain doubles-free integer arithmetic: {p/q} as (p mod q)/q
Rational frac_oracle(std::int64_t p, std::int64_t q) { return Rational(mod(p, q), q); }
}  // namespace

TEST_CASE("floor and fractional part") {
    CHECK(floor_of(Rational(-1, 3)) == -1);
    CHECK(floor_of(Rational(7, 2)) == 3);
    CHECK(floor_of(Rational(-4, 2)) == -2);
    CHECK(frac_of(Rational(-1, 3)) == Rational(2, 3));
    for (int p = -20; p <= 20; ++p)
        for (int q = 1; q <= 7; ++q) {
            const Rational r(p, q);
            CHECK(frac_of(r) >= 0);
            CHECK(frac_of(r) < 1);
            CHECK(frac_of(r) == r - Rational(floor_of(r)));
        }
}

TEST_CASE("bracket evaluation") {
    const std::int64_t zero[1] = {0};
    CHECK(BracketExpr::frac(BracketExpr::constant(0)).eval(zero, 5) == 0);
    const std::int64_t three[1] = {3};
    CHECK(BracketExpr::frac(BracketExpr::monomial(2)).eval(three, 5) == Rational(1, 5));
    auto e = BracketExpr::parse("(mul (frac (mon 2 x)) (frac (mon 3 x)))");
    const std::int64_t four[1] = {4};
    CHECK(e.eval(four, 5) == Rational(6, 25));
    CHECK(BracketExpr::parse(e.to_string()).to_string() == e.to_string());
    auto f = BracketExpr::parse("(add (floor (mon 7 x2)) (rat -1 3) (const 2))");
    const std::int64_t pt[2] = {1, 3};
    CHECK(f.eval(pt, 5) == Rational(4) - Rational(1, 3) + Rational(2, 5));
    CHECK(f.max_var() == 1);
    CHECK_THROWS_AS(BracketExpr::parse("(mul (frac (mon 2 x))"), DomainError);
    CHECK_THROWS_AS(BracketExpr::parse("(pow 2 x)"), DomainError);
    CHECK_THROWS_AS(BracketExpr::parse("(mon 2 y)"), DomainError);
}

TEST_CASE("materialize picks a power of N") {
    auto lin = materialize(BracketExpr::parse("(frac (mon 2 x))"), CyclicDomain(5));
    CHECK(lin.denom() == 5);
    CHECK(lin.numerator(1) == 2);
    CHECK(lin.numerator(3) == 1);
    auto quad = materialize(BracketExpr::parse("(mul (frac (mon 1 x)) (frac (mon 2 x)))"), CyclicDomain(31));
    CHECK(quad.denom() == 31 * 31);
    for (std::int64_t x = 0; x < 31; ++x)
        CHECK(Rational(quad.numerator(x), quad.denom()) == frac_oracle(x, 31) * frac_oracle(2 * x, 31));
    CHECK_THROWS_AS(materialize(BracketExpr::parse("(mon 1 x2)"), CyclicDomain(5)), DomainError);
}

TEST_CASE("carry bits") {
    for (std::int64_t x = 0; x < 7; ++x) CHECK(carry_bit(3, x, 0, 7) == 0);
    CHECK(carry_bit(2, 2, 2, 5) == 1);
    const std::int64_t n = 7;
    for (std::int64_t a = 1; a < n; ++a)
        for (std::int64_t x = 0; x < n; ++x)
            for (std::int64_t y = 0; y < n; ++y)
                CHECK(frac_oracle(a * (x + y), n) == frac_oracle(a * x, n) + frac_oracle(a * y, n) - carry_bit(a, x, y, n));
}

TEST_CASE("bracket linear identity is exact on every cube") {
    const std::int64_t n = 7, a = 3;
    CyclicDomain dom(n);
    auto g = materialize(BracketExpr::parse("(frac (mon 3 x))"), dom);
    for (std::int64_t x = 0; x < n; ++x)
        for (std::int64_t h1 = 0; h1 < n; ++h1)
            for (std::int64_t h2 = 0; h2 < n; ++h2) {
                const Cube c{x, {h1, h2}};
                const int b = bracket_linear_coeffs(a, n, c);
                CHECK(std::abs(b) <= 1);
                CHECK(*cube_derivative_exact(g, c) == b * g.denom());
                if (h2 == 0 || h1 == 0) CHECK(b == 0);
                const auto e = bracket_linear_field_entry(a, n, c);
                CHECK(e[0][0] - e[1][0] - e[2][0] + e[3][0] == b);
            }
}

TEST_CASE("bracket quadratic identity is exact with bounded coefficients") {
    const std::int64_t n = 5, a = 1, b = 2;
    CyclicDomain dom(n);
    auto g = materialize(BracketExpr::parse("(mul (frac (mon 1 x)) (frac (mon 2 x)))"), dom);
    std::int64_t cubes = 0;
    for (std::int64_t code = 0; code < 625; ++code) {
        Cube c = cube_from_code(dom, 3, static_cast<std::uint64_t>(code));
        auto coeffs = bracket_quadratic_coeffs(a, b, n, c);
        auto expansion = bracket_quadratic_expansion(a, b, n, c);
        // independent check from the materialized function: dg(c) in units 1/N^2
        const auto dg = *cube_derivative_exact(g, c);
        std::int64_t rhs = 0;
        for (std::uint32_t w = 0; w < 8; ++w) {
            const std::int64_t v = vertex(dom, c, w);
            const std::int64_t fam[3] = {n * n, n * mod(a * v, n), n * mod(b * v, n)};
            std::int64_t dot = 0;
            for (int j = 0; j < 3; ++j) dot += coeffs[w][j] * fam[j];
            rhs += (popcount(w) & 1) ? -dot : dot;
            CHECK(l1(coeffs[w]) <= 2);
            for (auto e : coeffs[w]) CHECK(std::llabs(e) <= 2);
        }
        CHECK(rhs == dg);
        CHECK(verify_bracket_quadratic(a, b, n, c, expansion));
        const bool degenerate = c.dirs[0] == 0 || c.dirs[1] == 0 || c.dirs[2] == 0;
        if (degenerate) {
            CHECK(dg == 0);
            for (const auto& v : coeffs) CHECK(l1(v) == 0);
        }
        ++cubes;
    }
    CHECK(cubes == 625);
}

TEST_CASE("bracket quadratic on larger moduli") {
    Rng rng(12);
    for (std::int64_t n : {31, 101}) {
        CyclicDomain dom(n);
        for (int t = 0; t < 200; ++t) {
            Cube c{rng.uniform_int(0, n - 1), {rng.uniform_int(0, n - 1), rng.uniform_int(0, n - 1), rng.uniform_int(0, n - 1)}};
            auto coeffs = bracket_quadratic_coeffs(3, 7, n, c);
            CHECK(verify_bracket_quadratic(3, 7, n, c, coeffs));
            CHECK(verify_bracket_quadratic(3, 7, n, c, bracket_quadratic_expansion(3, 7, n, c)));
        }
    }
}

TEST_CASE("coefficient search is exhaustive") {
    auto cands = bounded_vectors(2, 1);
    CHECK(cands.size() == 5);
    CHECK(cands[0] == std::vector<std::int64_t>{0, 0});
    CHECK(cands[1] == std::vector<std::int64_t>{-1, 0});
    CHECK(bounded_vectors(3, 2).size() == 25);
    // brute force oracle on tiny random problems
    Rng rng(4);
    for (int t = 0; t < 200; ++t) {
        std::vector<std::vector<std::int64_t>> vals(4, std::vector<std::int64_t>(2));
        for (auto& v : vals)
            for (auto& e : v) e = rng.uniform_int(-4, 4);
        const std::int64_t target = rng.uniform_int(-6, 6);
        auto sol = solve_cube_coefficients(2, vals, target, cands);
        std::optional<CubeCoefficients> brute;
        const std::size_t m = cands.size();
        for (std::size_t i0 = 0; i0 < m && !brute; ++i0)
            for (std::size_t i1 = 0; i1 < m && !brute; ++i1)
                for (std::size_t i2 = 0; i2 < m && !brute; ++i2)
                    for (std::size_t i3 = 0; i3 < m && !brute; ++i3) {
                        const std::size_t idx[4] = {i0, i1, i2, i3};
                        std::int64_t s = 0;
                        for (int w = 0; w < 4; ++w) {
                            const auto& c = cands[idx[w]];
                            const std::int64_t dot = c[0] * vals[w][0] + c[1] * vals[w][1];
                            s += (popcount(w) & 1) ? -dot : dot;
                        }
                        if (s == target) brute = CubeCoefficients{cands[i0], cands[i1], cands[i2], cands[i3]};
                    }
        CHECK(sol.has_value() == brute.has_value());
        if (sol && brute) CHECK(*sol == *brute);
    }
}
