#include <doctest.h>

#include "hofa/bracket.hpp"
#include "hofa/cocycle.hpp"
#include "hofa/error.hpp"
#include "hofa/random.hpp"

using namespace hofa;

namespace {
GroupFn random_integer_fn(const CyclicDomain& dom, Rng& rng, std::int64_t denom = 1) {
    std::vector<std::int64_t> v(static_cast<std::size_t>(dom.size()));
    for (auto& x : v) x = rng.uniform_int(-20, 20);
    return GroupFn::rational(dom, v, denom);
}

CubeCoefficients random_b(Rng& rng, int k, int d) {
    CubeCoefficients b(std::size_t{1} << k, std::vector<std::int64_t>(static_cast<std::size_t>(d)));
    for (auto& v : b)
        for (auto& e : v) e = rng.uniform_int(-9, 9);
    return b;
}
}  // namespace

TEST_CASE("cube_up and cube_down") {
    CyclicDomain dom(7);
    const Cube c{0, {1, 2}};
    CHECK(cube_up(dom, c, 3, 1) == Cube{0, {1, 5}});
    CHECK(cube_down(dom, c, 3, 1) == Cube{2, {1, 3}});
    CHECK(cube_up(dom, c, 0, 0) == c);
    CHECK(cube_down(dom, c, 0, 0).dirs[0] == 0);
    CHECK_THROWS_AS(cube_up(dom, c, 1, 2), DomainError);
}

TEST_CASE("gluing identity of the cube derivative") {
    const std::int64_t n = 7;
    CyclicDomain dom(n);
    Rng rng(70);
    auto f = random_real(dom, rng);
    auto q = random_integer_fn(dom, rng, n);
    for (int k = 1; k <= 3; ++k) {
        const auto total = cube_count(dom, k);
        for (std::uint64_t code = 0; code < total; ++code) {
            const Cube c = cube_from_code(dom, k, code);
            for (int i = 0; i < k; ++i)
                for (std::int64_t u = 0; u < n; ++u) {
                    const Cube up = cube_up(dom, c, u, i), down = cube_down(dom, c, u, i);
                    CHECK(std::abs(*cube_derivative(f, c) - (*cube_derivative(f, up) - *cube_derivative(f, down))) < 1e-12);
                    CHECK(*cube_derivative_exact(q, c) == *cube_derivative_exact(q, up) - *cube_derivative_exact(q, down));
                }
        }
    }
}

TEST_CASE("derivatives are exact cocycles") {
    Rng rng(71);
    for (std::int64_t n : {5, 7})
        for (int k = 1; k <= 3; ++k) {
            CyclicDomain dom(n);
            auto rho = CubeFunction::derivative_of(random_integer_fn(dom, rng, n), k);
            auto rep = is_cocycle(rho, CubeSet::full(dom, k), 0.0);
            CHECK(rep.pass);
            for (auto v : rep.violations) CHECK(v == 0);
            for (auto v : rep.valid_pairs) CHECK(v == cube_count(dom, k) * n);
        }
}

TEST_CASE("a corrupted cube is counted exactly") {
    const std::int64_t n = 7;
    const int k = 2;
    CyclicDomain dom(n);
    Rng rng(72);
    auto rho = CubeFunction::derivative_of(random_integer_fn(dom, rng), k);
    const Cube bad{3, {2, 5}};
    rho.set(bad, rho.numerator(bad) + 1);
    auto rep = is_cocycle(rho, CubeSet::full(dom, k), 0.0);
    CHECK_FALSE(rep.pass);
    // oracle: pairs whose identity has a nonzero net coefficient on the corrupted cube
    for (int i = 0; i < k; ++i) {
        std::uint64_t expect = 0;
        for (std::uint64_t code = 0; code < cube_count(dom, k); ++code) {
            const Cube c = cube_from_code(dom, k, code);
            for (std::int64_t u = 0; u < n; ++u) {
                const int net = (c == bad) - (cube_up(dom, c, u, i) == bad) + (cube_down(dom, c, u, i) == bad);
                expect += net != 0;
            }
        }
        CHECK(rep.violations[i] == expect);
    }
    CHECK(is_cocycle(rho, CubeSet::full(dom, k), 0.01).pass);
}

TEST_CASE("random cube functions are not cocycles") {
    const std::int64_t n = 7;
    CyclicDomain dom(n);
    Rng rng(73);
    CubeFunction rho(dom, 2);
    for (std::uint64_t code = 0; code < cube_count(dom, 2); ++code) rho.set(cube_from_code(dom, 2, code), rng.uniform_int(-3, 3));
    auto rep = is_cocycle(rho, CubeSet::full(dom, 2), 0.05);
    CHECK_FALSE(rep.pass);
    CHECK(rep.conditional_rate(0) > 0.5);
    REQUIRE(rep.witness.has_value());
}

TEST_CASE("cocycle inversion") {
    CyclicDomain d5(5);
    auto f = materialize(BracketExpr::parse("(frac (mon 2 x))"), d5);
    auto rep = cocycle_invert(CubeFunction::derivative_of(f, 1));
    for (std::int64_t x = 0; x < 5; ++x)
        CHECK(Rational(rep.lambda.numerator(x), rep.lambda.denom()) == Rational(f.numerator(x), 5) - Rational(2, 5));
    CHECK(rep.agreement == 1.0);
    CHECK(rep.max_abs_lambda <= rep.sup_rho + 1);

    CubeFunction zero(d5, 2);
    for (std::uint64_t code = 0; code < cube_count(d5, 2); ++code) zero.set(cube_from_code(d5, 2, code), 0);
    auto z = cocycle_invert(zero);
    for (std::int64_t x = 0; x < 5; ++x) CHECK(z.lambda.numerator(x) == 0);
    CHECK(z.agreement == 1.0);

    Rng rng(74);
    for (std::int64_t n : {5, 7}) {
        CyclicDomain dom(n);
        for (int k = 1; k <= 3; ++k) {
            auto g = random_integer_fn(dom, rng);
            auto inv = cocycle_invert(CubeFunction::derivative_of(g, k));
            CHECK(inv.agreement == 1.0);
            CHECK(inv.checked == cube_count(dom, k));
            for (std::uint64_t code = 0; code < cube_count(dom, k); code += 7) {
                const auto v = *cube_derivative_exact(inv.lambda, cube_from_code(dom, k, code));
                CHECK(v % inv.lambda.denom() == 0);
            }
        }
    }

    CubeFunction sparse(d5, 1);
    sparse.set(Cube{0, {1}}, 1);
    CHECK_THROWS_AS(cocycle_invert(sparse), InsufficientDataError);
}

TEST_CASE("partial cocycle inversion reports agreement") {
    const std::int64_t n = 7;
    CyclicDomain dom(n);
    Rng rng(75);
    auto rho = CubeFunction::derivative_of(random_integer_fn(dom, rng), 1);
    rho.unset(Cube{2, {3}});
    auto rep = cocycle_invert(rho);
    CHECK(rep.coverage_min == doctest::Approx(6.0 / 7.0));
    CHECK(rep.agreement < 1.0);
    CHECK(rep.checked == 48);
}

TEST_CASE("Z_r coefficients") {
    for (std::uint32_t w = 0; w < 4; ++w) CHECK(zr_coefficient(w, 3, 1, 2) == 0);
    CubeCoefficients b{{1}, {10}, {100}, {1000}};
    auto t = zr_transform(b, 1, 2);
    CHECK(t[3][0] == 0);
    CHECK(t[1][0] == b[1][0] - b[3][0]);
    CHECK(t[2][0] == b[2][0] - b[3][0]);
    // r >= k: identity
    auto id = zr_transform(b, 2, 2);
    CHECK(id == b);

    Rng rng(76);
    int cases = 0;
    for (int k = 1; k <= 4; ++k)
        for (int r = 0; r <= 3; ++r)
            for (int t2 = 0; t2 < 100; ++t2) {
                auto bb = random_b(rng, k, 2);
                auto out = zr_transform(bb, r, k);
                for (std::uint32_t w = 0; w < out.size(); ++w)
                    if (popcount(w) > r)
                        for (auto v : out[w]) CHECK(v == 0);
                ++cases;
            }
    CHECK(cases == 1600);
}

TEST_CASE("normal form") {
    Grading g{{1, 2}, 0};
    CubeCoefficients zero(4, std::vector<std::int64_t>(3, 0));
    CHECK(is_normal_form(zero, g).ok);
    auto bad = zero;
    bad[1][0] = 1;
    auto rep = is_normal_form(bad, g);
    CHECK_FALSE(rep.ok);
    CHECK(rep.omega == 1);
    CHECK(rep.coordinate == 0);
    Rng rng(77);
    for (int k = 1; k <= 3; ++k)
        for (int t = 0; t < 50; ++t) {
            auto b = random_b(rng, k, 3);
            CHECK(is_normal_form(normal_form_transform(b, g, k), g).ok);
        }
}

TEST_CASE("frak_b shuffles a constant field") {
    const std::int64_t n = 5;
    CyclicDomain dom(n);
    const CubeCoefficients b{{1, 2}, {3, 4}, {5, 6}, {7, 8}};
    CoefficientField field(dom, 2, {2}, 8);
    for (std::uint64_t code = 0; code < cube_count(dom, 2); ++code) field.set(cube_from_code(dom, 2, code), b);
    for (std::uint64_t code = 0; code < cube_count(dom, 2); ++code) {
        const Cube c = cube_from_code(dom, 2, code);
        for (int i = 0; i < 2; ++i)
            for (std::int64_t u = 0; u < n; ++u)
                for (std::uint32_t w = 0; w < 4; ++w) {
                    const auto got = frak_b(field, c, u, i, w);
                    CHECK(got == b[(w >> i & 1u) ? (w & ~(1u << i)) : w]);
                }
    }
    CHECK(frak_b(field, Cube{0, {1, 2}}, 3, 0, 0) == b[0]);
    CoefficientField empty(dom, 2, {2}, 0);
    CHECK_THROWS_AS(frak_b(empty, Cube{0, {1, 2}}, 3, 0, 0), DomainError);
}

TEST_CASE("upper compatibility") {
    const std::int64_t n = 5;
    CyclicDomain dom(n);
    auto full = CubeSet::full(dom, 2);
    auto lam = materialize(BracketExpr::parse("(frac (mon 1 x))"), dom);
    auto field = lift_polynomial_field(lam, full, 0);
    for (int i = 0; i < 2; ++i) {
        auto rep = is_upper_compatible(field, full, 0.0, i);
        CHECK(rep.pass);
        CHECK(rep.violations[i] == 0);
    }
    Rng rng(78);
    CoefficientField rnd(dom, 2, {1}, 9);
    for (std::uint64_t code = 0; code < cube_count(dom, 2); ++code) rnd.set(cube_from_code(dom, 2, code), random_b(rng, 2, 1));
    CHECK_FALSE(is_upper_compatible(rnd, full, 0.05, 0).pass);
    CHECK(is_upper_compatible(rnd, full, 1.0, 0).pass);
}

TEST_CASE("generalised cocycles") {
    const std::int64_t n = 5;
    CyclicDomain dom(n);
    auto full = CubeSet::full(dom, 2);
    auto lam = materialize(BracketExpr::parse("(frac (mon 1 x))"), dom);
    auto field = lift_polynomial_field(lam, full, 0);
    const Grading g{{1}, 0};
    // b(c, 0) is the carry-bit second derivative of {x/5}; all other entries vanish
    for (std::size_t i = 0; i < field.size(); ++i) {
        const auto& e = field.entry(i);
        CHECK(e[0][0] * n == *cube_derivative_exact(lam, field.cube(i)));
        for (std::uint32_t w = 1; w < 4; ++w) CHECK(e[w][0] == 0);
    }
    auto rep = is_generalized_cocycle(field, g, full, 0, 0.0);
    CHECK(rep.pass);
    CHECK(rep.violations == std::vector<std::uint64_t>{0, 0});

    CoefficientField constant(dom, 2, {1}, 3);
    for (std::uint64_t code = 0; code < cube_count(dom, 2); ++code)
        constant.set(cube_from_code(dom, 2, code), CubeCoefficients{{3}, {0}, {0}, {0}});
    // a constant b(c, 0) = 3 gives Z_0(frak_b)(0) = 3 - 3 = 0 != 3; only the zero constant passes
    CHECK_FALSE(is_generalized_cocycle(constant, g, full, 0, 0.0).pass);
    CoefficientField constant2(dom, 2, {1}, 3);
    for (std::uint64_t code = 0; code < cube_count(dom, 2); ++code)
        constant2.set(cube_from_code(dom, 2, code), CubeCoefficients{{0}, {0}, {0}, {0}});
    CHECK(is_generalized_cocycle(constant2, g, full, 0, 0.0).pass);

    Rng rng(79);
    CoefficientField rnd(dom, 2, {1}, 9);
    for (std::uint64_t code = 0; code < cube_count(dom, 2); ++code)
        rnd.set(cube_from_code(dom, 2, code), CubeCoefficients{{rng.uniform_int(-3, 3)}, {0}, {0}, {0}});
    auto bad = is_generalized_cocycle(rnd, g, full, 0, 0.05);
    CHECK_FALSE(bad.pass);
    CHECK(bad.violations[0] > 100);

    CoefficientField notnf(dom, 2, {1}, 9);
    for (std::uint64_t code = 0; code < cube_count(dom, 2); ++code)
        notnf.set(cube_from_code(dom, 2, code), CubeCoefficients{{0}, {1}, {0}, {0}});
    CHECK_THROWS_AS(is_generalized_cocycle(notnf, g, full, 0, 0.0), DomainError);

    // degree-2 phase with type 0 on 3-cubes
    auto quad = poly_rational(n, {0, 0, 1});
    const auto full3 = CubeSet::full(dom, 3);
    auto f3 = lift_polynomial_field(quad, full3, 0);
    CHECK(is_generalized_cocycle(f3, g, full3, 0, 0.0).pass);
}
