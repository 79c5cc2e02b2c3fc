#include <doctest.h>

#include <bit>
#include <cmath>

#include "hofa/domain.hpp"
#include "hofa/error.hpp"
#include "hofa/random.hpp"

using namespace hofa;

namespace {
double dist(cplx a, cplx b) { return std::abs(a - b); }

// direct vertex sum straight from coordinates, independent of flat-index helpers
double cube_sum_oracle(const GroupFn& f, std::int64_t x, const std::vector<std::int64_t>& h) {
    const std::int64_t n = f.domain().modulus();
    double s = 0;
    for (std::uint32_t w = 0; w < (1u << h.size()); ++w) {
        std::int64_t v = x;
        for (std::size_t i = 0; i < h.size(); ++i)
            if (w >> i & 1) v += h[i];
        s += ((std::popcount(w) & 1) ? -1 : 1) * f.real_at(v % n);
    }
    return s;
}
}  // namespace

TEST_CASE("domain construction and arithmetic") {
    CHECK_THROWS_AS(CyclicDomain(1), DomainError);
    CHECK(CyclicDomain(13).prime());
    CHECK_FALSE(CyclicDomain(12).prime());
    CyclicDomain d(5, 3);
    CHECK(d.size() == 125);
    std::vector<std::int64_t> a{1, 4, 2}, b{3, 3, 3};
    const auto s = d.coords(d.add(d.index(a), d.index(b)));
    CHECK(s == std::vector<std::int64_t>{4, 2, 0});
    CHECK(d.add(d.index(a), d.neg(d.index(a))) == 0);
    CHECK(d.index(std::vector<std::int64_t>{1, 0, 0}) == 1);
    CHECK(d.scale(3, d.index(a)) == d.index(std::vector<std::int64_t>{3, 2, 1}));
}

TEST_CASE("mult_derivative examples") {
    CyclicDomain d(7);
    auto one = GroupFn::complex(d, std::vector<cplx>(7, 1.0));
    auto g = mult_derivative(one, 3);
    for (std::int64_t x = 0; x < 7; ++x) CHECK(dist(g.complex_at(x), 1.0) < 1e-15);

    auto f = poly_phase(7, {0, 3});
    auto df = mult_derivative(f, 2);
    for (std::int64_t x = 0; x < 7; ++x) CHECK(dist(df.complex_at(x), expi(-6.0 / 7.0)) < 1e-12);

    auto masked = GroupFn::complex(d, std::vector<cplx>(7, 1.0), std::vector<std::uint8_t>(7, 1));
    CHECK_THROWS_AS(mult_derivative(masked, 1), DomainError);
}

TEST_CASE("cocycle identity of the multiplicative derivative") {
    for (std::int64_t n : {2, 5, 11, 13}) {
        Rng rng(100 + static_cast<std::uint64_t>(n));
        CyclicDomain d(n);
        auto f = random_unimodular(d, rng);
        for (std::int64_t h = 0; h < n; ++h)
            for (std::int64_t k = 0; k < n; ++k) {
                auto lhs = mult_derivative(f, d.add(h, k));
                auto dk = mult_derivative(f, k);
                auto dh = mult_derivative(f, h);
                for (std::int64_t x = 0; x < n; ++x)
                    CHECK(dist(lhs.complex_at(x), dk.complex_at(x) * dh.complex_at(d.add(x, k))) < 1e-12);
            }
    }
}

TEST_CASE("symmetry of derivatives") {
    const std::int64_t n = 13;
    CyclicDomain d(n);
    Rng rng(7);
    auto f = random_unimodular(d, rng);
    auto r = random_real(d, rng);
    for (std::int64_t h = 0; h < n; ++h)
        for (std::int64_t k = 0; k < n; ++k) {
            auto a = mult_derivative(mult_derivative(f, h), k);
            auto b = mult_derivative(mult_derivative(f, k), h);
            auto p = add_derivative(add_derivative(r, h), k);
            auto q = add_derivative(add_derivative(r, k), h);
            for (std::int64_t x = 0; x < n; ++x) {
                CHECK(dist(a.complex_at(x), b.complex_at(x)) < 1e-12);
                CHECK(std::abs(p.real_at(x) - q.real_at(x)) < 1e-12);
            }
        }
}

TEST_CASE("add_derivative examples and partiality") {
    CyclicDomain d(5);
    auto c = GroupFn::real(d, std::vector<double>(5, 0.3));
    auto dc = add_derivative(c, 2);
    for (std::int64_t x = 0; x < 5; ++x) CHECK(dc.real_at(x) == 0.0);

    auto f = poly_rational(5, {0, 2});
    auto df = add_derivative(f, 1);
    CHECK(df.numerator(0) == -2);
    CHECK(df.denom() == 5);
    CHECK(df.real_at(0) == doctest::Approx(-0.4));

    std::vector<std::uint8_t> mask{1, 1, 0, 1, 1};
    auto g = f.restricted(mask);
    auto dg = add_derivative(g, 1);
    CHECK(dg.defined(0));
    CHECK_FALSE(dg.defined(1));
    CHECK_FALSE(dg.defined(2));
    CHECK(dg.defined(3));
    CHECK(dg.defined(4));
    CHECK(dg.defined_count() == 3);
}

TEST_CASE("cube_derivative matches iterated additive derivatives") {
    const std::int64_t n = 7;
    CyclicDomain d(n);
    Rng rng(11);
    auto f = random_real(d, rng);
    CHECK(*cube_derivative(f, Cube{3, {}}) == f.real_at(3));
    for (int k = 1; k <= 3; ++k) {
        std::int64_t total = 1;
        for (int i = 0; i <= k; ++i) total *= n;
        for (std::int64_t code = 0; code < total; ++code) {
            std::int64_t t = code;
            Cube c;
            c.base = t % n;
            t /= n;
            for (int i = 0; i < k; ++i) {
                c.dirs.push_back(t % n);
                t /= n;
            }
            GroupFn g = f;
            for (auto h : c.dirs) g = add_derivative(g, h);
            const double v = *cube_derivative(f, c);
            CHECK(std::abs(v - g.real_at(c.base)) < 1e-12);
            CHECK(std::abs(v - cube_sum_oracle(f, c.base, c.dirs)) < 1e-12);
        }
    }
}

TEST_CASE("polynomials have vanishing high derivatives in rational mode") {
    // a genuine polynomial needs no wraparound: restrict to cubes staying inside [0, N)
    const std::int64_t n = 31;
    CyclicDomain d(n);
    std::vector<std::int64_t> num(n);
    for (std::int64_t x = 0; x < n; ++x) num[static_cast<std::size_t>(x)] = 3 * x * x - 7 * x + 2;
    auto f = GroupFn::rational(d, num, n);
    for (std::int64_t x = 0; x < 10; ++x)
        for (std::int64_t h1 = 0; h1 < 7; ++h1)
            for (std::int64_t h2 = 0; h2 < 7; ++h2)
                for (std::int64_t h3 = 0; h3 < 7; ++h3)
                    CHECK(*cube_derivative_exact(f, Cube{x, {h1, h2, h3}}) == 0);
    // degree s = 2 in (1/N)Z[x] reduced mod 1: cube_derivative is integral
    auto g = poly_rational(n, {0, 5, 3});
    for (std::int64_t x = 0; x < n; ++x) {
        auto v = *cube_derivative_exact(g, Cube{x, {4, 9, 17}});
        CHECK(v % n == 0);
    }
}

TEST_CASE("cube derivative undefined outside the mask") {
    CyclicDomain d(7);
    std::vector<std::uint8_t> mask(7, 1);
    mask[5] = 0;
    auto f = GroupFn::real(d, std::vector<double>(7, 1.0), mask);
    CHECK_FALSE(cube_derivative(f, Cube{2, {3}}).has_value());
    CHECK(cube_derivative(f, Cube{2, {2}}).has_value());
}

TEST_CASE("faces, reflections, permutations") {
    CyclicDomain d(7);
    Cube c{0, {2, 3}};
    const std::vector<int> all{0, 1}, none{};
    CHECK(face(d, c, all, none) == c);
    const std::vector<int> k1{0}, o2{1};
    CHECK(face(d, c, k1, o2) == Cube{3, {2}});
    std::vector<std::int64_t> pts;
    for (int w = 0; w < 4; ++w) {
        std::vector<int> off;
        for (int i = 0; i < 2; ++i)
            if (w >> i & 1) off.push_back(i);
        const auto v = face(d, c, none, off);
        CHECK(v.dim() == 0);
        CHECK(v.base == vertex(d, c, static_cast<std::uint32_t>(w)));
        pts.push_back(v.base);
    }
    CHECK(pts == std::vector<std::int64_t>{0, 2, 3, 5});
    CHECK_THROWS_AS(face(d, c, std::vector<int>{2}, none), DomainError);
    CHECK_THROWS_AS(face(d, c, k1, k1), DomainError);

    CHECK(reflect(d, reflect(d, c, 1), 1) == c);
    CHECK(reflect(d, c, 0) == Cube{2, {5, 3}});
    CHECK_THROWS_AS(reflect(d, c, 2), DomainError);

    const std::int64_t n = 11;
    CyclicDomain e(n);
    Rng rng(5);
    auto f = random_real(e, rng);
    for (int trial = 0; trial < 300; ++trial) {
        const int k = 1 + static_cast<int>(rng.uniform_int(0, 2));
        Cube q;
        q.base = rng.uniform_int(0, n - 1);
        for (int i = 0; i < k; ++i) q.dirs.push_back(rng.uniform_int(0, n - 1));
        const int i = static_cast<int>(rng.uniform_int(0, k - 1));
        CHECK(std::abs(*cube_derivative(f, reflect(e, q, i)) + *cube_derivative(f, q)) < 1e-12);
        std::vector<int> sigma(static_cast<std::size_t>(k));
        for (int j = 0; j < k; ++j) sigma[static_cast<std::size_t>(j)] = j;
        for (int j = k - 1; j > 0; --j)
            std::swap(sigma[static_cast<std::size_t>(j)], sigma[static_cast<std::size_t>(rng.uniform_int(0, j))]);
        CHECK(std::abs(*cube_derivative(f, permute(q, sigma)) - *cube_derivative(f, q)) < 1e-12);
    }
}
