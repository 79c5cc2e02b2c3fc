#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "hofa/bracket.hpp"
#include "hofa/cubesys.hpp"
#include "hofa/error.hpp"
#include "hofa/random.hpp"

using namespace hofa;

namespace {
// literal count over every (x, h) tuple using the vertex sum
double epsilon_oracle(const GroupFn& f, int s) {
    const CyclicDomain& dom = f.domain();
    const std::uint64_t total = cube_count(dom, s + 1);
    std::uint64_t hits = 0;
    for (std::uint64_t code = 0; code < total; ++code) {
        const Cube c = cube_from_code(dom, s + 1, code);
        if (f.mode() == ValueMode::rational) {
            auto v = cube_derivative_exact(f, c);
            hits += v && *v == 0;
        } else {
            auto v = cube_derivative(f, c);
            hits += v && std::abs(*v) < 1e-9;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(total);
}
}  // namespace

TEST_CASE("cube set basics") {
    CyclicDomain dom(5);
    CubeSet s(dom, 2);
    CHECK(s.universe() == 125);
    CHECK(s.insert(Cube{1, {2, 3}}));
    CHECK_FALSE(s.insert(Cube{1, {2, 3}}));
    CHECK(s.count() == 1);
    CHECK(s.contains(Cube{1, {2, 3}}));
    CHECK_FALSE(s.contains(Cube{1, {3, 2}}));
    CHECK_THROWS_AS(s.insert(Cube{1, {2}}), DomainError);
    CHECK(CubeSet::full(dom, 2).count() == 125);
    CHECK_THROWS_AS(CubeSet(CyclicDomain(101), 3), BudgetError);
}

TEST_CASE("full system passes, damaged systems are caught") {
    CyclicDomain dom(5);
    auto sys = CubeSystem::full(dom, 1);
    auto rep = check_cube_system(sys.levels, 1.0);
    CHECK(rep.ok());
    CHECK(rep.min_extension_fraction == 1.0);

    auto damaged = sys.levels;
    const Cube removed{2, {1, 3}};
    damaged[2].erase(removed);
    auto r2 = check_cube_system(damaged, 1.0);
    CHECK(r2.face_closed);
    CHECK_FALSE(r2.dense_extensions);
    REQUIRE(r2.extension_witness.has_value());
    CHECK(r2.extension_witness_count == 4);
    CHECK(r2.extension_witness->dim() == 1);
    CHECK(check_cube_system(damaged, 0.8).dense_extensions);

    CubeSet lone(dom, 1);
    lone.insert(Cube{0, {1}});
    std::vector<CubeSet> levels{CubeSet::full(dom, 0), lone};
    auto r3 = check_cube_system(levels, 0.0);
    CHECK_FALSE(r3.symmetric);
    CHECK(*r3.symmetry_witness == Cube{0, {1}});

    std::vector<CubeSet> holes{CubeSet(dom, 0), CubeSet::full(dom, 1)};
    auto r4 = check_cube_system(holes, 0.0);
    CHECK_FALSE(r4.face_closed);
}

TEST_CASE("symmetrize orbit of a single cube") {
    CyclicDomain dom(5);
    CubeSet s(dom, 2);
    s.insert(Cube{0, {1, 2}});
    auto orbit = symmetrize(s);
    // direct orbit enumeration: 2 permutations x 4 reflection patterns
    CubeSet direct(dom, 2);
    for (int perm = 0; perm < 2; ++perm)
        for (int refl = 0; refl < 4; ++refl) {
            Cube c{0, {1, 2}};
            if (perm) std::swap(c.dirs[0], c.dirs[1]);
            for (int i = 0; i < 2; ++i)
                if (refl >> i & 1) c = reflect(dom, c, i);
            direct.insert(c);
        }
    CHECK(orbit == direct);
    CHECK(orbit.count() <= 8);
    CHECK(symmetrize(orbit) == orbit);
    CHECK(check_cube_system({CubeSet::full(dom, 0), CubeSet::full(dom, 1), orbit}, 0.0).symmetric);
    auto full = CubeSet::full(dom, 2);
    CHECK(symmetrize(full) == full);
}

TEST_CASE("closure laws on seeded inputs") {
    CyclicDomain dom(7);
    Rng rng(21);
    for (int t = 0; t < 5; ++t) {
        CubeSet a(dom, 2);
        for (int i = 0; i < 40; ++i)
            a.insert(Cube{rng.uniform_int(0, 6), {rng.uniform_int(0, 6), rng.uniform_int(0, 6)}});
        CubeSet b = a;
        for (int i = 0; i < 40; ++i)
            b.insert(Cube{rng.uniform_int(0, 6), {rng.uniform_int(0, 6), rng.uniform_int(0, 6)}});
        const auto sa = symmetrize(a), sb = symmetrize(b);
        CHECK(a.subset_of(sa));
        CHECK(sa.subset_of(sb));
        CHECK(symmetrize(sa) == sa);
        const auto ga = glue_closure(a).result, gb = glue_closure(b).result;
        CHECK(a.subset_of(ga));
        CHECK(ga.subset_of(gb));
        CHECK(glue_closure(ga).result == ga);
        auto fc = face_closure({CubeSet(dom, 0), CubeSet(dom, 1), a});
        CHECK(check_cube_system(fc, 0.0).face_closed);
        CHECK(face_closure(fc)[0] == fc[0]);
    }
}

TEST_CASE("glue closure inside the vanishing set of a quadratic") {
    const std::int64_t n = 31;
    CyclicDomain dom(n);
    auto g = poly_rational(n, {0, 0, 4});
    Rng rng(30);
    CubeSet start(dom, 2);
    CubeSet vanishing(dom, 2);
    for (std::uint64_t code = 0; code < start.universe(); ++code) {
        const Cube c = cube_from_code(dom, 2, code);
        const bool zero = *cube_derivative_exact(g, c) == 0;
        if (zero) vanishing.insert_code(code);
        if (rng.uniform() < 0.3 && zero) start.insert_code(code);
    }
    auto rep = glue_closure(start);
    CHECK(rep.density_before == start.density());
    for (std::size_t i = 1; i < rep.density_per_round.size(); ++i)
        CHECK(rep.density_per_round[i] >= rep.density_per_round[i - 1]);
    CHECK(rep.density_after >= rep.density_before);
    CHECK(rep.result.subset_of(vanishing));
    CHECK(rep.density_after == doctest::Approx(vanishing.density()));

    // a cube is glued with itself at h_i = 0, so only an all-zero singleton has no partners
    CubeSet single(dom, 2);
    single.insert(Cube{3, {0, 0}});
    CHECK(glue_closure(single).result == single);
    CubeSet other(dom, 2);
    other.insert(Cube{3, {1, 2}});
    auto grown = glue_closure(other).result;
    CHECK(grown.count() == 4);
    CHECK(grown.contains(Cube{3, {0, 2}}));
    CHECK(grown.contains(Cube{3, {1, 0}}));
    CHECK(grown.contains(Cube{3, {0, 0}}));
    auto full = CubeSet::full(CyclicDomain(5), 2);
    CHECK(glue_closure(full).density_per_round.size() == 1);
}

TEST_CASE("translate closure") {
    CyclicDomain dom(5);
    CubeSet lower(dom, 1), upper(dom, 2);
    lower.insert(Cube{0, {2}});
    upper.insert(Cube{0, {2, 1}});
    upper.insert(Cube{1, {2, 1}});
    auto rep = translate_closure(lower, upper);
    CHECK(rep.result.contains(Cube{1, {2}}));
    CHECK(rep.result.contains(Cube{2, {2}}));
    CHECK(rep.result.count() == 3);
    CHECK(translate_closure(rep.result, upper).result == rep.result);
    auto fl = CubeSet::full(dom, 1);
    CHECK(translate_closure(fl, CubeSet::full(dom, 2)).result == fl);
}

TEST_CASE("approximate polynomial epsilon") {
    CyclicDomain d13(13);
    auto zero = GroupFn::rational(d13, std::vector<std::int64_t>(13, 0));
    CHECK(approx_poly_epsilon(zero, 2).epsilon == 1.0);
    auto zr = GroupFn::real(d13, std::vector<double>(13, 0.25));
    auto zrep = approx_poly_epsilon(zr, 1);
    CHECK(zrep.epsilon == 1.0);
    CHECK_FALSE(zrep.exact);

    // genuine polynomial: P(x) mod N over N is a polynomial map Z_N -> R/Z, not into R,
    // so the count is taken for a polynomial that never wraps
    std::vector<std::int64_t> lin(13);
    for (int x = 0; x < 13; ++x) lin[x] = 7;
    CHECK(approx_poly_epsilon(GroupFn::rational(d13, lin), 0).epsilon == 1.0);

    auto g = materialize(BracketExpr::parse("(frac (mon 3 x))"), CyclicDomain(31));
    auto e1 = approx_poly_epsilon(g, 1);
    CHECK(e1.epsilon >= 0.25);
    CHECK(e1.epsilon == doctest::Approx(epsilon_oracle(g, 1)).epsilon(1e-15));
    CHECK(e1.count == 19871);

    auto q = materialize(BracketExpr::parse("(mul (frac (mon 1 x)) (frac (mon 2 x)))"), CyclicDomain(31));
    auto e2 = approx_poly_epsilon(q, 2, {.par = {.jobs = 2}});
    CHECK(e2.epsilon > 0);
    CHECK(e2.count == 204321);
    CHECK(e2.total == 923521);
}

TEST_CASE("epsilon with masks and sampling") {
    Rng rng(17);
    const std::int64_t n = 11;
    std::vector<std::int64_t> num(n);
    std::vector<std::uint8_t> mask(n);
    for (std::int64_t x = 0; x < n; ++x) {
        num[x] = mod(3 * x, n);
        mask[x] = rng.uniform() < 0.7;
    }
    auto f = GroupFn::rational(CyclicDomain(n), num, n, mask);
    for (int s = 0; s <= 2; ++s) {
        const auto ex = approx_poly_epsilon(f, s);
        CHECK(ex.epsilon == doctest::Approx(epsilon_oracle(f, s)).epsilon(1e-15));
        const auto sm = approx_poly_epsilon(f, s, {.samples = 20000, .seed = 5});
        CHECK(std::abs(sm.epsilon - ex.epsilon) <= sm.half_width * 1.5 + 1e-12);
        CHECK(sm.total == 20000);
        const auto again = approx_poly_epsilon(f, s, {.samples = 20000, .seed = 5});
        CHECK(again.count == sm.count);
    }
    auto big = GroupFn::rational(CyclicDomain(1009), std::vector<std::int64_t>(1009, 0));
    CHECK_THROWS_AS(approx_poly_epsilon(big, 3, {.budget = Budget{1e9}}), BudgetError);
}
