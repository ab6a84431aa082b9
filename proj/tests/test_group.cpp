#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "engel/dual.hpp"
#include "engel/group.hpp"

using namespace engel;

namespace {

EngelPoint random_point(std::mt19937_64& rng, i64 p) {
    // random Z_p elements: integers and unit-denominator rationals
    std::uniform_int_distribution<i64> num(-40, 40);
    std::uniform_int_distribution<int> pick(0, 3);
    auto coord = [&]() {
        static const i64 dens[4] = {1, 1, 2, 3};
        i64 d = dens[pick(rng)];
        while (d % p == 0) d += 1;
        return make_scalar(num(rng), d);
    };
    return {coord(), coord(), coord(), coord()};
}

} // namespace

TEST_CASE("group law examples") {
    EngelPoint a{1, 0, 0, 0}, b{0, 1, 0, 0};
    EngelPoint ab = star(a, b);
    CHECK(ab == EngelPoint{1, 1, 1, make_scalar(1, 2)});
    EngelPoint ba = star(b, a);
    CHECK(ba == EngelPoint{1, 1, 0, 0});
    EngelPoint x{3, make_scalar(1, 2), 7, make_scalar(2, 3)};
    CHECK(star(x, engel_identity()) == x);
    CHECK(star(engel_identity(), x) == x);
}

TEST_CASE("inverses") {
    CHECK(inverse(engel_identity()) == engel_identity());
    CHECK(inverse(EngelPoint{1, 0, 0, 0}) == EngelPoint{-1, 0, 0, 0});
    EngelPoint x{1, 1, 1, 1};
    EngelPoint y = inverse(x);
    CHECK(y == EngelPoint{-1, -1, 0, make_scalar(-1, 2)});
    CHECK(star(x, y) == engel_identity());
    CHECK(star(y, x) == engel_identity());
}

TEST_CASE("one-parameter subgroups") {
    CHECK(one_param(1, 3) == EngelPoint{3, 0, 0, 0});
    CHECK(one_param(2, 0) == engel_identity());
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<i64> t(-20, 20);
    for (int j = 1; j <= 4; ++j)
        for (int it = 0; it < 50; ++it) {
            i64 s = t(rng), u = t(rng);
            CHECK(star(one_param(j, s), one_param(j, u)) == one_param(j, s + u));
        }
}

TEST_CASE("associativity and inverse law on random points") {
    std::mt19937_64 rng(99);
    for (int it = 0; it < 1000; ++it) {
        EngelPoint x = random_point(rng, 5), y = random_point(rng, 5), z = random_point(rng, 5);
        CHECK(star(star(x, y), z) == star(x, star(y, z)));
        CHECK(star(x, inverse(x)) == engel_identity());
    }
}

TEST_CASE("the center contains (0,0,0,x4)") {
    std::mt19937_64 rng(3);
    for (int it = 0; it < 100; ++it) {
        EngelPoint z{0, 0, 0, make_scalar(it - 50, 3)};
        EngelPoint x = random_point(rng, 5);
        CHECK(star(x, z) == star(z, x));
    }
}

TEST_CASE("projection to the finite quotient") {
    CHECK(project(EngelPoint{6, 0, 0, 0}, 5, 1) == QuotientIndex{1, 0, 0, 0});
    QuotientTable q0(5, 0);
    CHECK(q0.size() == 1);

    QuotientTable quot(5, 2);
    CHECK(quot.size() == 390625);
    std::mt19937_64 rng(17);
    for (int it = 0; it < 1000; ++it) {
        EngelPoint x = random_point(rng, 5), y = random_point(rng, 5);
        QuotientIndex lhs = project(star(x, y), 5, 2);
        QuotientIndex rhs = quot.star_mod(project(x, 5, 2), project(y, 5, 2));
        CHECK(lhs == rhs);
        CHECK(quot.star_mod(project(x, 5, 2), quot.inverse_mod_pt(project(x, 5, 2))) ==
              QuotientIndex{});
    }
    // lift respects project
    QuotientIndex c{3, 1, 4, 2};
    CHECK(project(lift(c), 5, 2) == c);
}

TEST_CASE("index order is row-major over (c1,c2,c3,c4)") {
    QuotientTable quot(5, 1);
    CHECK(quot.index(QuotientIndex{0, 0, 0, 1}) == 1);
    CHECK(quot.index(QuotientIndex{0, 0, 1, 0}) == 5);
    CHECK(quot.index(QuotientIndex{0, 1, 0, 0}) == 25);
    CHECK(quot.index(QuotientIndex{1, 0, 0, 0}) == 125);
    for (i64 i = 0; i < quot.size(); ++i)
        CHECK(quot.index(quot.unindex(i)) == i);
}

TEST_CASE("haar averages") {
    QuotientTable quot(5, 1);
    QuotientFunction ones{std::vector<cplx>(quot.size(), {1.0, 0.0}), 1};
    CHECK(std::abs(haar_average(ones, quot) - cplx{1.0, 0.0}) < 1e-15);

    // a nontrivial character integrates to zero
    QuotientFunction chi{std::vector<cplx>(quot.size()), 1};
    for (i64 i = 0; i < quot.size(); ++i) {
        QuotientIndex c = quot.unindex(i);
        chi.values[i] = phase_value(PhaseClass{static_cast<i64>(mod_i64(c.c3, 5)), 1}, 5);
    }
    CHECK(std::abs(haar_average(chi, quot)) < 1e-14);

    // |character|^2 of a nontrivial level-1 dual point averages to 1
    auto dual = enumerate_dual(5, 1);
    RootTable roots(5, 2);
    for (const DualPoint& xi : dual) {
        QuotientFunction f{std::vector<cplx>(quot.size()), 1};
        for (i64 i = 0; i < quot.size(); ++i) {
            cplx v = character_at(xi, quot.unindex(i), 5, roots);
            f.values[i] = v * std::conj(v);
        }
        CHECK(std::abs(haar_average(f, quot) - cplx{1.0, 0.0}) < 1e-12);
    }
}
