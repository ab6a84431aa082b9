#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "engel/padic.hpp"

using namespace engel;

TEST_CASE("valuation basics") {
    CHECK(valuation(PAdicScalar(0), 5) == kValuationInfinity);
    CHECK(valuation(make_scalar(7, 25), 5) == -2);
    CHECK(valuation(make_scalar(50, 3), 5) == 2);
    CHECK(valuation(make_scalar(1), 5) == 0);
    CHECK(norm_p(PAdicScalar(0), 5) == 0.0);
    CHECK(norm_p(make_scalar(7, 25), 5) == doctest::Approx(25.0));
}

TEST_CASE("fractional part canonical classes") {
    CHECK(fractional_part(make_scalar(3), 5) == PhaseClass{});
    CHECK(fractional_part(make_scalar(7, 25), 5) == PhaseClass{7, 2});
    // 7/10: unit part 2, 2^{-1} = 3 mod 5, 7*3 = 21 = 1 mod 5
    CHECK(fractional_part(make_scalar(7, 10), 5) == PhaseClass{1, 1});
    CHECK(fractional_part(make_scalar(-1, 5), 5) == PhaseClass{4, 1});
}

TEST_CASE("phase values") {
    CHECK(phase_value(PhaseClass{}, 5) == cplx{1.0, 0.0});
    cplx z = phase_value(PhaseClass{1, 1}, 5);
    CHECK(z.real() == doctest::Approx(0.309017).epsilon(1e-6));
    CHECK(z.imag() == doctest::Approx(0.951057).epsilon(1e-6));
    cplx w = phase_value(PhaseClass{7, 2}, 5);
    CHECK(w.real() == doctest::Approx(std::cos(14.0 * std::numbers::pi / 25.0)));
    CHECK(w.imag() == doctest::Approx(std::sin(14.0 * std::numbers::pi / 25.0)));
}

TEST_CASE("legendre symbol against brute force") {
    CHECK(legendre_symbol(4, 5) == 1);
    CHECK(legendre_symbol(0, 5) == 0);
    CHECK(legendre_symbol(2, 5) == -1);
    for (i64 p : {5, 7, 11, 13}) {
        for (i64 a = 0; a < p; ++a) {
            int brute = 0;
            for (i64 x = 1; x < p; ++x)
                if (x * x % p == a) { brute = 1; break; }
            if (a == 0) brute = 0;
            else if (brute == 0) brute = -1;
            CHECK(legendre_symbol(a, p) == brute);
        }
    }
}

TEST_CASE("lambda_p cases") {
    CHECK(lambda_p(make_scalar(1), 5) == cplx{1.0, 0.0});
    CHECK(lambda_p(make_scalar(1, 5), 5) == cplx{1.0, 0.0});
    CHECK(lambda_p(make_scalar(1, 7), 7) == cplx{0.0, 1.0});
    CHECK(lambda_p(make_scalar(3, 7), 7) == cplx{0.0, -1.0});
    CHECK_THROWS_AS(lambda_p(PAdicScalar(0), 5), std::invalid_argument);
    CHECK(std::abs(lambda_p(make_scalar(2, 25), 5)) == doctest::Approx(1.0));
}

TEST_CASE("ultrametric and multiplicativity over random pairs") {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<i64> num(-400, 400), den(1, 60);
    const i64 p = 5;
    int checked = 0;
    for (int it = 0; it < 1000; ++it) {
        PAdicScalar x = make_scalar(num(rng), den(rng));
        PAdicScalar y = make_scalar(num(rng), den(rng));
        if (x == 0 || y == 0 || x + y == 0) continue;
        ++checked;
        i64 vx = valuation(x, p), vy = valuation(y, p), vs = valuation(x + y, p);
        CHECK(vs >= std::min(vx, vy));             // |x+y| <= max(|x|,|y|)
        if (vx != vy) CHECK(vs == std::min(vx, vy));
        CHECK(valuation(x * y, p) == vx + vy);
    }
    CHECK(checked > 900);
}

TEST_CASE("fractional part is an additive homomorphism into Q_p/Z_p") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<i64> num(-500, 500), den(1, 400);
    const i64 p = 5;
    for (int it = 0; it < 1000; ++it) {
        PAdicScalar x = make_scalar(num(rng), den(rng));
        PAdicScalar y = make_scalar(num(rng), den(rng));
        PhaseClass a = fractional_part(x, p), b = fractional_part(y, p);
        CHECK(fractional_part(x + y, p) == phase_add(a, b, p));
        cplx lhs = phase_value(a, p) * phase_value(b, p);
        cplx rhs = phase_value(phase_add(a, b, p), p);
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("canonicalization is idempotent") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<i64> c(0, 3000);
    for (int it = 0; it < 500; ++it) {
        PhaseClass a = canonical_class(c(rng), 5, 5);
        CHECK(canonical_class(a.numer, a.expo, 5) == a);
        if (!a.trivial()) CHECK(a.numer % 5 != 0);
    }
}

TEST_CASE("scalar scaling of classes matches rational arithmetic") {
    const i64 p = 5;
    PhaseClass a = fractional_part(make_scalar(7, 25), p);
    PAdicScalar s = make_scalar(3, 2);
    PhaseClass direct = fractional_part(make_scalar(7, 25) * s, p);
    CHECK(phase_scale_scalar(a, s, p) == direct);
    CHECK(phase_scale_rat(a, 3, 2, p) == direct);
    CHECK(phase_scale(a, 10, p) == fractional_part(make_scalar(70, 25), p));
}

TEST_CASE("config validation") {
    Config c;
    CHECK_NOTHROW(c.validate());
    c.p = 4;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.p = 3;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.p = 7; c.alpha = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}
