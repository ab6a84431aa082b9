#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "engel/checks.hpp"
#include "engel/gaussian.hpp"

using namespace engel;

TEST_CASE("gaussian integral spec examples") {
    auto g = gaussian_integral(PAdicScalar(0), PAdicScalar(0), 0, 5);
    CHECK(g.branch == GaussianBranch::flat);
    CHECK(std::abs(g.value - cplx{1.0, 0.0}) < 1e-15);

    g = gaussian_integral(PAdicScalar(0), make_scalar(1, 5), 0, 5);
    CHECK(g.branch == GaussianBranch::zero);
    CHECK(std::abs(g.value) == 0.0);

    g = gaussian_integral(make_scalar(1, 5), PAdicScalar(0), 0, 5);
    CHECK(g.branch == GaussianBranch::oscillatory);
    CHECK(std::abs(g.value - cplx{1.0 / std::sqrt(5.0), 0.0}) < 1e-12);
}

TEST_CASE("brute-force oracle agrees on the spec examples") {
    CHECK(std::abs(gaussian_integral_bruteforce(PAdicScalar(0), PAdicScalar(0), 0, 5) -
                   cplx{1.0, 0.0}) < 1e-12);
    CHECK(std::abs(gaussian_integral_bruteforce(make_scalar(1, 5), PAdicScalar(0), 0, 5) -
                   cplx{1.0 / std::sqrt(5.0), 0.0}) < 1e-12);
    auto g = gaussian_integral(make_scalar(1, 25), make_scalar(1, 5), 0, 5);
    cplx oracle = gaussian_integral_bruteforce(make_scalar(1, 25), make_scalar(1, 5), 0, 5);
    CHECK(std::abs(g.value - oracle) < 1e-12);
}

TEST_CASE("insufficient depth is rejected") {
    CHECK_THROWS_AS(gaussian_integral_bruteforce(make_scalar(1, 125), PAdicScalar(0), 0, 5, 1),
                    std::invalid_argument);
}

TEST_CASE("branch consistency: |value| determined by the branch") {
    for (i64 p : {5, 7}) {
        auto vals = gauss_sweep_values(p);
        for (const auto& a : vals)
            for (const auto& b : vals)
                for (int gamma : {-1, 0, 1}) {
                    GaussianResult g = gaussian_integral(a, b, gamma, p);
                    double m = std::abs(g.value);
                    switch (g.branch) {
                        case GaussianBranch::zero:
                            CHECK(m == 0.0);
                            break;
                        case GaussianBranch::flat:
                            CHECK(m == doctest::Approx(
                                std::pow(static_cast<double>(p), -gamma)).epsilon(1e-14));
                            break;
                        case GaussianBranch::oscillatory:
                            CHECK(m == doctest::Approx(
                                std::pow(norm_p(a, p), -0.5)).epsilon(1e-14));
                            break;
                    }
                }
    }
}

TEST_CASE("sweep against the Riemann-sum oracle at p = 5") {
    GaussSweepResult r = gauss_sweep(5, false);
    CHECK(r.cases > 400);
    CHECK(r.max_err < 1e-12);
}

TEST_CASE("char_integral basics") {
    // trivial frequencies: constant integrand
    CHECK(std::abs(char_integral(PhaseClass{}, PhaseClass{}, 1, 1, 5) - cplx{1.0, 0.0}) < 1e-15);
    // |xi4 x2| <= 1: indicator of xi3 x2 + xi4 x3 in Z_p
    PhaseClass xi3{1, 1}, xi4{};
    CHECK(std::abs(char_integral(xi3, xi4, 5, 1, 5) - cplx{1.0, 0.0}) < 1e-15);  // 5*(1/5) in Z_p
    CHECK(std::abs(char_integral(xi3, xi4, 1, 1, 5)) < 1e-15);                    // 1/5 not in Z_p
}

TEST_CASE("class-only gaussian evaluation matches the rational path") {
    const i64 p = 5;
    RootTable roots(p, 6);
    for (i64 ca = 0; ca < 25; ++ca)
        for (i64 cb = 0; cb < 25; ++cb) {
            PhaseClass a = canonical_class(ca, 2, p), b = canonical_class(cb, 2, p);
            GaussianResult g = gaussian_integral(class_value(a, p), class_value(b, p), 0, p);
            cplx fast = gaussian_integral_classes(a, b, p, roots);
            CHECK(std::abs(g.value - fast) < 1e-13);
        }
}

TEST_CASE("mean of |char_integral|^2 equals the inverse pair norm, exactly") {
    Lemma22Result r = lemma22_check(5, 2);
    CHECK(r.pass);
    CHECK(r.pairs == 625);
}
