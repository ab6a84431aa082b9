#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "engel/checks.hpp"
#include "engel/dual.hpp"

using namespace engel;

TEST_CASE("dual enumeration census") {
    auto d0 = enumerate_dual(5, 0);
    CHECK(d0.size() == 1);
    CHECK(d0[0].dim == 1);
    CHECK(d0[0].tag == CaseTag::abelian);

    DualCensus c1 = census(5, 1);
    CHECK(c1.n_abelian == 25);
    CHECK(c1.n_heisenberg == 4);
    CHECK(c1.n_big_xi3 == 0);
    CHECK(c1.n_big_xi4 == 20);
    CHECK(c1.sum_dim_sq == 625);
    CHECK(c1.pass);

    DualCensus c2 = census(5, 2);
    CHECK(c2.n_abelian == 625);
    CHECK(c2.n_heisenberg == 120);   // 100 with |xi3| = p, 20 with |xi3| = p^2
    CHECK(c2.n_big_xi3 == 80);
    CHECK(c2.n_big_xi4 == 1000);
    CHECK(c2.sum_dim_sq == 390625ULL);

    CHECK(census(5, 3).pass);
    CHECK(census(7, 1).pass);
    CHECK(census(7, 2).pass);
}

TEST_CASE("rep matrix at the identity and for abelian points") {
    auto dual = enumerate_dual(5, 1);
    for (const DualPoint& xi : dual) {
        RepMatrix m = rep_matrix(xi, engel_identity(), 5);
        CHECK((m.dense() - Eigen::MatrixXcd::Identity(xi.dim, xi.dim)).cwiseAbs().maxCoeff()
              < 1e-15);
        if (xi.tag == CaseTag::abelian) {
            EngelPoint x{2, 3, 1, 4};
            RepMatrix a = rep_matrix(xi, x, 5);
            CHECK(a.dim == 1);
            PhaseClass t = phase_add(phase_scale(xi.xi1, 2, 5), phase_scale(xi.xi2, 3, 5), 5);
            CHECK(std::abs(a.phases[0] - phase_value(t, 5)) < 1e-15);
        }
    }
}

TEST_CASE("homomorphism and unitarity over random pairs") {
    RepCheckResult r = rep_check(5, 1, 100, 2024);
    CHECK(r.xi_count == 49);
    CHECK(r.max_hom_err < 1e-12);
    CHECK(r.max_unitarity_err < 1e-12);
}

TEST_CASE("the Heisenberg sub-case: xi4 trivial reduces to the 3-dim formula") {
    DualPoint xi = detail::make_dual_point(PhaseClass{2, 1}, PhaseClass{1, 1},
                                           PhaseClass{3, 1}, PhaseClass{}, 5);
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<i64> U(0, 24);
    for (int it = 0; it < 50; ++it) {
        EngelPoint x{U(rng), U(rng), U(rng), U(rng)};
        RepMatrix m = rep_matrix(xi, x, 5);
        i64 x1 = residue_mod(x.x1, 5, 1);
        for (i64 h = 0; h < 5; ++h) {
            // phase e^{2 pi i {xi1 x1 + xi2 x2 + xi3 (x3 + h x2)}}, column h + x1
            PhaseClass t = phase_scale_scalar(xi.xi1, x.x1, 5);
            t = phase_add(t, phase_scale_scalar(xi.xi2, x.x2, 5), 5);
            t = phase_add(t, phase_scale_scalar(xi.xi3, x.x3 + h * x.x2, 5), 5);
            for (i64 hp = 0; hp < 5; ++hp) {
                cplx expect = (hp == (h + x1) % 5) ? phase_value(t, 5) : cplx{0.0, 0.0};
                CHECK(std::abs(m.entry(h, hp) - expect) < 1e-14);
            }
        }
    }
}

TEST_CASE("character equals the trace and the closed form") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<i64> U(0, 24);
    auto dual = enumerate_dual(5, 2);
    RootTable roots(5, 5);
    for (std::size_t k = 0; k < dual.size(); k += 37) {
        const DualPoint& xi = dual[k];
        CHECK(std::abs(character(xi, engel_identity(), 5) -
                       cplx{static_cast<double>(xi.dim), 0.0}) < 1e-12);
        for (int it = 0; it < 20; ++it) {
            QuotientIndex c{U(rng), U(rng), U(rng), U(rng)};
            EngelPoint x = lift(c);
            cplx tr = character_from_trace(xi, x, 5);
            CHECK(std::abs(character(xi, x, 5) - tr) < 1e-11);
            CHECK(std::abs(character_at(xi, c, 5, roots) - tr) < 1e-11);
        }
    }
    // trivial dual point: character is 1 everywhere
    DualPoint triv = dual[0];
    CHECK(triv.dim == 1);
    CHECK(std::abs(character(triv, EngelPoint{3, 1, 4, 1}, 5) - cplx{1.0, 0.0}) < 1e-15);
}

TEST_CASE("character orthogonality at level 1") {
    OrthoCheckResult r = ortho_check(5, 1, 0, 1);
    CHECK(r.pairs_checked == 49 * 48 / 2);
    CHECK(r.max_norm_dev < 1e-12);
    CHECK(r.max_pair_dev < 1e-12);
}

TEST_CASE("fourier transform of the constant function") {
    QuotientTable quot(5, 1);
    QuotientFunction ones{std::vector<cplx>(quot.size(), {1.0, 0.0}), 1};
    auto dual = enumerate_dual(5, 1);
    for (const DualPoint& xi : dual) {
        Eigen::MatrixXcd F = fourier_transform(ones, xi, quot);
        if (xi.level == 0)
            CHECK(std::abs(F(0, 0) - cplx{1.0, 0.0}) < 1e-13);
        else
            CHECK(F.cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("Schur orthogonality: a matrix coefficient transforms to one entry") {
    QuotientTable quot(5, 1);
    DualPoint xi = detail::make_dual_point(PhaseClass{}, PhaseClass{},
                                           PhaseClass{1, 1}, PhaseClass{}, 5);
    const i64 h = 2, hp = 4;
    QuotientFunction f{std::vector<cplx>(quot.size()), 1};
    for (i64 i = 0; i < quot.size(); ++i) {
        RepMatrix m = rep_matrix(xi, lift(quot.unindex(i)), 5);
        f.values[i] = m.entry(h, hp);
    }
    Eigen::MatrixXcd F = fourier_transform(f, xi, quot);
    for (i64 a = 0; a < 5; ++a)
        for (i64 b = 0; b < 5; ++b) {
            double expect = (a == hp && b == h) ? 0.2 : 0.0;
            CHECK(std::abs(std::abs(F(a, b)) - expect) < 1e-13);
        }
}

TEST_CASE("fourier inversion: delta, constants, random round trip") {
    QuotientTable quot(5, 1);
    auto dual = enumerate_dual(5, 1);

    QuotientFunction delta{std::vector<cplx>(quot.size(), {0.0, 0.0}), 1};
    delta.values[quot.index(QuotientIndex{})] = 1.0;
    std::vector<Eigen::MatrixXcd> coeffs;
    for (const DualPoint& xi : dual) coeffs.push_back(fourier_transform(delta, xi, quot));
    QuotientFunction back = fourier_inverse(dual, coeffs, quot);
    for (i64 i = 0; i < quot.size(); ++i)
        CHECK(std::abs(back.values[i] - delta.values[i]) < 1e-10);

    PlancherelResult r = plancherel_check(5, 1, 5, 555);
    CHECK(r.max_roundtrip_err < 1e-10);
    CHECK(r.max_plancherel_err < 1e-10);
}
