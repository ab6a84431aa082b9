#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "engel/operators.hpp"
#include "engel/spectral.hpp"

using namespace engel;

namespace {

// independent 1-D oracle: Riemann sum of the defining integral on the
// character of frequency lambda, evaluated at 0
double term_oracle(const PhaseClass& lambda, i64 p, double alpha) {
    int D = lambda.expo + 1;
    i64 pd = pow_i64(p, D);
    double c_alpha = vt_c_alpha(p, alpha);
    cplx sum{0.0, 0.0};
    for (i64 t = 1; t < pd; ++t) {
        int v = vp_int(t, p);
        double w = std::pow(static_cast<double>(p), -D + v * (alpha + 1.0));
        cplx ph = phase_value(phase_scale(phase_neg(lambda, p), t, p), p);
        sum += w * (ph - cplx{1.0, 0.0});
    }
    return (c_alpha * sum).real();
}

QuotientFunction character_function(const QuotientTable& quot, PhaseClass l1, PhaseClass l2,
                                    PhaseClass l3, PhaseClass l4) {
    const i64 p = quot.p();
    QuotientFunction f;
    f.level = quot.level();
    f.values.resize(quot.size());
    for (i64 i = 0; i < quot.size(); ++i) {
        QuotientIndex c = quot.unindex(i);
        PhaseClass t = phase_scale(l1, c.c1, p);
        t = phase_add(t, phase_scale(l2, c.c2, p), p);
        t = phase_add(t, phase_scale(l3, c.c3, p), p);
        t = phase_add(t, phase_scale(l4, c.c4, p), p);
        f.values[i] = phase_value(t, p);
    }
    return f;
}

double eigen_residual(const OperatorMatrix& A, const QuotientFunction& f, double lambda) {
    QuotientFunction g = A.apply(f);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        num += std::norm(g.values[i] - lambda * f.values[i]);
        den += std::norm(f.values[i]);
    }
    return std::sqrt(num / den);
}

} // namespace

TEST_CASE("term: examples and piecewise convention") {
    CHECK(term(PhaseClass{}, 5, 1.0) == 0.0);
    CHECK(term(PhaseClass{1, 1}, 5, 1.0) == doctest::Approx(25.0 / 6.0).epsilon(1e-14));
    CHECK(term(PhaseClass{1, 2}, 5, 2.0) ==
          doctest::Approx(625.0 - 25.0 / 31.0).epsilon(1e-14));
}

TEST_CASE("term matches the 1-D Riemann-sum oracle") {
    for (i64 p : {5, 7})
        for (double alpha : {0.5, 1.0, 2.0})
            for (int m = 1; m <= 3; ++m)
                for (i64 c : {i64{1}, i64{2}, i64{7}}) {
                    PhaseClass l = canonical_class(c, m, p);
                    if (l.expo != m) continue;
                    CHECK(std::abs(term(l, p, alpha) - term_oracle(l, p, alpha)) < 1e-12);
                }
}

TEST_CASE("directional operators kill constants and act on characters") {
    QuotientTable quot(5, 1);
    for (int j = 1; j <= 4; ++j) {
        OperatorMatrix A = directional_vt_matrix(quot, j, 1.0);
        QuotientFunction ones{std::vector<cplx>(quot.size(), {1.0, 0.0}), 1};
        QuotientFunction z = A.apply(ones);
        for (const cplx& v : z.values) CHECK(std::abs(v) == 0.0);
    }
    // j = 1 on e^{2 pi i {lambda x1}}
    OperatorMatrix A1 = directional_vt_matrix(quot, 1, 1.0);
    PhaseClass lam{2, 1};
    QuotientFunction f = character_function(quot, lam, {}, {}, {});
    CHECK(eigen_residual(A1, f, term(lam, 5, 1.0)) < 1e-13);
}

TEST_CASE("sub-Laplacian: hermitian, abelian character eigenrelation") {
    QuotientTable quot(5, 1);
    OperatorMatrix A = sub_laplacian_matrix(quot, 1.0);
    Eigen::MatrixXd D = A.dense();
    CHECK((D - D.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    PhaseClass l1{1, 1}, l2{3, 1};
    QuotientFunction f = character_function(quot, l1, l2, {}, {});
    CHECK(eigen_residual(A, f, term(l1, 5, 1.0) + term(l2, 5, 1.0)) < 1e-13);
}

TEST_CASE("Vladimirov Laplacian: all four directions") {
    QuotientTable quot(5, 1);
    OperatorMatrix A = vladimirov_laplacian_matrix(quot, 1.0);
    QuotientFunction ones{std::vector<cplx>(quot.size(), {1.0, 0.0}), 1};
    QuotientFunction z = A.apply(ones);
    for (const cplx& v : z.values) CHECK(std::abs(v) == 0.0);
    PhaseClass l1{1, 1}, l2{3, 1};
    QuotientFunction f = character_function(quot, l1, l2, {}, {});
    CHECK(eigen_residual(A, f, term(l1, 5, 1.0) + term(l2, 5, 1.0)) < 1e-13);
    Eigen::MatrixXd D = A.dense();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(D, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() > -1e-12);   // nonnegative spectrum
}

TEST_CASE("full VT operator and its shifted variant") {
    QuotientTable quot(5, 1);
    OperatorMatrix A = full_vt_matrix(quot, 1.0, false);
    QuotientFunction ones{std::vector<cplx>(quot.size(), {1.0, 0.0}), 1};
    QuotientFunction z = A.apply(ones);
    for (const cplx& v : z.values) CHECK(std::abs(v) == 0.0);
    Eigen::MatrixXd D = A.dense();
    CHECK((D - D.transpose()).cwiseAbs().maxCoeff() < 1e-12);

    OperatorMatrix B = full_vt_matrix(quot, 1.0, true);
    QuotientFunction w = B.apply(ones);
    double shift = (1.0 - std::pow(5.0, -4.0)) / (1.0 - std::pow(5.0, -5.0));
    for (const cplx& v : w.values)
        CHECK(std::abs(v - cplx{shift, 0.0}) < 1e-13);
}

TEST_CASE("deeper shell sampling leaves the matrix unchanged") {
    QuotientTable quot(5, 1);
    for (int j : {1, 2}) {
        Eigen::MatrixXd a = directional_vt_matrix(quot, j, 1.0, Translation::right, 1).dense();
        Eigen::MatrixXd b = directional_vt_matrix(quot, j, 1.0, Translation::right, 2).dense();
        CHECK((a - b).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("right-convention operators are left-invariant, exactly") {
    QuotientTable quot(5, 1);
    OperatorMatrix A = sub_laplacian_matrix(quot, 1.0);
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<i64> U(0, 4);
    for (int it = 0; it < 20; ++it) {
        QuotientIndex zc{U(rng), U(rng), U(rng), U(rng)};
        auto lp = left_translation_perm(quot, zc);
        for (const auto& perm : A.perms)
            for (i64 i = 0; i < quot.size(); ++i)
                REQUIRE(perm[lp[i]] == lp[perm[i]]);
    }
}

TEST_CASE("closed-form symbol: abelian, trivial, twisted Toeplitz eigenvalues") {
    const i64 p = 5;
    auto dual = enumerate_dual(p, 1);
    CHECK(symbol_closed_form(dual[0], p, 1.0).cwiseAbs().maxCoeff() == 0.0);
    for (const DualPoint& xi : dual)
        if (xi.tag == CaseTag::abelian && xi.level > 0) {
            Eigen::MatrixXcd S = symbol_closed_form(xi, p, 1.0);
            CHECK(S.rows() == 1);
            CHECK(std::abs(S(0, 0) - cplx{term(xi.xi1, p, 1.0) + term(xi.xi2, p, 1.0), 0.0})
                  < 1e-13);
        }
    // twisted block alone has eigenvalues {term(xi1 + tau)}
    for (PhaseClass xi1 : {PhaseClass{}, PhaseClass{2, 1}, PhaseClass{3, 2}}) {
        DualPoint xi = detail::make_dual_point(xi1, PhaseClass{}, PhaseClass{1, 1},
                                               PhaseClass{}, p);
        Eigen::MatrixXcd K = symbol_x1_closed_form(xi, p, 1.0);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(K, Eigen::EigenvaluesOnly);
        std::vector<double> expect;
        for (i64 c = 0; c < xi.dim; ++c)
            expect.push_back(term(phase_add(xi1, canonical_class(c, 1, p), p), p, 1.0));
        std::sort(expect.begin(), expect.end());
        for (i64 e = 0; e < xi.dim; ++e)
            CHECK(std::abs(es.eigenvalues()(e) - expect[e]) < 1e-12);
    }
}

TEST_CASE("numeric symbol matches the closed form and is x-independent") {
    const i64 p = 5;
    QuotientTable quot(p, 1);
    OperatorMatrix T = sub_laplacian_matrix(quot, 1.0);
    std::vector<QuotientIndex> samples{{0, 0, 0, 0}, {1, 2, 3, 4}, {4, 0, 2, 1}, {2, 2, 2, 2}};
    auto dual = enumerate_dual(p, 1);
    for (std::size_t k = 0; k < dual.size(); k += 7) {
        NumericSymbol ns = symbol_numeric(dual[k], T, quot, samples);
        CHECK(ns.invariance_error < 1e-10);
        Eigen::MatrixXcd S = symbol_closed_form(dual[k], p, 1.0);
        CHECK((ns.sigma - S).cwiseAbs().maxCoeff() < 1e-10);
    }
    // zero operator has the zero symbol
    OperatorMatrix Z;
    Z.p = p; Z.n = 1; Z.alpha = 1.0; Z.dim = quot.size(); Z.diag = 0.0;
    NumericSymbol ns = symbol_numeric(dual[5], Z, quot, samples);
    CHECK(ns.sigma.cwiseAbs().maxCoeff() < 1e-14);
}
