#pragma once

#include <random>
#include <sstream>

#include "engel/serialize.hpp"

namespace engel {

// ---------------------------------------------------------------------------
// Representation validity: homomorphism and unitarity over random pairs.
// The generalized-permutation form makes the product test O(dim) per pair.
// ---------------------------------------------------------------------------
struct RepCheckResult {
    double max_hom_err = 0.0;
    double max_unitarity_err = 0.0;
    i64 xi_count = 0;
    i64 pairs_per_xi = 0;
};

inline RepCheckResult rep_check(i64 p, int n, int pairs_per_xi,
                                unsigned long long seed, int jobs = 0) {
    auto dual = enumerate_dual(p, n);
    std::vector<double> hom_err(dual.size(), 0.0), uni_err(dual.size(), 0.0);
    parallel_for(dual.size(), [&](std::size_t k) {
        const DualPoint& xi = dual[k];
        int L = std::max(1, xi.level);
        QuotientTable quot(p, L);
        std::mt19937_64 rng(seed + 1000003ULL * k);
        std::uniform_int_distribution<i64> U(0, quot.modulus() - 1);
        const i64 d = xi.dim;
        double he = 0.0, ue = 0.0;
        for (int it = 0; it < pairs_per_xi; ++it) {
            QuotientIndex xc{U(rng), U(rng), U(rng), U(rng)};
            QuotientIndex yc{U(rng), U(rng), U(rng), U(rng)};
            EngelPoint x = lift(xc), y = lift(yc);
            RepMatrix mx = rep_matrix(xi, x, p);
            RepMatrix my = rep_matrix(xi, y, p);
            RepMatrix mxy = rep_matrix(xi, star(x, y), p);
            // product of generalized permutations: shift adds, phases compose
            if ((mx.shift + my.shift) % d != mxy.shift % d) {
                he = std::max(he, 1.0);
                continue;
            }
            for (i64 h = 0; h < d; ++h) {
                cplx prod = mx.phases[h] * my.phases[(h + mx.shift) % d];
                he = std::max(he, std::abs(prod - mxy.phases[h]));
                ue = std::max(ue, std::abs(std::norm(mx.phases[h]) - 1.0));
            }
        }
        // dense unitarity witness on one sample
        {
            QuotientIndex xc{U(rng), U(rng), U(rng), U(rng)};
            Eigen::MatrixXcd m = rep_matrix(xi, lift(xc), p).dense();
            ue = std::max(ue, (m * m.adjoint() -
                               Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff());
        }
        hom_err[k] = he;
        uni_err[k] = ue;
    }, jobs);
    RepCheckResult r;
    r.xi_count = static_cast<i64>(dual.size());
    r.pairs_per_xi = pairs_per_xi;
    for (double e : hom_err) r.max_hom_err = std::max(r.max_hom_err, e);
    for (double e : uni_err) r.max_unitarity_err = std::max(r.max_unitarity_err, e);
    return r;
}

// ---------------------------------------------------------------------------
// Character orthogonality. chi_xi is supported on x1 = 0 mod p^M, so the sums
// run over that stratum only. Level 1 checks every pair; higher levels sample.
// ---------------------------------------------------------------------------
struct OrthoCheckResult {
    double max_norm_dev = 0.0;      // max |haar|chi|^2 - 1|
    double max_pair_dev = 0.0;      // max |<chi_xi, chi_eta>| over xi != eta
    i64 xi_count = 0;
    i64 pairs_checked = 0;
};

namespace detail {

inline cplx char_pair_sum(const DualPoint& xi, const DualPoint& eta,
                          const QuotientTable& quot, const RootTable& roots) {
    // haar average of chi_xi * conj(chi_eta); both vanish off x1 = 0 mod p^Mmin
    const i64 p = quot.p();
    const i64 q = quot.modulus();
    i64 pM = std::max(xi.dim, eta.dim);
    cplx sum{0.0, 0.0};
    for (i64 c1 = 0; c1 < q; c1 += pM) {
        for (i64 c2 = 0; c2 < q; ++c2)
            for (i64 c3 = 0; c3 < q; ++c3)
                for (i64 c4 = 0; c4 < q; ++c4) {
                    QuotientIndex c{c1, c2, c3, c4};
                    cplx a = character_at(xi, c, p, roots);
                    if (a == cplx{0.0, 0.0}) continue;
                    cplx b = character_at(eta, c, p, roots);
                    sum += a * std::conj(b);
                }
    }
    return sum / static_cast<double>(quot.size());
}

} // namespace detail

inline OrthoCheckResult ortho_check(i64 p, int n, i64 sample_pairs,
                                    unsigned long long seed, int jobs = 0) {
    QuotientTable quot(p, n);
    RootTable roots(p, 2 * n + 1);
    auto dual = enumerate_dual(p, n);
    OrthoCheckResult r;
    r.xi_count = static_cast<i64>(dual.size());

    // norms
    std::vector<double> ndev(dual.size(), 0.0);
    parallel_for(dual.size(), [&](std::size_t k) {
        cplx v = detail::char_pair_sum(dual[k], dual[k], quot, roots);
        ndev[k] = std::abs(v - cplx{1.0, 0.0});
    }, jobs);
    for (double e : ndev) r.max_norm_dev = std::max(r.max_norm_dev, e);

    // pairs
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    if (n <= 1) {
        for (std::size_t i = 0; i < dual.size(); ++i)
            for (std::size_t j = i + 1; j < dual.size(); ++j) pairs.push_back({i, j});
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::size_t> U(0, dual.size() - 1);
        while (pairs.size() < static_cast<std::size_t>(sample_pairs)) {
            std::size_t i = U(rng), j = U(rng);
            if (i != j) pairs.push_back({i, j});
        }
    }
    std::vector<double> pdev(pairs.size(), 0.0);
    parallel_for(pairs.size(), [&](std::size_t t) {
        auto [i, j] = pairs[t];
        pdev[t] = std::abs(detail::char_pair_sum(dual[i], dual[j], quot, roots));
    }, jobs);
    for (double e : pdev) r.max_pair_dev = std::max(r.max_pair_dev, e);
    r.pairs_checked = static_cast<i64>(pairs.size());
    return r;
}

// ---------------------------------------------------------------------------
// Gaussian-integral sweep: closed form against the Riemann-sum oracle.
// Units {1, 3} cover both Legendre classes for p = 5 and p = 7.
// ---------------------------------------------------------------------------
struct GaussSweepResult {
    double max_err = 0.0;
    i64 cases = 0;
    std::string csv;   // filled when wanted
};

inline std::vector<PAdicScalar> gauss_sweep_values(i64 p) {
    std::vector<PAdicScalar> vals{PAdicScalar(0)};
    for (int v = -3; v <= 2; ++v)
        for (i64 u : {i64{1}, i64{3}}) {
            PAdicScalar x(u);
            if (v >= 0) x *= pow_i64(p, v);
            else x /= pow_i64(p, -v);
            vals.push_back(x);
        }
    return vals;
}

inline GaussSweepResult gauss_sweep(i64 p, bool want_csv = false, int jobs = 0) {
    auto vals = gauss_sweep_values(p);
    struct Case { PAdicScalar a, b; int gamma; };
    std::vector<Case> cases;
    for (const auto& a : vals)
        for (const auto& b : vals)
            for (int g : {-1, 0, 1}) cases.push_back({a, b, g});
    std::vector<double> errs(cases.size());
    std::vector<std::string> rows(want_csv ? cases.size() : 0);
    parallel_for(cases.size(), [&](std::size_t i) {
        const Case& c = cases[i];
        GaussianResult gr = gaussian_integral(c.a, c.b, c.gamma, p);
        cplx oracle = gaussian_integral_bruteforce(c.a, c.b, c.gamma, p);
        errs[i] = std::abs(gr.value - oracle);
        if (want_csv) rows[i] = gauss_row(c.a, c.b, c.gamma, gr, oracle);
    }, jobs);
    GaussSweepResult r;
    r.cases = static_cast<i64>(cases.size());
    for (double e : errs) r.max_err = std::max(r.max_err, e);
    if (want_csv) {
        std::ostringstream os;
        os << "a,b,gamma,branch,analytic_re,analytic_im,oracle_re,oracle_im,abs_err\n";
        for (auto& s : rows) os << s;
        r.csv = os.str();
    }
    return r;
}

/// exponent k with |int e^{2 pi i {a u^2 + b u}} du|^2 = p^{-k}; -1 when zero
inline int gaussian_abs2_expo_classes(const PhaseClass& a, const PhaseClass& b) {
    if (a.trivial()) return b.trivial() ? 0 : -1;
    if (b.expo > a.expo) return -1;
    return a.expo;
}

/// exact mean of |char_integral|^2 over (x2, x3) mod p^M equals p^{-M}
struct Lemma22Result {
    bool pass = true;
    i64 pairs = 0;
};

inline Lemma22Result lemma22_check(i64 p, int nmax) {
    auto classes = detail::classes_up_to(p, nmax);
    Lemma22Result r;
    for (const PhaseClass& xi3 : classes) {
        for (const PhaseClass& xi4 : classes) {
            int M = std::max(xi3.expo, xi4.expo);
            i64 pM = pow_i64(p, M);
            // accumulate sum * p^M as an exact integer: each term p^{M-k}
            i64 total = 0;
            for (i64 x2 = 0; x2 < pM; ++x2) {
                PhaseClass a = phase_scale_rat(phase_scale(xi4, x2, p), 1, 2, p);
                PhaseClass bx2 = phase_scale(xi3, x2, p);
                for (i64 x3 = 0; x3 < pM; ++x3) {
                    PhaseClass b = phase_add(bx2, phase_scale(xi4, x3, p), p);
                    int k = gaussian_abs2_expo_classes(a, b);
                    if (k >= 0) total += pow_i64(p, M - k);
                }
            }
            // mean * p^M = total / p^M should equal 1, i.e. total = p^{2M}
            ++r.pairs;
            if (total != pow_i64(p, 2 * M)) r.pass = false;
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Operator sanity: hermiticity, exact constant annihilation, and exact
// commutation of the translation structure with all left translations.
// ---------------------------------------------------------------------------
struct OperatorSanityResult {
    double herm_err = 0.0;
    double const_err = 0.0;
    i64 commute_failures = 0;
    i64 translations_checked = 0;
};

inline OperatorSanityResult operator_sanity(i64 p, int n, double alpha,
                                            Translation side = Translation::right) {
    QuotientTable quot(p, n);
    OperatorMatrix A = sub_laplacian_matrix(quot, alpha, side);
    OperatorSanityResult r;
    Eigen::MatrixXd D = A.dense();
    r.herm_err = (D - D.transpose()).cwiseAbs().maxCoeff();
    QuotientFunction ones{std::vector<cplx>(quot.size(), {1.0, 0.0}), n};
    QuotientFunction z = A.apply(ones);
    for (const cplx& v : z.values) r.const_err = std::max(r.const_err, std::abs(v));
    // right-translation permutations commute with left translations exactly
    // as index maps; verify the integer identity for every z in the quotient
    const i64 N = quot.size();
    for (i64 zi = 0; zi < N; ++zi) {
        QuotientIndex zc = quot.unindex(zi);
        auto lp = left_translation_perm(quot, zc);
        bool ok = true;
        for (const auto& perm : A.perms) {
            for (i64 i = 0; i < N; ++i)
                if (perm[lp[i]] != lp[perm[i]]) { ok = false; break; }
            if (!ok) break;
        }
        if (!ok) ++r.commute_failures;
        ++r.translations_checked;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Fourier round trip and Plancherel on random level-n functions, batched so
// the representation phases are computed once per (point, xi).
// ---------------------------------------------------------------------------
struct PlancherelResult {
    double max_roundtrip_err = 0.0;
    double max_plancherel_err = 0.0;
    int functions = 0;
};

inline PlancherelResult plancherel_check(i64 p, int n, int count,
                                         unsigned long long seed, int jobs = 0) {
    QuotientTable quot(p, n);
    RootTable roots(p, n);
    auto dual = enumerate_dual(p, n);
    const i64 N = quot.size();

    std::vector<QuotientFunction> fs(count);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> G(0.0, 1.0);
    for (auto& f : fs) {
        f.level = n;
        f.values.resize(N);
        for (auto& v : f.values) v = cplx(G(rng), G(rng));
    }

    // forward transforms, parallel over xi j
    std::vector<std::vector<Eigen::MatrixXcd>> hat(dual.size());
    parallel_for(dual.size(), [&](std::size_t k) {
        const DualPoint& xi = dual[k];
        const i64 d = xi.dim;
        hat[k].assign(count, Eigen::MatrixXcd::Zero(d, d));
        for (i64 i = 0; i < N; ++i) {
            QuotientIndex c = quot.unindex(i);
            i64 s = c.c1 % d;
            auto data = detail::rep_phase_data_int(xi, c, p);
            for (i64 h = 0; h < d; ++h) {
                cplx cph = std::conj(roots.value(detail::rep_phase_at(data, h, p)));
                i64 row = (h + s) % d;
                for (int f = 0; f < count; ++f)
                    hat[k][f](row, h) += fs[f].values[i] * cph;
            }
        }
        for (int f = 0; f < count; ++f) hat[k][f] /= static_cast<double>(N);
    }, jobs);

    // Plancherel: sum_xi dim ||hat f||_HS^2 = haar |f|^2
    PlancherelResult r;
    r.functions = count;
    for (int f = 0; f < count; ++f) {
        double lhs = 0.0;
        for (std::size_t k = 0; k < dual.size(); ++k)
            lhs += static_cast<double>(dual[k].dim) * hat[k][f].squaredNorm();
        double rhs = 0.0;
        for (const cplx& v : fs[f].values) rhs += std::norm(v);
        rhs /= static_cast<double>(N);
        r.max_plancherel_err = std::max(r.max_plancherel_err,
                                        std::abs(lhs - rhs) / std::max(1.0, rhs));
    }

    // inverse, parallel over point blocks
    std::vector<std::vector<cplx>> rec(count, std::vector<cplx>(N));
    const i64 blocks = 64;
    parallel_for(blocks, [&](std::size_t bidx) {
        i64 lo = static_cast<i64>(bidx) * N / blocks;
        i64 hi = static_cast<i64>(bidx + 1) * N / blocks;
        for (i64 i = lo; i < hi; ++i) {
            QuotientIndex c = quot.unindex(i);
            for (std::size_t k = 0; k < dual.size(); ++k) {
                const DualPoint& xi = dual[k];
                const i64 d = xi.dim;
                i64 s = c.c1 % d;
                auto data = detail::rep_phase_data_int(xi, c, p);
                for (i64 h = 0; h < d; ++h) {
                    cplx ph = roots.value(detail::rep_phase_at(data, h, p));
                    i64 row = (h + s) % d;
                    for (int f = 0; f < count; ++f)
                        rec[f][i] += static_cast<double>(d) * ph * hat[k][f](row, h);
                }
            }
        }
    }, jobs);
    for (int f = 0; f < count; ++f) {
        double err = 0.0;
        for (i64 i = 0; i < N; ++i)
            err = std::max(err, std::abs(rec[f][i] - fs[f].values[i]));
        r.max_roundtrip_err = std::max(r.max_roundtrip_err, err);
    }
    return r;
}

} // namespace engel
