#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "engel/dual.hpp"
#include "engel/group.hpp"

namespace engel {

enum class Translation { right, left };

inline const char* translation_name(Translation t) {
    return t == Translation::right ? "right" : "left";
}

/// normalizing constant of the 1-D directional operator
inline double vt_c_alpha(i64 p, double alpha) {
    return (1.0 - std::pow(static_cast<double>(p), alpha)) /
           (1.0 - std::pow(static_cast<double>(p), -(alpha + 1.0)));
}

/// the subtracted constant C = (1-p^{-1})/(1-p^{-(alpha+1)})
inline double vt_shift_constant(i64 p, double alpha) {
    return (1.0 - 1.0 / static_cast<double>(p)) /
           (1.0 - std::pow(static_cast<double>(p), -(alpha + 1.0)));
}

/// eigenvalue of the 1-D directional operator on the character of frequency
/// lambda: 0 on the trivial class, |lambda|^alpha - C otherwise
inline double term(const PhaseClass& lambda, i64 p, double alpha) {
    if (lambda.trivial()) return 0.0;
    return std::pow(static_cast<double>(p), lambda.expo * alpha) -
           vt_shift_constant(p, alpha);
}

// ---------------------------------------------------------------------------
// Operator matrices on G/G_n, stored as weighted translation permutations:
//   (A f)(x) = diag * f(x) + sum_k w_k f(perm_k(x)).
// For level-n functions each nonzero t-class mod p^n contributes the exact
// coset integral; the t = 0 class contributes nothing. diag is the negative
// of the weight sum accumulated in storage order, so constants are
// annihilated exactly in floating point.
// ---------------------------------------------------------------------------
struct OperatorMatrix {
    i64 p = 5;
    int n = 1;
    double alpha = 1.0;
    std::vector<int> dirs;
    Translation side = Translation::right;
    i64 dim = 0;
    std::vector<double> weights;             // one per translation
    std::vector<std::vector<int>> perms;     // one permutation per translation
    double diag = 0.0;

    // Translations are summed in storage order and the diagonal is added
    // last; diag is the negated running sum of the same weights, so a
    // constant input cancels exactly in floating point.
    void apply(const cplx* in, cplx* out) const {
        if (weights.empty()) {
            for (i64 i = 0; i < dim; ++i) out[i] = diag * in[i];
            return;
        }
        {
            const double w = weights[0];
            const int* perm = perms[0].data();
            for (i64 i = 0; i < dim; ++i) out[i] = w * in[perm[i]];
        }
        for (std::size_t k = 1; k < weights.size(); ++k) {
            const double w = weights[k];
            const int* perm = perms[k].data();
            for (i64 i = 0; i < dim; ++i) out[i] += w * in[perm[i]];
        }
        for (i64 i = 0; i < dim; ++i) out[i] += diag * in[i];
    }
    QuotientFunction apply(const QuotientFunction& f) const {
        QuotientFunction g;
        g.level = f.level;
        g.values.resize(dim);
        apply(f.values.data(), g.values.data());
        return g;
    }
    Eigen::MatrixXd dense() const {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
        for (i64 i = 0; i < dim; ++i) m(i, i) = diag;
        for (std::size_t k = 0; k < weights.size(); ++k)
            for (i64 i = 0; i < dim; ++i) m(i, perms[k][i]) += weights[k];
        return m;
    }
};

namespace detail {

inline std::vector<int> translation_perm(const QuotientTable& quot, const QuotientIndex& g,
                                         Translation side) {
    std::vector<int> perm(quot.size());
    for (i64 i = 0; i < quot.size(); ++i) {
        QuotientIndex x = quot.unindex(i);
        QuotientIndex y = (side == Translation::right) ? quot.star_mod(x, g)
                                                       : quot.star_mod(g, x);
        perm[i] = static_cast<int>(quot.index(y));
    }
    return perm;
}

inline void append_directional(OperatorMatrix& A, const QuotientTable& quot, int j,
                               double alpha, Translation side, int depth) {
    const i64 p = quot.p();
    const int n = quot.level();
    if (n < 1) throw std::invalid_argument("directional operator needs level >= 1");
    if (depth < n) depth = n;
    const double c_alpha = vt_c_alpha(p, alpha);
    const i64 pd = pow_i64(p, depth);
    // t-classes mod p^depth; classes divisible by p^n translate within G_n
    // and cancel against f(x), so only classes nonzero mod p^n are stored.
    // Sampling deeper than n refines each class into p^{depth-n} sub-cosets
    // whose translations agree on level-n functions; weights simply add up.
    std::vector<double> folded(pow_i64(p, n), 0.0);
    for (i64 t = 1; t < pd; ++t) {
        int nu = vp_int(t, p);
        if (nu >= n) continue;
        double w = c_alpha * std::pow(static_cast<double>(p), -static_cast<double>(depth))
                 * std::pow(static_cast<double>(p), nu * (alpha + 1.0));
        folded[t % pow_i64(p, n)] += w;
    }
    const i64 pn = pow_i64(p, n);
    for (i64 t0 = 1; t0 < pn; ++t0) {
        QuotientIndex gamma{};
        switch (j) {
            case 1: gamma = {t0, 0, 0, 0}; break;
            case 2: gamma = {0, t0, 0, 0}; break;
            case 3: gamma = {0, 0, t0, 0}; break;
            case 4: gamma = {0, 0, 0, t0}; break;
            default: throw std::invalid_argument("direction must be 1..4");
        }
        QuotientIndex g = quot.inverse_mod_pt(gamma);
        A.weights.push_back(folded[t0]);
        A.perms.push_back(translation_perm(quot, g, side));
        A.diag -= folded[t0];
    }
}

} // namespace detail

inline OperatorMatrix directional_vt_matrix(const QuotientTable& quot, int j, double alpha,
                                            Translation side = Translation::right,
                                            int depth = 0) {
    OperatorMatrix A;
    A.p = quot.p(); A.n = quot.level(); A.alpha = alpha;
    A.dirs = {j}; A.side = side; A.dim = quot.size();
    detail::append_directional(A, quot, j, alpha, side, depth);
    return A;
}

/// sum of the directional operators along the first-stratum generators
inline OperatorMatrix sub_laplacian_matrix(const QuotientTable& quot, double alpha,
                                           Translation side = Translation::right) {
    OperatorMatrix A;
    A.p = quot.p(); A.n = quot.level(); A.alpha = alpha;
    A.dirs = {1, 2}; A.side = side; A.dim = quot.size();
    detail::append_directional(A, quot, 1, alpha, side, 0);
    detail::append_directional(A, quot, 2, alpha, side, 0);
    return A;
}

/// sum over all four generators
inline OperatorMatrix vladimirov_laplacian_matrix(const QuotientTable& quot, double alpha,
                                                  Translation side = Translation::right) {
    OperatorMatrix A;
    A.p = quot.p(); A.n = quot.level(); A.alpha = alpha;
    A.dirs = {1, 2, 3, 4}; A.side = side; A.dim = quot.size();
    for (int j = 1; j <= 4; ++j) detail::append_directional(A, quot, j, alpha, side, 0);
    return A;
}

/// diagnostic assembly that reproduces the closed-form spectrum: X1 by right
/// translation, X2 by left translation (the coordinate-wise operator). Not
/// left-invariant; see the verify-spectrum discrepancy report.
inline OperatorMatrix mixed_assembly_matrix(const QuotientTable& quot, double alpha,
                                            Translation first = Translation::right) {
    OperatorMatrix A;
    A.p = quot.p(); A.n = quot.level(); A.alpha = alpha;
    A.dirs = {1, 2}; A.side = first; A.dim = quot.size();
    Translation second = (first == Translation::right) ? Translation::left : Translation::right;
    detail::append_directional(A, quot, 1, alpha, first, 0);
    detail::append_directional(A, quot, 2, alpha, second, 0);
    return A;
}

/// full Vladimirov-Taibleson operator: 4-dimensional shells with the group
/// norm, exponent alpha + 4. with_shift adds the constant of the shifted
/// variant (1-p^{-4})/(1-p^{-(alpha+4)}) to the diagonal.
inline OperatorMatrix full_vt_matrix(const QuotientTable& quot, double alpha,
                                     bool with_shift = false,
                                     Translation side = Translation::right) {
    const i64 p = quot.p();
    const int n = quot.level();
    if (n < 1) throw std::invalid_argument("full VT operator needs level >= 1");
    OperatorMatrix A;
    A.p = p; A.n = n; A.alpha = alpha;
    A.dirs = {}; A.side = side; A.dim = quot.size();
    const double c = (1.0 - std::pow(static_cast<double>(p), alpha)) /
                     (1.0 - std::pow(static_cast<double>(p), -(alpha + 4.0)));
    const double meas = std::pow(static_cast<double>(p), -4.0 * n);
    const i64 pn = quot.modulus();
    auto coord_vp = [&](i64 c0) { return c0 == 0 ? n : std::min(n, vp_int(c0, p)); };
    for (i64 i = 1; i < quot.size(); ++i) {
        QuotientIndex y = quot.unindex(i);
        int nu = std::min(std::min(coord_vp(y.c1), coord_vp(y.c2)),
                          std::min(coord_vp(y.c3), coord_vp(y.c4)));
        // ||y|| = p^{-nu}; weight = measure * ||y||^{-(alpha+4)}
        double w = c * meas * std::pow(static_cast<double>(p), nu * (alpha + 4.0));
        QuotientIndex g = quot.inverse_mod_pt(y);
        A.weights.push_back(w);
        A.perms.push_back(detail::translation_perm(quot, g, side));
        A.diag -= w;
    }
    if (with_shift)
        A.diag += (1.0 - std::pow(static_cast<double>(p), -4.0)) /
                  (1.0 - std::pow(static_cast<double>(p), -(alpha + 4.0)));
    return A;
}

/// left-translation permutation by z, as a matrix action index map
inline std::vector<int> left_translation_perm(const QuotientTable& quot, const QuotientIndex& z) {
    return detail::translation_perm(quot, z, Translation::left);
}

// ---------------------------------------------------------------------------
// Closed-form symbol of the sub-Laplacian at xi: the twisted Toeplitz matrix
// of the 1-D operator plus the diagonal potential term(xi2 + xi3 h + xi4 h^2/2).
// ---------------------------------------------------------------------------
inline Eigen::MatrixXcd symbol_x1_closed_form(const DualPoint& xi, i64 p, double alpha) {
    const i64 d = xi.dim;
    const int M = xi.big_m();
    Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(d, d);
    if (M == 0) {
        K(0, 0) = term(xi.xi1, p, alpha);
        return K;
    }
    // |xi1| > p^M: every coset oscillation cancels and |xi1 + tau| = |xi1|
    // for all tau of level <= M, so the block is the scalar term(xi1).
    if (xi.xi1.expo > M)
        return term(xi.xi1, p, alpha) * Eigen::MatrixXcd::Identity(d, d);
    const double c_alpha = vt_c_alpha(p, alpha);
    const double pa = std::pow(static_cast<double>(p), alpha);
    const double diag0 = -c_alpha * (1.0 - 1.0 / p) *
                         (std::pow(static_cast<double>(p), M * alpha) - 1.0) / (pa - 1.0);
    for (i64 h = 0; h < d; ++h) {
        for (i64 k = 0; k < d; ++k) {
            if (h == k) { K(h, k) = diag0; continue; }
            i64 c = mod_i64(h - k, d);
            int nu = vp_int(c, p);
            double w = c_alpha * std::pow(static_cast<double>(p), -static_cast<double>(M))
                     * std::pow(static_cast<double>(p), nu * (alpha + 1.0));
            K(h, k) = w * phase_value(phase_scale(phase_neg(xi.xi1, p), c, p), p);
        }
    }
    return K;
}

inline Eigen::MatrixXcd symbol_x2_closed_form(const DualPoint& xi, i64 p, double alpha) {
    const i64 d = xi.dim;
    Eigen::MatrixXcd V = Eigen::MatrixXcd::Zero(d, d);
    for (i64 h = 0; h < d; ++h) {
        PhaseClass q = phase_add(xi.xi2, phase_scale(xi.xi3, h, p), p);
        q = phase_add(q, phase_scale_rat(phase_scale(xi.xi4, h * h, p), 1, 2, p), p);
        V(h, h) = term(q, p, alpha);
    }
    return V;
}

inline Eigen::MatrixXcd symbol_closed_form(const DualPoint& xi, i64 p, double alpha) {
    return symbol_x1_closed_form(xi, p, alpha) + symbol_x2_closed_form(xi, p, alpha);
}

// ---------------------------------------------------------------------------
// Numeric symbol: apply T to the sampled matrix-coefficient entry functions
// and extract pi(x)^* (T pi)(x); flags dependence on the sample point x.
// ---------------------------------------------------------------------------
struct NumericSymbol {
    Eigen::MatrixXcd sigma;
    double invariance_error = 0.0;   // max deviation across sample points
};

inline NumericSymbol symbol_numeric(const DualPoint& xi, const OperatorMatrix& T,
                                    const QuotientTable& quot,
                                    const std::vector<QuotientIndex>& samples) {
    if (xi.level > quot.level())
        throw std::invalid_argument("symbol_numeric: xi level exceeds quotient level");
    const i64 p = quot.p();
    const i64 d = xi.dim;
    const i64 N = quot.size();
    RootTable roots(p, quot.level());
    // sample every entry function and its image under T
    std::vector<Eigen::MatrixXcd> entry_at(N, Eigen::MatrixXcd::Zero(d, d));
    std::vector<std::vector<cplx>> entries(d * d);
    for (i64 h = 0; h < d; ++h)
        for (i64 k = 0; k < d; ++k)
            entries[h * d + k].assign(N, cplx{0.0, 0.0});
    for (i64 i = 0; i < N; ++i) {
        QuotientIndex c = quot.unindex(i);
        i64 s = c.c1 % d;
        auto data = detail::rep_phase_data_int(xi, c, p);
        for (i64 h = 0; h < d; ++h) {
            cplx ph = roots.value(detail::rep_phase_at(data, h, p));
            entries[h * d + (h + s) % d][i] = ph;
        }
    }
    std::vector<std::vector<cplx>> images(d * d, std::vector<cplx>(N));
    for (i64 e = 0; e < d * d; ++e) T.apply(entries[e].data(), images[e].data());

    NumericSymbol out;
    bool first = true;
    for (const QuotientIndex& x : samples) {
        i64 i = quot.index(x);
        Eigen::MatrixXcd Tpi(d, d);
        for (i64 h = 0; h < d; ++h)
            for (i64 k = 0; k < d; ++k) Tpi(h, k) = images[h * d + k][i];
        Eigen::MatrixXcd pix = Eigen::MatrixXcd::Zero(d, d);
        {
            QuotientIndex c = quot.unindex(i);
            i64 s = c.c1 % d;
            auto data = detail::rep_phase_data_int(xi, c, p);
            for (i64 h = 0; h < d; ++h)
                pix(h, (h + s) % d) = roots.value(detail::rep_phase_at(data, h, p));
        }
        Eigen::MatrixXcd sig = pix.adjoint() * Tpi;
        if (first) { out.sigma = sig; first = false; }
        else out.invariance_error = std::max(out.invariance_error,
                                             (sig - out.sigma).cwiseAbs().maxCoeff());
    }
    return out;
}

} // namespace engel
