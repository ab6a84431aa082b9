#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "engel/gaussian.hpp"
#include "engel/group.hpp"

namespace engel {

// ---------------------------------------------------------------------------
// The unitary dual. A point is a quadruple of canonical classes; membership
// follows the level-by-level census:
//   abelian:     xi3 = xi4 = 0, xi1/xi2 arbitrary classes
//   heisenberg:  xi4 = 0, xi3 != 0, xi1/xi2 digit-sections below m3
//   big_xi3:     0 < m4 < m3, xi1/xi2 digit-sections below m3
//   big_xi4:     xi3 = 0, xi4 != 0, xi2 arbitrary, xi1 digit-section below m4
// A "digit-section below m" representative has canonical value < p^{-m}.
// dim = p^{max(m3,m4)} and sum dim^2 over level <= n is p^{4n}.
// ---------------------------------------------------------------------------
enum class CaseTag { abelian, heisenberg, big_xi3, big_xi4 };

inline const char* case_name(CaseTag t) {
    switch (t) {
        case CaseTag::abelian: return "abelian";
        case CaseTag::heisenberg: return "heisenberg";
        case CaseTag::big_xi3: return "big_xi3";
        default: return "big_xi4";
    }
}

struct DualPoint {
    PhaseClass xi1, xi2, xi3, xi4;
    int level = 0;
    i64 dim = 1;
    CaseTag tag = CaseTag::abelian;

    int m3() const { return xi3.expo; }
    int m4() const { return xi4.expo; }
    int big_m() const { return std::max(xi3.expo, xi4.expo); }
    bool operator==(const DualPoint& o) const {
        return xi1 == o.xi1 && xi2 == o.xi2 && xi3 == o.xi3 && xi4 == o.xi4;
    }
};

/// index of a matrix-coefficient row/column: digit representative in [0, dim)
struct HIndex {
    i64 value = 0;
};

namespace detail {

/// all canonical classes of level <= n, ordered by (expo, numer), trivial first
inline std::vector<PhaseClass> classes_up_to(i64 p, int n) {
    std::vector<PhaseClass> out{PhaseClass{}};
    for (int m = 1; m <= n; ++m) {
        i64 pm = pow_i64(p, m);
        for (i64 c = 1; c < pm; ++c)
            if (c % p != 0) out.push_back({c, m});
    }
    return out;
}

/// digit-section below mlow: canonical value < p^{-mlow}, level <= n
inline std::vector<PhaseClass> section_below(i64 p, int mlow, int n) {
    std::vector<PhaseClass> out{PhaseClass{}};
    for (int m = mlow + 1; m <= n; ++m) {
        i64 bound = pow_i64(p, m - mlow);
        for (i64 c = 1; c < bound; ++c)
            if (c % p != 0) out.push_back({c, m});
    }
    return out;
}

inline DualPoint make_dual_point(const PhaseClass& x1, const PhaseClass& x2,
                                 const PhaseClass& x3, const PhaseClass& x4, i64 p) {
    DualPoint d;
    d.xi1 = x1; d.xi2 = x2; d.xi3 = x3; d.xi4 = x4;
    d.level = std::max(std::max(x1.expo, x2.expo), std::max(x3.expo, x4.expo));
    d.dim = pow_i64(p, std::max(x3.expo, x4.expo));
    if (x4.trivial())
        d.tag = x3.trivial() ? CaseTag::abelian : CaseTag::heisenberg;
    else
        d.tag = x3.trivial() ? CaseTag::big_xi4 : CaseTag::big_xi3;
    return d;
}

} // namespace detail

/// every dual class of level <= n exactly once, in a fixed order
/// (xi4 outermost by (m4, numer), then xi3, xi2, xi1)
inline std::vector<DualPoint> enumerate_dual(i64 p, int n) {
    std::vector<DualPoint> out;
    auto all = detail::classes_up_to(p, n);
    for (const PhaseClass& xi4 : all) {
        int m4 = xi4.expo;
        if (m4 == 0) {
            for (const PhaseClass& xi3 : all) {
                int m3 = xi3.expo;
                if (m3 == 0) {
                    for (const PhaseClass& xi2 : all)
                        for (const PhaseClass& xi1 : all)
                            out.push_back(detail::make_dual_point(xi1, xi2, xi3, xi4, p));
                } else {
                    auto sec = detail::section_below(p, m3, n);
                    for (const PhaseClass& xi2 : sec)
                        for (const PhaseClass& xi1 : sec)
                            out.push_back(detail::make_dual_point(xi1, xi2, xi3, xi4, p));
                }
            }
        } else {
            // xi3 trivial first, then m3 > m4
            auto sec4 = detail::section_below(p, m4, n);
            for (const PhaseClass& xi2 : all)
                for (const PhaseClass& xi1 : sec4)
                    out.push_back(detail::make_dual_point(xi1, xi2, PhaseClass{}, xi4, p));
            for (const PhaseClass& xi3 : all) {
                if (xi3.expo <= m4) continue;
                auto sec3 = detail::section_below(p, xi3.expo, n);
                for (const PhaseClass& xi2 : sec3)
                    for (const PhaseClass& xi1 : sec3)
                        out.push_back(detail::make_dual_point(xi1, xi2, xi3, xi4, p));
            }
        }
    }
    return out;
}

struct DualCensus {
    i64 n_abelian = 0, n_heisenberg = 0, n_big_xi3 = 0, n_big_xi4 = 0;
    unsigned long long sum_dim_sq = 0;
    unsigned long long expected = 0;   // p^{4n}
    bool pass = false;
};

inline DualCensus census(i64 p, int n) {
    DualCensus c;
    for (const DualPoint& d : enumerate_dual(p, n)) {
        switch (d.tag) {
            case CaseTag::abelian: ++c.n_abelian; break;
            case CaseTag::heisenberg: ++c.n_heisenberg; break;
            case CaseTag::big_xi3: ++c.n_big_xi3; break;
            case CaseTag::big_xi4: ++c.n_big_xi4; break;
        }
        c.sum_dim_sq += static_cast<unsigned long long>(d.dim) * d.dim;
    }
    c.expected = 1;
    for (int k = 0; k < 4 * n; ++k) c.expected *= static_cast<unsigned long long>(p);
    c.pass = (c.sum_dim_sq == c.expected);
    return c;
}

// ---------------------------------------------------------------------------
// Representation matrices. In the orthonormal basis of coset indicators the
// operator matrix of pi_xi(x) is a generalized permutation:
//   entry (h, h') = phase(h) * [h' = h + x1 mod p^M],
//   phase(h) = e^{2 pi i {xi.x + (xi3 x2 + xi4 x3) h + xi4 x2 h^2/2}_p}.
// The phase sits at the row index; this is the unique orientation satisfying
// pi(x*y) = pi(x) pi(y). The printed transposed form is an antihomomorphism.
// ---------------------------------------------------------------------------
struct RepMatrix {
    DualPoint xi;
    EngelPoint point;
    i64 dim = 1;
    i64 shift = 0;                    // x1 residue mod p^M; column = row + shift
    std::vector<cplx> phases;         // one unit-modulus phase per row

    cplx entry(i64 h, i64 hp) const {
        return (hp == (h + shift) % dim) ? phases[h] : cplx{0.0, 0.0};
    }
    Eigen::MatrixXcd dense() const {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
        for (i64 h = 0; h < dim; ++h) m(h, (h + shift) % dim) = phases[h];
        return m;
    }
};

namespace detail {

/// phase-argument classes of the rep at x: base + b1*h + a1*h^2
struct RepPhaseData {
    PhaseClass base, b1, a1;
};

inline RepPhaseData rep_phase_data(const DualPoint& xi, const EngelPoint& x, i64 p) {
    RepPhaseData d;
    PhaseClass t = phase_scale_scalar(xi.xi1, x.x1, p);
    t = phase_add(t, phase_scale_scalar(xi.xi2, x.x2, p), p);
    t = phase_add(t, phase_scale_scalar(xi.xi3, x.x3, p), p);
    d.base = phase_add(t, phase_scale_scalar(xi.xi4, x.x4, p), p);
    d.b1 = phase_add(phase_scale_scalar(xi.xi3, x.x2, p),
                     phase_scale_scalar(xi.xi4, x.x3, p), p);
    d.a1 = phase_scale_rat(phase_scale_scalar(xi.xi4, x.x2, p), 1, 2, p);
    return d;
}

inline PhaseClass rep_phase_at(const RepPhaseData& d, i64 h, i64 p) {
    PhaseClass a = phase_add(d.base, phase_scale(d.b1, h, p), p);
    return phase_add(a, phase_scale(d.a1, h * h, p), p);
}

/// integer-coordinate fast path (coordinates are quotient residues)
inline RepPhaseData rep_phase_data_int(const DualPoint& xi, const QuotientIndex& c, i64 p) {
    RepPhaseData d;
    PhaseClass t = phase_scale(xi.xi1, c.c1, p);
    t = phase_add(t, phase_scale(xi.xi2, c.c2, p), p);
    t = phase_add(t, phase_scale(xi.xi3, c.c3, p), p);
    d.base = phase_add(t, phase_scale(xi.xi4, c.c4, p), p);
    d.b1 = phase_add(phase_scale(xi.xi3, c.c2, p), phase_scale(xi.xi4, c.c3, p), p);
    d.a1 = phase_scale_rat(phase_scale(xi.xi4, c.c2, p), 1, 2, p);
    return d;
}

} // namespace detail

/// lookup table of p^m-th roots of unity for fast phase evaluation
class RootTable {
public:
    RootTable(i64 p, int max_expo) : p_(p) {
        tables_.resize(max_expo + 1);
        for (int m = 0; m <= max_expo; ++m) {
            i64 pm = pow_i64(p, m);
            tables_[m].resize(pm);
            for (i64 c = 0; c < pm; ++c)
                tables_[m][c] = std::polar(1.0, 2.0 * std::numbers::pi *
                                           static_cast<double>(c) / static_cast<double>(pm));
        }
    }
    cplx value(const PhaseClass& c) const {
        if (c.trivial()) return {1.0, 0.0};
        if (c.expo >= static_cast<int>(tables_.size()))
            return phase_value(c, p_);
        return tables_[c.expo][c.numer];
    }

private:
    i64 p_;
    std::vector<std::vector<cplx>> tables_;
};

inline RepMatrix rep_matrix(const DualPoint& xi, const EngelPoint& x, i64 p) {
    RepMatrix m;
    m.xi = xi;
    m.point = x;
    m.dim = xi.dim;
    int M = xi.big_m();
    m.shift = residue_mod(x.x1, p, M);
    auto data = detail::rep_phase_data(xi, x, p);
    m.phases.resize(m.dim);
    for (i64 h = 0; h < m.dim; ++h)
        m.phases[h] = phase_value(detail::rep_phase_at(data, h, p), p);
    return m;
}

/// trace of rep_matrix, evaluated without building it
inline cplx character_from_trace(const DualPoint& xi, const EngelPoint& x, i64 p) {
    int M = xi.big_m();
    if (residue_mod(x.x1, p, M) != 0) return {0.0, 0.0};
    auto data = detail::rep_phase_data(xi, x, p);
    cplx s{0.0, 0.0};
    for (i64 h = 0; h < xi.dim; ++h)
        s += phase_value(detail::rep_phase_at(data, h, p), p);
    return s;
}

/// closed form: dim * e^{2 pi i {xi.x}_p} 1[x1 in p^M Z_p] * char_integral
inline cplx character(const DualPoint& xi, const EngelPoint& x, i64 p) {
    int M = xi.big_m();
    if (residue_mod(x.x1, p, M) != 0) return {0.0, 0.0};
    PhaseClass t = phase_scale_scalar(xi.xi1, x.x1, p);
    t = phase_add(t, phase_scale_scalar(xi.xi2, x.x2, p), p);
    t = phase_add(t, phase_scale_scalar(xi.xi3, x.x3, p), p);
    t = phase_add(t, phase_scale_scalar(xi.xi4, x.x4, p), p);
    cplx ci = char_integral(xi.xi3, xi.xi4, x.x2, x.x3, p);
    return static_cast<double>(xi.dim) * phase_value(t, p) * ci;
}

// ---------------------------------------------------------------------------
// Characters via the closed form, class-only: for u in Z_p the Gaussian
// integrand depends on a, b through their classes mod Z_p only.
// ---------------------------------------------------------------------------

/// int_{Z_p} e^{2 pi i {a u^2 + b u}_p} du from the classes of a and b
inline cplx gaussian_integral_classes(const PhaseClass& a, const PhaseClass& b,
                                      i64 p, const RootTable& roots) {
    if (a.trivial()) return b.trivial() ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
    int ma = a.expo;
    if (b.expo > ma) return {0.0, 0.0};   // |b/a| > 1
    // lambda_p from valuation parity and the leading digit of a
    cplx lam{1.0, 0.0};
    if (ma % 2 == 1) {
        int ls = legendre_symbol(a.numer % p, p);
        lam = (p % 4 == 1) ? cplx{static_cast<double>(ls), 0.0}
                           : cplx{0.0, static_cast<double>(ls)};
    }
    double mod = std::pow(static_cast<double>(p), -static_cast<double>(ma) / 2.0);
    // {-b^2/4a}: exponent 2 mb - ma when positive
    cplx ph{1.0, 0.0};
    if (!b.trivial()) {
        int mq = 2 * b.expo - ma;
        if (mq > 0) {
            i64 pq = pow_i64(p, mq);
            i64 c = mulmod(mod_i64(b.numer, pq), mod_i64(b.numer, pq), pq);
            i64 denom = mulmod(4 % pq, mod_i64(a.numer, pq), pq);
            c = mulmod(c, inverse_mod(denom, pq), pq);
            ph = roots.value(canonical_class(-c, mq, p));
        }
    }
    return lam * mod * ph;
}

/// character at a quotient point, integer-coordinate fast path
inline cplx character_at(const DualPoint& xi, const QuotientIndex& c,
                         i64 p, const RootTable& roots) {
    i64 pM = xi.dim;
    if (c.c1 % pM != 0) return {0.0, 0.0};
    PhaseClass t = phase_scale(xi.xi1, c.c1, p);
    t = phase_add(t, phase_scale(xi.xi2, c.c2, p), p);
    t = phase_add(t, phase_scale(xi.xi3, c.c3, p), p);
    t = phase_add(t, phase_scale(xi.xi4, c.c4, p), p);
    PhaseClass a = phase_scale_rat(phase_scale(xi.xi4, c.c2, p), 1, 2, p);
    PhaseClass b = phase_add(phase_scale(xi.xi3, c.c2, p), phase_scale(xi.xi4, c.c3, p), p);
    return static_cast<double>(xi.dim) * roots.value(t) *
           gaussian_integral_classes(a, b, p, roots);
}

// ---------------------------------------------------------------------------
// Group Fourier transform on level-n functions.
// ---------------------------------------------------------------------------

/// hat f(xi) = haar average of f(x) pi_xi(x)^*
inline Eigen::MatrixXcd fourier_transform(const QuotientFunction& f, const DualPoint& xi,
                                          const QuotientTable& quot, const RootTable& roots) {
    if (xi.level > quot.level())
        throw std::invalid_argument("fourier_transform: xi level exceeds function level");
    i64 p = quot.p();
    i64 d = xi.dim;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
    i64 N = quot.size();
    for (i64 i = 0; i < N; ++i) {
        QuotientIndex c = quot.unindex(i);
        i64 s = c.c1 % d;
        auto data = detail::rep_phase_data_int(xi, c, p);
        // (pi^*)_{h',h} = conj(pi_{h,h'}) contributes at column h, row h+s
        for (i64 h = 0; h < d; ++h) {
            cplx ph = roots.value(detail::rep_phase_at(data, h, p));
            out((h + s) % d, h) += f.values[i] * std::conj(ph);
        }
    }
    return out / static_cast<double>(N);
}

inline Eigen::MatrixXcd fourier_transform(const QuotientFunction& f, const DualPoint& xi,
                                          const QuotientTable& quot) {
    RootTable roots(quot.p(), quot.level() + xi.big_m());
    return fourier_transform(f, xi, quot, roots);
}

/// f(x) = sum_xi dim * Tr(pi_xi(x) hat f(xi)) over the supplied dual list
inline QuotientFunction fourier_inverse(const std::vector<DualPoint>& dual,
                                        const std::vector<Eigen::MatrixXcd>& coeffs,
                                        const QuotientTable& quot, const RootTable& roots) {
    i64 p = quot.p();
    i64 N = quot.size();
    QuotientFunction f;
    f.level = quot.level();
    f.values.assign(N, cplx{0.0, 0.0});
    for (i64 i = 0; i < N; ++i) {
        QuotientIndex c = quot.unindex(i);
        cplx acc{0.0, 0.0};
        for (std::size_t k = 0; k < dual.size(); ++k) {
            const DualPoint& xi = dual[k];
            const Eigen::MatrixXcd& F = coeffs[k];
            i64 d = xi.dim;
            i64 s = c.c1 % d;
            auto data = detail::rep_phase_data_int(xi, c, p);
            cplx tr{0.0, 0.0};
            for (i64 h = 0; h < d; ++h) {
                cplx ph = roots.value(detail::rep_phase_at(data, h, p));
                tr += ph * F((h + s) % d, h);
            }
            acc += static_cast<double>(d) * tr;
        }
        f.values[i] = acc;
    }
    return f;
}

inline QuotientFunction fourier_inverse(const std::vector<DualPoint>& dual,
                                        const std::vector<Eigen::MatrixXcd>& coeffs,
                                        const QuotientTable& quot) {
    RootTable roots(quot.p(), quot.level() + quot.level());
    return fourier_inverse(dual, coeffs, quot, roots);
}

} // namespace engel
