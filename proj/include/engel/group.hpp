#pragma once

#include <array>
#include <complex>
#include <vector>

#include "engel/padic.hpp"

namespace engel {

// ---------------------------------------------------------------------------
// Engel group law on Z_p^4 coordinates:
//   x * y = (x1+y1, x2+y2, x3+y3+x1 y2, x4+y4+x1 y3 + x1^2 y2 / 2)
// 1/2 is a p-adic unit for p >= 5, so the law is Z_p-valued.
// ---------------------------------------------------------------------------
struct EngelPoint {
    PAdicScalar x1, x2, x3, x4;

    bool operator==(const EngelPoint&) const = default;
};

inline EngelPoint engel_identity() { return {0, 0, 0, 0}; }

inline bool in_integer_ball(const EngelPoint& x, i64 p) {
    return valuation(x.x1, p) >= 0 && valuation(x.x2, p) >= 0 &&
           valuation(x.x3, p) >= 0 && valuation(x.x4, p) >= 0;
}

inline EngelPoint star(const EngelPoint& x, const EngelPoint& y) {
    return {x.x1 + y.x1,
            x.x2 + y.x2,
            x.x3 + y.x3 + x.x1 * y.x2,
            x.x4 + y.x4 + x.x1 * y.x3 + x.x1 * x.x1 * y.x2 / 2};
}

inline EngelPoint inverse(const EngelPoint& x) {
    return {-x.x1,
            -x.x2,
            -x.x3 + x.x1 * x.x2,
            -x.x4 + x.x1 * x.x3 - x.x1 * x.x1 * x.x2 / 2};
}

/// one-parameter subgroup through the j-th generator: t e_j
inline EngelPoint one_param(int j, const PAdicScalar& t) {
    EngelPoint e = engel_identity();
    switch (j) {
        case 1: e.x1 = t; break;
        case 2: e.x2 = t; break;
        case 3: e.x3 = t; break;
        case 4: e.x4 = t; break;
        default: throw std::invalid_argument("one_param: direction must be 1..4");
    }
    return e;
}

// ---------------------------------------------------------------------------
// Finite quotient G/G_n: integer coordinates mod p^n with the star law
// computed mod p^n (inv2 = (p^n+1)/2). Row-major index over (c1,c2,c3,c4).
// ---------------------------------------------------------------------------
struct QuotientIndex {
    i64 c1 = 0, c2 = 0, c3 = 0, c4 = 0;
    bool operator==(const QuotientIndex&) const = default;
};

class QuotientTable {
public:
    QuotientTable(i64 p, int n) : p_(p), n_(n), q_(pow_i64(p, n)) {
        inv2_ = (n == 0) ? 0 : inverse_mod(2, q_);
        size_ = 1;
        for (int k = 0; k < 4; ++k) size_ *= q_;
    }

    i64 p() const { return p_; }
    int level() const { return n_; }
    i64 modulus() const { return q_; }
    i64 size() const { return size_; }

    i64 index(const QuotientIndex& c) const {
        return ((c.c1 * q_ + c.c2) * q_ + c.c3) * q_ + c.c4;
    }
    QuotientIndex unindex(i64 i) const {
        QuotientIndex c;
        c.c4 = i % q_; i /= q_;
        c.c3 = i % q_; i /= q_;
        c.c2 = i % q_; i /= q_;
        c.c1 = i;
        return c;
    }

    QuotientIndex star_mod(const QuotientIndex& x, const QuotientIndex& y) const {
        if (n_ == 0) return {};
        i64 t3 = mod_i64(x.c3 + y.c3 + mulmod(x.c1, y.c2, q_), q_);
        i64 sq = mulmod(x.c1, x.c1, q_);
        i64 t4 = mod_i64(x.c4 + y.c4 + mulmod(x.c1, y.c3, q_) + mulmod(mulmod(inv2_, sq, q_), y.c2, q_), q_);
        return {mod_i64(x.c1 + y.c1, q_), mod_i64(x.c2 + y.c2, q_), t3, t4};
    }

    QuotientIndex inverse_mod_pt(const QuotientIndex& x) const {
        if (n_ == 0) return {};
        i64 t3 = mod_i64(-x.c3 + mulmod(x.c1, x.c2, q_), q_);
        i64 sq = mulmod(x.c1, x.c1, q_);
        i64 t4 = mod_i64(-x.c4 + mulmod(x.c1, x.c3, q_) - mulmod(mulmod(inv2_, sq, q_), x.c2, q_), q_);
        return {mod_i64(-x.c1, q_), mod_i64(-x.c2, q_), t3, t4};
    }

private:
    i64 p_;
    int n_;
    i64 q_;
    i64 inv2_;
    i64 size_;
};

/// residue of a Z_p scalar mod p^n (denominator is a unit by |x|_p <= 1)
inline i64 residue_mod(const PAdicScalar& x, i64 p, int n) {
    if (n == 0) return 0;
    bigint pn = pow_i64(p, n);
    bigint num = numerator(x) % pn;
    bigint c = num * inverse_mod_big(denominator(x), pn) % pn;
    if (c < 0) c += pn;
    return static_cast<i64>(c);
}

inline QuotientIndex project(const EngelPoint& x, i64 p, int n) {
    return {residue_mod(x.x1, p, n), residue_mod(x.x2, p, n),
            residue_mod(x.x3, p, n), residue_mod(x.x4, p, n)};
}

inline EngelPoint lift(const QuotientIndex& c) {
    return {make_scalar(c.c1), make_scalar(c.c2), make_scalar(c.c3), make_scalar(c.c4)};
}

// ---------------------------------------------------------------------------
// Level-n functions are complex vectors indexed by the fixed quotient order.
// ---------------------------------------------------------------------------
struct QuotientFunction {
    std::vector<cplx> values;
    int level = 0;
};

/// normalized Haar integral of a level-n function: p^{-4n} * sum
inline cplx haar_average(const QuotientFunction& f, const QuotientTable& quot) {
    cplx s{0.0, 0.0};
    for (const cplx& v : f.values) s += v;
    return s / static_cast<double>(quot.size());
}

inline cplx haar_inner(const QuotientFunction& f, const QuotientFunction& g, const QuotientTable& quot) {
    cplx s{0.0, 0.0};
    for (i64 i = 0; i < quot.size(); ++i) s += f.values[i] * std::conj(g.values[i]);
    return s / static_cast<double>(quot.size());
}

} // namespace engel
