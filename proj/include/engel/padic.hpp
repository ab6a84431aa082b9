#pragma once

#include <complex>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "engel/int_util.hpp"

namespace engel {

using bigint = boost::multiprecision::cpp_int;
using rational = boost::multiprecision::cpp_rational;
using cplx = std::complex<double>;

/// Run configuration shared by every pipeline.
struct Config {
    i64 p = 5;
    int n = 1;            // level
    double alpha = 1.0;
    double tol_float = 1e-9;
    unsigned long long rng_seed = 0;

    void validate() const {
        if (p < 5 || !is_prime(p))
            throw std::invalid_argument("p must be a prime >= 5");
        if (!(alpha > 0))
            throw std::invalid_argument("alpha must be positive");
        if (n < 0)
            throw std::invalid_argument("level must be non-negative");
        if (tol_float < 0)
            throw std::invalid_argument("tol must be non-negative");
    }
};

// ---------------------------------------------------------------------------
// PAdicScalar: exact rational carrier for group coordinates and frequencies.
// cpp_rational keeps num/den reduced with den > 0, which is the invariant.
// ---------------------------------------------------------------------------
using PAdicScalar = rational;

inline PAdicScalar make_scalar(i64 num, i64 den = 1) {
    if (den == 0) throw std::invalid_argument("denominator must be nonzero");
    return rational(num, den);
}

inline constexpr i64 kValuationInfinity = std::numeric_limits<i64>::max();

inline int vp_big(const bigint& k, i64 p) {
    assert(k != 0);
    bigint a = abs(k);
    int v = 0;
    while (a % p == 0) { a /= p; ++v; }
    return v;
}

/// p-adic valuation; returns kValuationInfinity for 0.
inline i64 valuation(const PAdicScalar& x, i64 p) {
    if (x == 0) return kValuationInfinity;
    return vp_big(numerator(x), p) - vp_big(denominator(x), p);
}

/// |x|_p = p^{-valuation}; |0|_p = 0.
inline double norm_p(const PAdicScalar& x, i64 p) {
    i64 v = valuation(x, p);
    if (v == kValuationInfinity) return 0.0;
    return std::pow(static_cast<double>(p), -static_cast<double>(v));
}

inline bigint inverse_mod_big(bigint a, const bigint& m) {
    a %= m;
    if (a < 0) a += m;
    bigint r0 = a, r1 = m, s0 = 1, s1 = 0;
    while (r1 != 0) {
        bigint q = r0 / r1;
        bigint r2 = r0 - q * r1; r0 = r1; r1 = r2;
        bigint s2 = s0 - q * s1; s0 = s1; s1 = s2;
    }
    if (r0 != 1) throw std::domain_error("inverse_mod_big: not invertible");
    s0 %= m;
    if (s0 < 0) s0 += m;
    return s0;
}

// ---------------------------------------------------------------------------
// PhaseClass: canonical element of Q_p/Z_p, stored as numer/p^expo with
// numer in [0, p^expo) and p coprime to numer unless the class is trivial
// (numer = 0, expo = 0). The class norm is p^expo.
// ---------------------------------------------------------------------------
struct PhaseClass {
    i64 numer = 0;
    int expo = 0;

    bool trivial() const { return expo == 0; }
    bool operator==(const PhaseClass&) const = default;
};

inline PhaseClass canonical_class(i64 c, int m, i64 p) {
    assert(m >= 0 && m <= kMaxPow);
    if (m == 0) return {};
    i64 pm = pow_i64(p, m);
    c = mod_i64(c, pm);
    if (c == 0) return {};
    while (c % p == 0) { c /= p; pm /= p; --m; }
    return {c, m};
}

inline PhaseClass phase_add(const PhaseClass& a, const PhaseClass& b, i64 p) {
    int m = std::max(a.expo, b.expo);
    if (m == 0) return {};
    i64 pm = pow_i64(p, m);
    i128 c = static_cast<i128>(a.numer) * pow_i64(p, m - a.expo)
           + static_cast<i128>(b.numer) * pow_i64(p, m - b.expo);
    return canonical_class(static_cast<i64>(c % pm), m, p);
}

inline PhaseClass phase_neg(const PhaseClass& a, i64 p) {
    if (a.trivial()) return {};
    return {pow_i64(p, a.expo) - a.numer, a.expo};
}

inline PhaseClass phase_sub(const PhaseClass& a, const PhaseClass& b, i64 p) {
    return phase_add(a, phase_neg(b, p), p);
}

/// class * integer
inline PhaseClass phase_scale(const PhaseClass& a, i64 k, i64 p) {
    if (a.trivial()) return {};
    i64 pm = pow_i64(p, a.expo);
    i64 c = mulmod(a.numer, mod_i64(k, pm), pm);
    return canonical_class(c, a.expo, p);
}

/// class * (u/v) with v a p-adic unit; u may carry powers of p.
inline PhaseClass phase_scale_rat(const PhaseClass& a, i64 u, i64 v, i64 p) {
    if (a.trivial()) return {};
    i64 pm = pow_i64(p, a.expo);
    if (mod_i64(v, p) == 0) throw std::domain_error("phase_scale_rat: v not a unit");
    i64 c = mulmod(a.numer, mod_i64(u, pm), pm);
    c = mulmod(c, inverse_mod(v, pm), pm);
    return canonical_class(c, a.expo, p);
}

/// class * rational scalar (den's unit part inverted mod p^m; p dividing den raises the exponent)
inline PhaseClass phase_scale_scalar(const PhaseClass& a, const PAdicScalar& s, i64 p) {
    if (a.trivial() || s == 0) return {};
    bigint num = numerator(s), den = denominator(s);
    int vden = vp_big(den, p);
    int m = a.expo + vden;
    if (m > kMaxPow) throw std::overflow_error("phase class exponent too large");
    bigint pm = pow_i64(p, m);
    bigint uden = den / pow_i64(p, vden);
    bigint c = static_cast<bigint>(a.numer) * pow_i64(p, vden) % pm;
    c = c * (num % pm) % pm;
    c = c * inverse_mod_big(uden, pm) % pm;
    if (c < 0) c += pm;
    return canonical_class(static_cast<i64>(c), m, p);
}

/// canonical class of x in Q_p/Z_p (the fractional part {x}_p)
inline PhaseClass fractional_part(const PAdicScalar& x, i64 p) {
    if (x == 0) return {};
    const bigint& den = denominator(x);
    bigint a = abs(den);
    int m = 0;
    while (a % p == 0) { a /= p; ++m; }
    if (m == 0) return {};   // x in Z_p
    if (m > kMaxPow) throw std::overflow_error("fractional_part: exponent too large");
    bigint pm = pow_i64(p, m);
    bigint unit = den / pow_i64(p, m);
    bigint c = numerator(x) % pm;
    c = c * inverse_mod_big(unit, pm) % pm;
    if (c < 0) c += pm;
    // num coprime to den and p | den  =>  p does not divide c
    return {static_cast<i64>(c), m};
}

/// rational value of the canonical representative, in [0,1)
inline PAdicScalar class_value(const PhaseClass& c, i64 p) {
    if (c.trivial()) return 0;
    return rational(c.numer, pow_i64(p, c.expo));
}

/// e^{2 pi i numer / p^expo}
inline cplx phase_value(const PhaseClass& c, i64 p) {
    if (c.trivial()) return {1.0, 0.0};
    double theta = 2.0 * std::numbers::pi * static_cast<double>(c.numer)
                 / static_cast<double>(pow_i64(p, c.expo));
    return std::polar(1.0, theta);
}

inline std::string class_to_string(const PhaseClass& c, i64 p) {
    if (c.trivial()) return "0";
    return std::to_string(c.numer) + "/" + std::to_string(pow_i64(p, c.expo));
}

// ---------------------------------------------------------------------------
// Legendre symbol and the Gaussian fourth-root-of-unity factor.
// ---------------------------------------------------------------------------
inline int legendre_symbol(i64 a, i64 p) {
    a = mod_i64(a, p);
    if (a == 0) return 0;
    i64 r = powmod(a, (p - 1) / 2, p);
    return r == 1 ? 1 : -1;
}

/// leading digit of x = p^v * u (the residue of the unit part mod p)
inline i64 leading_digit(const PAdicScalar& x, i64 p) {
    assert(x != 0);
    bigint num = numerator(x), den = denominator(x);
    num /= pow_i64(p, vp_big(num, p));
    den /= pow_i64(p, vp_big(den, p));
    bigint r = num % p;
    if (r < 0) r += p;
    i64 n0 = static_cast<i64>(r);
    i64 d0 = static_cast<i64>(den % p);
    return mulmod(n0, inverse_mod(d0, p), p);
}

/// lambda_p(a): 1 for even valuation, (a0/p)-twist (times i when p = 3 mod 4) for odd.
inline cplx lambda_p(const PAdicScalar& a, i64 p) {
    if (a == 0) throw std::invalid_argument("lambda_p: a must be nonzero");
    i64 v = valuation(a, p);
    if (((v % 2) + 2) % 2 == 0) return {1.0, 0.0};
    int ls = legendre_symbol(leading_digit(a, p), p);
    if (p % 4 == 1) return {static_cast<double>(ls), 0.0};
    return {0.0, static_cast<double>(ls)};
}

// JSON-ish string forms used by the serializers
inline std::string scalar_num_string(const PAdicScalar& x) { return numerator(x).str(); }
inline std::string scalar_den_string(const PAdicScalar& x) { return denominator(x).str(); }

} // namespace engel
