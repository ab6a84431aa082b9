#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "engel/padic.hpp"

namespace engel {

// ---------------------------------------------------------------------------
// Exact evaluation of int_{p^gamma Z_p} e^{2 pi i {a u^2 + b u}_p} du.
//
// Flat branch (|a|_p <= p^{2 gamma}):   p^{-gamma} 1[|b|_p <= p^{gamma}]
// Oscillatory (|a|_p >  p^{2 gamma}):   Lambda(a,b) 1[|b/a|_p <= p^{-gamma}]
// with Lambda(a,b) = lambda_p(a) |a|_p^{-1/2} e^{2 pi i {-b^2/4a}_p}.
// All indicator tests are exact valuation comparisons.
// ---------------------------------------------------------------------------
enum class GaussianBranch { flat, oscillatory, zero };

struct GaussianResult {
    cplx value{0.0, 0.0};
    GaussianBranch branch = GaussianBranch::flat;
};

inline const char* branch_name(GaussianBranch b) {
    switch (b) {
        case GaussianBranch::flat: return "flat";
        case GaussianBranch::oscillatory: return "oscillatory";
        default: return "zero";
    }
}

inline GaussianResult gaussian_integral(const PAdicScalar& a, const PAdicScalar& b,
                                        int gamma, i64 p) {
    i64 va = valuation(a, p);
    double pg = std::pow(static_cast<double>(p), -static_cast<double>(gamma));
    if (va == kValuationInfinity || va >= -2 * static_cast<i64>(gamma)) {
        i64 vb = valuation(b, p);
        if (vb == kValuationInfinity || vb >= -static_cast<i64>(gamma))
            return {cplx{pg, 0.0}, GaussianBranch::flat};
        return {cplx{0.0, 0.0}, GaussianBranch::zero};
    }
    // |a|_p > p^{2 gamma}
    if (b != 0) {
        i64 vb = valuation(b, p);
        if (vb - va < gamma) return {cplx{0.0, 0.0}, GaussianBranch::zero};
    }
    cplx lam = lambda_p(a, p);
    double mod = std::pow(static_cast<double>(p), static_cast<double>(va) / 2.0);
    cplx ph{1.0, 0.0};
    if (b != 0) ph = phase_value(fractional_part(-b * b / (4 * a), p), p);
    return {lam * mod * ph, GaussianBranch::oscillatory};
}

/// smallest D such that u -> {a u^2 + b u}_p is constant on cosets of p^D Z_p
/// inside p^gamma Z_p
inline int gaussian_constancy_depth(const PAdicScalar& a, const PAdicScalar& b,
                                    int gamma, i64 p) {
    i64 D = gamma;
    i64 va = valuation(a, p), vb = valuation(b, p);
    if (va != kValuationInfinity) {
        D = std::max<i64>(D, -va - gamma);
        D = std::max<i64>(D, (-va + 1) / 2);
    }
    if (vb != kValuationInfinity) D = std::max<i64>(D, -vb);
    return static_cast<int>(D);
}

/// Riemann-sum oracle: exact coset sampling at the given depth.
/// Rejects depths below the local-constancy index.
inline cplx gaussian_integral_bruteforce(const PAdicScalar& a, const PAdicScalar& b,
                                         int gamma, i64 p, int depth) {
    if (depth < gaussian_constancy_depth(a, b, gamma, p))
        throw std::invalid_argument("gaussian_integral_bruteforce: depth below local-constancy index");
    int shells = depth - gamma;
    if (shells > kMaxPow) throw std::overflow_error("gaussian_integral_bruteforce: depth too large");
    i64 terms = pow_i64(p, shells);
    PAdicScalar pg = (gamma >= 0) ? make_scalar(pow_i64(p, gamma))
                                  : make_scalar(1, pow_i64(p, -gamma));
    cplx sum{0.0, 0.0};
    for (i64 k = 0; k < terms; ++k) {
        PAdicScalar u = pg * k;
        sum += phase_value(fractional_part(a * u * u + b * u, p), p);
    }
    // coset measure p^{-depth}, total mass p^{-gamma}
    double meas = std::pow(static_cast<double>(p), -static_cast<double>(gamma)) /
                  static_cast<double>(terms);
    return sum * meas;
}

inline cplx gaussian_integral_bruteforce(const PAdicScalar& a, const PAdicScalar& b,
                                         int gamma, i64 p) {
    return gaussian_integral_bruteforce(a, b, gamma, p,
                                        gaussian_constancy_depth(a, b, gamma, p) + 1);
}

/// int_{Z_p} e^{2 pi i {(xi3 x2 + xi4 x3) u + xi4 x2 u^2/2}_p} du
inline cplx char_integral(const PhaseClass& xi3, const PhaseClass& xi4,
                          const PAdicScalar& x2, const PAdicScalar& x3, i64 p) {
    PAdicScalar a = class_value(xi4, p) * x2 / 2;
    PAdicScalar b = class_value(xi3, p) * x2 + class_value(xi4, p) * x3;
    return gaussian_integral(a, b, 0, p).value;
}

/// |char_integral|^2 as an exact rational (0, 1, or |a|_p^{-1})
inline PAdicScalar char_integral_abs2(const PhaseClass& xi3, const PhaseClass& xi4,
                                      i64 x2, i64 x3, i64 p) {
    PAdicScalar a = class_value(xi4, p) * x2 / 2;
    PAdicScalar b = class_value(xi3, p) * x2 + class_value(xi4, p) * x3;
    i64 va = valuation(a, p);
    if (va == kValuationInfinity || va >= 0) {
        i64 vb = valuation(b, p);
        return (vb == kValuationInfinity || vb >= 0) ? PAdicScalar(1) : PAdicScalar(0);
    }
    if (b != 0 && valuation(b, p) - va < 0) return 0;
    return PAdicScalar(1, pow_i64(p, -va));   // |a|^{-1} = p^{va}, va < 0
}

} // namespace engel
