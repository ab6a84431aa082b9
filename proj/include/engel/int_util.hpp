#pragma once

#include <cassert>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace engel {

using i64 = long long;
using i128 = __int128;

// Largest exponent we ever form p^m for in fixed-width arithmetic.
// Level <= 3 data plus products of classes stays far below this.
inline constexpr int kMaxPow = 15;

inline i64 pow_i64(i64 base, int e) {
    assert(e >= 0 && e <= 63);
    i64 r = 1;
    while (e-- > 0) {
        assert(r <= std::numeric_limits<i64>::max() / base);
        r *= base;
    }
    return r;
}

inline i64 mod_i64(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

inline i64 mulmod(i64 a, i64 b, i64 m) {
    return static_cast<i64>(static_cast<i128>(a) * b % m);
}

inline i64 powmod(i64 a, i64 e, i64 m) {
    a = mod_i64(a, m);
    i64 r = 1 % m;
    while (e > 0) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

// extended gcd: returns g, sets x,y with a*x + b*y = g
inline i64 egcd(i64 a, i64 b, i64& x, i64& y) {
    if (b == 0) { x = 1; y = 0; return a; }
    i64 x1, y1;
    i64 g = egcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

inline i64 inverse_mod(i64 a, i64 m) {
    i64 x, y;
    i64 g = egcd(mod_i64(a, m), m, x, y);
    if (g != 1) throw std::domain_error("inverse_mod: not invertible");
    return mod_i64(x, m);
}

// multiplicity of p in k; k must be nonzero
inline int vp_int(i64 k, i64 p) {
    assert(k != 0);
    if (k < 0) k = -k;
    int v = 0;
    while (k % p == 0) { k /= p; ++v; }
    return v;
}

inline bool is_prime(i64 n) {
    if (n < 2) return false;
    for (i64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

} // namespace engel
