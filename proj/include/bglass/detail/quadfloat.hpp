#pragma once

// Minimal __float128 helpers (arithmetic only, no libquadmath link). Used
// where double/long double cancellation is fatal: the midrange K0/K1 branch
// and nowhere else.

namespace bglass::detail {

using quad = __float128;

inline quad quad_abs(quad x) { return x < 0 ? -x : x; }

inline quad quad_ln2() {
    // ln 2 = 2 atanh(1/3); 1/3 rounds the same way every call, and ~40 terms
    // reach full quad precision.
    static const quad value = [] {
        const quad t = quad(1) / quad(3);
        const quad t2 = t * t;
        quad term = t;
        quad sum = 0;
        for (int k = 0; k < 45; ++k) {
            sum += term / quad(2 * k + 1);
            term *= t2;
        }
        return 2 * sum;
    }();
    return value;
}

inline quad quad_pow2(long k) {
    quad result = 1;
    quad base = k >= 0 ? quad(2) : quad(0.5);
    unsigned long n = k >= 0 ? static_cast<unsigned long>(k) : static_cast<unsigned long>(-k);
    while (n) {
        if (n & 1UL) result *= base;
        base *= base;
        n >>= 1UL;
    }
    return result;
}

inline quad quad_exp(quad z) {
    const quad l2 = quad_ln2();
    const long k = static_cast<long>(static_cast<double>(z / l2) + (z >= 0 ? 0.5 : -0.5));
    const quad r = z - quad(k) * l2;
    quad term = 1;
    quad sum = 1;
    for (int i = 1; i < 40; ++i) {
        term *= r / quad(i);
        sum += term;
        if (quad_abs(term) < quad(1e-38) * quad_abs(sum)) break;
    }
    return sum * quad_pow2(k);
}

inline quad quad_cosh(quad t) {
    const quad e = quad_exp(t);
    return (e + 1 / e) / 2;
}

} // namespace bglass::detail
