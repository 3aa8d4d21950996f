#pragma once

/* Test-side reference implementations, deliberately written from the raw
 * definitions with arithmetic independent of the library internals: direct
 * (x, y) enumeration of the long Weierstrass equation, trial-division
 * primality, and repeated-addition scalar multiplication. */

#include <isoscan/curves.hpp>

#include <vector>

namespace oracle {

using isoscan::CurveQ;
using isoscan::Int;
using isoscan::i64;
using isoscan::u64;

inline bool is_prime_ref(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<u64> primes_upto_ref(u64 n) {
    std::vector<bool> comp(n + 1, false);
    std::vector<u64> out;
    for (u64 i = 2; i <= n; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (u64 j = i * i; j <= n; j += i) comp[j] = true;
    }
    return out;
}

// coefficient of the long model reduced into [0, p)
inline u64 red(const Int& v, u64 p) {
    Int r = v % Int(p);
    if (r < 0) r += Int(p);
    return r.convert_to<u64>();
}

/* #E(F_p) by scanning every (x, y) against
 * y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6, plus infinity. */
inline u64 brute_count(const CurveQ& c, u64 p) {
    const u64 a1 = red(c.a1, p), a2 = red(c.a2, p), a3 = red(c.a3, p);
    const u64 a4 = red(c.a4, p), a6 = red(c.a6, p);
    u64 n = 1;
    for (u64 x = 0; x < p; ++x) {
        using u128 = unsigned __int128;
        u64 x2 = static_cast<u64>(u128(x) * x % p);
        u64 rhs = static_cast<u64>((u128(x2) * x + u128(a2) * x2 + u128(a4) * x + a6) % p);
        for (u64 y = 0; y < p; ++y) {
            u64 lhs = static_cast<u64>((u128(y) * y + u128(a1) * x % p * y + u128(a3) * y) % p);
            if (lhs == rhs) ++n;
        }
    }
    return n;
}

inline i64 brute_ap(const CurveQ& c, u64 p) {
    return static_cast<i64>(p) + 1 - static_cast<i64>(brute_count(c, p));
}

// k-fold repeated addition, no doubling tricks
template <class F>
isoscan::WPoint<F> slow_mul(const isoscan::WModel<F>& E, u64 k, const isoscan::WPoint<F>& P) {
    isoscan::WPoint<F> acc = isoscan::WPoint<F>::infinity();
    for (u64 i = 0; i < k; ++i) acc = isoscan::wp_add(E, acc, P);
    return acc;
}

// every affine point of the reduction (brute enumeration)
inline std::vector<isoscan::PointFp> all_points(const isoscan::ReducedCurve& rc) {
    std::vector<isoscan::PointFp> pts;
    const u64 p = rc.p;
    for (u64 x = 0; x < p; ++x)
        for (u64 y = 0; y < p; ++y) {
            isoscan::PointFp P = isoscan::PointFp::affine(isoscan::Fp(x, p), isoscan::Fp(y, p));
            if (isoscan::wp_on_curve(rc.model, P)) pts.push_back(P);
        }
    return pts;
}

} // namespace oracle
