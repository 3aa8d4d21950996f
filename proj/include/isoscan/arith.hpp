#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace isoscan {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

// Moduli are capped below 2^62 so that a + b and a * b of reduced values
// always fit in u64 / u128 intermediates.
inline constexpr u64 kMaxModulus = u64(1) << 62;

inline void require_modulus(u64 m) {
    if (m == 0 || m >= kMaxModulus)
        throw std::domain_error("modulus must be in [1, 2^62)");
}

// Non-negative representative of a mod m.
inline u64 mod_reduce(i64 a, u64 m) {
    i64 r = a % static_cast<i64>(m);
    if (r < 0) r += static_cast<i64>(m);
    return static_cast<u64>(r);
}

inline u64 add_mod(u64 a, u64 b, u64 m) {
    u64 s = a + b;
    return s >= m ? s - m : s;
}

inline u64 sub_mod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + (m - b); }

inline u64 mul_mod(u64 a, u64 b, u64 m) {
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

inline u64 pow_mod(i64 base, u64 exp, u64 m) {
    require_modulus(m);
    if (m == 1) return 0;
    u64 r = 1, b = mod_reduce(base, m);
    while (exp != 0) {
        if (exp & 1) r = mul_mod(r, b, m);
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    return r;
}

// Inverse of a mod m via extended Euclid; empty when gcd(a, m) > 1.
inline std::optional<u64> inv_mod(i64 a, u64 m) {
    require_modulus(m);
    if (m < 2) throw std::domain_error("inv_mod requires m >= 2");
    i64 r0 = static_cast<i64>(m), r1 = static_cast<i64>(mod_reduce(a, m));
    i64 t0 = 0, t1 = 1;
    while (r1 != 0) {
        i64 q = r0 / r1;
        r0 -= q * r1;
        std::swap(r0, r1);
        t0 -= q * t1;
        std::swap(t0, t1);
    }
    if (r0 != 1) return std::nullopt;
    return mod_reduce(t0, m);
}

// Deterministic Miller-Rabin, valid for all n < 2^64.
inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    auto mulm = [n](u64 a, u64 b) { return static_cast<u64>(static_cast<u128>(a) * b % n); };
    auto powm = [&](u64 a, u64 e) {
        u64 r = 1;
        while (e) {
            if (e & 1) r = mulm(r, a);
            a = mulm(a, a);
            e >>= 1;
        }
        return r;
    };
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powm(a % n, d);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulm(x, x);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

// Legendre symbol (a/p) for odd prime p, via Euler's criterion.
inline int legendre(i64 a, u64 p) {
    if (p < 3 || !is_prime(p))
        throw std::domain_error("legendre requires an odd prime");
    u64 r = mod_reduce(a, p);
    if (r == 0) return 0;
    u64 e = pow_mod(static_cast<i64>(r), (p - 1) / 2, p);
    return e == 1 ? 1 : -1;
}

// Square root of a mod an odd prime p (Tonelli-Shanks), canonicalized to
// the smaller of the two roots. Empty when a is a non-residue.
inline std::optional<u64> sqrt_mod(u64 a, u64 p) {
    if (p < 3 || !is_prime(p))
        throw std::domain_error("sqrt_mod requires an odd prime");
    a %= p;
    if (a == 0) return 0;
    if (legendre(static_cast<i64>(a), p) == -1) return std::nullopt;
    u64 r;
    if (p % 4 == 3) {
        r = pow_mod(static_cast<i64>(a), (p + 1) / 4, p);
    } else {
        // Tonelli-Shanks: p - 1 = q * 2^s with q odd.
        u64 q = p - 1;
        int s = 0;
        while ((q & 1) == 0) { q >>= 1; ++s; }
        u64 z = 2;
        while (legendre(static_cast<i64>(z), p) != -1) ++z;
        u64 m = static_cast<u64>(s);
        u64 c = pow_mod(static_cast<i64>(z), q, p);
        u64 t = pow_mod(static_cast<i64>(a), q, p);
        r = pow_mod(static_cast<i64>(a), (q + 1) / 2, p);
        while (t != 1) {
            u64 t2 = t;
            u64 i = 0;
            while (t2 != 1) { t2 = mul_mod(t2, t2, p); ++i; }
            u64 b = c;
            for (u64 j = 0; j + i + 1 < m; ++j) b = mul_mod(b, b, p);
            m = i;
            c = mul_mod(b, b, p);
            t = mul_mod(t, c, p);
            r = mul_mod(r, b, p);
        }
    }
    return std::min(r, p - r);
}

// Primes in [lo, hi], ascending. Segmented sieve; memory O(sqrt(hi) + hi - lo).
inline std::vector<u64> primes_in(u64 lo, u64 hi) {
    if (lo > hi) throw std::invalid_argument("primes_in requires lo <= hi");
    std::vector<u64> out;
    if (hi < 2) return out;
    lo = std::max<u64>(lo, 2);
    u64 root = 1;
    while ((root + 1) * (root + 1) <= hi) ++root;
    std::vector<bool> base(root + 1, true);
    std::vector<u64> base_primes;
    for (u64 i = 2; i <= root; ++i) {
        if (!base[i]) continue;
        base_primes.push_back(i);
        for (u64 j = i * i; j <= root; j += i) base[j] = false;
    }
    std::vector<bool> seg(hi - lo + 1, true);
    for (u64 q : base_primes) {
        u64 start = std::max(q * q, (lo + q - 1) / q * q);
        for (u64 j = start; j <= hi; j += q) seg[j - lo] = false;
    }
    for (u64 n = lo; n <= hi; ++n) {
        if (seg[n - lo] && n >= 2) {
            if (n <= root && !base[n]) continue;
            out.push_back(n);
        }
    }
    return out;
}

// Largest e with ell^e | n.
inline unsigned l_valuation(u64 n, u64 ell) {
    if (n == 0) throw std::domain_error("l_valuation requires n >= 1");
    if (ell < 2) throw std::domain_error("l_valuation requires a prime ell");
    unsigned e = 0;
    while (n % ell == 0) { n /= ell; ++e; }
    return e;
}

namespace detail {

inline u64 pollard_rho(u64 n, u64 seed) {
    auto mulm = [n](u64 a, u64 b) { return static_cast<u64>(static_cast<u128>(a) * b % n); };
    u64 x = seed % n, y = x, c = seed / 7 % n + 1, d = 1;
    while (d == 1) {
        x = add_mod(mulm(x, x), c, n);
        y = add_mod(mulm(y, y), c, n);
        y = add_mod(mulm(y, y), c, n);
        d = std::gcd(x > y ? x - y : y - x, n);
    }
    return d;
}

inline void factor_into(u64 n, std::vector<std::pair<u64, unsigned>>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        for (auto& [q, e] : out)
            if (q == n) { ++e; return; }
        out.emplace_back(n, 1);
        return;
    }
    u64 d = n;
    for (u64 seed = 2; d == n; ++seed) d = pollard_rho(n, seed);
    factor_into(d, out);
    factor_into(n / d, out);
}

} // namespace detail

// Prime factorization q -> exponent, q ascending.
inline std::vector<std::pair<u64, unsigned>> factor(u64 n) {
    if (n == 0) throw std::domain_error("factor requires n >= 1");
    std::vector<std::pair<u64, unsigned>> out;
    for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
        unsigned e = 0;
        while (n % q == 0) { n /= q; ++e; }
        if (e) out.emplace_back(q, e);
    }
    detail::factor_into(n, out);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace isoscan
