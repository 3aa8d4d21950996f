#pragma once

#include <isoscan/curves.hpp>

#include <cmath>
#include <map>
#include <random>
#include <thread>
#include <unordered_map>

namespace isoscan {

/* One counted reduction: count = #E(F_p) = p + 1 - a_p, |a_p| <= 2 sqrt(p). */
struct ApRecord {
    u64 p = 0;
    i64 a_p = 0;
    u64 count = 0;
};

/* p -> ApRecord for one curve, keyed by the canonical curve string. The map
 * keeps records ascending in p, which the file format relies on. */
struct ApTable {
    std::string curve;
    std::map<u64, ApRecord> records;
};

// Signals a bug in order resolution, not a mathematical condition.
struct InternalAmbiguityError : std::logic_error {
    using std::logic_error::logic_error;
};

inline u64 isqrt_u64(u64 n) {
    if (n == 0) return 0;
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && static_cast<u128>(r) * r > n) --r;
    while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

// Hasse interval half-width floor(2 sqrt(p)).
inline u64 hasse_halfwidth(u64 p) { return isqrt_u64(4 * p); }

/* Exact count by enumeration: a quadratic-residue table over x for p > 3
 * (adds 1 + legendre(x^3 + Ax + B) per column), full (x, y) enumeration for
 * the long models at p in {2, 3}. */
inline u64 count_naive(const ReducedCurve& E) {
    u64 p = E.p;
    if (p <= 3) {
        u64 n = 1;
        for (u64 x = 0; x < p; ++x)
            for (u64 y = 0; y < p; ++y) {
                Fp fx(static_cast<i64>(x), p), fy(static_cast<i64>(y), p);
                if (wp_on_curve(E.model, PointFp::affine(fx, fy))) ++n;
            }
        return n;
    }
    if (p > (u64(1) << 31))
        throw std::invalid_argument("count_naive: p too large for enumeration");
    std::vector<char> issq(p, 0);
    for (u64 t = 0; t < p; ++t) issq[mul_mod(t, t, p)] = 1;
    u64 n = 1;
    for (u64 x = 0; x < p; ++x) {
        u64 fx = add_mod(mul_mod(add_mod(mul_mod(x, x, p), E.A, p), x, p), E.B, p);
        n += fx == 0 ? 1 : (issq[fx] ? 2 : 0);
    }
    return n;
}

namespace detail {

/* Smallest n in [lo, hi] with n P = infinity; a multiple of ord(P) exists
 * there whenever the interval contains the group order. */
inline std::optional<u64> bsgs_annihilator(const WModel<Fp>& E, const PointFp& P,
                                           u64 lo, u64 hi) {
    u64 p = P.x.modulus();
    u64 width = hi - lo;
    u64 m = isqrt_u64(width) + 1;
    // baby steps jP, 1 <= j < m, bucketed by x-coordinate
    std::unordered_map<u64, std::vector<std::pair<u64, u64>>> baby;
    PointFp Pj = P;
    for (u64 j = 1; j < m; ++j) {
        if (Pj.inf) {
            // ord(P) = j exactly here since no smaller j hit infinity
            u64 n = (lo + j - 1) / j * j;
            return n <= hi ? std::optional<u64>(n) : std::nullopt;
        }
        baby[Pj.x.value()].emplace_back(j, Pj.y.value());
        Pj = wp_add(E, Pj, P);
    }
    PointFp S = wp_scalar_mul(E, Int(m), P);
    PointFp T = wp_scalar_mul(E, Int(lo), P);
    for (u64 k = 0; lo + k * m <= hi + m; ++k) {
        if (T.inf && lo + k * m >= lo && lo + k * m <= hi) return lo + k * m;
        if (!T.inf) {
            auto it = baby.find(T.x.value());
            if (it != baby.end()) {
                // T = -(jP) means T + jP = infinity, i.e. y_T = -y_j
                for (auto [j, yj] : it->second) {
                    if (T.y.value() == (yj == 0 ? 0 : p - yj)) {
                        u64 n = lo + k * m + j;
                        if (n >= lo && n <= hi) return n;
                    }
                }
            }
        }
        T = wp_add(E, T, S);
    }
    return std::nullopt;
}

// Exact order of P given some annihilator n (strip primes of n).
inline u64 exact_order(const WModel<Fp>& E, const PointFp& P, u64 n) {
    u64 e = n;
    for (auto [q, mult] : factor(n)) {
        (void)mult;
        while (e % q == 0 && wp_scalar_mul(E, Int(e / q), P).inf) e /= q;
    }
    return e;
}

inline u64 lcm_u64(u64 a, u64 b) { return a / std::gcd(a, b) * b; }

} // namespace detail

// Retry bound for count_bsgs order resolution; exceeding it throws
// InternalAmbiguityError (it would indicate a bug, not bad luck: each fresh
// point at least halves the candidate set in expectation).
inline constexpr int kBsgsRetryBound = 64;

/* Baby-step/giant-step count. Finds point orders on the curve and on its
 * quadratic twist, accumulating lcms M | #E and M' | #E', until exactly one
 * candidate
 *
 *   N in [p+1-2sqrt(p), p+1+2sqrt(p)],  M | N,  M' | (2p + 2 - N)
 *
 * survives (#E + #E' = 2p + 2 pins the twist side). Deterministic: the RNG
 * is seeded from (p, A, B). Defers to count_naive for p <= 229, where the
 * Hasse interval is too crowded to be worth the machinery. */
inline u64 count_bsgs(const ReducedCurve& E) {
    u64 p = E.p;
    if (p <= 229) return count_naive(E);
    u64 h = hasse_halfwidth(p);
    u64 lo = p + 1 - h, hi = p + 1 + h;

    // twist by the smallest nonresidue d: y^2 = x^3 + A d^2 x + B d^3
    u64 d = 2;
    while (legendre(static_cast<i64>(d), p) != -1) ++d;
    u64 Ad = mul_mod(E.A, mul_mod(d, d, p), p);
    u64 Bd = mul_mod(E.B, mul_mod(d, mul_mod(d, d, p), p), p);
    WModel<Fp> Et{Fp(0, p), Fp(0, p), Fp(0, p), Fp(static_cast<i64>(Ad), p),
                  Fp(static_cast<i64>(Bd), p)};

    std::seed_seq seq{p, E.A, E.B};
    std::mt19937_64 rng(seq);

    u64 M = 1, Mt = 1; // lcm of point orders seen on E resp. its twist
    for (int iter = 0; iter < kBsgsRetryBound; ++iter) {
        u64 x = rng() % p; // sampling bias is irrelevant: any point works
        u64 fx = add_mod(mul_mod(add_mod(mul_mod(x, x, p), E.A, p), x, p), E.B, p);
        if (fx == 0) continue;
        bool on_twist = legendre(static_cast<i64>(fx), p) == -1;
        const WModel<Fp>& side = on_twist ? Et : E.model;
        PointFp P;
        if (on_twist) {
            // f(x) nonresidue: (d x, sqrt(d^3 f(x))) lies on the twist
            u64 xt = mul_mod(d, x, p);
            u64 yt = *sqrt_mod(mul_mod(mul_mod(d, mul_mod(d, d, p), p), fx, p), p);
            P = PointFp::affine(Fp(static_cast<i64>(xt), p), Fp(static_cast<i64>(yt), p));
        } else {
            P = PointFp::affine(Fp(static_cast<i64>(x), p),
                                Fp(static_cast<i64>(*sqrt_mod(fx, p)), p));
        }
        auto ann = detail::bsgs_annihilator(side, P, lo, hi);
        if (!ann) throw InternalAmbiguityError("bsgs: no annihilator in the Hasse interval");
        u64 ord = detail::exact_order(side, P, *ann);
        (on_twist ? Mt : M) = detail::lcm_u64(on_twist ? Mt : M, ord);
        if (M > hi) throw InternalAmbiguityError("bsgs: order lcm exceeds the Hasse interval");

        // candidates: multiples of M in [lo, hi] with M' | (2p + 2 - n)
        u64 cand = 0, ncand = 0;
        for (u64 n = (lo + M - 1) / M * M; n <= hi; n += M) {
            if ((2 * p + 2 - n) % Mt == 0) {
                cand = n;
                if (++ncand > 1) break;
            }
        }
        if (ncand == 1) return cand;
        if (ncand == 0) throw InternalAmbiguityError("bsgs: no candidate order survives");
    }
    throw InternalAmbiguityError("bsgs: retry bound exhausted without a unique order");
}

/* a_p = p + 1 - #E(F_p) for a good prime p > 3; naive/BSGS dispatch happens
 * inside count_bsgs at the 229 threshold. */
inline ApRecord trace_ap(const CurveQ& c, u64 p) {
    if (p <= 3 || !is_prime(p))
        throw std::invalid_argument("trace_ap requires a prime p > 3");
    ReducedCurve E = reduce_mod_p(c, p); // BadReductionError passes through
    u64 n = count_bsgs(E);
    return ApRecord{p, static_cast<i64>(p + 1) - static_cast<i64>(n), n};
}

// Phi_ell at p: 1 iff ell divides #E(F_p).
inline int phi_ell(const CurveQ& c, u64 p, u64 ell) {
    if (!is_prime(ell)) throw std::invalid_argument("phi_ell requires a prime ell");
    return trace_ap(c, p).count % ell == 0 ? 1 : 0;
}

/* Records for every good prime 5 <= p <= pmax, merged over the optional
 * cache (whose entries are trusted for matching curve keys but re-checked
 * for good reduction). Evaluation may run on several threads; the result is
 * a sorted map built from per-prime pure computations, so it is independent
 * of the schedule and of `threads`. */
inline ApTable build_ap_table(const CurveQ& c, u64 pmax, const ApTable* cache = nullptr,
                              unsigned threads = 0) {
    if (pmax < 5) throw std::invalid_argument("build_ap_table requires pmax >= 5");
    ApTable t;
    t.curve = curve_key(c);
    if (cache) {
        if (cache->curve != t.curve)
            throw std::invalid_argument("ap cache key mismatch: cache is for " +
                                        cache->curve + ", requested " + t.curve);
        for (const auto& [p, rec] : cache->records) {
            if (!good_reduction(c, p))
                throw std::invalid_argument("ap cache holds a bad-reduction prime p=" +
                                            std::to_string(p));
            t.records.emplace(p, rec);
        }
    }
    std::vector<u64> todo;
    for (u64 p : primes_in(5, pmax))
        if (!t.records.count(p) && good_reduction(c, p)) todo.push_back(p);
    if (todo.empty()) return t;

    if (threads == 0) {
        unsigned hc = std::thread::hardware_concurrency();
        threads = hc == 0 ? 1 : std::min(hc, 8u);
    }
    threads = std::min<unsigned>(threads, static_cast<unsigned>(todo.size()));
    std::vector<ApRecord> results(todo.size());
    auto worker = [&](unsigned t0) {
        for (std::size_t i = t0; i < todo.size(); i += threads)
            results[i] = trace_ap(c, todo[i]);
    };
    if (threads <= 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker, i);
        for (auto& th : pool) th.join();
    }
    for (const ApRecord& r : results) t.records.emplace(r.p, r);
    return t;
}

} // namespace isoscan
