#pragma once

#include <isoscan/curves.hpp>

#include <set>

#include <boost/math/tools/polynomial.hpp>
#include <boost/multiprecision/miller_rabin.hpp>

namespace isoscan {

using Poly = boost::math::tools::polynomial<Int>;

inline Poly make_poly(std::vector<Int> cs) { return Poly(cs.begin(), cs.end()); }

/* Division polynomials on a short model y^2 = x^3 + Ax + B, normalized as the
 * x-polynomial whose roots are exactly the x-coordinates of E[n] \ {O}:
 * psi_n itself for odd n, and F * (psi_n / 2y) for even n, where
 * F = x^3 + Ax + B carries the 2-torsion roots (n = 2 returns F, matching
 * psi_2^2 = 4F up to the square). */
inline Poly division_polynomial(const CurveQ& c, unsigned n) {
    if (!is_short(c))
        throw std::invalid_argument("division_polynomial requires a short-form model");
    if (n < 2 || n > 7) throw std::invalid_argument("division_polynomial supports n in 2..7");
    const Int &A = c.a4, &B = c.a6;
    Poly F = make_poly({B, A, 0, 1});
    Poly psi3 = make_poly({-A * A, 12 * B, 6 * A, 0, 3});
    // psi_4 = 4y * G4
    Poly G4 = make_poly({-8 * B * B - A * A * A, -4 * A * B, -5 * A * A, 20 * B, 5 * A, 0, 1});
    Poly c32 = make_poly({32}), c4 = make_poly({4}), c128 = make_poly({128});
    Poly psi5 = c32 * F * F * G4 - psi3 * psi3 * psi3;
    switch (n) {
        case 2: return F;
        case 3: return psi3;
        case 4: return F * G4;
        case 5: return psi5;
        case 6: return F * psi3 * (psi5 - c4 * G4 * G4); // psi_6 = 2y * psi3 (psi5 - 4 G4^2)
        default: return psi5 * psi3 * psi3 * psi3 - c128 * F * F * G4 * G4 * G4;
    }
}

namespace detail {

// Pollard-Brent on arbitrary-size integers; only ever asked for modest
// factors here, so the iteration cap marks genuinely hostile input.
inline Int rho_brent(const Int& n, u64 seed) {
    if (n % 2 == 0) return 2;
    Int y = Int(seed) % n + 1, c = Int(seed / 3) % n + 1;
    Int g = 1, q = 1, x = 0, ys = 0;
    u64 r = 1, m = 128, steps = 0;
    while (g == 1) {
        x = y;
        for (u64 i = 0; i < r; ++i) y = (y * y + c) % n;
        for (u64 k = 0; k < r && g == 1; k += m) {
            ys = y;
            u64 lim = std::min(m, r - k);
            for (u64 i = 0; i < lim; ++i) {
                y = (y * y + c) % n;
                Int diff = x - y;
                if (diff < 0) diff = -diff;
                q = q * diff % n;
            }
            g = gcd(q, n);
            if ((steps += lim) > (u64(1) << 24))
                throw std::runtime_error("factorization stalled (rho iteration cap)");
        }
        r *= 2;
    }
    if (g == n) {
        do {
            ys = (ys * ys + c) % n;
            Int diff = x - ys;
            if (diff < 0) diff = -diff;
            g = gcd(diff, n);
        } while (g == 1);
    }
    return g;
}

inline void factor_int_into(Int n, std::map<Int, unsigned>& out) {
    if (n == 1) return;
    if (boost::multiprecision::miller_rabin_test(n, 32)) {
        ++out[n];
        return;
    }
    Int d = n;
    for (u64 seed = 2; d == n; ++seed) d = rho_brent(n, seed);
    factor_int_into(d, out);
    factor_int_into(n / d, out);
}

// |n| as a prime -> exponent map (n != 0); trial division below 10^5, then
// Pollard-Brent with Miller-Rabin certificates.
inline std::map<Int, unsigned> factor_int(Int n) {
    if (n == 0) throw std::domain_error("factor_int(0)");
    n = abs(n);
    std::map<Int, unsigned> out;
    for (u64 d : {2ull, 3ull, 5ull}) {
        while (n % d == 0) {
            ++out[Int(d)];
            n /= d;
        }
    }
    for (u64 d = 7; d < 100000 && n > 1; d += 6) {
        for (u64 e : {d, d + 4}) { // 6k+1, 6k+5
            while (n % e == 0) {
                ++out[Int(e)];
                n /= e;
            }
        }
    }
    if (n > 1) factor_int_into(n, out);
    return out;
}

inline constexpr std::size_t kDivisorCap = 1u << 20;

inline std::vector<Int> divisors_of(const Int& n) {
    std::vector<Int> divs{1};
    for (const auto& [q, e] : factor_int(n)) {
        std::size_t base = divs.size();
        if (base * (e + 1) > kDivisorCap)
            throw std::runtime_error("divisor enumeration cap exceeded");
        Int qk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            qk *= q;
            for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * qk);
        }
    }
    return divs;
}

inline Rat eval_poly(const Poly& P, const Rat& x) {
    Rat r = 0;
    for (std::size_t i = P.size(); i-- > 0;) r = r * x + Rat(P[i]);
    return r;
}

// Necessary condition filter: a rational root u/v of P is a root of P mod q
// for any prime q coprime to v. Keeps exact Horner off the non-roots.
struct ModFilter {
    std::vector<u64> qs;
    std::vector<std::vector<u64>> coeffs; // per q, reduced
    explicit ModFilter(const Poly& P) {
        u64 q = (u64(1) << 62) - 1;
        while (qs.size() < 3) {
            while (!is_prime(q)) --q;
            qs.push_back(q);
            std::vector<u64> cs(P.size());
            for (std::size_t i = 0; i < P.size(); ++i) cs[i] = int_mod(P[i], q);
            coeffs.push_back(std::move(cs));
            --q;
        }
    }
    bool may_be_root(const Int& num, const Int& den) const {
        for (std::size_t k = 0; k < qs.size(); ++k) {
            u64 q = qs[k];
            u64 d = int_mod(den, q);
            if (d == 0) continue; // q divides the denominator: no verdict
            u64 x = mul_mod(int_mod(num, q), *inv_mod(static_cast<i64>(d), q), q);
            u64 r = 0;
            for (std::size_t i = coeffs[k].size(); i-- > 0;)
                r = add_mod(mul_mod(r, x, q), coeffs[k][i], q);
            if (r != 0) return false;
        }
        return true;
    }
};

/* All rational roots, by the rational-root theorem: numerators divide the
 * trailing nonzero coefficient, denominators divide the leading one. */
inline std::vector<Rat> rational_roots(const Poly& P) {
    std::vector<Rat> roots;
    if (P.is_zero()) throw std::invalid_argument("rational_roots of the zero polynomial");
    std::size_t i0 = 0;
    while (P[i0] == 0) ++i0;
    if (i0 > 0) roots.emplace_back(0);
    if (P.size() - i0 == 1) return roots; // constant after stripping x^k
    ModFilter filt(P);
    std::vector<Int> nums = detail::divisors_of(P[i0]);
    std::vector<Int> dens = detail::divisors_of(P[P.size() - 1]);
    std::set<Rat> seen;
    for (const Int& u : nums)
        for (const Int& v : dens) {
            if (gcd(u, v) != 1) continue;
            for (int sign : {1, -1}) {
                Int su = sign * u;
                if (!filt.may_be_root(su, v)) continue;
                Rat x(su, v);
                if (seen.insert(x).second && eval_poly(P, x) == 0) roots.push_back(x);
            }
        }
    std::sort(roots.begin(), roots.end());
    return roots;
}

inline std::optional<Rat> rational_sqrt(const Rat& r) {
    if (r < 0) return std::nullopt;
    auto n = exact_sqrt(numer(r));
    auto d = exact_sqrt(denom(r));
    if (!n || !d) return std::nullopt;
    return Rat(*n, *d);
}

} // namespace detail

/* A rational point of known exact order (infinity carries order 1). */
struct TorsionPoint {
    bool inf = false;
    Rat x, y;
    unsigned order = 1;
};

/* All rational points of exact order n on c, via rational roots of the
 * division polynomial on the short model, y-solvability over Q, mapping back,
 * and an order check by exact scalar multiplication on c itself. */
inline std::vector<TorsionPoint> rational_torsion(const CurveQ& c, unsigned n) {
    if (n < 2 || n > 7) throw std::invalid_argument("rational_torsion supports n in 2..7");
    if (discriminant(c) == 0) throw SingularCurveError("rational_torsion on a singular model");
    bool shortform = is_short(c);
    CurveQ s = shortform ? c : to_short(c);
    Poly P = division_polynomial(s, n);
    WModel<Rat> Ec{Rat(c.a1), Rat(c.a2), Rat(c.a3), Rat(c.a4), Rat(c.a6)};

    std::vector<TorsionPoint> out;
    for (const Rat& X : detail::rational_roots(P)) {
        Rat rhs = ((X * X) + Rat(s.a4)) * X + Rat(s.a6); // X^3 + AX + B
        auto Y = detail::rational_sqrt(rhs);
        if (!Y) continue;
        std::vector<Rat> ys = (*Y == 0) ? std::vector<Rat>{*Y} : std::vector<Rat>{*Y, -*Y};
        for (const Rat& y0 : ys) {
            Rat xl = X, yl = y0;
            if (!shortform) std::tie(xl, yl) = long_point(c, X, y0);
            WPoint<Rat> Pt = WPoint<Rat>::affine(xl, yl);
            if (!wp_on_curve(Ec, Pt)) continue;
            // exact order = smallest k with kP = O; keep the point iff it is n
            unsigned order = 0; // 0: exceeds n
            WPoint<Rat> Q = Pt; // invariant: Q = kP at iteration k
            for (unsigned k = 1; k <= n && order == 0; ++k) {
                if (Q.inf)
                    order = k;
                else
                    Q = wp_add(Ec, Q, Pt);
            }
            if (order == n) out.push_back(TorsionPoint{false, xl, yl, n});
        }
    }
    std::sort(out.begin(), out.end(), [](const TorsionPoint& a, const TorsionPoint& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    return out;
}

/* A degree-ell isogeny source -> target with the given rational kernel
 * generator; a_p agreement at common good primes is a validated property of
 * the construction, exercised by the test suite rather than assumed. */
struct IsogenyPair {
    CurveQ source, target;
    u64 degree = 0;
    TorsionPoint kernel;
};

/* Velu quotient by <P> for P of exact prime order ell in {2,3,5,7}. On a
 * short model, summing over kernel representatives Q (one of +-Q each, the
 * single 2-torsion point for ell = 2):
 *
 *   gx = 3 x_Q^2 + A, v_Q = gx (2-torsion) or 2 gx, u_Q = 4 y_Q^2,
 *   v = sum v_Q, w = sum (u_Q + x_Q v_Q), target: A' = A - 5v, B' = B - 7w.
 *
 * Long models are routed through their integral short model first. */
inline IsogenyPair velu_quotient(const CurveQ& c, const TorsionPoint& P) {
    u64 ell = P.order;
    if (P.inf || (ell != 2 && ell != 3 && ell != 5 && ell != 7))
        throw std::invalid_argument("velu_quotient requires a kernel point of prime order in {2,3,5,7}");
    WModel<Rat> Ec{Rat(c.a1), Rat(c.a2), Rat(c.a3), Rat(c.a4), Rat(c.a6)};
    WPoint<Rat> Pt = WPoint<Rat>::affine(P.x, P.y);
    if (!wp_on_curve(Ec, Pt))
        throw std::invalid_argument("velu_quotient: kernel point is not on the curve");
    // exact prime order check: ell P = O and P != O
    if (!wp_scalar_mul(Ec, Int(ell), Pt).inf)
        throw std::invalid_argument("velu_quotient: kernel point does not have the claimed order");
    for (u64 k = 1; k < ell; ++k)
        if (wp_scalar_mul(Ec, Int(k), Pt).inf)
            throw std::invalid_argument("velu_quotient: kernel point order is a proper divisor of ell");

    bool shortform = is_short(c);
    CurveQ s = shortform ? c : to_short(c);
    Rat X = P.x, Y = P.y;
    if (!shortform) std::tie(X, Y) = short_point(c, P.x, P.y);
    WModel<Rat> Es{Rat(0), Rat(0), Rat(0), Rat(s.a4), Rat(s.a6)};

    Rat v = 0, w = 0;
    WPoint<Rat> Q = WPoint<Rat>::affine(X, Y);
    unsigned reps = ell == 2 ? 1 : (static_cast<unsigned>(ell) - 1) / 2;
    for (unsigned i = 0; i < reps; ++i) {
        Rat gx = 3 * Q.x * Q.x + Rat(s.a4);
        Rat vq = Q.y == 0 ? gx : gx + gx;
        Rat uq = 4 * Q.y * Q.y;
        v += vq;
        w += uq + Q.x * vq;
        Q = wp_add(Es, Q, WPoint<Rat>::affine(X, Y));
    }
    Rat At = Rat(s.a4) - 5 * v, Bt = Rat(s.a6) - 7 * w;
    if (denom(At) != 1 || denom(Bt) != 1)
        throw std::logic_error("velu_quotient: non-integral target (kernel must be integral torsion)");
    IsogenyPair pair{c, CurveQ{0, 0, 0, numer(At), numer(Bt)}, ell, P};
    if (discriminant(pair.target) == 0)
        throw std::logic_error("velu_quotient: singular target");
    return pair;
}

/* Twist by squarefree d: y^2 = x^3 + A d^2 x + B d^3. Shares j with the
 * source; a_p picks up the factor legendre(d, p). */
inline CurveQ quadratic_twist(const CurveQ& c, i64 d) {
    if (!is_short(c)) throw std::invalid_argument("quadratic_twist requires a short-form model");
    if (d == 0) throw std::invalid_argument("twist by 0 rejected");
    u64 ad = static_cast<u64>(d < 0 ? -d : d);
    for (auto [q, e] : factor(ad))
        if (e >= 2)
            throw std::invalid_argument("twist parameter must be squarefree (divisible by " +
                                        std::to_string(q) + "^2)");
    Int D(d);
    return CurveQ{0, 0, 0, c.a4 * D * D, c.a6 * D * D * D};
}

} // namespace isoscan
