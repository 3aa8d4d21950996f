#pragma once

#include <isoscan/bigint.hpp>
#include <isoscan/fp.hpp>

#include <cctype>
#include <string>
#include <utility>
#include <vector>

namespace isoscan {

/* Long Weierstrass model over Q:
 *
 *   y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6
 *
 * with the usual attached quantities
 *
 *   b2 = a1^2 + 4 a2          b4 = 2 a4 + a1 a3
 *   b6 = a3^2 + 4 a6          b8 = a1^2 a6 + 4 a2 a6 - a1 a3 a4 + a2 a3^2 - a4^2
 *   c4 = b2^2 - 24 b4         c6 = -b2^3 + 36 b2 b4 - 216 b6
 *   disc = -b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6
 *   j = c4^3 / disc.
 */
struct CurveQ {
    Int a1, a2, a3, a4, a6;
    friend bool operator==(const CurveQ&, const CurveQ&) = default;
};

struct Invariants {
    Int b2, b4, b6, b8, c4, c6, disc;
};

inline Invariants invariants(const CurveQ& c) {
    Invariants v;
    v.b2 = c.a1 * c.a1 + 4 * c.a2;
    v.b4 = 2 * c.a4 + c.a1 * c.a3;
    v.b6 = c.a3 * c.a3 + 4 * c.a6;
    v.b8 = c.a1 * c.a1 * c.a6 + 4 * c.a2 * c.a6 - c.a1 * c.a3 * c.a4 +
           c.a2 * c.a3 * c.a3 - c.a4 * c.a4;
    v.c4 = v.b2 * v.b2 - 24 * v.b4;
    v.c6 = -v.b2 * v.b2 * v.b2 + 36 * v.b2 * v.b4 - 216 * v.b6;
    v.disc = -v.b2 * v.b2 * v.b8 - 8 * v.b4 * v.b4 * v.b4 - 27 * v.b6 * v.b6 +
             9 * v.b2 * v.b4 * v.b6;
    return v;
}

inline Int discriminant(const CurveQ& c) { return invariants(c).disc; }

struct SingularCurveError : std::domain_error {
    using std::domain_error::domain_error;
};

inline Rat j_invariant(const CurveQ& c) {
    Invariants v = invariants(c);
    if (v.disc == 0) throw SingularCurveError("j-invariant of a singular model");
    return Rat(v.c4 * v.c4 * v.c4) / Rat(v.disc);
}

inline bool is_short(const CurveQ& c) { return c.a1 == 0 && c.a2 == 0 && c.a3 == 0; }

/* Integral short model Y^2 = X^3 - 27 c4 X - 54 c6, isomorphic to c over Q via
 *
 *   (X, Y) = (36 x + 3 b2,  216 y + 108 a1 x + 108 a3),
 *
 * discriminant scaled by 6^12. */
inline CurveQ to_short(const CurveQ& c) {
    Invariants v = invariants(c);
    return CurveQ{0, 0, 0, -27 * v.c4, -54 * v.c6};
}

inline std::pair<Rat, Rat> short_point(const CurveQ& c, const Rat& x, const Rat& y) {
    Invariants v = invariants(c);
    Rat X = 36 * x + Rat(3 * v.b2);
    Rat Y = 216 * y + Rat(108) * (Rat(c.a1) * x + Rat(c.a3));
    return {X, Y};
}

inline std::pair<Rat, Rat> long_point(const CurveQ& c, const Rat& X, const Rat& Y) {
    Invariants v = invariants(c);
    Rat x = (X - Rat(3 * v.b2)) / 36;
    Rat y = (Y - Rat(108) * (Rat(c.a1) * x + Rat(c.a3))) / 216;
    return {x, y};
}

// Canonical serialization; also the hash/cache key.
inline std::string curve_key(const CurveQ& c) {
    return "[" + c.a1.str() + "," + c.a2.str() + "," + c.a3.str() + "," + c.a4.str() +
           "," + c.a6.str() + "]";
}

struct CurveParseError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline Int parse_int_token(const std::string& t) {
    if (t.empty()) throw CurveParseError("empty coefficient");
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) throw CurveParseError("bare sign in coefficient");
    for (; i < t.size(); ++i)
        if (t[i] < '0' || t[i] > '9')
            throw CurveParseError("non-integer coefficient: \"" + t + "\"");
    return Int(t);
}

} // namespace detail

/* Accepts "[a1,a2,a3,a4,a6]" or the short-form shorthand "A,B" meaning
 * [0,0,0,A,B]. Rejects singular models. */
inline CurveQ parse_curve(const std::string& s) {
    std::string t;
    for (char ch : s)
        if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
    std::vector<std::string> parts;
    std::string body;
    bool bracketed = !t.empty() && t.front() == '[';
    if (bracketed) {
        if (t.back() != ']') throw CurveParseError("unterminated '['");
        body = t.substr(1, t.size() - 2);
    } else {
        body = t;
    }
    std::size_t pos = 0;
    while (true) {
        std::size_t comma = body.find(',', pos);
        parts.push_back(body.substr(pos, comma - pos));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    CurveQ c;
    if (bracketed && parts.size() == 5) {
        c = CurveQ{detail::parse_int_token(parts[0]), detail::parse_int_token(parts[1]),
                   detail::parse_int_token(parts[2]), detail::parse_int_token(parts[3]),
                   detail::parse_int_token(parts[4])};
    } else if (!bracketed && parts.size() == 2) {
        c = CurveQ{0, 0, 0, detail::parse_int_token(parts[0]), detail::parse_int_token(parts[1])};
    } else {
        throw CurveParseError("expected \"[a1,a2,a3,a4,a6]\" or \"A,B\", got \"" + s + "\"");
    }
    if (discriminant(c) == 0)
        throw SingularCurveError("singular model (discriminant 0): " + curve_key(c));
    return c;
}

/* Generic Weierstrass model and group law over any field type F supporting
 * +, -, *, /, unary -, ==. Works in every characteristic, so it serves F_p
 * (including p = 2, 3) and exact Q-arithmetic alike. */
template <class F>
struct WModel {
    F a1, a2, a3, a4, a6;
};

template <class F>
struct WPoint {
    bool inf = true;
    F x{}, y{};

    static WPoint infinity() { return {}; }
    static WPoint affine(F x, F y) { return {false, std::move(x), std::move(y)}; }

    friend bool operator==(const WPoint& a, const WPoint& b) {
        if (a.inf || b.inf) return a.inf == b.inf;
        return a.x == b.x && a.y == b.y;
    }
};

template <class F>
bool wp_on_curve(const WModel<F>& E, const WPoint<F>& P) {
    if (P.inf) return true;
    F lhs = P.y * P.y + E.a1 * P.x * P.y + E.a3 * P.y;
    F rhs = ((P.x + E.a2) * P.x + E.a4) * P.x + E.a6;
    return lhs == rhs;
}

template <class F>
WPoint<F> wp_neg(const WModel<F>& E, const WPoint<F>& P) {
    if (P.inf) return P;
    return WPoint<F>::affine(P.x, -(P.y + E.a1 * P.x + E.a3));
}

template <class F>
WPoint<F> wp_add(const WModel<F>& E, const WPoint<F>& P, const WPoint<F>& Q) {
    if (P.inf) return Q;
    if (Q.inf) return P;
    F neg_y = -(P.y + E.a1 * P.x + E.a3);
    if (P.x == Q.x && Q.y == neg_y) return WPoint<F>::infinity();
    F num, den;
    if (P.x == Q.x) {
        // P == Q, not 2-torsion (that is the neg_y case above): tangent slope
        // (3x^2 + 2 a2 x + a4 - a1 y) / (2y + a1 x + a3).
        F x2 = P.x * P.x;
        num = x2 + x2 + x2 + E.a2 * P.x + E.a2 * P.x + E.a4 - E.a1 * P.y;
        den = P.y - neg_y;
    } else {
        num = Q.y - P.y;
        den = Q.x - P.x;
    }
    F lam = num / den;
    F nu = P.y - lam * P.x;
    F x3 = lam * lam + E.a1 * lam - E.a2 - P.x - Q.x;
    F y3 = -((lam + E.a1) * x3 + nu + E.a3);
    return WPoint<F>::affine(std::move(x3), std::move(y3));
}

template <class F>
WPoint<F> wp_scalar_mul(const WModel<F>& E, Int n, WPoint<F> P) {
    if (n < 0) {
        n = -n;
        P = wp_neg(E, P);
    }
    WPoint<F> R = WPoint<F>::infinity();
    while (n > 0) {
        if ((n & 1) != 0) R = wp_add(E, R, P);
        n >>= 1;
        if (n > 0) P = wp_add(E, P, P);
    }
    return R;
}

struct BadReductionError : std::runtime_error {
    u64 p;
    std::string reason;
    BadReductionError(u64 p_, std::string reason_)
        : std::runtime_error("bad reduction at p=" + std::to_string(p_) + ": " + reason_),
          p(p_),
          reason(std::move(reason_)) {}
};

/* Reduction of a CurveQ at a good prime. For p > 3 the model is short
 * (a1 = a2 = a3 = 0, y^2 = x^3 + Ax + B); for p in {2, 3} the long
 * coefficients are reduced as they stand. */
struct ReducedCurve {
    u64 p = 0;
    WModel<Fp> model{};
    bool short_form = false;
    u64 A = 0, B = 0; // valid when short_form
};

using PointFp = WPoint<Fp>;

inline u64 int_mod(const Int& a, u64 p) {
    Int r = a % Int(p);
    if (r < 0) r += Int(p);
    return static_cast<u64>(r);
}

// Good reduction of the GIVEN model: p does not divide its discriminant.
inline bool good_reduction(const CurveQ& c, u64 p) {
    return int_mod(discriminant(c), p) != 0;
}

inline ReducedCurve reduce_mod_p(const CurveQ& c, u64 p) {
    if (!is_prime(p)) throw std::invalid_argument("reduce_mod_p requires a prime");
    Invariants v = invariants(c);
    if (int_mod(v.disc, p) == 0)
        throw BadReductionError(p, "p divides the discriminant");
    ReducedCurve E;
    E.p = p;
    if (p > 3) {
        // Complete the square and cube: y^2 = x^3 + Ax + B with
        // A = -c4/48, B = -c6/864 (48 and 864 are units for p > 3).
        u64 A = mul_mod(int_mod(-v.c4, p), *inv_mod(48, p), p);
        u64 B = mul_mod(int_mod(-v.c6, p), *inv_mod(864, p), p);
        E.short_form = true;
        E.A = A;
        E.B = B;
        E.model = {Fp(0, p), Fp(0, p), Fp(0, p), Fp(static_cast<i64>(A), p),
                   Fp(static_cast<i64>(B), p)};
    } else {
        E.model = {Fp(static_cast<i64>(int_mod(c.a1, p)), p),
                   Fp(static_cast<i64>(int_mod(c.a2, p)), p),
                   Fp(static_cast<i64>(int_mod(c.a3, p)), p),
                   Fp(static_cast<i64>(int_mod(c.a4, p)), p),
                   Fp(static_cast<i64>(int_mod(c.a6, p)), p)};
    }
    return E;
}

inline bool on_curve(const PointFp& P, const ReducedCurve& E) {
    return wp_on_curve(E.model, P);
}

inline PointFp point_add(const PointFp& P, const PointFp& Q, const ReducedCurve& E) {
    return wp_add(E.model, P, Q);
}

inline PointFp point_neg(const PointFp& P, const ReducedCurve& E) {
    return wp_neg(E.model, P);
}

inline PointFp scalar_mul(const Int& n, const PointFp& P, const ReducedCurve& E) {
    return wp_scalar_mul(E.model, n, P);
}

} // namespace isoscan
