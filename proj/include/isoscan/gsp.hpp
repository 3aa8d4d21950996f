#pragma once

#include <isoscan/arith.hpp>

#include <vector>

namespace isoscan {

/* Dense square matrix over F_ell, row-major, entries reduced. Dimensions stay
 * tiny (2g <= 6), so everything below is plain elimination and permutation
 * expansion on machine words. */
struct MatrixModL {
    unsigned n = 0;
    u64 ell = 0;
    std::vector<u64> e; // n*n entries

    MatrixModL() = default;
    MatrixModL(unsigned n_, u64 ell_) : n(n_), ell(ell_), e(std::size_t(n_) * n_, 0) {}

    u64& at(unsigned i, unsigned j) { return e[std::size_t(i) * n + j]; }
    u64 at(unsigned i, unsigned j) const { return e[std::size_t(i) * n + j]; }

    static MatrixModL identity(unsigned n, u64 ell) {
        MatrixModL m(n, ell);
        for (unsigned i = 0; i < n; ++i) m.at(i, i) = 1 % ell;
        return m;
    }

    friend bool operator==(const MatrixModL&, const MatrixModL&) = default;
};

namespace detail {

inline void require_same_shape(const MatrixModL& a, const MatrixModL& b) {
    if (a.n != b.n || a.ell != b.ell)
        throw std::invalid_argument("matrix dimension/modulus mismatch");
}

} // namespace detail

inline MatrixModL mat_mul(const MatrixModL& a, const MatrixModL& b) {
    detail::require_same_shape(a, b);
    MatrixModL c(a.n, a.ell);
    for (unsigned i = 0; i < a.n; ++i)
        for (unsigned k = 0; k < a.n; ++k) {
            u64 aik = a.at(i, k);
            if (aik == 0) continue;
            for (unsigned j = 0; j < a.n; ++j)
                c.at(i, j) = add_mod(c.at(i, j), mul_mod(aik, b.at(k, j), a.ell), a.ell);
        }
    return c;
}

inline MatrixModL mat_sub(const MatrixModL& a, const MatrixModL& b) {
    detail::require_same_shape(a, b);
    MatrixModL c(a.n, a.ell);
    for (std::size_t i = 0; i < a.e.size(); ++i) c.e[i] = sub_mod(a.e[i], b.e[i], a.ell);
    return c;
}

inline MatrixModL mat_transpose(const MatrixModL& a) {
    MatrixModL c(a.n, a.ell);
    for (unsigned i = 0; i < a.n; ++i)
        for (unsigned j = 0; j < a.n; ++j) c.at(j, i) = a.at(i, j);
    return c;
}

inline MatrixModL mat_scale(const MatrixModL& a, u64 s) {
    MatrixModL c = a;
    for (u64& x : c.e) x = mul_mod(x, s % a.ell, a.ell);
    return c;
}

// Determinant by permutation expansion (n <= 6: at most 720 terms). Kept
// deliberately independent of the elimination path below so the two can
// cross-check each other.
inline u64 mat_det_perm(const MatrixModL& a) {
    if (a.n > 6) throw std::invalid_argument("permutation-expansion determinant capped at n = 6");
    std::vector<unsigned> perm(a.n);
    for (unsigned i = 0; i < a.n; ++i) perm[i] = i;
    u64 det = 0;
    // iterate permutations in lexicographic order, tracking parity by
    // counting inversions each time (n! tiny)
    do {
        unsigned inv = 0;
        for (unsigned i = 0; i < a.n; ++i)
            for (unsigned j = i + 1; j < a.n; ++j)
                if (perm[i] > perm[j]) ++inv;
        u64 term = 1;
        for (unsigned i = 0; i < a.n && term != 0; ++i) term = mul_mod(term, a.at(i, perm[i]), a.ell);
        det = inv % 2 == 0 ? add_mod(det, term, a.ell) : sub_mod(det, term, a.ell);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det;
}

// Rank over F_ell by Gaussian elimination (ell prime).
inline unsigned mat_rank(MatrixModL a) {
    unsigned rank = 0;
    for (unsigned col = 0; col < a.n && rank < a.n; ++col) {
        unsigned pivot = rank;
        while (pivot < a.n && a.at(pivot, col) == 0) ++pivot;
        if (pivot == a.n) continue;
        for (unsigned j = 0; j < a.n; ++j) std::swap(a.at(rank, j), a.at(pivot, j));
        u64 inv = *inv_mod(static_cast<i64>(a.at(rank, col)), a.ell);
        for (unsigned i = rank + 1; i < a.n; ++i) {
            u64 f = mul_mod(a.at(i, col), inv, a.ell);
            if (f == 0) continue;
            for (unsigned j = col; j < a.n; ++j)
                a.at(i, j) = sub_mod(a.at(i, j), mul_mod(f, a.at(rank, j), a.ell), a.ell);
        }
        ++rank;
    }
    return rank;
}

/* The standard symplectic form J = [[0, Id_g], [-Id_g, 0]] on (F_ell)^2g;
 * GSp_2g is the group of M with M^T J M = lambda J, lambda != 0. */
struct SymplecticContext {
    unsigned g = 1;
    u64 ell = 3;
    MatrixModL J;
};

inline SymplecticContext symplectic_context(unsigned g, u64 ell) {
    if (g < 1 || g > 3) throw std::invalid_argument("g must be in 1..3");
    if (ell < 3 || !is_prime(ell)) throw std::invalid_argument("ell must be an odd prime");
    SymplecticContext ctx;
    ctx.g = g;
    ctx.ell = ell;
    ctx.J = MatrixModL(2 * g, ell);
    for (unsigned i = 0; i < g; ++i) {
        ctx.J.at(i, g + i) = 1;
        ctx.J.at(g + i, i) = ell - 1;
    }
    return ctx;
}

/* Similitude multiplier: lambda with M^T J M = lambda J, empty when M is not
 * a symplectic similitude. For g = 1 this is det(M). */
inline std::optional<u64> multiplier(const MatrixModL& M, const SymplecticContext& ctx) {
    if (M.n != 2 * ctx.g || M.ell != ctx.ell)
        throw std::invalid_argument("matrix does not match the symplectic context");
    MatrixModL N = mat_mul(mat_mul(mat_transpose(M), ctx.J), M);
    u64 lambda = N.at(0, ctx.g); // J has a 1 there
    if (lambda == 0) return std::nullopt;
    if (N != mat_scale(ctx.J, lambda)) return std::nullopt;
    return lambda;
}

/* diag(lambda Id_g, lambda^{-1} Id_g): a similitude with multiplier 1, the
 * proof's "magic" element. */
inline MatrixModL magic_element(u64 lambda, const SymplecticContext& ctx) {
    lambda %= ctx.ell;
    if (lambda == 0) throw std::invalid_argument("magic_element requires lambda in F_ell^x");
    MatrixModL m(2 * ctx.g, ctx.ell);
    u64 li = *inv_mod(static_cast<i64>(lambda), ctx.ell);
    for (unsigned i = 0; i < ctx.g; ++i) {
        m.at(i, i) = lambda;
        m.at(ctx.g + i, ctx.g + i) = li;
    }
    return m;
}

/* No nonzero fixed vector, i.e. 1 is not an eigenvalue: det(M - Id) != 0,
 * equivalently ker(M - Id) = 0. Both routes are computed and compared; a
 * disagreement would be an internal bug. */
inline bool fixed_point_free(const MatrixModL& M) {
    MatrixModL D = mat_sub(M, MatrixModL::identity(M.n, M.ell));
    bool by_det = mat_det_perm(D) != 0;
    bool by_kernel = mat_rank(D) == M.n;
    if (by_det != by_kernel)
        throw std::logic_error("fixed_point_free: determinant and kernel routes disagree");
    return by_det;
}

/* Exhaustive check of the magic-element lemma over F_ell^x:
 *   (i)   every magic element has multiplier 1;
 *   (ii)  magic_element(lambda) is fixed-point-free iff lambda != 1;
 *   (iii) when ell - 1 > c, every subgroup of F_ell^x of index <= c contains
 *         some lambda != 1 whose magic element is fixed-point-free.
 * Clause (iii) is inapplicable when ell - 1 <= c (the lemma takes ell large).
 * Sub-(ell) exhaustiveness: subgroups of the cyclic group F_ell^x are
 * enumerated via divisors of ell - 1. */
struct VerificationReport {
    u64 ell = 0;
    unsigned g = 0;
    u64 c = 0;
    bool multiplier_clause = false;          // (i)
    bool fixed_point_clause = false;         // (ii)
    bool subgroup_clause_applicable = false; // ell - 1 > c
    bool subgroup_clause = false;            // (iii); meaningful when applicable
    std::vector<MatrixModL> counterexamples;

    bool all_pass() const {
        return multiplier_clause && fixed_point_clause &&
               (!subgroup_clause_applicable || subgroup_clause);
    }
};

inline VerificationReport verify_magic_lemma(u64 ell, unsigned g, u64 c) {
    if (c < 1) throw std::invalid_argument("verify_magic_lemma requires c >= 1");
    SymplecticContext ctx = symplectic_context(g, ell);
    VerificationReport rep;
    rep.ell = ell;
    rep.g = g;
    rep.c = c;
    rep.multiplier_clause = true;
    rep.fixed_point_clause = true;
    for (u64 lam = 1; lam < ell; ++lam) {
        MatrixModL m = magic_element(lam, ctx);
        auto mult = multiplier(m, ctx);
        if (!mult || *mult != 1) {
            rep.multiplier_clause = false;
            rep.counterexamples.push_back(m);
        }
        if (fixed_point_free(m) != (lam != 1)) {
            rep.fixed_point_clause = false;
            rep.counterexamples.push_back(m);
        }
    }
    rep.subgroup_clause_applicable = ell - 1 > c;
    if (rep.subgroup_clause_applicable) {
        rep.subgroup_clause = true;
        for (u64 m = 1; m <= ell - 1; ++m) {
            if ((ell - 1) % m != 0) continue;
            u64 index = (ell - 1) / m;
            if (index > c) continue;
            // the unique subgroup of order m: solutions of x^m = 1
            bool found = false;
            for (u64 x = 2; x < ell && !found; ++x)
                if (pow_mod(static_cast<i64>(x), m, ell) == 1)
                    found = fixed_point_free(magic_element(x, ctx));
            if (!found) rep.subgroup_clause = false;
        }
    }
    return rep;
}

enum class CartanKind { split, nonsplit };

/* Cartan subgroups of GL_2(F_ell) in explicit form: split = the invertible
 * diagonal matrices, order (ell-1)^2; nonsplit = F_{ell^2}^x acting on itself
 * in the basis {1, sqrt(eps)} with eps the least nonsquare, i.e. matrices
 * [[a, b eps], [b, a]] with (a, b) != (0, 0), order ell^2 - 1. */
inline std::vector<MatrixModL> cartan_subgroup(u64 ell, CartanKind kind) {
    if (ell < 3 || !is_prime(ell)) throw std::invalid_argument("ell must be an odd prime");
    if (ell > 23) throw std::invalid_argument("cartan_subgroup enumeration capped at ell = 23");
    std::vector<MatrixModL> out;
    if (kind == CartanKind::split) {
        for (u64 a = 1; a < ell; ++a)
            for (u64 b = 1; b < ell; ++b) {
                MatrixModL m(2, ell);
                m.at(0, 0) = a;
                m.at(1, 1) = b;
                out.push_back(m);
            }
    } else {
        u64 eps = 2;
        while (legendre(static_cast<i64>(eps), ell) != -1) ++eps;
        for (u64 a = 0; a < ell; ++a)
            for (u64 b = 0; b < ell; ++b) {
                if (a == 0 && b == 0) continue;
                MatrixModL m(2, ell);
                m.at(0, 0) = a;
                m.at(0, 1) = mul_mod(b, eps, ell);
                m.at(1, 0) = b;
                m.at(1, 1) = a;
                out.push_back(m);
            }
    }
    return out;
}

/* Semisimplicity for 2x2: scalars are semisimple; otherwise the minimal
 * polynomial equals the characteristic one, squarefree iff tr^2 - 4 det != 0
 * (distinct eigenvalues over F_{ell^2}). */
inline bool is_semisimple(const MatrixModL& M) {
    if (M.n != 2) throw std::invalid_argument("is_semisimple handles 2x2 matrices");
    if (M.at(0, 1) == 0 && M.at(1, 0) == 0 && M.at(0, 0) == M.at(1, 1)) return true;
    u64 tr = add_mod(M.at(0, 0), M.at(1, 1), M.ell);
    u64 det = sub_mod(mul_mod(M.at(0, 0), M.at(1, 1), M.ell),
                      mul_mod(M.at(0, 1), M.at(1, 0), M.ell), M.ell);
    u64 disc = sub_mod(mul_mod(tr, tr, M.ell), mul_mod(4 % M.ell, det, M.ell), M.ell);
    return disc != 0;
}

} // namespace isoscan
