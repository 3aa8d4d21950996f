#pragma once

#include <isoscan/counting.hpp>

#include <algorithm>
#include <set>

namespace isoscan {

/* Characteristic-polynomial data of Frobenius at p acting on ell-torsion:
 * t^2 - trace t + det over F_ell with trace = a_p mod ell and det = p mod ell
 * (the cyclotomic character value). Requires ell != p. */
struct FrobeniusClass {
    u64 p = 0, ell = 0;
    u64 trace = 0, det = 0;
};

inline FrobeniusClass frobenius_class(const ApRecord& rec, u64 ell) {
    if (!is_prime(ell)) throw std::invalid_argument("frobenius_class requires a prime ell");
    if (ell == rec.p)
        throw std::invalid_argument("frobenius_class requires ell != p (p must not lie over ell)");
    return FrobeniusClass{rec.p, ell, mod_reduce(rec.a_p, ell), rec.p % ell};
}

/* det(phi - 1) = 1 - trace + det over F_ell; zero iff 1 is an eigenvalue of
 * Frobenius iff ell | #E(F_p), since 1 - a_p + p is the group order. */
inline u64 det_frob_minus_one(const FrobeniusClass& fc) {
    return sub_mod(add_mod(1, fc.det, fc.ell), fc.trace, fc.ell);
}

struct DirectionStatus {
    bool holds = true;
    std::vector<u64> witnesses; // violating primes, ascending
};

struct EllEntry {
    u64 ell = 0;
    DirectionStatus forward; // ell | #A(F_p) => ell | #A'(F_p)
    DirectionStatus reverse;
    bool uninformative_a = false; // Phi_ell identically 1 on the sampled primes
    bool uninformative_b = false;
};

struct ScanReport {
    std::string curve_a, curve_b;
    u64 pmax = 0;
    std::vector<EllEntry> entries; // ascending ell
};

namespace detail {

inline std::vector<u64> checked_ells(const std::vector<u64>& ells) {
    if (ells.empty()) throw std::invalid_argument("empty ell-set rejected");
    std::set<u64> uniq;
    for (u64 l : ells) {
        if (!is_prime(l)) throw std::invalid_argument("ell-set entry " + std::to_string(l) + " is not prime");
        uniq.insert(l);
    }
    return {uniq.begin(), uniq.end()};
}

inline bool table_uninformative(const ApTable& t, u64 ell, u64 pmax) {
    for (const auto& [p, rec] : t.records) {
        if (p > pmax) break;
        if (p == ell) continue;
        if (rec.count % ell != 0) return false;
    }
    return true;
}

} // namespace detail

/* Implication scan over the truncated common good-prime set: for each ell and
 * each common good 5 <= p <= pmax with p != ell, a forward violation is
 * Phi_ell(a, p) = 1 with Phi_ell(b, p) = 0; reverse mirrored. Tables must
 * hold every good prime up to pmax (build_ap_table output qualifies). */
inline ScanReport implication_scan(const ApTable& ta, const ApTable& tb,
                                   const std::vector<u64>& ells, u64 pmax) {
    if (pmax < 5) throw std::invalid_argument("implication_scan requires pmax >= 5");
    ScanReport r;
    r.curve_a = ta.curve;
    r.curve_b = tb.curve;
    r.pmax = pmax;
    for (u64 ell : detail::checked_ells(ells)) {
        EllEntry e;
        e.ell = ell;
        for (const auto& [p, ra] : ta.records) {
            if (p > pmax) break;
            if (p == ell) continue;
            auto itb = tb.records.find(p);
            if (itb == tb.records.end()) continue; // not good for both
            bool fa = ra.count % ell == 0;
            bool fb = itb->second.count % ell == 0;
            if (fa && !fb) {
                e.forward.holds = false;
                e.forward.witnesses.push_back(p);
            }
            if (fb && !fa) {
                e.reverse.holds = false;
                e.reverse.witnesses.push_back(p);
            }
        }
        e.uninformative_a = detail::table_uninformative(ta, ell, pmax);
        e.uninformative_b = detail::table_uninformative(tb, ell, pmax);
        r.entries.push_back(std::move(e));
    }
    return r;
}

inline ScanReport implication_scan(const CurveQ& a, const CurveQ& b,
                                   const std::vector<u64>& ells, u64 pmax,
                                   unsigned threads = 0) {
    return implication_scan(build_ap_table(a, pmax, nullptr, threads),
                            build_ap_table(b, pmax, nullptr, threads), ells, pmax);
}

/* First a_p disagreement over the common good primes <= pmax; empty means all
 * equal. A mismatch is a sound non-isogeny certificate (isogenous curves
 * share their L-series). */
struct ApMismatch {
    u64 p = 0;
    i64 ap_a = 0, ap_b = 0;
};

inline std::optional<ApMismatch> faltings_check(const ApTable& ta, const ApTable& tb,
                                                u64 pmax) {
    if (pmax < 5) throw std::invalid_argument("faltings_check requires pmax >= 5");
    for (const auto& [p, ra] : ta.records) {
        if (p > pmax) break;
        auto itb = tb.records.find(p);
        if (itb == tb.records.end()) continue;
        if (ra.a_p != itb->second.a_p) return ApMismatch{p, ra.a_p, itb->second.a_p};
    }
    return std::nullopt;
}

inline std::optional<ApMismatch> faltings_check(const CurveQ& a, const CurveQ& b,
                                                u64 pmax, unsigned threads = 0) {
    return faltings_check(build_ap_table(a, pmax, nullptr, threads),
                          build_ap_table(b, pmax, nullptr, threads), pmax);
}

/* True iff Phi_ell(c, p) = 1 for every good p <= pmax with p != ell;
 * rational ell-torsion forces this, emptying the divisibility hypothesis of
 * content for that ell. */
inline bool uninformative_ell(const CurveQ& c, u64 ell, u64 pmax, unsigned threads = 0) {
    if (pmax < 5) throw std::invalid_argument("uninformative_ell requires pmax >= 5");
    if (!is_prime(ell)) throw std::invalid_argument("uninformative_ell requires a prime ell");
    return detail::table_uninformative(build_ap_table(c, pmax, nullptr, threads), ell, pmax);
}

/* Sound when NotIsogenous (witness reproducible from scratch); heuristic when
 * ConsistentWithIsogeny, with the truncation (pmax, ell-set) and the count of
 * informative ells reported as evidence strength. An ell that is
 * uninformative on the b side constrains nothing, so it is excluded from the
 * evidence count. */
struct Verdict {
    enum class Kind { NotIsogenous, ConsistentWithIsogeny };
    Kind kind = Kind::ConsistentWithIsogeny;

    // NotIsogenous carries at least one of these witnesses.
    std::optional<ApMismatch> ap_witness;
    std::optional<std::pair<u64, u64>> phi_witness; // (ell, p) forward violation

    // ConsistentWithIsogeny evidence.
    u64 pmax = 0;
    std::vector<u64> ells;
    u64 informative_ells = 0;
    bool no_information = false;
};

// Pre: report and faltings were computed over the same pmax.
inline Verdict verdict(const ScanReport& report, const std::optional<ApMismatch>& faltings) {
    Verdict v;
    v.pmax = report.pmax;
    for (const EllEntry& e : report.entries) v.ells.push_back(e.ell);
    if (faltings) {
        v.kind = Verdict::Kind::NotIsogenous;
        v.ap_witness = faltings;
    }
    for (const EllEntry& e : report.entries) {
        if (!e.forward.holds && !v.phi_witness) {
            v.kind = Verdict::Kind::NotIsogenous;
            v.phi_witness = std::make_pair(e.ell, e.forward.witnesses.front());
        }
        if (!e.uninformative_b) ++v.informative_ells;
    }
    if (v.kind == Verdict::Kind::ConsistentWithIsogeny)
        v.no_information = v.informative_ells == 0;
    return v;
}

/* Fraction of good p <= pmax with a_p = 0. CM curves are supersingular at
 * asymptotic density 1/2, non-CM at density 0; the 0.25 threshold splits the
 * two regimes with wide margin. */
struct CmResult {
    double fraction = 0.0;
    bool likely_cm = false;
    u64 supersingular = 0, sampled = 0;
};

inline CmResult cm_heuristic(const ApTable& t, u64 pmax) {
    if (pmax < 1000) throw std::invalid_argument("cm_heuristic requires pmax >= 1000");
    CmResult r;
    for (const auto& [p, rec] : t.records) {
        if (p > pmax) break;
        ++r.sampled;
        if (rec.a_p == 0) ++r.supersingular;
    }
    r.fraction = r.sampled == 0 ? 0.0
                                : static_cast<double>(r.supersingular) /
                                      static_cast<double>(r.sampled);
    r.likely_cm = r.fraction > 0.25;
    return r;
}

inline CmResult cm_heuristic(const CurveQ& c, u64 pmax, unsigned threads = 0) {
    if (pmax < 1000) throw std::invalid_argument("cm_heuristic requires pmax >= 1000");
    return cm_heuristic(build_ap_table(c, pmax, nullptr, threads), pmax);
}

} // namespace isoscan
