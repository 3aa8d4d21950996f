#include <isoscan/corpus.hpp>
#include <isoscan/criterion.hpp>
#include <isoscan/velu.hpp>

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace isoscan;

namespace {

const EllEntry& entry_for(const ScanReport& r, u64 ell) {
    for (const auto& e : r.entries)
        if (e.ell == ell) return e;
    FAIL("no entry for ell");
    throw std::logic_error("unreachable");
}

} // namespace

TEST_CASE("frobenius_class reduces trace and det", "[criterion]") {
    FrobeniusClass fc = frobenius_class(ApRecord{5, -2, 8}, 3);
    CHECK(fc.trace == 1);
    CHECK(fc.det == 2);
    FrobeniusClass fc2 = frobenius_class(ApRecord{7, -4, 12}, 3);
    CHECK(fc2.trace == 2);
    CHECK(fc2.det == 1);
    CHECK_THROWS_AS(frobenius_class(ApRecord{5, -2, 8}, 5), std::invalid_argument);
    CHECK_THROWS_AS(frobenius_class(ApRecord{5, -2, 8}, 6), std::invalid_argument);
}

TEST_CASE("det_frob_minus_one matches divisibility", "[criterion]") {
    CHECK(det_frob_minus_one(frobenius_class(ApRecord{5, -2, 8}, 2)) == 0);
    CHECK(det_frob_minus_one(frobenius_class(ApRecord{7, -4, 12}, 3)) == 0);
    CHECK(det_frob_minus_one(frobenius_class(ApRecord{5, -2, 8}, 3)) == 2);
}

TEST_CASE("the two routes of the divisibility lemma agree", "[criterion]") {
    // group-order route (ell | count) vs characteristic-polynomial route
    // (det(frob - 1) = 0), for every corpus curve at desk scale
    std::vector<u64> ells = primes_in(2, 50);
    for (const auto& e : corpus()) {
        ApTable t = build_ap_table(e.curve, 2000);
        for (const auto& [p, rec] : t.records)
            for (u64 ell : ells) {
                if (ell == p) continue;
                CAPTURE(e.label, p, ell);
                bool divides = rec.count % ell == 0;
                bool eigen = det_frob_minus_one(frobenius_class(rec, ell)) == 0;
                CHECK(divides == eigen);
            }
    }
}

TEST_CASE("implication_scan pins the frozen example", "[criterion]") {
    const CurveQ& a = corpus_find("cm-i")->curve;  // count 8 at p = 5
    const CurveQ& b = corpus_find("cm-3")->curve;  // count 6 at p = 5
    ScanReport r = implication_scan(a, b, {3}, 5);
    const EllEntry& e = entry_for(r, 3);
    CHECK(e.forward.holds);
    CHECK(e.forward.witnesses.empty());
    CHECK(!e.reverse.holds);
    REQUIRE(!e.reverse.witnesses.empty());
    CHECK(e.reverse.witnesses.front() == 5);
    CHECK_THROWS_AS(implication_scan(a, b, {}, 100), std::invalid_argument);
    CHECK_THROWS_AS(implication_scan(a, b, {4}, 100), std::invalid_argument);
}

TEST_CASE("implication_scan is reflexive and symmetric", "[criterion]") {
    const CurveQ& a = corpus_find("cm-i")->curve;
    const CurveQ& b = corpus_find("disc37")->curve;
    ScanReport self = implication_scan(a, a, {3, 5, 7}, 500);
    for (const auto& e : self.entries) {
        CHECK(e.forward.holds);
        CHECK(e.reverse.holds);
        CHECK(e.forward.witnesses.empty());
        CHECK(e.reverse.witnesses.empty());
    }
    ScanReport ab = implication_scan(a, b, {3, 5, 7, 11}, 800);
    ScanReport ba = implication_scan(b, a, {3, 5, 7, 11}, 800);
    REQUIRE(ab.entries.size() == ba.entries.size());
    for (std::size_t i = 0; i < ab.entries.size(); ++i) {
        CHECK(ab.entries[i].forward.holds == ba.entries[i].reverse.holds);
        CHECK(ab.entries[i].forward.witnesses == ba.entries[i].reverse.witnesses);
        CHECK(ab.entries[i].reverse.witnesses == ba.entries[i].forward.witnesses);
        CHECK(ab.entries[i].uninformative_a == ba.entries[i].uninformative_b);
    }
}

TEST_CASE("scan skips p = ell and bad primes", "[criterion]") {
    const CurveQ& a = corpus_find("cm-i")->curve;
    const CurveQ& b = corpus_find("tors5")->curve; // bad at 11
    ScanReport r = implication_scan(a, b, {3, 5, 7, 11}, 300);
    for (const auto& e : r.entries)
        for (const auto& w : {e.forward.witnesses, e.reverse.witnesses})
            for (u64 p : w) {
                CHECK(p != e.ell);
                CHECK(p != 11); // common good primes only
                CHECK(p != 2);
                CHECK(p != 3);
            }
}

TEST_CASE("faltings_check certificates", "[criterion]") {
    const CurveQ& e1 = corpus_find("cm-i")->curve;
    // twist by 2: FirstMismatch(5, -2, 2)
    auto m = faltings_check(e1, corpus_find("cm-i-tw2")->curve, 10);
    REQUIRE(m.has_value());
    CHECK(m->p == 5);
    CHECK(m->ap_a == -2);
    CHECK(m->ap_b == 2);
    // reflexivity
    CHECK(!faltings_check(e1, e1, 300));
    // 2-isogenous pair: AllEqual (desk scale here, 10^4 in acceptance)
    CHECK(!faltings_check(e1, corpus_find("cm-i-velu2")->curve, 2000));
    // witness reproducibility from scratch
    CHECK(trace_ap(e1, m->p).a_p == m->ap_a);
    CHECK(trace_ap(corpus_find("cm-i-tw2")->curve, m->p).a_p == m->ap_b);
}

TEST_CASE("uninformative_ell detects forced divisibility", "[criterion]") {
    CHECK(uninformative_ell(corpus_find("tors5")->curve, 5, 2000));  // rational 5-torsion
    CHECK(uninformative_ell(corpus_find("cm-i")->curve, 2, 2000));   // full 2-torsion
    CHECK(!uninformative_ell(corpus_find("cm-i")->curve, 7, 100));
    CHECK(!uninformative_ell(corpus_find("disc37")->curve, 3, 500));
}

TEST_CASE("verdict combines the certificates", "[criterion]") {
    const CurveQ& a = corpus_find("cm-i")->curve;
    const CurveQ& b = corpus_find("cm-3")->curve;
    // non-isogenous pair: a_p witness, NotIsogenous
    {
        ScanReport r = implication_scan(a, b, {3, 5, 7}, 100);
        Verdict v = verdict(r, faltings_check(a, b, 100));
        CHECK(v.kind == Verdict::Kind::NotIsogenous);
        REQUIRE(v.ap_witness.has_value());
        CHECK(v.ap_witness->p == 5);
        CHECK(v.ap_witness->ap_a == -2);
        CHECK(v.ap_witness->ap_b == 0);
    }
    // forward violation alone also yields NotIsogenous
    {
        ScanReport r = implication_scan(b, a, {3}, 100); // reverse of the frozen example
        Verdict v = verdict(r, std::nullopt);
        CHECK(v.kind == Verdict::Kind::NotIsogenous);
        REQUIRE(v.phi_witness.has_value());
        CHECK(v.phi_witness->first == 3);
        CHECK(v.phi_witness->second == 5);
    }
    // isogenous pair: consistent with evidence
    {
        const CurveQ& q = corpus_find("cm-i-velu2")->curve;
        ScanReport r = implication_scan(a, q, {3, 5, 7, 11, 13}, 2000);
        Verdict v = verdict(r, faltings_check(a, q, 2000));
        CHECK(v.kind == Verdict::Kind::ConsistentWithIsogeny);
        CHECK(v.informative_ells > 0);
        CHECK(!v.no_information);
        CHECK(v.pmax == 2000);
    }
    // all ells uninformative on the b side: flagged "no information"
    {
        const CurveQ& t5 = corpus_find("tors5")->curve;
        ScanReport r = implication_scan(t5, t5, {5}, 2000);
        const EllEntry& e = entry_for(r, 5);
        CHECK(e.uninformative_a);
        CHECK(e.uninformative_b);
        Verdict v = verdict(r, faltings_check(t5, t5, 2000));
        CHECK(v.kind == Verdict::Kind::ConsistentWithIsogeny);
        CHECK(v.informative_ells == 0);
        CHECK(v.no_information);
    }
}

TEST_CASE("cm_heuristic separates the regimes", "[criterion]") {
    CmResult ci = cm_heuristic(corpus_find("cm-i")->curve, 3000);
    CHECK(ci.likely_cm);
    CHECK(ci.fraction > 0.4);
    CHECK(ci.fraction < 0.6);
    CHECK(ci.sampled > 0);
    CmResult c37 = cm_heuristic(corpus_find("disc37")->curve, 3000);
    CHECK(!c37.likely_cm);
    CHECK(c37.fraction < 0.1);
    CHECK_THROWS_AS(cm_heuristic(corpus_find("cm-i")->curve, 999), std::invalid_argument);
    // table overload caps at pmax even when the table extends past it
    ApTable t = build_ap_table(corpus_find("cm-i")->curve, 3000);
    CmResult capped = cm_heuristic(t, 1500);
    CmResult direct = cm_heuristic(corpus_find("cm-i")->curve, 1500);
    CHECK(capped.sampled == direct.sampled);
    CHECK(capped.supersingular == direct.supersingular);
}
