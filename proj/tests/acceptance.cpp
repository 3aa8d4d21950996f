/* Acceptance gate: eleven numbered criteria, one pass/fail line each.
 *
 *   acceptance        run all criteria
 *   acceptance N      run criterion N only
 *
 * Exit status 0 when every executed criterion passes. Criteria with a stated
 * wall-clock budget fail when they exceed it.
 */
#include <isoscan/cli.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

using namespace isoscan;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

Outcome fail(std::string d) { return {false, std::move(d)}; }

u64 mod_norm(i64 v, u64 m) {
    i64 r = v % static_cast<i64>(m);
    if (r < 0) r += static_cast<i64>(m);
    return static_cast<u64>(r);
}

const std::vector<u64> kOdd15 = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

/* 1. Phi_ell(p) = 1 iff det(Frob - 1) = 0 iff (1 - a_p + p) = 0 mod ell, for
 * every main-corpus curve, good 5 <= p <= 10^4, prime ell <= 50, ell != p. */
Outcome crit1() {
    static const u64 ells[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47};
    u64 checked = 0;
    for (const auto& e : corpus_main()) {
        ApTable t = build_ap_table(e.curve, 10000, nullptr, 1);
        for (const auto& [p, rec] : t.records) {
            for (u64 ell : ells) {
                if (ell == p) continue;
                bool phi = phi_ell(e.curve, p, ell) == 1;
                bool lemma = det_frob_minus_one(frobenius_class(rec, ell)) == 0;
                bool formula = mod_norm(1 - rec.a_p + static_cast<i64>(p), ell) == 0;
                if (phi != lemma || phi != formula)
                    return fail(e.label + " p=" + std::to_string(p) +
                                " ell=" + std::to_string(ell) + ": phi=" +
                                std::to_string(phi) + " lemma=" + std::to_string(lemma) +
                                " formula=" + std::to_string(formula));
                ++checked;
            }
        }
    }
    return {true, std::to_string(checked) + " (curve,p,ell) triples"};
}

// 2. count_bsgs agrees with count_naive on every corpus curve, good p <= 3000.
Outcome crit2() {
    u64 checked = 0;
    for (const auto& e : corpus()) {
        for (u64 p = 2; p <= 3000; ++p) {
            if (!is_prime(p) || !good_reduction(e.curve, p)) continue;
            ReducedCurve E = reduce_mod_p(e.curve, p);
            u64 naive = count_naive(E), bsgs = count_bsgs(E);
            if (naive != bsgs)
                return fail(e.label + " p=" + std::to_string(p) + ": naive=" +
                            std::to_string(naive) + " bsgs=" + std::to_string(bsgs));
            ++checked;
        }
    }
    return {true, std::to_string(checked) + " (curve,p) pairs"};
}

// 3. Hasse bound a_p^2 <= 4p on every record criteria 1-2 generate.
Outcome crit3() {
    u64 checked = 0;
    auto hasse = [&](u64 p, i64 a) -> bool {
        ++checked;
        return a * a <= 4 * static_cast<i64>(p);
    };
    for (const auto& e : corpus_main()) {
        ApTable t = build_ap_table(e.curve, 10000);
        for (const auto& [p, rec] : t.records)
            if (!hasse(p, rec.a_p))
                return fail(e.label + " p=" + std::to_string(p) +
                            " a_p=" + std::to_string(rec.a_p));
    }
    for (const auto& e : corpus()) {
        for (u64 p = 2; p <= 3000; ++p) {
            if (!is_prime(p) || !good_reduction(e.curve, p)) continue;
            u64 n = count_naive(reduce_mod_p(e.curve, p));
            i64 a = static_cast<i64>(p + 1) - static_cast<i64>(n);
            if (!hasse(p, a))
                return fail(e.label + " p=" + std::to_string(p) + " a_p=" + std::to_string(a));
        }
    }
    return {true, std::to_string(checked) + " records"};
}

/* 4. The Velu pair y^2 = x^3 - x and y^2 = x^3 + 4x: all a_p equal up to
 * 10^4 and the implication scan is violation-free in both directions. */
Outcome crit4() {
    ApTable ta = build_ap_table(corpus_find("cm-i")->curve, 10000);
    ApTable tb = build_ap_table(corpus_find("cm-i-velu2")->curve, 10000);
    if (auto m = faltings_check(ta, tb, 10000))
        return fail("a_p mismatch at p=" + std::to_string(m->p));
    ScanReport r = implication_scan(ta, tb, kOdd15, 10000);
    for (const auto& e : r.entries) {
        if (!e.forward.holds || !e.forward.witnesses.empty())
            return fail("forward violation at ell=" + std::to_string(e.ell));
        if (!e.reverse.holds || !e.reverse.witnesses.empty())
            return fail("reverse violation at ell=" + std::to_string(e.ell));
    }
    return {true, std::to_string(r.entries.size()) + " ells clean"};
}

/* 5. Non-isogeny certificates: (a) x^3 - x vs x^3 + 1 has the reverse
 * witness (p=5, ell=3) and a NotIsogenous verdict with an a_p mismatch at
 * p <= 100; (b) x^3 - x vs its twist by 2 mismatches first at p = 5 with
 * a_p values (-2, +2). */
Outcome crit5() {
    CurveQ a = corpus_find("cm-i")->curve;
    ApTable ta = build_ap_table(a, 100);
    ApTable tb = build_ap_table(corpus_find("cm-3")->curve, 100);
    ScanReport scan = implication_scan(ta, tb, kOdd15, 100);
    const EllEntry* e3 = nullptr;
    for (const auto& e : scan.entries)
        if (e.ell == 3) e3 = &e;
    if (!e3) return fail("no ell=3 entry");
    if (e3->reverse.holds || e3->reverse.witnesses.empty() || e3->reverse.witnesses.front() != 5)
        return fail("expected reverse witness p=5 at ell=3");
    auto mism = faltings_check(ta, tb, 100);
    Verdict v = verdict(scan, mism);
    if (v.kind != Verdict::Kind::NotIsogenous || !v.ap_witness || v.ap_witness->p > 100)
        return fail("expected NotIsogenous with a_p mismatch at p <= 100");

    ApTable tw = build_ap_table(quadratic_twist(a, 2), 100);
    auto mb = faltings_check(ta, tw, 100);
    if (!mb || mb->p != 5 || mb->ap_a != -2 || mb->ap_b != 2)
        return fail("expected first twist mismatch (p=5, -2, +2)");
    return {true, "reverse witness (5,3); twist mismatch (5,-2,+2)"};
}

// 6. uninformative_ell on the pinned (curve, ell, pmax) triples.
Outcome crit6() {
    if (!uninformative_ell(corpus_find("tors5")->curve, 5, 10000))
        return fail("tors5 ell=5 should be uninformative at 10^4");
    if (!uninformative_ell(corpus_find("cm-i")->curve, 2, 10000))
        return fail("cm-i ell=2 should be uninformative at 10^4");
    if (uninformative_ell(corpus_find("cm-i")->curve, 7, 100))
        return fail("cm-i ell=7 should be informative at 100");
    return {true, "three pinned triples"};
}

// 7. a_p(twist by d) = legendre(d, p) a_p for d in {2, -1}, good p <= 10^3.
Outcome crit7() {
    std::vector<CurveQ> bases = {corpus_find("cm-i")->curve,
                                 to_short(corpus_find("disc37")->curve)};
    u64 checked = 0;
    for (const auto& base : bases) {
        for (i64 d : {i64(2), i64(-1)}) {
            CurveQ tw = quadratic_twist(base, d);
            for (u64 p = 5; p <= 1000; ++p) {
                if (!is_prime(p)) continue;
                if (!good_reduction(base, p) || !good_reduction(tw, p)) continue;
                i64 expect = legendre(d, p) * trace_ap(base, p).a_p;
                i64 got = trace_ap(tw, p).a_p;
                if (got != expect)
                    return fail("d=" + std::to_string(d) + " p=" + std::to_string(p) +
                                ": got " + std::to_string(got) + ", want " +
                                std::to_string(expect));
                ++checked;
            }
        }
    }
    return {true, std::to_string(checked) + " (base,d,p) triples"};
}

// 8. verify_magic_lemma passes for all ell in {3,5,7,11,13}, g in 1..3,
// 1 <= c <= ell-2.
Outcome crit8() {
    u64 checked = 0;
    for (u64 ell : {3, 5, 7, 11, 13}) {
        for (unsigned g = 1; g <= 3; ++g) {
            for (u64 c = 1; c + 2 <= ell; ++c) {
                VerificationReport rep = verify_magic_lemma(ell, g, c);
                if (!rep.all_pass())
                    return fail("ell=" + std::to_string(ell) + " g=" + std::to_string(g) +
                                " c=" + std::to_string(c));
                ++checked;
            }
        }
    }
    return {true, std::to_string(checked) + " (ell,g,c) tuples"};
}

// 9. Cartan subgroups for ell in {3,5,7}: exact orders, multiplicative
// closure, and semisimplicity of every element.
Outcome crit9() {
    for (u64 ell : {3, 5, 7}) {
        for (auto kind : {CartanKind::split, CartanKind::nonsplit}) {
            auto grp = cartan_subgroup(ell, kind);
            const char* name = kind == CartanKind::split ? "split" : "nonsplit";
            u64 expect = kind == CartanKind::split ? (ell - 1) * (ell - 1) : ell * ell - 1;
            if (grp.size() != expect)
                return fail(std::string(name) + " ell=" + std::to_string(ell) + ": order " +
                            std::to_string(grp.size()) + ", want " + std::to_string(expect));
            for (const auto& A : grp) {
                if (!is_semisimple(A))
                    return fail(std::string(name) + " ell=" + std::to_string(ell) +
                                ": non-semisimple element");
                for (const auto& B : grp) {
                    MatrixModL P = mat_mul(A, B);
                    bool found = false;
                    for (const auto& M : grp)
                        if (M == P) {
                            found = true;
                            break;
                        }
                    if (!found)
                        return fail(std::string(name) + " ell=" + std::to_string(ell) +
                                    ": not closed under multiplication");
                }
            }
        }
    }
    return {true, "6 subgroups exhausted"};
}

// 10. Supersingular fractions at pmax = 10^4: CM curves land in [0.4, 0.6],
// the non-CM curve in [0, 0.1].
Outcome crit10() {
    auto fraction = [](const char* label) {
        ApTable t = build_ap_table(corpus_find(label)->curve, 10000);
        return cm_heuristic(t, 10000).fraction;
    };
    for (const char* label : {"cm-i", "cm-3"}) {
        double f = fraction(label);
        if (f < 0.4 || f > 0.6)
            return fail(std::string(label) + ": fraction " + std::to_string(f) +
                        " outside [0.4, 0.6]");
    }
    double f = fraction("disc37");
    if (f < 0.0 || f > 0.1)
        return fail("disc37: fraction " + std::to_string(f) + " outside [0, 0.1]");
    return {true, "fractions within stated ranges"};
}

// 11. Cold and warm cache runs emit byte-identical reports; ApTable
// serialization round-trips byte-exactly and is thread-count independent.
Outcome crit11() {
    fs::path tmp = fs::temp_directory_path() /
                   ("isoscan-acceptance-" + std::to_string(::getpid()));
    fs::remove_all(tmp);
    fs::create_directories(tmp);
    auto go = [&]() {
        std::ostringstream out, err;
        std::vector<std::string> args = {"compare", "--a",        "cm-i",
                                         "--b",     "cm-3",       "--pmax",
                                         "300",     "--cache-dir", tmp.string()};
        int rc = run_command(args, out, err);
        return std::make_pair(rc, out.str());
    };
    auto cold = go();
    auto warm = go();
    fs::remove_all(tmp);
    if (cold.first != 0 || warm.first != 0) return fail("compare exited nonzero");
    if (cold.second != warm.second) return fail("cold and warm reports differ");

    ApTable t = build_ap_table(corpus_find("tors5")->curve, 2000, nullptr, 1);
    std::string s = serialize_ap_table(t);
    if (serialize_ap_table(parse_ap_table(s)) != s) return fail("round trip not byte-exact");
    ApTable t4 = build_ap_table(corpus_find("tors5")->curve, 2000, nullptr, 4);
    if (serialize_ap_table(t4) != s) return fail("thread count changed the table");
    return {true, "reports and tables byte-stable"};
}

struct Entry {
    int id;
    const char* desc;
    double budget_s; // 0 = no stated budget
    Outcome (*fn)();
};

const Entry kEntries[] = {
    {1, "lemma-frob equivalence across the corpus", 60.0, crit1},
    {2, "bsgs/naive counting agreement up to 3000", 30.0, crit2},
    {3, "Hasse bound on all produced records", 0.0, crit3},
    {4, "isogenous pair has equal a_p and clean scans", 60.0, crit4},
    {5, "non-isogeny certificates with exact witnesses", 0.0, crit5},
    {6, "uninformative-ell detection", 0.0, crit6},
    {7, "quadratic twist a_p law", 0.0, crit7},
    {8, "magic lemma exhaustive verification", 10.0, crit8},
    {9, "Cartan orders, closure, semisimplicity", 10.0, crit9},
    {10, "supersingular-fraction CM heuristic ranges", 60.0, crit10},
    {11, "byte-identical reports and table round-trips", 0.0, crit11},
};

bool run_entry(const Entry& e) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = e.fn();
    } catch (const std::exception& ex) {
        o = fail(std::string("exception: ") + ex.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool overtime = e.budget_s > 0 && secs > e.budget_s;
    bool pass = o.pass && !overtime;
    std::string note;
    if (!o.detail.empty()) note += " [" + o.detail + "]";
    if (overtime)
        note += " [over budget: " + std::to_string(secs) + "s > " +
                std::to_string(e.budget_s) + "s]";
    std::printf("criterion %2d: %s — %s%s (%.2fs)\n", e.id, pass ? "PASS" : "FAIL", e.desc,
                note.c_str(), secs);
    std::fflush(stdout);
    return pass;
}

} // namespace

int main(int argc, char** argv) {
    if (argc > 2) {
        std::fprintf(stderr, "usage: %s [criterion 1..11]\n", argv[0]);
        return 2;
    }
    if (argc == 2) {
        int id = std::atoi(argv[1]);
        for (const auto& e : kEntries)
            if (e.id == id) return run_entry(e) ? 0 : 1;
        std::fprintf(stderr, "usage: %s [criterion 1..11]\n", argv[0]);
        return 2;
    }
    bool all = true;
    for (const auto& e : kEntries) all = run_entry(e) && all;
    return all ? 0 : 1;
}
