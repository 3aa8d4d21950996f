/* Library-level walkthrough of the isogeny criteria: build a ground-truth
 * isogenous pair with a Velu quotient, then compare it against a curve from a
 * different isogeny class and print the certificates. */

#include <isoscan/corpus.hpp>
#include <isoscan/criterion.hpp>
#include <isoscan/velu.hpp>

#include <cstdio>

using namespace isoscan;

static void report_pair(const CurveQ& a, const CurveQ& b, u64 pmax) {
    std::printf("%s  vs  %s   (p <= %llu)\n", curve_key(a).c_str(), curve_key(b).c_str(),
                static_cast<unsigned long long>(pmax));

    auto mismatch = faltings_check(a, b, pmax);
    if (mismatch)
        std::printf("  a_p mismatch at p = %llu: %lld vs %lld -> not isogenous\n",
                    static_cast<unsigned long long>(mismatch->p),
                    static_cast<long long>(mismatch->ap_a),
                    static_cast<long long>(mismatch->ap_b));
    else
        std::printf("  a_p equal at every common good prime\n");

    ScanReport scan = implication_scan(a, b, {3, 5, 7, 11, 13}, pmax);
    for (const EllEntry& e : scan.entries) {
        std::printf("  ell = %2llu: forward %s, reverse %s%s\n",
                    static_cast<unsigned long long>(e.ell),
                    e.forward.holds ? "holds" : "violated",
                    e.reverse.holds ? "holds" : "violated",
                    e.uninformative_b ? "  [uninformative]" : "");
        if (!e.forward.holds)
            std::printf("           first forward witness p = %llu\n",
                        static_cast<unsigned long long>(e.forward.witnesses.front()));
    }

    Verdict v = verdict(scan, mismatch);
    std::printf("  verdict: %s\n\n", v.kind == Verdict::Kind::NotIsogenous
                                         ? "NotIsogenous"
                                         : "ConsistentWithIsogeny");
}

int main() {
    const CurveQ e1 = corpus_find("cm-i")->curve; // y^2 = x^3 - x
    const CurveQ e3 = corpus_find("cm-3")->curve; // y^2 = x^3 + 1

    // quotient of e1 by its 2-torsion point (0,0): a certified isogenous pair
    auto pts = rational_torsion(e1, 2);
    IsogenyPair iso = velu_quotient(e1, pts[1]); // points sorted by x: (-1,0),(0,0),(1,0)
    std::printf("velu: %s / <(0,0)>  =  %s\n\n", curve_key(e1).c_str(),
                curve_key(iso.target).c_str());

    report_pair(iso.source, iso.target, 2000);
    report_pair(e1, e3, 2000);
    return 0;
}
