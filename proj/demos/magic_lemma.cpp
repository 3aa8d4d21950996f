/* Exhaustive finite-group checks behind the local-global argument: the
 * multiplier-1 "magic" elements of GSp_2g(F_ell) and the Cartan subgroups of
 * GL_2(F_ell). */

#include <isoscan/gsp.hpp>

#include <cstdio>

using namespace isoscan;

int main() {
    for (u64 ell : {5ULL, 11ULL})
        for (unsigned g = 1; g <= 3; ++g) {
            u64 c = ell - 2;
            VerificationReport rep = verify_magic_lemma(ell, g, c);
            std::printf("ell = %2llu  g = %u  c = %llu : clauses %s/%s/%s -> %s\n",
                        static_cast<unsigned long long>(ell), g,
                        static_cast<unsigned long long>(c),
                        rep.multiplier_clause ? "pass" : "FAIL",
                        rep.fixed_point_clause ? "pass" : "FAIL",
                        !rep.subgroup_clause_applicable ? "n/a"
                        : rep.subgroup_clause          ? "pass"
                                                       : "FAIL",
                        rep.all_pass() ? "ok" : "COUNTEREXAMPLE");
        }

    std::printf("\n");
    for (u64 ell : {3ULL, 5ULL, 7ULL}) {
        auto split = cartan_subgroup(ell, CartanKind::split);
        auto nonsplit = cartan_subgroup(ell, CartanKind::nonsplit);
        std::printf("ell = %llu : |split Cartan| = %zu = (ell-1)^2, "
                    "|nonsplit Cartan| = %zu = ell^2-1\n",
                    static_cast<unsigned long long>(ell), split.size(), nonsplit.size());
    }
    return 0;
}
