#pragma once

#include <isoscan/curves.hpp>

#include <string>
#include <vector>

namespace isoscan {

/* Small pinned corpus of curves over Q used by the demos and the acceptance
 * suite. Labels are local to this project.
 *
 *   cm-i        y^2 = x^3 - x            CM by Z[i], j = 1728, rank 0
 *   cm-i-velu2  y^2 = x^3 + 4x           2-isogenous quotient of cm-i
 *   cm-3        y^2 = x^3 + 1            CM by Z[zeta_3], j = 0
 *   disc37      y^2 + y = x^3 - x        conductor 37, rank 1, no CM
 *   tors5       y^2 + y = x^3 - x^2 - 10x - 20   conductor 11, 5-torsion
 *
 * Companions (quadratic twists, isogenous only to twists of the above):
 *   cm-i-tw2    y^2 = x^3 - 4x           cm-i twisted by 2
 *   cm-3-tw2    y^2 = x^3 + 8            cm-3 twisted by 2
 */
struct CorpusEntry {
    std::string label;
    CurveQ curve;
    bool cm = false;
    std::string note;         // free-form: torsion / relation remarks
    std::string companion_of; // empty for main entries
};

inline const std::vector<CorpusEntry>& corpus() {
    static const std::vector<CorpusEntry> entries = {
        {"cm-i", {0, 0, 0, -1, 0}, true, "CM by Z[i]; full rational 2-torsion", ""},
        {"cm-i-velu2", {0, 0, 0, 4, 0}, true, "2-isogenous to cm-i via the kernel (0,0)", ""},
        {"cm-3", {0, 0, 0, 0, 1}, true, "CM by Z[zeta_3]; rational 2- and 3-torsion points", ""},
        {"disc37", {0, 0, 1, -1, 0}, false, "conductor 37, rank 1, trivial torsion", ""},
        {"tors5", {0, -1, 1, -10, -20}, false, "conductor 11, rational 5-torsion", ""},
        {"cm-i-tw2", {0, 0, 0, -4, 0}, true, "quadratic twist of cm-i by 2", "cm-i"},
        {"cm-3-tw2", {0, 0, 0, 0, 8}, true, "quadratic twist of cm-3 by 2", "cm-3"},
    };
    return entries;
}

// The five primary entries (no twist companions).
inline std::vector<CorpusEntry> corpus_main() {
    std::vector<CorpusEntry> out;
    for (const auto& e : corpus())
        if (e.companion_of.empty()) out.push_back(e);
    return out;
}

inline const CorpusEntry* corpus_find(const std::string& label) {
    for (const auto& e : corpus())
        if (e.label == label) return &e;
    return nullptr;
}

} // namespace isoscan
