#pragma once

#include <isoscan/counting.hpp>
#include <isoscan/criterion.hpp>
#include <isoscan/gsp.hpp>
#include <isoscan/velu.hpp>

#include <json.hpp>

#include <string>

namespace isoscan {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "isoscan-report/1";

/* Reports are plain JSON documents with a fixed field order and no volatile
 * content (no timestamps, hostnames, paths), so identical inputs produce
 * byte-identical output. csv/text renderings are projections of the JSON. */

inline std::string rat_str(const Rat& r) {
    Int n = numer(r), d = denom(r);
    std::string s = n.str();
    if (d != 1) s += "/" + d.str();
    return s;
}

inline Json curve_json(const CurveQ& c) {
    Json j;
    j["key"] = curve_key(c);
    j["coefficients"] = {c.a1.str(), c.a2.str(), c.a3.str(), c.a4.str(), c.a6.str()};
    j["discriminant"] = discriminant(c).str();
    j["j_invariant"] = rat_str(j_invariant(c));
    return j;
}

inline Json report_header(const std::string& command) {
    Json j;
    j["schema"] = kReportSchema;
    j["command"] = command;
    return j;
}

// Only records with p <= pmax are reported, so a warm cache extending past
// pmax cannot change the output.
inline Json ap_table_json(const ApTable& t, u64 pmax) {
    Json j = report_header("ap");
    j["curve"] = t.curve;
    j["pmax"] = pmax;
    j["records"] = Json::array();
    for (const auto& [p, rec] : t.records) {
        if (p > pmax) break;
        Json r;
        r["p"] = rec.p;
        r["a_p"] = rec.a_p;
        r["count"] = rec.count;
        j["records"].push_back(std::move(r));
    }
    return j;
}

inline Json frobenius_json(const FrobeniusClass& fc) {
    Json j;
    j["p"] = fc.p;
    j["ell"] = fc.ell;
    j["trace"] = fc.trace;
    j["det"] = fc.det;
    j["det_frob_minus_one"] = det_frob_minus_one(fc);
    return j;
}

inline Json phi_json(const CurveQ& c, const ApRecord& rec, u64 ell) {
    Json j = report_header("phi");
    j["curve"] = curve_key(c);
    j["p"] = rec.p;
    j["ell"] = ell;
    j["a_p"] = rec.a_p;
    j["count"] = rec.count;
    j["phi"] = rec.count % ell == 0 ? 1 : 0;
    j["frobenius"] = frobenius_json(frobenius_class(rec, ell));
    return j;
}

inline Json scan_report_json(const ScanReport& r) {
    Json j;
    j["curve_a"] = r.curve_a;
    j["curve_b"] = r.curve_b;
    j["pmax"] = r.pmax;
    j["ells"] = Json::array();
    for (const auto& e : r.entries) {
        Json je;
        je["ell"] = e.ell;
        je["forward_holds"] = e.forward.holds;
        je["forward_witnesses"] = e.forward.witnesses;
        je["reverse_holds"] = e.reverse.holds;
        je["reverse_witnesses"] = e.reverse.witnesses;
        je["uninformative_a"] = e.uninformative_a;
        je["uninformative_b"] = e.uninformative_b;
        j["ells"].push_back(std::move(je));
    }
    return j;
}

/* Reproduction lines for a NotIsogenous verdict: each witness can be
 * re-derived with a single `phi` or `ap` invocation against either curve. */
inline std::vector<std::string> reproduce_commands(const ScanReport& r, const Verdict& v) {
    std::vector<std::string> cmds;
    if (v.ap_witness) {
        cmds.push_back("isoscan ap --curve \"" + r.curve_a + "\" --pmax " +
                       std::to_string(v.ap_witness->p) + "  # a_p = " +
                       std::to_string(v.ap_witness->ap_a) + " at p = " +
                       std::to_string(v.ap_witness->p));
        cmds.push_back("isoscan ap --curve \"" + r.curve_b + "\" --pmax " +
                       std::to_string(v.ap_witness->p) + "  # a_p = " +
                       std::to_string(v.ap_witness->ap_b) + " at p = " +
                       std::to_string(v.ap_witness->p));
    }
    if (v.phi_witness) {
        auto [ell, p] = *v.phi_witness;
        cmds.push_back("isoscan phi --curve \"" + r.curve_a + "\" --p " + std::to_string(p) +
                       " --ell " + std::to_string(ell) + "  # phi = 1");
        cmds.push_back("isoscan phi --curve \"" + r.curve_b + "\" --p " + std::to_string(p) +
                       " --ell " + std::to_string(ell) + "  # phi = 0");
    }
    return cmds;
}

inline Json verdict_json(const ScanReport& r, const Verdict& v) {
    Json j = report_header("compare");
    j["curve_a"] = r.curve_a;
    j["curve_b"] = r.curve_b;
    j["verdict"] =
        v.kind == Verdict::Kind::NotIsogenous ? "NotIsogenous" : "ConsistentWithIsogeny";
    j["pmax"] = v.pmax;
    j["ells"] = v.ells;
    j["informative_ells"] = v.informative_ells;
    j["no_information"] = v.no_information;
    if (v.ap_witness) {
        Json w;
        w["p"] = v.ap_witness->p;
        w["ap_a"] = v.ap_witness->ap_a;
        w["ap_b"] = v.ap_witness->ap_b;
        j["ap_mismatch"] = std::move(w);
    } else {
        j["ap_mismatch"] = nullptr;
    }
    if (v.phi_witness) {
        Json w;
        w["ell"] = v.phi_witness->first;
        w["p"] = v.phi_witness->second;
        j["phi_violation"] = std::move(w);
    } else {
        j["phi_violation"] = nullptr;
    }
    j["scan"] = scan_report_json(r);
    if (v.kind == Verdict::Kind::NotIsogenous) j["reproduce"] = reproduce_commands(r, v);
    return j;
}

inline Json matrix_json(const MatrixModL& m) {
    Json rows = Json::array();
    for (unsigned i = 0; i < m.n; ++i) {
        Json row = Json::array();
        for (unsigned j = 0; j < m.n; ++j) row.push_back(m.at(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Json verification_json(const VerificationReport& r) {
    Json j = report_header("gsp-verify");
    j["ell"] = r.ell;
    j["g"] = r.g;
    j["c"] = r.c;
    j["multiplier_clause"] = r.multiplier_clause;
    j["fixed_point_clause"] = r.fixed_point_clause;
    j["subgroup_clause_applicable"] = r.subgroup_clause_applicable;
    j["subgroup_clause"] = r.subgroup_clause_applicable ? Json(r.subgroup_clause) : Json(nullptr);
    j["all_pass"] = r.all_pass();
    j["counterexamples"] = Json::array();
    for (const auto& m : r.counterexamples) j["counterexamples"].push_back(matrix_json(m));
    return j;
}

// Cartan suite summary for ell <= 23: sizes, closure, semisimplicity.
inline Json cartan_suite_json(u64 ell) {
    Json j;
    j["ell"] = ell;
    for (auto kind : {CartanKind::split, CartanKind::nonsplit}) {
        auto grp = cartan_subgroup(ell, kind);
        bool closed = true, ss = true;
        for (const auto& a : grp) {
            if (!is_semisimple(a)) ss = false;
            for (const auto& b : grp) {
                auto p = mat_mul(a, b);
                bool found = false;
                for (const auto& m : grp)
                    if (m == p) {
                        found = true;
                        break;
                    }
                if (!found) {
                    closed = false;
                    break;
                }
            }
            if (!closed) break;
        }
        Json jk;
        jk["order"] = grp.size();
        jk["expected_order"] =
            kind == CartanKind::split ? (ell - 1) * (ell - 1) : ell * ell - 1;
        jk["closed_under_multiplication"] = closed;
        jk["all_semisimple"] = ss;
        j[kind == CartanKind::split ? "split" : "nonsplit"] = std::move(jk);
    }
    return j;
}

inline Json cm_json(const CurveQ& c, const CmResult& r, u64 pmax) {
    Json j = report_header("cm");
    j["curve"] = curve_key(c);
    j["pmax"] = pmax;
    j["sampled"] = r.sampled;
    j["supersingular"] = r.supersingular;
    j["fraction"] = r.fraction;
    j["verdict"] = r.likely_cm ? "LikelyCM" : "LikelyNonCM";
    return j;
}

inline Json torsion_json(const CurveQ& c, u64 n, const std::vector<TorsionPoint>& pts) {
    Json j = report_header("torsion");
    j["curve"] = curve_key(c);
    j["n"] = n;
    j["points"] = Json::array();
    for (const auto& pt : pts) {
        Json jp;
        if (pt.inf) {
            jp["x"] = nullptr;
            jp["y"] = nullptr;
        } else {
            jp["x"] = rat_str(pt.x);
            jp["y"] = rat_str(pt.y);
        }
        jp["order"] = pt.order;
        j["points"].push_back(std::move(jp));
    }
    return j;
}

inline Json isogeny_json(const IsogenyPair& iso) {
    Json j = report_header("velu");
    j["source"] = curve_json(iso.source);
    j["target"] = curve_json(iso.target);
    j["degree"] = iso.degree;
    Json k;
    k["x"] = rat_str(iso.kernel.x);
    k["y"] = rat_str(iso.kernel.y);
    k["order"] = iso.kernel.order;
    j["kernel_generator"] = std::move(k);
    return j;
}

inline Json twist_json(const CurveQ& c, const CurveQ& short_model, i64 d, const CurveQ& tw) {
    Json j = report_header("twist");
    j["source"] = curve_json(c);
    if (!(short_model == c)) j["short_model"] = curve_json(short_model);
    j["d"] = d;
    j["twist"] = curve_json(tw);
    return j;
}

/* ---- csv / text projections ------------------------------------------- */

namespace detail {

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

inline std::string scalar_str(const Json& j) {
    if (j.is_string()) return j.get<std::string>();
    return j.dump();
}

inline void flatten_json(const Json& j, const std::string& prefix,
                         std::vector<std::pair<std::string, std::string>>& rows) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items())
            flatten_json(v, prefix.empty() ? k : prefix + "." + k, rows);
    } else if (j.is_array()) {
        std::size_t i = 0;
        for (const auto& v : j) flatten_json(v, prefix + "[" + std::to_string(i++) + "]", rows);
        if (j.empty()) rows.emplace_back(prefix, "[]");
    } else {
        rows.emplace_back(prefix, scalar_str(j));
    }
}

inline void text_render(const Json& j, unsigned indent, std::string& out) {
    std::string pad(indent, ' ');
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) {
            if (v.is_object() || (v.is_array() && !v.empty() && !v.front().is_primitive())) {
                out += pad + k + ":\n";
                text_render(v, indent + 2, out);
            } else if (v.is_array()) {
                out += pad + k + ": ";
                std::string inner;
                for (const auto& x : v) {
                    if (!inner.empty()) inner += ", ";
                    inner += scalar_str(x);
                }
                out += "[" + inner + "]\n";
            } else {
                out += pad + k + ": " + scalar_str(v) + "\n";
            }
        }
    } else if (j.is_array()) {
        std::size_t i = 0;
        for (const auto& v : j) {
            out += pad + "- [" + std::to_string(i++) + "]\n";
            text_render(v, indent + 2, out);
        }
    } else {
        out += pad + scalar_str(j) + "\n";
    }
}

} // namespace detail

// Canonical rendering: JSON with 2-space indent and trailing newline.
inline std::string render_json(const Json& j) { return j.dump(2) + "\n"; }

// csv projection: `field,value` rows over the flattened document.
inline std::string render_csv(const Json& j) {
    std::vector<std::pair<std::string, std::string>> rows;
    detail::flatten_json(j, "", rows);
    std::string out = "field,value\n";
    for (const auto& [k, v] : rows)
        out += detail::csv_escape(k) + "," + detail::csv_escape(v) + "\n";
    return out;
}

// text projection: indented `key: value` listing.
inline std::string render_text(const Json& j) {
    std::string out;
    detail::text_render(j, 0, out);
    return out;
}

inline std::string render(const Json& j, const std::string& format) {
    if (format == "json") return render_json(j);
    if (format == "csv") return render_csv(j);
    if (format == "text") return render_text(j);
    throw std::invalid_argument("unknown format: " + format);
}

} // namespace isoscan
