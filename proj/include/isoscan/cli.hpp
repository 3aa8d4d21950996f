#pragma once

#include <isoscan/aptable_io.hpp>
#include <isoscan/corpus.hpp>
#include <isoscan/report.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

namespace isoscan {

/* Shared CLI configuration. The cache directory is empty by default (no
 * persistence); --cache-dir or ISOSCAN_CACHE_DIR enables it. threads = 0
 * means hardware concurrency; any value yields identical output. */
struct Config {
    u64 pmax = 10000;
    std::vector<u64> ells = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
    std::string cache_dir;
    std::string format = "json";
    unsigned threads = 0;
};

// Curve arguments accept corpus labels as well as literal "[a1,a2,a3,a4,a6]"
// / "A,B" forms.
inline CurveQ resolve_curve(const std::string& s) {
    if (const CorpusEntry* e = corpus_find(s)) return e->curve;
    return parse_curve(s);
}

namespace detail {

inline Rat parse_rat(const std::string& s) {
    try {
        Rat r(s);
        return r;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad rational number: `" + s + "`");
    }
}

} // namespace detail

/* Build the a_p table for c up to pmax, reading and updating the on-disk
 * cache when one is configured. Results are identical with a cold or warm
 * cache: build_ap_table only extends, and reports filter to p <= pmax. */
inline ApTable cached_table(const CurveQ& c, u64 pmax, const Config& cfg) {
    if (cfg.cache_dir.empty()) return build_ap_table(c, pmax, nullptr, cfg.threads);
    namespace fs = std::filesystem;
    fs::path dir(cfg.cache_dir);
    fs::create_directories(dir);
    fs::path file = dir / cache_file_name(c);
    ApTable cache;
    bool warm = fs::exists(file);
    if (warm) cache = load_ap_table(file, c);
    ApTable t = build_ap_table(c, pmax, warm ? &cache : nullptr, cfg.threads);
    if (!warm || t.records.size() != cache.records.size()) store_ap_table(t, file);
    return t;
}

/* Entry point behind main(): args exclude the program name. Exit status 0 on
 * success, 1 when --check is set and the mathematical verdict is negative,
 * 2 on usage or input errors. */
inline int run_command(const std::vector<std::string>& args, std::ostream& out,
                       std::ostream& err) {
    CLI::App app{"local-global isogeny criteria for elliptic curves over Q"};
    app.name("isoscan");
    app.require_subcommand(1);

    Config cfg;
    auto add_common = [&cfg](CLI::App* sub) {
        sub->add_option("--format", cfg.format, "output format: json, csv, or text")
            ->check(CLI::IsMember({"json", "csv", "text"}));
        sub->add_option("--cache-dir", cfg.cache_dir,
                        "directory for a_p table persistence (default: no cache)")
            ->envname("ISOSCAN_CACHE_DIR");
        sub->add_option("--threads", cfg.threads,
                        "worker threads for table building (0 = hardware)");
    };

    std::string curve_s, a_s, b_s, x_s, y_s;
    u64 p = 0, ell = 0, n = 0, g = 1, cc = 1;
    i64 d = 0;
    bool check = false;

    CLI::App* ap_cmd = app.add_subcommand("ap", "build or extend an a_p table");
    ap_cmd->add_option("--curve", curve_s, "curve: [a1,a2,a3,a4,a6], A,B, or corpus label")
        ->required();
    ap_cmd->add_option("--pmax", cfg.pmax, "largest prime to include (default 10000)");
    add_common(ap_cmd);

    CLI::App* compare_cmd =
        app.add_subcommand("compare", "a_p comparison, implication scan, and verdict");
    compare_cmd->add_option("--a", a_s, "first curve")->required();
    compare_cmd->add_option("--b", b_s, "second curve")->required();
    compare_cmd->add_option("--pmax", cfg.pmax, "prime bound (default 10000)");
    compare_cmd
        ->add_option("--ells", cfg.ells, "comma-separated odd primes (default 3..53)")
        ->delimiter(',');
    compare_cmd->add_flag("--check", check, "exit 1 when the verdict is NotIsogenous");
    add_common(compare_cmd);

    CLI::App* phi_cmd = app.add_subcommand("phi", "evaluate Phi_ell at one prime");
    phi_cmd->add_option("--curve", curve_s, "curve")->required();
    phi_cmd->add_option("--p", p, "good prime >= 5")->required();
    phi_cmd->add_option("--ell", ell, "prime ell != p")->required();
    add_common(phi_cmd);

    CLI::App* torsion_cmd =
        app.add_subcommand("torsion", "rational points of exact order n");
    torsion_cmd->add_option("--curve", curve_s, "curve")->required();
    torsion_cmd->add_option("--n", n, "order, 2..7")->required();
    add_common(torsion_cmd);

    CLI::App* velu_cmd = app.add_subcommand("velu", "quotient by a rational kernel point");
    velu_cmd->add_option("--curve", curve_s, "curve")->required();
    velu_cmd->add_option("--ell", ell, "kernel order: 2, 3, 5, or 7")->required();
    auto* xo = velu_cmd->add_option("--x", x_s, "kernel x (default: first rational point)");
    velu_cmd->add_option("--y", y_s, "kernel y")->needs(xo);
    add_common(velu_cmd);

    CLI::App* twist_cmd = app.add_subcommand("twist", "quadratic twist of a curve");
    twist_cmd->add_option("--curve", curve_s, "curve (converted to short form if needed)")
        ->required();
    twist_cmd->add_option("--d", d, "squarefree nonzero twist parameter")->required();
    add_common(twist_cmd);

    CLI::App* gsp_cmd =
        app.add_subcommand("gsp-verify", "exhaustive GSp lemma and Cartan checks");
    gsp_cmd->add_option("--ell", ell, "odd prime")->required();
    gsp_cmd->add_option("--g", g, "genus, 1..3")->required();
    gsp_cmd->add_option("--c", cc, "index bound for the subgroup clause")->required();
    gsp_cmd->add_flag("--check", check, "exit 1 when any applicable clause fails");
    add_common(gsp_cmd);

    CLI::App* cm_cmd = app.add_subcommand("cm", "supersingular-fraction CM heuristic");
    cm_cmd->add_option("--curve", curve_s, "curve")->required();
    cm_cmd->add_option("--pmax", cfg.pmax, "prime bound, >= 1000 (default 10000)");
    add_common(cm_cmd);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(std::move(rev));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    try {
        if (*ap_cmd) {
            if (cfg.pmax < 5) throw std::invalid_argument("--pmax must be at least 5");
            CurveQ c = resolve_curve(curve_s);
            ApTable t = cached_table(c, cfg.pmax, cfg);
            out << render(ap_table_json(t, cfg.pmax), cfg.format);
            return 0;
        }
        if (*compare_cmd) {
            CurveQ a = resolve_curve(a_s), b = resolve_curve(b_s);
            ApTable ta = cached_table(a, cfg.pmax, cfg);
            ApTable tb = cached_table(b, cfg.pmax, cfg);
            ScanReport scan = implication_scan(ta, tb, cfg.ells, cfg.pmax);
            std::optional<ApMismatch> mism = faltings_check(ta, tb, cfg.pmax);
            Verdict v = verdict(scan, mism);
            out << render(verdict_json(scan, v), cfg.format);
            return check && v.kind == Verdict::Kind::NotIsogenous ? 1 : 0;
        }
        if (*phi_cmd) {
            CurveQ c = resolve_curve(curve_s);
            ApRecord rec = trace_ap(c, p);
            out << render(phi_json(c, rec, ell), cfg.format);
            return 0;
        }
        if (*torsion_cmd) {
            CurveQ c = resolve_curve(curve_s);
            auto pts = rational_torsion(c, static_cast<unsigned>(n));
            out << render(torsion_json(c, n, pts), cfg.format);
            return 0;
        }
        if (*velu_cmd) {
            CurveQ c = resolve_curve(curve_s);
            TorsionPoint ker;
            if (!x_s.empty()) {
                if (y_s.empty()) throw std::invalid_argument("--x requires --y");
                ker.inf = false;
                ker.x = detail::parse_rat(x_s);
                ker.y = detail::parse_rat(y_s);
                // exact order of the supplied point, must equal --ell
                WModel<Rat> Ec{Rat(c.a1), Rat(c.a2), Rat(c.a3), Rat(c.a4), Rat(c.a6)};
                WPoint<Rat> Pt = WPoint<Rat>::affine(ker.x, ker.y);
                if (!wp_on_curve(Ec, Pt))
                    throw std::invalid_argument("kernel point is not on the curve");
                unsigned order = 0;
                WPoint<Rat> Q = Pt; // Q = kP at iteration k
                for (unsigned k = 1; k <= 7 && order == 0; ++k) {
                    if (Q.inf)
                        order = k;
                    else
                        Q = wp_add(Ec, Q, Pt);
                }
                if (order != ell)
                    throw std::invalid_argument("kernel point does not have exact order " +
                                                std::to_string(ell));
                ker.order = order;
            } else {
                auto pts = rational_torsion(c, static_cast<unsigned>(ell));
                if (pts.empty())
                    throw std::invalid_argument("no rational point of order " +
                                                std::to_string(ell) + " on " + curve_key(c));
                ker = pts.front();
            }
            IsogenyPair iso = velu_quotient(c, ker);
            out << render(isogeny_json(iso), cfg.format);
            return 0;
        }
        if (*twist_cmd) {
            CurveQ c = resolve_curve(curve_s);
            CurveQ s = is_short(c) ? c : to_short(c);
            CurveQ tw = quadratic_twist(s, d);
            out << render(twist_json(c, s, d, tw), cfg.format);
            return 0;
        }
        if (*gsp_cmd) {
            VerificationReport rep = verify_magic_lemma(ell, static_cast<unsigned>(g), cc);
            Json doc = verification_json(rep);
            bool cartan_ok = true;
            if (ell <= 23) {
                Json cj = cartan_suite_json(ell);
                for (const char* kind : {"split", "nonsplit"})
                    cartan_ok = cartan_ok &&
                                cj[kind]["order"] == cj[kind]["expected_order"] &&
                                cj[kind]["closed_under_multiplication"].get<bool>() &&
                                cj[kind]["all_semisimple"].get<bool>();
                doc["cartan"] = std::move(cj);
            } else {
                doc["cartan"] = nullptr; // enumeration capped at ell = 23
            }
            out << render(doc, cfg.format);
            return check && !(rep.all_pass() && cartan_ok) ? 1 : 0;
        }
        if (*cm_cmd) {
            CurveQ c = resolve_curve(curve_s);
            if (cfg.pmax < 1000) throw std::invalid_argument("--pmax must be at least 1000");
            ApTable t = cached_table(c, cfg.pmax, cfg);
            CmResult r = cm_heuristic(t, cfg.pmax);
            out << render(cm_json(c, r, cfg.pmax), cfg.format);
            return 0;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "error: no subcommand\n";
    return 2;
}

} // namespace isoscan
