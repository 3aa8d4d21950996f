#pragma once

#include <isoscan/counting.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace isoscan {

struct ApTableFormatError : std::runtime_error {
    std::size_t line;
    ApTableFormatError(std::size_t line_, const std::string& what_)
        : std::runtime_error("ap table, line " + std::to_string(line_) + ": " + what_),
          line(line_) {}
};

/* Bit-exact serialization: header `curve=[a1,a2,a3,a4,a6]`, then one `p,a_p`
 * line per record in ascending p, ASCII decimal, LF terminated. Nothing
 * volatile (no timestamps, no host data), so equal tables serialize to equal
 * bytes. */
inline std::string serialize_ap_table(const ApTable& t) {
    std::string out = "curve=" + t.curve + "\n";
    for (const auto& [p, rec] : t.records) { // std::map: ascending p
        out += std::to_string(rec.p);
        out += ',';
        out += std::to_string(rec.a_p);
        out += '\n';
    }
    return out;
}

namespace detail {

// Strict ASCII-decimal parse of a full token (optional '-' for signed).
inline bool parse_u64_str(const std::string& s, u64& out) {
    if (s.empty() || s.size() > 20) return false;
    out = 0;
    for (char ch : s) {
        if (ch < '0' || ch > '9') return false;
        u64 next = out * 10 + static_cast<u64>(ch - '0');
        if (next < out) return false;
        out = next;
    }
    return true;
}

inline bool parse_i64_str(const std::string& s, i64& out) {
    bool neg = !s.empty() && s[0] == '-';
    u64 mag = 0;
    if (!parse_u64_str(neg ? s.substr(1) : s, mag)) return false;
    if (mag > static_cast<u64>(std::numeric_limits<i64>::max())) return false;
    out = neg ? -static_cast<i64>(mag) : static_cast<i64>(mag);
    return true;
}

} // namespace detail

inline ApTable parse_ap_table(const std::string& text) {
    ApTable t;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    u64 prev_p = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (lineno == 1) {
            if (line.rfind("curve=", 0) != 0)
                throw ApTableFormatError(lineno, "expected `curve=[a1,a2,a3,a4,a6]` header");
            t.curve = line.substr(6);
            // validate the key by round-tripping through the parser
            try {
                if (curve_key(parse_curve(t.curve)) != t.curve)
                    throw ApTableFormatError(lineno, "header is not a canonical curve key");
            } catch (const CurveParseError& e) {
                throw ApTableFormatError(lineno, std::string("bad curve header: ") + e.what());
            }
            continue;
        }
        auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            throw ApTableFormatError(lineno, "expected `p,a_p`");
        u64 p = 0;
        i64 ap = 0;
        if (!detail::parse_u64_str(line.substr(0, comma), p) ||
            !detail::parse_i64_str(line.substr(comma + 1), ap))
            throw ApTableFormatError(lineno, "malformed integer in `" + line + "`");
        if (p <= prev_p)
            throw ApTableFormatError(lineno, "rows out of order: p=" + std::to_string(p) +
                                                 " after p=" + std::to_string(prev_p));
        prev_p = p;
        if (p < 5 || !is_prime(p))
            throw ApTableFormatError(lineno, "p=" + std::to_string(p) + " is not a prime >= 5");
        ApRecord rec;
        rec.p = p;
        rec.a_p = ap;
        i64 cnt = static_cast<i64>(p) + 1 - ap;
        if (cnt <= 0 || static_cast<i64>(ap) * ap > static_cast<i64>(4 * p))
            throw ApTableFormatError(lineno, "a_p violates the Hasse bound");
        rec.count = static_cast<u64>(cnt);
        t.records.emplace(p, rec);
    }
    if (lineno == 0) throw ApTableFormatError(1, "empty file");
    return t;
}

inline ApTable load_ap_table(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open ap table: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_ap_table(buf.str());
}

// Overload that enforces the header against an expected curve.
inline ApTable load_ap_table(const std::filesystem::path& path, const CurveQ& expected) {
    ApTable t = load_ap_table(path);
    std::string want = curve_key(expected);
    if (t.curve != want)
        throw ApTableFormatError(1, "header curve " + t.curve + " does not match requested " + want);
    return t;
}

// Atomic store: write to a sibling temp file, then rename over the target.
inline void store_ap_table(const ApTable& t, const std::filesystem::path& path) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write ap table: " + tmp.string());
        out << serialize_ap_table(t);
        if (!out) throw std::runtime_error("short write on ap table: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

// Stable cache file name for a curve: FNV-1a of the canonical key.
inline std::string cache_file_name(const CurveQ& c) {
    std::string key = curve_key(c);
    u64 h = 1469598103934665603ULL;
    for (unsigned char ch : key) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "ap_%016llx.tab", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace isoscan
