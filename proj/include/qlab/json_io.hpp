#pragma once

#include "qlab/qlab.hpp"

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

namespace qlab {

using json = nlohmann::ordered_json;

/// Bumped whenever a sign, shift or ordering convention changes; embedded in
/// every artifact and cache key.
inline constexpr const char* kConventions = "qlab-conventions-1";

namespace detail {

inline void require(bool ok, const std::string& what)
{
    if (!ok)
        throw Error(ErrorKind::ParseError, what);
}

inline int as_int(const json& j, const char* what)
{
    require(j.is_number_integer(), std::string(what) + " must be an integer");
    return j.get<int>();
}

} // namespace detail

inline std::uint64_t fnv1a(std::string_view s)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t x)
{
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int k = 15; k >= 0; --k, x >>= 4)
        s[static_cast<std::size_t>(k)] = digits[x & 15];
    return s;
}

// -- Cartan data -------------------------------------------------------------

inline json to_json(const CartanDatum& cd)
{
    return json{{"label", cd.label()}, {"d", cd.sym_matrix()}, {"c", cd.cartan_matrix()}};
}

// -- lattice vectors, monomials ---------------------------------------------

inline json lattice_to_json(const LatticeVector& v)
{
    json a = json::array();
    for (auto& e : v)
        a.push_back(json::array({e.at.node, e.at.param, e.value}));
    return a;
}

inline LatticeVector lattice_from_json(const json& j)
{
    detail::require(j.is_array(), "lattice vector must be an array of [i, a, n]");
    LatticeVector v;
    for (auto& t : j) {
        detail::require(t.is_array() && t.size() == 3, "lattice entry must be [i, a, n]");
        detail::require(t[2].is_number_integer(), "lattice multiplicity must be an integer");
        v.add({detail::as_int(t[0], "node"), detail::as_int(t[1], "parameter")}, t[2].get<std::int64_t>());
    }
    return v;
}

inline json to_json(const LaurentMonomial& m) { return lattice_to_json(m.exponents()); }

inline LaurentMonomial monomial_from_json(const json& j) { return LaurentMonomial(lattice_from_json(j)); }

inline json to_json(const AMonomialVector& x) { return json{{"anchor", x.anchor}, {"v", lattice_to_json(x.v)}}; }

inline AMonomialVector amonomial_from_json(const json& j)
{
    detail::require(j.is_object() && j.contains("anchor") && j.contains("v"), "expected {anchor, v}");
    return AMonomialVector{detail::as_int(j["anchor"], "anchor"), lattice_from_json(j["v"])};
}

// -- q-characters ------------------------------------------------------------

inline json to_json(const QChar& chi)
{
    json entries = json::array();
    for (auto& e : chi.entries)
        entries.push_back(json{{"v", lattice_to_json(e.v)}, {"mu", e.mu}});
    return json{{"conventions", kConventions}, {"type", chi.type}, {"node", chi.anchor}, {"entries", entries}};
}

inline QChar qchar_from_json(const json& j)
{
    detail::require(j.is_object() && j.contains("type") && j.contains("node") && j.contains("entries"),
                     "expected {type, node, entries}");
    if (j.contains("conventions") && j["conventions"] != kConventions)
        throw Error(ErrorKind::CacheIntegrity, "conventions tag mismatch");
    QChar chi{j["type"].get<std::string>(), detail::as_int(j["node"], "node"), {}};
    for (auto& e : j["entries"]) {
        detail::require(e.contains("v") && e.contains("mu"), "entry must be {v, mu}");
        chi.entries.push_back(QCharEntry{lattice_from_json(e["v"]), e["mu"].get<std::int64_t>()});
    }
    return chi;
}

// -- extremal reports --------------------------------------------------------

inline json to_json(const ExtremalViolation& x)
{
    return json{{"v", lattice_to_json(x.v)},
                {"word", x.word},
                {"image", lattice_to_json(x.image)},
                {"position", json::array({x.position.node, x.position.param})},
                {"value", x.value}};
}

inline json to_json(const TheoremSummary& s)
{
    json viol = json::array();
    for (auto& x : s.violations)
        viol.push_back(to_json(x));
    return json{{"conventions", kConventions},
                {"type", s.type},
                {"node", s.node},
                {"monomials", s.monomials},
                {"group_order", s.group_order},
                {"checks", s.checks},
                {"alternative_word_checks", s.alternative_word_checks},
                {"anchor_case_checks", s.anchor_case_checks},
                {"anchor_case_violations", s.anchor_case_violations},
                {"violations", viol}};
}

// -- weights -----------------------------------------------------------------

inline json to_json(const WeightVector& theta)
{
    json a = json::array();
    for (auto& x : theta.coeffs)
        a.push_back(x.denominator() == 1 ? json(x.numerator()) : json(format_rational(x)));
    return a;
}

inline Rational rational_from_json(const json& j)
{
    if (j.is_number_integer())
        return Rational(j.get<std::int64_t>());
    detail::require(j.is_string(), "rational must be an integer or a \"p/q\" string");
    return parse_rational(j.get<std::string>());
}

inline WeightVector weight_from_json(const json& j)
{
    detail::require(j.is_array(), "theta must be an array");
    WeightVector w;
    for (auto& x : j)
        w.coeffs.push_back(rational_from_json(x));
    return w;
}

/// "-1,-1" or "-1/2, 3".
inline WeightVector parse_weight(std::string_view text)
{
    WeightVector w;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty())
            w.coeffs.push_back(parse_rational(cur));
        cur.clear();
    };
    for (char c : text) {
        if (c == ',' || c == ' ' || c == '[' || c == ']' || c == '(' || c == ')')
            flush();
        else
            cur.push_back(c);
    }
    flush();
    if (w.coeffs.empty())
        throw Error(ErrorKind::ParseError, "empty weight");
    return w;
}

/// "1@(1,1),2@(2,3)": n@(i,a) terms.
inline LatticeVector parse_dimension_vector(std::string_view text)
{
    LatticeVector v;
    std::size_t pos = 0;
    auto skip = [&] {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == ',' || text[pos] == '+'))
            ++pos;
    };
    auto number = [&]() -> std::int64_t {
        std::size_t start = pos;
        if (pos < text.size() && (text[pos] == '-' || text[pos] == '+'))
            ++pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9')
            ++pos;
        if (start == pos || (pos == start + 1 && (text[start] == '-' || text[start] == '+')))
            throw Error(ErrorKind::ParseError, "expected a number in \"" + std::string(text) + "\"");
        return std::stoll(std::string(text.substr(start, pos - start)));
    };
    auto expect = [&](char c) {
        while (pos < text.size() && text[pos] == ' ')
            ++pos;
        if (pos >= text.size() || text[pos] != c)
            throw Error(ErrorKind::ParseError, std::string("expected '") + c + "' in \"" + std::string(text) + "\"");
        ++pos;
        while (pos < text.size() && text[pos] == ' ')
            ++pos;
    };
    skip();
    while (pos < text.size()) {
        const std::int64_t n = number();
        expect('@');
        expect('(');
        const auto i = number();
        expect(',');
        const auto a = number();
        expect(')');
        v.add({static_cast<int>(i), static_cast<int>(a)}, n);
        skip();
    }
    return v;
}

// -- quiver points -----------------------------------------------------------

template <class K>
json matrix_to_json(const Matrix<K>& m)
{
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if constexpr (FieldTraits<K>::finite) {
                row.push_back(m(r, c).value());
            } else {
                const Rational& x = m(r, c);
                row.push_back(x.denominator() == 1 ? json(x.numerator()) : json(format_rational(x)));
            }
        }
        rows.push_back(row);
    }
    return rows;
}

template <class K>
Matrix<K> matrix_from_json(const json& j, std::size_t rows, std::size_t cols)
{
    detail::require(j.is_array(), "matrix must be an array of rows");
    // a 0 x n or n x 0 matrix may be written as []
    if (j.empty() && (rows == 0 || cols == 0))
        return Matrix<K>(rows, cols);
    if (j.size() != rows)
        throw Error(ErrorKind::ShapeMismatch, "matrix has " + std::to_string(j.size()) + " rows, expected " +
                                                  std::to_string(rows));
    Matrix<K> m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        detail::require(j[r].is_array(), "matrix row must be an array");
        if (j[r].size() != cols)
            throw Error(ErrorKind::ShapeMismatch, "matrix row has " + std::to_string(j[r].size()) +
                                                      " entries, expected " + std::to_string(cols));
        for (std::size_t c = 0; c < cols; ++c) {
            if constexpr (FieldTraits<K>::finite) {
                detail::require(j[r][c].is_number_integer(), "finite-field entries must be integers");
                m(r, c) = K(j[r][c].get<std::int64_t>());
            } else {
                m(r, c) = rational_from_json(j[r][c]);
            }
        }
    }
    return m;
}

template <class K>
json to_json(const GradedQuiverRep<K>& rep, const WeightVector* theta = nullptr)
{
    json maps = json::array();
    for (auto& key : rep.slots()) {
        const Matrix<K>& m = rep.slot(key);
        if (m.is_zero())
            continue;
        json from, to;
        const int i = key.source.node;
        const int a = key.source.param;
        const CartanDatum& cd = rep.cartan();
        switch (key.kind) {
        case SlotKind::Arrow:
            from = json::array({i, a});
            to = json::array({key.target, a - cd.d(i, key.target)});
            break;
        case SlotKind::A:
            from = json::array({i, a});
            to = json::array({i, a + cd.di(i)});
            break;
        case SlotKind::B:
            from = json::array({i, a - cd.di(i)});
            to = json::array({i, a});
            break;
        }
        maps.push_back(json{{"kind", to_string(key.kind)}, {"from", from}, {"to", to}, {"matrix", matrix_to_json(m)}});
    }
    json out{{"conventions", kConventions},
             {"field", FieldTraits<K>::name()},
             {"type", rep.cartan().label()},
             {"v", lattice_to_json(rep.v())},
             {"w", lattice_to_json(rep.w())},
             {"maps", maps}};
    if (theta)
        out["theta"] = to_json(*theta);
    return out;
}

template <class K>
GradedQuiverRep<K> quiver_from_json(const json& j)
{
    detail::require(j.is_object() && j.contains("type") && j.contains("v") && j.contains("w"),
                    "quiver point needs type, v, w");
    if (j.contains("field") && j["field"].get<std::string>() != FieldTraits<K>::name())
        throw Error(ErrorKind::ParseError, "point is over " + j["field"].get<std::string>() + ", expected " +
                                               FieldTraits<K>::name());
    const CartanDatum cd = build_cartan(j["type"].get<std::string>());
    GradedQuiverRep<K> rep(cd, lattice_from_json(j["v"]), lattice_from_json(j["w"]));
    if (!j.contains("maps"))
        return rep;
    for (auto& m : j["maps"]) {
        detail::require(m.contains("kind") && m.contains("from") && m.contains("to") && m.contains("matrix"),
                        "map needs kind, from, to, matrix");
        const std::string kind = m["kind"].get<std::string>();
        detail::require(m["from"].is_array() && m["from"].size() == 2 && m["to"].is_array() && m["to"].size() == 2,
                        "from/to must be [i, a]");
        const int i = detail::as_int(m["from"][0], "from node");
        const int a = detail::as_int(m["from"][1], "from parameter");
        const int j2 = detail::as_int(m["to"][0], "to node");
        const int b = detail::as_int(m["to"][1], "to parameter");
        if (i < 1 || i > cd.rank() || j2 < 1 || j2 > cd.rank())
            throw Error(ErrorKind::ShapeMismatch, "map endpoint outside the Dynkin diagram");
        SlotKey key;
        if (kind == "arrow") {
            if (i != j2 && !cd.adjacent(i, j2))
                throw Error(ErrorKind::ShapeMismatch, "no arrow between non-adjacent nodes");
            if (b != a - cd.d(i, j2))
                throw Error(ErrorKind::ShapeMismatch, "arrow from (" + std::to_string(i) + "," + std::to_string(a) +
                                                          ") to node " + std::to_string(j2) + " must end at parameter " +
                                                          std::to_string(a - cd.d(i, j2)));
            key = SlotKey{SlotKind::Arrow, {i, a}, j2};
        } else if (kind == "A") {
            if (j2 != i || b != a + cd.di(i))
                throw Error(ErrorKind::ShapeMismatch, "A must go from W_i^a to V_i^{a+d_i}");
            key = SlotKey{SlotKind::A, {i, a}, i};
        } else if (kind == "B") {
            if (j2 != i || b != a + cd.di(i))
                throw Error(ErrorKind::ShapeMismatch, "B must go from V_i^{a-d_i} to W_i^a");
            key = SlotKey{SlotKind::B, {i, b}, i};
        } else {
            throw Error(ErrorKind::ParseError, "unknown map kind \"" + kind + "\"");
        }
        rep.set(key, matrix_from_json<K>(m["matrix"], rep.target_dim(key), rep.source_dim(key)));
    }
    return rep;
}

// -- files and cache ---------------------------------------------------------

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline void write_file(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
    f << text;
    if (!f)
        throw Error(ErrorKind::InvalidArgument, "write failed for " + path);
}

inline json read_json_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw Error(ErrorKind::InvalidArgument, "cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    try {
        return json::parse(ss.str());
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, path + ": " + e.what());
    }
}

/// Cache envelope: {conventions, key, checksum, payload}; the checksum is
/// FNV-1a over the compact dump of the payload.
inline json cache_envelope(const std::string& key, const json& payload)
{
    return json{{"conventions", kConventions},
                {"key", key},
                {"checksum", hex64(fnv1a(payload.dump()))},
                {"payload", payload}};
}

inline json open_cache_envelope(const json& j, const std::string& key)
{
    if (!j.is_object() || !j.contains("payload") || !j.contains("checksum") || !j.contains("key") ||
        !j.contains("conventions"))
        throw Error(ErrorKind::CacheIntegrity, "malformed cache entry");
    if (j["conventions"] != kConventions)
        throw Error(ErrorKind::CacheIntegrity, "cache entry has stale conventions tag");
    if (j["key"] != key)
        throw Error(ErrorKind::CacheIntegrity, "cache entry key mismatch");
    if (j["checksum"] != hex64(fnv1a(j["payload"].dump())))
        throw Error(ErrorKind::CacheIntegrity, "cache entry checksum mismatch");
    return j["payload"];
}

/// File name for the q-character cache of (type, node, caps).
inline std::string qchar_cache_key(const std::string& type, int node, const FmCaps& caps)
{
    std::ostringstream s;
    s << kConventions << "|qchar|" << type << "|" << node << "|" << caps.max_monomials << "|" << caps.max_height;
    return s.str();
}

inline std::string cache_file_name(const std::string& key) { return "qchar-" + hex64(fnv1a(key)) + ".json"; }

} // namespace qlab
