#pragma once

#include <string>
#include <vector>

#include "jp/number_field.hpp"

namespace jp {

// Textual element grammar used by the CLI and the JSON trace schema:
//   rat:<p>/<q>
//   alg:[c0,c1,...,cd]@[lo,hi];coords=[a0,...,a_{d-1}]
// minpoly coefficients ascending; rationals as p/q (plain integers accepted).

inline Rat parse_rat(const std::string& s) {
    auto bad = [&] { return error(errc::parse_error, "bad rational '" + s + "'"); };
    if (s.empty()) throw bad();
    size_t slash = s.find('/');
    auto parse_int = [&](const std::string& t) {
        if (t.empty()) throw bad();
        size_t i = (t[0] == '-') ? 1 : 0;
        if (i == t.size()) throw bad();
        for (; i < t.size(); ++i)
            if (t[i] < '0' || t[i] > '9') throw bad();
        return Int(t);
    };
    if (slash == std::string::npos) return Rat(parse_int(s), 1);
    Int num = parse_int(s.substr(0, slash));
    Int den = parse_int(s.substr(slash + 1));
    if (den == 0) throw error(errc::parse_error, "zero denominator in '" + s + "'");
    return Rat(num, den);
}

inline std::string format_rat(const Rat& q) { return rat_string(q); }

// Split on `sep` at bracket depth zero.
inline std::vector<std::string> split_top_level(const std::string& s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char ch : s) {
        if (ch == '[') ++depth;
        if (ch == ']') --depth;
        if (ch == sep && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

inline std::vector<std::string> parse_bracket_list(const std::string& s, const char* what) {
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw error(errc::parse_error, std::string("expected [..] for ") + what);
    return split_top_level(s.substr(1, s.size() - 2), ',');
}

inline FieldElement parse_element(const std::string& spec) {
    if (spec.rfind("rat:", 0) == 0) return FieldElement(parse_rat(spec.substr(4)));
    if (spec.rfind("alg:", 0) != 0)
        throw error(errc::parse_error, "element must start with rat: or alg:");
    std::string body = spec.substr(4);
    size_t at = body.find('@');
    size_t semi = body.find(";coords=");
    if (at == std::string::npos || semi == std::string::npos || semi < at)
        throw error(errc::parse_error, "alg element must look like alg:[..]@[lo,hi];coords=[..]");

    std::vector<Int> coeffs;
    for (const std::string& c : parse_bracket_list(body.substr(0, at), "minpoly")) {
        Rat q = parse_rat(c);
        if (rat_den(q) != 1)
            throw error(errc::parse_error, "minpoly coefficients must be integers");
        coeffs.push_back(rat_num(q));
    }
    auto iv = parse_bracket_list(body.substr(at + 1, semi - at - 1), "isolating interval");
    if (iv.size() != 2) throw error(errc::parse_error, "isolating interval needs two endpoints");
    FieldPtr f = NumberField::make(coeffs, parse_rat(iv[0]), parse_rat(iv[1]));

    std::vector<Rat> coords;
    for (const std::string& c : parse_bracket_list(body.substr(semi + 8), "coords"))
        coords.push_back(parse_rat(c));
    return FieldElement(f, std::move(coords));
}

inline std::string format_element(const FieldElement& x) {
    const FieldPtr& f = x.field();
    if (f->degree() == 1) return "rat:" + format_rat(x.coords()[0]);
    std::string s = "alg:[";
    const auto& mp = f->minpoly();
    for (size_t i = 0; i < mp.size(); ++i) {
        if (i) s += ",";
        s += mp[i].str();
    }
    s += "]@[" + format_rat(f->declared_lo()) + "," + format_rat(f->declared_hi()) + "];coords=[";
    for (int i = 0; i < f->degree(); ++i) {
        if (i) s += ",";
        s += format_rat(x.coords()[i]);
    }
    s += "]";
    return s;
}

// "<elem>,<elem>" with the separating comma at bracket depth zero.
inline std::pair<FieldElement, FieldElement> parse_point(const std::string& spec) {
    auto parts = split_top_level(spec, ',');
    if (parts.size() != 2)
        throw error(errc::parse_error, "point must be two comma-separated element specs");
    return {parse_element(parts[0]), parse_element(parts[1])};
}

} // namespace jp
