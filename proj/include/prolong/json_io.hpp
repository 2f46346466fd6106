#pragma once

// Lossless JSON encodings of scalars, polynomials and systems.

#include "dsl.hpp"

#include <nlohmann/json.hpp>

namespace prolong {

using json = nlohmann::json;

struct CertificateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// [[coefficient, [[var, exponent], ...]], ...] in term order.
inline json poly_to_json(const Poly& p) {
    json out = json::array();
    for (auto& [m, c] : p.terms()) {
        json mono = json::array();
        for (auto& [v, e] : m.factors()) mono.push_back({v, e});
        out.push_back({c.to_string(), mono});
    }
    return out;
}

inline Poly poly_from_json(const json& j, std::uint32_t p) {
    if (!j.is_array()) throw CertificateError("polynomial must be an array");
    Poly out(p);
    std::vector<Monomial> order;
    for (auto& t : j) {
        if (!t.is_array() || t.size() != 2 || !t[0].is_string() || !t[1].is_array()) throw CertificateError("malformed term");
        Scalar c = Scalar::parse(t[0].get<std::string>(), p);
        if (c.is_zero()) throw CertificateError("zero coefficient stored");
        if (c.to_string() != t[0].get<std::string>()) throw CertificateError("coefficient not in canonical form");
        Monomial m;
        std::optional<Var> prev;
        for (auto& f : t[1]) {
            if (!f.is_array() || f.size() != 2 || !f[0].is_number_unsigned() || !f[1].is_number_unsigned())
                throw CertificateError("malformed factor");
            Var v = f[0].get<Var>();
            unsigned e = f[1].get<unsigned>();
            if (e == 0 || (prev && v >= *prev)) throw CertificateError("factors not in canonical form");
            prev = v;
            m = m * Monomial::var(v, e);
        }
        order.push_back(m);
        out.add_term(m, c);
    }
    if (out.terms().size() != order.size()) throw CertificateError("repeated monomial");
    std::size_t i = 0;
    for (auto& [m, c] : out.terms())
        if (!(m == order[i++])) throw CertificateError("terms not in canonical order");
    return out;
}

inline json index_to_json(const DerivIndex& d) { return {{"index", d.index.entries()}, {"unknown", d.unknown}}; }

inline DerivIndex index_from_json(const json& j, const Space& sp) {
    if (!j.is_object() || !j.contains("index") || !j.contains("unknown")) throw CertificateError("malformed derivative index");
    DerivIndex d{MultiIndex(j.at("index").get<std::vector<unsigned>>()), j.at("unknown").get<unsigned>()};
    sp.check(d);
    return d;
}

inline json system_to_json(const SystemSpec& s) {
    json eqs = json::array();
    for (auto& e : s.equations) eqs.push_back(poly_to_json(e.poly));
    return {{"m", s.m()}, {"characteristic", s.characteristic}, {"unknowns", s.unknowns}, {"equations", eqs}, {"text", serialize_system(s)}};
}

inline SystemSpec system_from_json(const json& j) {
    if (!j.is_object()) throw CertificateError("system must be an object");
    std::uint32_t p = j.at("characteristic").get<std::uint32_t>();
    std::vector<Poly> polys;
    for (auto& e : j.at("equations")) polys.push_back(poly_from_json(e, p));
    SystemSpec s = make_system(j.at("m").get<unsigned>(), j.at("unknowns").get<std::vector<std::string>>(), p, polys);
    for (auto& e : s.equations)
        for (Var v : e.poly.vars()) s.space.unrank(v);
    SystemSpec parsed = parse_system(j.at("text").get<std::string>());
    if (serialize_system(parsed) != serialize_system(s) || parsed.unknowns != s.unknowns)
        throw CertificateError("system text does not match its numeric form");
    return s;
}

}  // namespace prolong
