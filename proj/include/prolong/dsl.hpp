#pragma once

// Text format for systems:
//
//   char: 0
//   derivations: 2
//   unknowns: a b c
//   D0 a = c*c          # D<i>^<e> ... <name>; D0 c^2 is (D0 c)^2
//
// Equations are EXPR = EXPR over + - * ^, parentheses, integers and n/d
// literals.

#include "system.hpp"

#include <cctype>
#include <sstream>
#include <string>
#include <vector>

namespace prolong {

struct ParseError : std::runtime_error {
    ParseError(std::size_t line, std::size_t col, const std::string& msg)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg), line(line), col(col) {}
    std::size_t line, col;
};

namespace detail {

inline bool is_derivation_token(const std::string& s) {
    if (s.size() < 2 || s[0] != 'D') return false;
    for (std::size_t i = 1; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

class ExprParser {
public:
    ExprParser(const std::string& text, std::size_t line, std::size_t col0, const SystemSpec& ctx)
        : s_(text), line_(line), col0_(col0), ctx_(ctx) {}

    Poly parse_equation() {
        Poly lhs = expr();
        skip();
        if (!eat('=')) fail("expected '='");
        Poly rhs = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return lhs - rhs;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, col0_ + pos_ + 1, msg); }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    bool peek_digit() {
        skip();
        return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]));
    }
    bool peek_ident() {
        skip();
        return pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_');
    }
    std::string integer() {
        skip();
        std::size_t b = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (b == pos_) fail("expected an integer");
        return s_.substr(b, pos_ - b);
    }
    unsigned small(const std::string& digits, unsigned limit, const char* what) {
        if (digits.size() > 6 || std::stoul(digits) > limit) fail(std::string(what) + " too large");
        return static_cast<unsigned>(std::stoul(digits));
    }
    std::string ident() {
        skip();
        std::size_t b = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        return s_.substr(b, pos_ - b);
    }

    Poly expr() {
        Poly acc(ctx_.characteristic);
        bool first = true;
        for (;;) {
            bool neg = false;
            if (eat('-')) neg = true;
            else if (!first && !eat('+')) break;
            else if (first) eat('+');
            Poly t = term();
            acc += neg ? -t : t;
            first = false;
            skip();
            if (pos_ >= s_.size() || (s_[pos_] != '+' && s_[pos_] != '-')) break;
        }
        return acc;
    }

    Poly term() {
        Poly acc = power();
        while (eat('*')) acc *= power();
        return acc;
    }

    Poly power() {
        if (eat('-')) return -power();
        Poly a = atom();
        if (eat('^')) a = a.pow(small(integer(), 10000, "exponent"));
        return a;
    }

    Poly atom() {
        if (eat('(')) {
            Poly e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (peek_digit()) {
            std::string lit = integer();
            std::size_t save = pos_;
            if (eat('/')) {
                if (!peek_digit()) {
                    pos_ = save;
                    fail("expected a denominator after '/'");
                }
                std::string den = integer();
                if (mpz_class(den) == 0) fail("zero denominator");
                lit += "/" + den;
            }
            try {
                return Poly(Scalar::parse(lit, ctx_.characteristic));
            } catch (const std::domain_error& e) {
                fail(e.what());
            }
        }
        if (peek_ident()) return derivative();
        fail(pos_ < s_.size() ? "unexpected '" + std::string(1, s_[pos_]) + "'" : "unexpected end of equation");
    }

    Poly derivative() {
        MultiIndex idx(ctx_.m());
        for (;;) {
            std::size_t start = pos_;
            skip();
            start = pos_;
            std::string id = ident();
            if (id.empty()) fail("expected an unknown name");
            if (is_derivation_token(id)) {
                unsigned i = small(id.substr(1), 1000000, "derivation index");
                if (i >= ctx_.m()) {
                    pos_ = start;
                    fail("derivation D" + std::to_string(i) + " out of range (m = " + std::to_string(ctx_.m()) + ")");
                }
                unsigned e = 1;
                skip();
                if (pos_ < s_.size() && s_[pos_] == '^') {
                    // D0^2 x: the exponent belongs to the operator when a name follows
                    std::size_t save = pos_;
                    ++pos_;
                    std::string ds = integer();
                    if (!peek_ident()) {
                        pos_ = save;
                        fail("derivation operator must be followed by an unknown");
                    }
                    e = small(ds, kMaxHeight, "derivative order");
                }
                idx[i] += e;
                if (height(idx) > kMaxHeight) fail("derivative order too large");
                continue;
            }
            for (unsigned k = 0; k < ctx_.unknowns.size(); ++k)
                if (ctx_.unknowns[k] == id) return Poly::var(ctx_.space.rank({idx, k}), ctx_.characteristic);
            pos_ = start;
            fail("unknown name '" + id + "'");
        }
    }

    const std::string& s_;
    std::size_t pos_ = 0;
    std::size_t line_, col0_;
    const SystemSpec& ctx_;
};

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace detail

inline SystemSpec parse_system(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    std::optional<std::uint32_t> p;
    std::optional<unsigned> m;
    std::optional<std::vector<std::string>> names;
    SystemSpec ctx;
    std::vector<Poly> polys;
    std::vector<std::size_t> poly_lines;
    bool ctx_ready = false;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw.substr(0, raw.find('#'));
        std::string t = detail::trim(line);
        if (t.empty()) continue;
        std::size_t col0 = line.find_first_not_of(" \t");
        auto colon = t.find(':');
        if (colon != std::string::npos && t.find('=') == std::string::npos) {
            std::string key = detail::trim(t.substr(0, colon)), val = detail::trim(t.substr(colon + 1));
            if (ctx_ready) throw ParseError(lineno, col0 + 1, "header line after the first equation");
            if (key == "char") {
                if (p) throw ParseError(lineno, col0 + 1, "duplicate 'char' header");
                std::uint64_t v;
                try {
                    std::size_t used;
                    v = std::stoull(val, &used);
                    if (used != val.size()) throw std::invalid_argument("");
                } catch (...) {
                    throw ParseError(lineno, col0 + 1, "char must be 0 or a prime");
                }
                try {
                    check_characteristic(v);
                } catch (const std::exception& e) {
                    throw ParseError(lineno, col0 + 1, e.what());
                }
                p = static_cast<std::uint32_t>(v);
            } else if (key == "derivations") {
                if (m) throw ParseError(lineno, col0 + 1, "duplicate 'derivations' header");
                unsigned long v = 0;
                try {
                    std::size_t used;
                    v = std::stoul(val, &used);
                    if (used != val.size()) throw std::invalid_argument("");
                } catch (...) {
                    throw ParseError(lineno, col0 + 1, "derivations must be a positive integer");
                }
                if (v == 0 || v > 16) throw ParseError(lineno, col0 + 1, "derivations must be between 1 and 16");
                m = static_cast<unsigned>(v);
            } else if (key == "unknowns") {
                if (names) throw ParseError(lineno, col0 + 1, "duplicate 'unknowns' header");
                std::istringstream ns(val);
                std::vector<std::string> v;
                std::string w;
                while (ns >> w) {
                    bool okname = std::isalpha(static_cast<unsigned char>(w[0])) || w[0] == '_';
                    for (char c : w) okname = okname && (std::isalnum(static_cast<unsigned char>(c)) || c == '_');
                    if (!okname || detail::is_derivation_token(w))
                        throw ParseError(lineno, col0 + 1, "invalid unknown name '" + w + "'");
                    for (auto& u : v)
                        if (u == w) throw ParseError(lineno, col0 + 1, "duplicate unknown name '" + w + "'");
                    v.push_back(w);
                }
                if (v.empty()) throw ParseError(lineno, col0 + 1, "at least one unknown is required");
                names = v;
            } else {
                throw ParseError(lineno, col0 + 1, "unknown header '" + key + "'");
            }
            continue;
        }
        if (!ctx_ready) {
            if (!m || !names) throw ParseError(lineno, col0 + 1, "equations require 'derivations' and 'unknowns' headers first");
            ctx.space = Space(*m, static_cast<unsigned>(names->size()));
            ctx.characteristic = p.value_or(0);
            ctx.unknowns = *names;
            ctx_ready = true;
        }
        detail::ExprParser ep(t, lineno, col0, ctx);
        polys.push_back(ep.parse_equation());
        poly_lines.push_back(lineno);
    }
    if (!m || !names) throw ParseError(lineno ? lineno : 1, 1, "missing 'derivations' or 'unknowns' header");
    try {
        return make_system(*m, *names, p.value_or(0), polys);
    } catch (const SystemError& e) {
        // point at the offending equation when the message names one
        std::string msg = e.what();
        std::size_t line = lineno;
        auto k = msg.find("equation ");
        if (k != std::string::npos) {
            std::size_t idx = std::stoul(msg.substr(k + 9));
            if (idx >= 1 && idx <= poly_lines.size()) line = poly_lines[idx - 1];
        }
        throw ParseError(line, 1, msg);
    }
}

inline std::string serialize_system(const SystemSpec& s) {
    std::string out = "char: " + std::to_string(s.characteristic) + "\n";
    out += "derivations: " + std::to_string(s.m()) + "\n";
    out += "unknowns:";
    for (auto& u : s.unknowns) out += " " + u;
    out += "\n";
    auto nm = s.namer();
    for (auto& e : s.equations) out += e.poly.to_string(nm) + " = 0\n";
    return out;
}

}  // namespace prolong
