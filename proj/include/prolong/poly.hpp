#pragma once

// Sparse multivariate polynomials over Scalar. Variables are 64-bit ids (the
// rank of a derivative index); terms are kept in graded-lex order with the
// greatest variable most significant, so the first term is the leading one.

#include "scalar.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace prolong {

using Var = std::uint64_t;

class Monomial {
public:
    Monomial() = default;
    static Monomial var(Var v, unsigned e = 1) {
        Monomial m;
        if (e) m.f_.push_back({v, e}), m.deg_ = e;
        return m;
    }

    /// (var, exponent) pairs, greatest variable first.
    const std::vector<std::pair<Var, unsigned>>& factors() const { return f_; }
    unsigned degree() const { return deg_; }
    bool is_one() const { return f_.empty(); }

    unsigned exponent(Var v) const {
        for (auto& [x, e] : f_)
            if (x == v) return e;
        return 0;
    }

    friend Monomial operator*(const Monomial& a, const Monomial& b) {
        Monomial r;
        r.f_.reserve(a.f_.size() + b.f_.size());
        std::size_t i = 0, j = 0;
        while (i < a.f_.size() || j < b.f_.size()) {
            if (j == b.f_.size() || (i < a.f_.size() && a.f_[i].first > b.f_[j].first)) r.f_.push_back(a.f_[i++]);
            else if (i == a.f_.size() || b.f_[j].first > a.f_[i].first) r.f_.push_back(b.f_[j++]);
            else r.f_.push_back({a.f_[i].first, a.f_[i].second + b.f_[j].second}), ++i, ++j;
        }
        r.deg_ = a.deg_ + b.deg_;
        return r;
    }

    /// a / b when b divides a.
    friend std::optional<Monomial> divide(const Monomial& a, const Monomial& b) {
        Monomial r;
        std::size_t i = 0;
        for (auto& [v, e] : b.f_) {
            while (i < a.f_.size() && a.f_[i].first > v) r.f_.push_back(a.f_[i++]);
            if (i == a.f_.size() || a.f_[i].first != v || a.f_[i].second < e) return std::nullopt;
            if (a.f_[i].second > e) r.f_.push_back({v, a.f_[i].second - e});
            ++i;
        }
        while (i < a.f_.size()) r.f_.push_back(a.f_[i++]);
        r.deg_ = a.deg_ - b.deg_;
        return r;
    }

    /// Removes v entirely, returning its exponent.
    unsigned strip(Var v) {
        for (auto it = f_.begin(); it != f_.end(); ++it)
            if (it->first == v) {
                unsigned e = it->second;
                f_.erase(it);
                deg_ -= e;
                return e;
            }
        return 0;
    }

    friend bool operator==(const Monomial& a, const Monomial& b) { return a.f_ == b.f_; }

    /// Graded lex, greatest variable most significant.
    friend bool graded_greater(const Monomial& a, const Monomial& b) {
        if (a.deg_ != b.deg_) return a.deg_ > b.deg_;
        std::size_t k = std::min(a.f_.size(), b.f_.size());
        for (std::size_t i = 0; i < k; ++i) {
            if (a.f_[i].first != b.f_[i].first) return a.f_[i].first > b.f_[i].first;
            if (a.f_[i].second != b.f_[i].second) return a.f_[i].second > b.f_[i].second;
        }
        return a.f_.size() > b.f_.size();
    }

private:
    std::vector<std::pair<Var, unsigned>> f_;
    unsigned deg_ = 0;
};

struct MonomialOrder {
    bool operator()(const Monomial& a, const Monomial& b) const { return graded_greater(a, b); }
};

using VarNamer = std::function<std::string(Var)>;

class Poly {
public:
    using Terms = std::map<Monomial, Scalar, MonomialOrder>;

    Poly() = default;
    explicit Poly(std::uint32_t p) : p_(p) {}
    Poly(const Scalar& c) : p_(c.characteristic()) {
        if (!c.is_zero()) t_.emplace(Monomial{}, c);
    }
    static Poly constant(long c, std::uint32_t p) { return Poly(Scalar(c, p)); }
    static Poly var(Var v, std::uint32_t p, unsigned e = 1) {
        Poly r(p);
        r.t_.emplace(Monomial::var(v, e), Scalar::one(p));
        return r;
    }
    static Poly term(const Monomial& m, const Scalar& c) {
        Poly r(c.characteristic());
        if (!c.is_zero()) r.t_.emplace(m, c);
        return r;
    }

    std::uint32_t characteristic() const { return p_; }
    const Terms& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_.begin()->first.is_one()); }
    Scalar constant_value() const { return t_.empty() ? Scalar::zero(p_) : t_.begin()->second; }
    Scalar constant_term() const {
        auto it = t_.find(Monomial{});
        return it == t_.end() ? Scalar::zero(p_) : it->second;
    }
    const Monomial& leading_monomial() const { return t_.begin()->first; }
    const Scalar& leading_coefficient() const { return t_.begin()->second; }
    unsigned total_degree() const { return t_.empty() ? 0 : t_.begin()->first.degree(); }

    void add_term(const Monomial& m, const Scalar& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = t_.emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

    Poly operator-() const {
        Poly r(p_);
        for (auto& [m, c] : t_) r.t_.emplace_hint(r.t_.end(), m, -c);
        return r;
    }
    Poly& operator+=(const Poly& o) {
        check(o);
        for (auto& [m, c] : o.t_) add_term(m, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        check(o);
        for (auto& [m, c] : o.t_) add_term(m, -c);
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        a.check(b);
        Poly r(a.p_);
        for (auto& [ma, ca] : a.t_)
            for (auto& [mb, cb] : b.t_) r.add_term(ma * mb, ca * cb);
        return r;
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    Poly scaled(const Scalar& c) const {
        if (c.is_zero()) return Poly(p_);
        Poly r(p_);
        for (auto& [m, x] : t_) r.t_.emplace_hint(r.t_.end(), m, x * c);
        return r;
    }
    Poly times_monomial(const Monomial& mono, const Scalar& c) const {
        Poly r(p_);
        if (c.is_zero()) return r;
        for (auto& [m, x] : t_) r.t_.emplace_hint(r.t_.end(), m * mono, x * c);
        return r;
    }
    Poly pow(unsigned e) const {
        Poly r = Poly::constant(1, p_), b = *this;
        while (e) {
            if (e & 1) r *= b;
            e >>= 1;
            if (e) b *= b;
        }
        return r;
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.p_ == b.p_ && a.t_ == b.t_; }

    std::set<Var> vars() const {
        std::set<Var> s;
        for (auto& [m, c] : t_)
            for (auto& [v, e] : m.factors()) s.insert(v);
        return s;
    }
    std::optional<Var> max_var() const {
        std::optional<Var> r;
        for (auto& [m, c] : t_)
            if (!m.is_one() && (!r || m.factors().front().first > *r)) r = m.factors().front().first;
        return r;
    }
    bool contains(Var v) const {
        for (auto& [m, c] : t_)
            if (m.exponent(v)) return true;
        return false;
    }
    unsigned degree(Var v) const {
        unsigned d = 0;
        for (auto& [m, c] : t_) d = std::max(d, m.exponent(v));
        return d;
    }

    /// Coefficients as a polynomial in v: exponent -> coefficient.
    std::map<unsigned, Poly> coeffs(Var v) const {
        std::map<unsigned, Poly> r;
        for (auto& [m, c] : t_) {
            Monomial rest = m;
            unsigned e = rest.strip(v);
            auto it = r.try_emplace(e, Poly(p_)).first;
            it->second.add_term(rest, c);
        }
        return r;
    }
    Poly coeff(Var v, unsigned e) const {
        Poly r(p_);
        for (auto& [m, c] : t_) {
            Monomial rest = m;
            if (rest.strip(v) == e) r.add_term(rest, c);
        }
        return r;
    }
    Poly lc(Var v) const { return coeff(v, degree(v)); }

    Poly derivative(Var v) const {
        Poly r(p_);
        for (auto& [m, c] : t_) {
            unsigned e = m.exponent(v);
            if (!e) continue;
            Monomial rest = m;
            rest.strip(v);
            r.add_term(rest * Monomial::var(v, e - 1), c * Scalar(static_cast<long>(e), p_));
        }
        return r;
    }

    /// Replaces v by q.
    Poly substitute(Var v, const Poly& q) const {
        if (!contains(v)) return *this;
        Poly r(p_);
        std::map<unsigned, Poly> powers;
        for (auto& [e, c] : coeffs(v)) {
            if (e == 0) { r += c; continue; }
            auto it = powers.find(e);
            if (it == powers.end()) it = powers.emplace(e, q.pow(e)).first;
            r += c * it->second;
        }
        return r;
    }

    /// Applies a variable renaming/substitution to every variable at once.
    Poly map_vars(const std::function<Poly(Var)>& f) const {
        Poly r(p_);
        for (auto& [m, c] : t_) {
            Poly t = Poly(c);
            for (auto& [v, e] : m.factors()) t *= f(v).pow(e);
            r += t;
        }
        return r;
    }

    /// Divides by the leading coefficient.
    Poly monic() const { return t_.empty() ? *this : scaled(leading_coefficient().inverse()); }

    std::string to_string(const VarNamer& name) const {
        if (t_.empty()) return "0";
        std::string s;
        bool first = true;
        for (auto& [m, c] : t_) {
            bool neg = c.value() < 0 && p_ == 0;
            Scalar a = neg ? -c : c;
            if (first) s += neg ? "-" : "";
            else s += neg ? " - " : " + ";
            first = false;
            std::string mono;
            for (auto& [v, e] : m.factors()) {
                if (!mono.empty()) mono += "*";
                mono += name(v);
                if (e > 1) mono += "^" + std::to_string(e);
            }
            if (mono.empty()) s += a.to_string();
            else if (a.is_one()) s += mono;
            else s += a.to_string() + "*" + mono;
        }
        return s;
    }

private:
    void check(const Poly& o) const {
        if (p_ != o.p_) throw std::invalid_argument("characteristic mismatch between polynomials");
    }

    Terms t_;
    std::uint32_t p_ = 0;
};

/// Exact quotient a / b, or nothing if b does not divide a.
inline std::optional<Poly> divide_exact(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    Poly q(a.characteristic()), r = a;
    const Monomial& lb = b.leading_monomial();
    Scalar inv = b.leading_coefficient().inverse();
    while (!r.is_zero()) {
        auto m = divide(r.leading_monomial(), lb);
        if (!m) return std::nullopt;
        Scalar c = r.leading_coefficient() * inv;
        q.add_term(*m, c);
        r -= b.times_monomial(*m, c);
    }
    return q;
}

/// Pseudo-remainder of a by b with respect to v (deg_v b > 0).
inline Poly prem(const Poly& a, const Poly& b, Var v) {
    unsigned db = b.degree(v);
    Poly lb = b.coeff(v, db);
    Poly r = a;
    std::map<unsigned, Poly> bc;
    while (!r.is_zero() && r.degree(v) >= db) {
        unsigned dr = r.degree(v);
        Poly lr = r.coeff(v, dr);
        r = lb * r - lr * b * Poly::var(v, r.characteristic(), dr - db);
        if (r.degree(v) == dr && !r.coeff(v, dr).is_zero()) throw std::logic_error("prem failed to reduce degree");
    }
    return r;
}

Poly gcd(const Poly& a, const Poly& b);

namespace detail {

inline Poly content(const Poly& a, Var v) {
    Poly g(a.characteristic());
    for (auto& [e, c] : a.coeffs(v)) {
        g = gcd(g, c);
        if (g.is_constant() && !g.is_zero()) break;
    }
    return g;
}

inline Poly primitive_part(const Poly& a, Var v) {
    if (a.is_zero()) return a;
    Poly c = content(a, v);
    return *divide_exact(a, c);
}

}  // namespace detail

namespace detail {

// Coprimality certificates by evaluation: if every variable shared by a and b
// admits a point (mod a prime) where a keeps its degree in that variable and
// the univariate images are coprime, the gcd has degree 0 in every variable.

using ModPoly = std::vector<std::uint64_t>;

inline std::uint64_t mulmod(std::uint64_t x, std::uint64_t y, std::uint64_t q) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * y % q);
}

inline std::uint64_t powmod(std::uint64_t x, std::uint64_t e, std::uint64_t q) {
    std::uint64_t r = 1 % q;
    for (; e; e >>= 1, x = mulmod(x, x, q))
        if (e & 1) r = mulmod(r, x, q);
    return r;
}

inline std::optional<std::uint64_t> scalar_mod(const Scalar& s, std::uint64_t q) {
    mpz_class qq(static_cast<unsigned long>(q));
    mpz_class n = s.value().get_num() % qq, d = s.value().get_den() % qq;
    if (n < 0) n += qq;
    if (d == 0) return std::nullopt;
    std::uint64_t nu = n.get_ui(), du = d.get_ui();
    return mulmod(nu, powmod(du, q - 2, q), q);
}

inline void trim(ModPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline std::optional<ModPoly> image(const Poly& a, Var v, const std::map<Var, std::uint64_t>& pt, std::uint64_t q) {
    ModPoly f(a.degree(v) + 1, 0);
    for (auto& [m, c] : a.terms()) {
        auto cm = scalar_mod(c, q);
        if (!cm) return std::nullopt;
        std::uint64_t x = *cm;
        unsigned e = 0;
        for (auto& [w, k] : m.factors()) {
            if (w == v) e = k;
            else x = mulmod(x, powmod(pt.at(w), k, q), q);
        }
        f[e] = (f[e] + x) % q;
    }
    trim(f);
    return f;
}

inline std::size_t mod_gcd_degree(ModPoly f, ModPoly g, std::uint64_t q) {
    while (!g.empty()) {
        // f mod g
        std::uint64_t inv = powmod(g.back(), q - 2, q);
        while (f.size() >= g.size()) {
            std::uint64_t c = mulmod(f.back(), inv, q);
            std::size_t shift = f.size() - g.size();
            for (std::size_t i = 0; i < g.size(); ++i) f[i + shift] = (f[i + shift] + q - mulmod(c, g[i], q)) % q;
            trim(f);
            if (f.empty()) break;
        }
        std::swap(f, g);
    }
    return f.empty() ? 0 : f.size() - 1;
}

inline bool provably_coprime(const Poly& a, const Poly& b) {
    std::uint32_t p = a.characteristic();
    std::uint64_t q = p ? p : 2147483647ull;
    std::set<Var> va = a.vars(), vb = b.vars(), all = va;
    all.insert(vb.begin(), vb.end());
    std::uint64_t seed = 0x9e3779b97f4a7c15ull;
    for (Var v : va) {
        if (!vb.count(v)) continue;
        bool done = false;
        for (int attempt = 0; attempt < 3 && !done; ++attempt) {
            std::map<Var, std::uint64_t> pt;
            for (Var w : all) {
                seed = seed * 6364136223846793005ull + 1442695040888963407ull;
                pt[w] = (seed >> 17) % q;
            }
            auto fa = image(a, v, pt, q), fb = image(b, v, pt, q);
            if (!fa || !fb || fa->size() != a.degree(v) + 1) continue;
            done = mod_gcd_degree(*fa, *fb, q) == 0;
            if (!done) return false;
        }
        if (!done) return false;
    }
    return true;
}

}  // namespace detail

/// Monic greatest common divisor; gcd(0, 0) = 0.
inline Poly gcd(const Poly& a, const Poly& b) {
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    if (a.is_constant() || b.is_constant()) return Poly::constant(1, a.characteristic());
    if (detail::provably_coprime(a, b)) return Poly::constant(1, a.characteristic());
    if (auto q = divide_exact(a, b)) return b.monic();
    if (auto q = divide_exact(b, a)) return a.monic();
    Var v = std::max(*a.max_var(), *b.max_var());
    bool ina = a.contains(v), inb = b.contains(v);
    if (!ina) return gcd(a, detail::content(b, v));
    if (!inb) return gcd(detail::content(a, v), b);
    Poly ca = detail::content(a, v), cb = detail::content(b, v);
    Poly g = gcd(ca, cb);
    Poly x = *divide_exact(a, ca), y = *divide_exact(b, cb);
    if (x.degree(v) < y.degree(v)) std::swap(x, y);
    while (!y.is_zero()) {
        Poly r = prem(x, y, v);
        x = std::move(y);
        y = r.is_zero() ? r : detail::primitive_part(r, v);
        if (!y.is_zero() && !y.contains(v)) {
            x = Poly::constant(1, a.characteristic());
            break;
        }
    }
    if (!x.contains(v)) x = Poly::constant(1, a.characteristic());
    return (g * detail::primitive_part(x, v)).monic();
}

/// Square root in the polynomial ring, if a is a perfect square (char != 2).
inline std::optional<Poly> poly_sqrt(const Poly& a) {
    std::uint32_t p = a.characteristic();
    if (p == 2) throw std::invalid_argument("square roots in characteristic 2 are not supported");
    if (a.is_zero()) return a;
    const Monomial& lm = a.leading_monomial();
    Monomial root;
    for (auto& [v, e] : lm.factors()) {
        if (e % 2) return std::nullopt;
        root = root * Monomial::var(v, e / 2);
    }
    Scalar rc;
    if (!a.leading_coefficient().sqrt(rc)) return std::nullopt;
    Poly s = Poly::term(root, rc);
    Scalar two_lc = Scalar(2, p) * rc;
    for (std::size_t guard = 0; guard <= a.terms().size() + 1; ++guard) {
        Poly r = a - s * s;
        if (r.is_zero()) return s;
        auto m = divide(r.leading_monomial(), root);
        if (!m || graded_greater(*m, root) || *m == root) return std::nullopt;
        s.add_term(*m, r.leading_coefficient() / two_lc);
    }
    return std::nullopt;
}

}  // namespace prolong
