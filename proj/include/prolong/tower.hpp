#pragma once

// Field towers K(free generators)[defined generators] at the generic point.
// A slot is a derivative index, identified by its rank; uninstalled slots act
// as free transcendentals. Elements are RatFuncs whose numerator is reduced
// modulo the algebraic relations and whose denominator involves no algebraic
// slot, which makes the representation canonical.

#include "deriv_index.hpp"
#include "ratfunc.hpp"

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace prolong {

using Elem = RatFunc;

struct ZeroDivisor : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Unsupported : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Slot naming: "x", "D0 x", "D0^2 D1 x".
inline std::string slot_name(const DerivIndex& d, const std::vector<std::string>& unknowns) {
    std::string s;
    for (std::size_t i = 0; i < d.m(); ++i) {
        if (!d.index[i]) continue;
        s += "D" + std::to_string(i);
        if (d.index[i] > 1) s += "^" + std::to_string(d.index[i]);
        s += " ";
    }
    return s + (d.unknown < unknowns.size() ? unknowns[d.unknown] : "x" + std::to_string(d.unknown));
}

/// Derivative-operator notation, "∂0∂1c" style, for narratives.
inline std::string slot_symbol(const DerivIndex& d, const std::vector<std::string>& unknowns) {
    std::string s;
    for (std::size_t i = 0; i < d.m(); ++i)
        for (unsigned k = 0; k < d.index[i]; ++k) s += "∂" + std::to_string(i);
    return s + (d.unknown < unknowns.size() ? unknowns[d.unknown] : "x" + std::to_string(d.unknown));
}

inline VarNamer make_namer(const Space& sp, const std::vector<std::string>& unknowns) {
    return [sp, unknowns](Var v) { return slot_name(sp.unrank(v), unknowns); };
}

enum class SlotKind { Free, Solved, Algebraic };

inline const char* to_string(SlotKind k) {
    switch (k) {
        case SlotKind::Free: return "free";
        case SlotKind::Solved: return "solved";
        case SlotKind::Algebraic: return "algebraic";
    }
    return "?";
}

struct Slot {
    SlotKind kind = SlotKind::Free;
    Poly relation;      // reduced leader relation, nonconstant in the slot
    Elem value;         // Solved: the slot's value
    unsigned degree = 1;
    Poly lead;          // Algebraic: D in D*y^d + sum P_j y^j, free of algebraic slots
    Poly cleared;       // Algebraic: the cleared monic relation
    bool separable = true;
};

class Tower {
public:
    Tower() = default;
    Tower(Space sp, std::uint32_t p) : sp_(sp), p_(p) { check_characteristic(p); }

    const Space& space() const { return sp_; }
    std::uint32_t characteristic() const { return p_; }
    const std::map<Var, Slot>& slots() const { return slots_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

    SlotKind kind(Var v) const {
        auto it = slots_.find(v);
        return it == slots_.end() ? SlotKind::Free : it->second.kind;
    }
    const Slot* slot(Var v) const {
        auto it = slots_.find(v);
        return it == slots_.end() ? nullptr : &it->second;
    }

    Elem zero() const { return Elem(p_); }
    Elem one() const { return Elem(Poly::constant(1, p_)); }
    Elem constant(const Scalar& c) const { return Elem(Poly(c)); }
    bool is_zero(const Elem& e) const { return e.is_zero(); }

    /// The element a slot stands for.
    Elem var(Var v) const {
        auto it = slots_.find(v);
        if (it != slots_.end() && it->second.kind == SlotKind::Solved) return it->second.value;
        return Elem(Poly::var(v, p_));
    }

    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem mul(const Elem& a, const Elem& b) const {
        if (a.is_zero() || b.is_zero()) return zero();
        return reduce(a.num() * b.num(), a.den() * b.den());
    }
    Elem div(const Elem& a, const Elem& b) const { return mul(a, inverse(b)); }
    Elem pow(const Elem& a, unsigned e) const {
        Elem r = one(), b = a;
        while (e) {
            if (e & 1) r = mul(r, b);
            e >>= 1;
            if (e) b = mul(b, b);
        }
        return r;
    }

    /// num/den with num reduced modulo the algebraic relations.
    Elem reduce(Poly num, Poly den) const {
        if (num.is_zero()) return zero();
        for (auto it = alg_.rbegin(); it != alg_.rend(); ++it) {
            const Slot& s = slots_.at(*it);
            Var y = *it;
            unsigned dn = num.degree(y);
            while (dn >= s.degree) {
                Poly t = num.coeff(y, dn);
                num = num * s.lead - t * Poly::var(y, p_, dn - s.degree) * s.cleared;
                den = den * s.lead;
                unsigned nd = num.degree(y);
                if (nd >= dn && !num.coeff(y, dn).is_zero()) throw std::logic_error("algebraic reduction stalled");
                dn = nd;
            }
        }
        return Elem(std::move(num), std::move(den));
    }

    /// Normal form of a polynomial in slot variables.
    Elem nf(const Poly& p) const {
        if (p.is_zero()) return zero();
        std::map<Var, unsigned> solved;  // solved slots occurring, with max degree
        for (Var v : p.vars())
            if (kind(v) == SlotKind::Solved) solved[v] = p.degree(v);
        if (solved.empty()) return reduce(p, Poly::constant(1, p_));
        Poly den = Poly::constant(1, p_);
        std::map<std::pair<Var, unsigned>, Poly> npow, dpow;
        auto pw = [&](std::map<std::pair<Var, unsigned>, Poly>& cache, Var v, const Poly& base, unsigned e) -> const Poly& {
            auto key = std::make_pair(v, e);
            auto it = cache.find(key);
            if (it == cache.end()) it = cache.emplace(key, base.pow(e)).first;
            return it->second;
        };
        for (auto& [v, d] : solved) {
            const Elem& val = slots_.at(v).value;
            if (!val.den().is_constant()) den *= pw(dpow, v, val.den(), d);
        }
        Poly num(p_);
        for (auto& [m, c] : p.terms()) {
            Monomial rest;
            Poly t = Poly::term(Monomial{}, c);
            for (auto& [v, e] : m.factors()) {
                auto it = solved.find(v);
                if (it == solved.end()) {
                    rest = rest * Monomial::var(v, e);
                    continue;
                }
                const Elem& val = slots_.at(v).value;
                t *= pw(npow, v, val.num(), e);
                if (!val.den().is_constant() && it->second > e) t *= pw(dpow, v, val.den(), it->second - e);
            }
            num += t.times_monomial(rest, Scalar::one(p_));
        }
        return reduce(std::move(num), std::move(den));
    }

    Elem nf(const Elem& e) const { return div(nf(e.num()), nf(e.den())); }

    Elem inverse(const Elem& e) const {
        if (e.is_zero()) throw ZeroDivisor("inverse of zero");
        std::optional<Var> y;
        for (Var v : e.num().vars())
            if (kind(v) == SlotKind::Algebraic && (!y || v > *y)) y = v;
        if (!y) return Elem(e.den(), e.num());
        // Extended Euclid in y over the lower part of the tower.
        const Slot& s = slots_.at(*y);
        using U = std::vector<Elem>;
        auto trim = [](U& u) { while (!u.empty() && u.back().is_zero()) u.pop_back(); };
        U q(s.degree + 1);
        Elem lead_inv = inverse(Elem(s.lead));
        for (unsigned j = 0; j <= s.degree; ++j) q[j] = mul(Elem(s.cleared.coeff(*y, j)), lead_inv);
        U a;
        for (auto& [j, c] : e.num().coeffs(*y)) {
            if (a.size() <= j) a.resize(j + 1, zero());
            a[j] = Elem(c);
        }
        trim(a);
        U r0 = q, r1 = a, s0{}, s1{one()};
        while (r1.size() > 1) {
            // r0 = quo * r1 + rem
            U quo(r0.size() >= r1.size() ? r0.size() - r1.size() + 1 : 0, zero());
            Elem li = inverse(r1.back());
            while (r0.size() >= r1.size()) {
                std::size_t sh = r0.size() - r1.size();
                Elem f = mul(r0.back(), li);
                quo[sh] = add(quo[sh], f);
                for (std::size_t k = 0; k < r1.size(); ++k) r0[sh + k] = sub(r0[sh + k], mul(f, r1[k]));
                trim(r0);
            }
            U ns(std::max(s0.size(), quo.size() + s1.size()), zero());
            for (std::size_t k = 0; k < s0.size(); ++k) ns[k] = s0[k];
            for (std::size_t i = 0; i < quo.size(); ++i)
                for (std::size_t k = 0; k < s1.size(); ++k) ns[i + k] = sub(ns[i + k], mul(quo[i], s1[k]));
            trim(ns);
            std::swap(r0, r1);  // r0 <- old r1, r1 <- remainder
            s0 = std::move(s1);
            s1 = std::move(ns);
        }
        if (r1.empty()) throw ZeroDivisor("element is a zero divisor in the tower (non-generic presentation)");
        Elem c = inverse(r1[0]);
        Elem out = zero();
        Elem ypow = one(), yv = Elem(Poly::var(*y, p_));
        for (std::size_t k = 0; k < s1.size(); ++k) {
            out = add(out, mul(s1[k], ypow));
            ypow = mul(ypow, yv);
        }
        return mul(mul(out, c), Elem(e.den()));
    }

    struct InstallResult {
        bool installed = false;
        Poly reduced;  // the reduced relation; when not installed it no longer involves the leader
    };

    /// Installs a relation for slot v, which must exceed every installed slot.
    InstallResult install(Var v, const Poly& raw) {
        if (!slots_.empty() && slots_.rbegin()->first >= v) throw std::logic_error("tower slots must be installed in increasing order");
        Elem e = nf(raw);
        Poly n = e.num();
        if (!n.contains(v)) return {false, n};
        Slot s;
        s.degree = n.degree(v);
        s.relation = n;
        if (s.degree == 1) {
            s.kind = SlotKind::Solved;
            Elem c1 = reduce(n.coeff(v, 1), Poly::constant(1, p_));
            Elem c0 = reduce(n.coeff(v, 0), Poly::constant(1, p_));
            s.value = neg(div(c0, c1));
        } else {
            s.kind = SlotKind::Algebraic;
            Elem cd_inv = inverse(reduce(n.coeff(v, s.degree), Poly::constant(1, p_)));
            std::vector<Elem> c(s.degree);
            Poly lcm = Poly::constant(1, p_);
            for (unsigned j = 0; j < s.degree; ++j) {
                c[j] = mul(reduce(n.coeff(v, j), Poly::constant(1, p_)), cd_inv);
                lcm = *divide_exact(lcm * c[j].den(), gcd(lcm, c[j].den()));
            }
            s.lead = lcm;
            s.cleared = Poly::var(v, p_, s.degree) * lcm;
            for (unsigned j = 0; j < s.degree; ++j)
                s.cleared += c[j].num() * *divide_exact(lcm, c[j].den()) * Poly::var(v, p_, j);
            s.separable = !s.cleared.derivative(v).is_zero();
            check_irreducible(v, s);
            alg_.insert(v);
        }
        slots_.emplace(v, std::move(s));
        return {true, n};
    }

    /// Removes every slot >= v.
    void truncate_from(Var v) {
        slots_.erase(slots_.lower_bound(v), slots_.end());
        alg_.erase(alg_.lower_bound(v), alg_.end());
    }

    std::string to_string(const Elem& e, const VarNamer& name) const { return e.to_string(name); }

private:
    void check_irreducible(Var v, const Slot& s) {
        const Poly& q = s.cleared;
        bool free_coeffs = true;
        for (Var w : q.vars())
            if (w != v && kind(w) == SlotKind::Algebraic) free_coeffs = false;
        std::string who = "relation for slot " + std::to_string(v);
        if (s.degree == 2 && free_coeffs && p_ != 2) {
            Poly a = q.coeff(v, 2), b = q.coeff(v, 1), c = q.coeff(v, 0);
            Poly disc = b * b - Poly::constant(4, p_) * a * c;
            if (!poly_sqrt(disc)) return;
            throw ZeroDivisor(who + " is reducible (square discriminant); the presentation is not generic");
        }
        if (p_ != 0 && s.degree == p_ && free_coeffs) {
            // y^p - c with c not a p-th power in the free variables
            bool pure = true;
            for (unsigned j = 1; j < s.degree; ++j)
                if (!q.coeff(v, j).is_zero()) pure = false;
            if (pure) {
                Poly c = q.coeff(v, 0);
                for (auto& [m, k] : c.terms())
                    for (auto& [w, e] : m.factors())
                        if (e % p_) return;
            }
        }
        if (s.degree >= 3 && s.separable && free_coeffs) {
            Poly g = gcd(q, q.derivative(v));
            if (g.contains(v)) throw ZeroDivisor(who + " is not square-free; the presentation is not generic");
        }
        warnings_.push_back("irreducibility of the " + who + " (degree " + std::to_string(s.degree) + ") was not verified");
    }

    Space sp_;
    std::uint32_t p_ = 0;
    std::map<Var, Slot> slots_;
    std::set<Var> alg_;
    std::vector<std::string> warnings_;
};

/// Ops adaptor for linsolve over tower elements.
struct TowerOps {
    const Tower* t;
    Elem zero() const { return t->zero(); }
    Elem one() const { return t->one(); }
    bool is_zero(const Elem& e) const { return e.is_zero(); }
    Elem add(const Elem& a, const Elem& b) const { return t->add(a, b); }
    Elem sub(const Elem& a, const Elem& b) const { return t->sub(a, b); }
    Elem mul(const Elem& a, const Elem& b) const { return t->mul(a, b); }
    Elem div(const Elem& a, const Elem& b) const { return t->div(a, b); }
};

/// A finite presentation: one relation per leader, over slots of height <= height.
struct Presentation {
    Space space;
    std::uint32_t characteristic = 0;
    unsigned height = 0;
    std::vector<std::pair<DerivIndex, Poly>> relations;
};

inline std::vector<std::string> validate(const Presentation& pr) {
    std::vector<std::string> diag;
    std::set<Var> leaders;
    for (auto& [d, rel] : pr.relations) {
        std::string at = "relation for " + d.index.to_string() + "/" + std::to_string(d.unknown);
        try {
            pr.space.check(d);
        } catch (const std::exception& e) {
            diag.push_back(at + ": " + e.what());
            continue;
        }
        Var v = pr.space.rank(d);
        if (height(d.index) > pr.height) diag.push_back(at + ": leader above the presentation height");
        if (rel.characteristic() != pr.characteristic) diag.push_back(at + ": characteristic mismatch");
        if (!leaders.insert(v).second) diag.push_back(at + ": two relations share this leader");
        auto mv = rel.max_var();
        if (!mv || *mv != v) diag.push_back(at + ": leader is not the greatest variable of its relation");
        else if (rel.degree(v) == 0) diag.push_back(at + ": relation is constant in its leader");
    }
    return diag;
}

/// Installs the relations in ranking order; diagnostics if a leader vanishes.
inline Tower build_tower(const Presentation& pr) {
    auto diag = validate(pr);
    if (!diag.empty()) throw std::invalid_argument(diag.front());
    Tower t(pr.space, pr.characteristic);
    std::map<Var, const Poly*> byrank;
    for (auto& [d, rel] : pr.relations) byrank[pr.space.rank(d)] = &rel;
    for (auto& [v, rel] : byrank)
        if (!t.install(v, *rel).installed)
            throw std::invalid_argument("relation for slot " + pr.space.unrank(v).index.to_string() + " reduces to one without its leader");
    return t;
}

enum class LeaderClass { Free, Separable, Inseparable };

inline const char* to_string(LeaderClass c) {
    switch (c) {
        case LeaderClass::Free: return "free";
        case LeaderClass::Separable: return "leader-separable";
        case LeaderClass::Inseparable: return "leader-inseparable";
    }
    return "?";
}

struct LeaderReport {
    std::map<Var, LeaderClass> classes;                 // installed slots only; others are free
    std::vector<std::vector<DerivIndex>> minimal;        // per unknown, ranking order
    std::vector<DerivIndex> all_minimal() const {
        std::vector<DerivIndex> out;
        for (auto& v : minimal) out.insert(out.end(), v.begin(), v.end());
        return out;
    }
    unsigned max_minimal_height() const {
        unsigned h = 0;
        for (auto& v : minimal)
            for (auto& d : v) h = std::max(h, height(d.index));
        return h;
    }
};

inline LeaderReport classify_leaders(const Tower& t) {
    LeaderReport r;
    r.minimal.resize(t.space().n());
    std::vector<DerivIndex> seps;
    for (auto& [v, s] : t.slots()) {
        bool sep = s.kind == SlotKind::Solved || s.separable;
        r.classes[v] = sep ? LeaderClass::Separable : LeaderClass::Inseparable;
        if (sep) seps.push_back(t.space().unrank(v));
    }
    for (auto& d : seps) {
        bool minimal = true;
        for (auto& e : seps)
            if (strictly_below(e, d)) { minimal = false; break; }
        if (minimal) r.minimal[d.unknown].push_back(d);
    }
    return r;
}

}  // namespace prolong
