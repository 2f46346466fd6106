#pragma once

// Polynomial differential systems in solved form: each equation p = 0 has a
// leader, the greatest derivative occurring in p.

#include "tower.hpp"

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace prolong {

struct Equation {
    Poly poly;
    DerivIndex leader;
};

struct SystemSpec {
    Space space{1, 1};
    std::uint32_t characteristic = 0;
    std::vector<std::string> unknowns;
    std::vector<Equation> equations;

    unsigned m() const { return space.m(); }
    unsigned n() const { return space.n(); }

    /// Greatest height of any derivative occurring in the equations.
    unsigned max_height() const {
        unsigned h = 0;
        for (auto& e : equations)
            for (Var v : e.poly.vars()) h = std::max(h, space.height_of(v));
        return h;
    }

    VarNamer namer() const { return make_namer(space, unknowns); }
};

struct SystemError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Builds a system, detecting leaders and rejecting duplicates and constants.
inline SystemSpec make_system(unsigned m, std::vector<std::string> unknowns, std::uint32_t p, const std::vector<Poly>& polys) {
    check_characteristic(p);
    if (unknowns.empty()) throw SystemError("at least one unknown is required");
    std::set<std::string> seen;
    for (auto& u : unknowns)
        if (!seen.insert(u).second) throw SystemError("duplicate unknown name '" + u + "'");
    SystemSpec s;
    s.space = Space(m, static_cast<unsigned>(unknowns.size()));
    s.characteristic = p;
    s.unknowns = std::move(unknowns);
    std::set<Var> leaders;
    for (std::size_t i = 0; i < polys.size(); ++i) {
        const Poly& q = polys[i];
        if (q.characteristic() != p) throw SystemError("equation " + std::to_string(i + 1) + ": characteristic mismatch");
        auto v = q.max_var();
        if (!v) throw SystemError("equation " + std::to_string(i + 1) + (q.is_zero() ? " is trivially 0 = 0" : " has no derivative terms"));
        if (!leaders.insert(*v).second)
            throw SystemError("equation " + std::to_string(i + 1) + ": leader " + slot_name(s.space.unrank(*v), s.unknowns) + " already used");
        s.equations.push_back({q, s.space.unrank(*v)});
    }
    return s;
}

/// D_i applied to a polynomial in slot variables over a constant base:
/// sum over v of (dp/dv) * v', where v' is v shifted one step in direction i.
inline Poly differentiate(const Poly& p, unsigned i, const Space& sp) {
    Poly r(p.characteristic());
    for (Var v : p.vars()) {
        Poly dv = p.derivative(v);
        if (dv.is_zero()) continue;
        DerivIndex d = sp.unrank(v);
        d.index = add_unit(d.index, i);
        r += dv * Poly::var(sp.rank(d), p.characteristic());
    }
    return r;
}

inline unsigned poly_height(const Poly& p, const Space& sp) {
    unsigned h = 0;
    for (Var v : p.vars()) h = std::max(h, sp.height_of(v));
    return h;
}

}  // namespace prolong
