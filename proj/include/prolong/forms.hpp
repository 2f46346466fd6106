#pragma once

// Forms of degree 0, 1 and 2 on the formal basis dt^0 ... dt^{m-1}, with
// tower-element coefficients; the first-order reduction of a system and the
// linear system expressing that mixed derivatives of its right-hand sides
// agree.

#include "linsolve.hpp"
#include "prolongation.hpp"
#include "verdict.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace prolong {

class Form {
public:
    using Basis = std::vector<unsigned>;  // strictly increasing derivation indices

    Form(unsigned m, unsigned degree) : m_(m), deg_(degree) {
        if (degree > 2) throw std::invalid_argument("forms of degree above 2 are not supported");
    }

    static Form scalar(unsigned m, const Elem& f) {
        Form r(m, 0);
        if (!f.is_zero()) r.c_[{}] = f;
        return r;
    }
    /// dt^i * f
    static Form dt(unsigned m, unsigned i, const Elem& f) {
        if (i >= m) throw std::out_of_range("derivation index out of range");
        Form r(m, 1);
        if (!f.is_zero()) r.c_[{i}] = f;
        return r;
    }
    /// dt^i ^ dt^j * f, any i, j
    static Form dt2(unsigned m, unsigned i, unsigned j, const Elem& f) {
        if (i >= m || j >= m) throw std::out_of_range("derivation index out of range");
        Form r(m, 2);
        if (i == j || f.is_zero()) return r;
        r.c_[{std::min(i, j), std::max(i, j)}] = i < j ? f : -f;
        return r;
    }

    unsigned m() const { return m_; }
    unsigned degree() const { return deg_; }
    const std::map<Basis, Elem>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }

    Elem coeff(const Basis& b) const {
        auto it = c_.find(b);
        return it == c_.end() ? Elem() : it->second;
    }

    friend Form operator+(const Form& a, const Form& b) {
        a.same(b);
        Form r = a;
        for (auto& [k, v] : b.c_) r.accumulate(k, v);
        return r;
    }
    friend Form operator-(const Form& a, const Form& b) { return a + b.scaled_by(-1); }
    friend bool operator==(const Form& a, const Form& b) { return a.m_ == b.m_ && a.deg_ == b.deg_ && a.c_ == b.c_; }

    Form scaled(const Tower& t, const Elem& f) const {
        Form r(m_, deg_);
        for (auto& [k, v] : c_) r.accumulate(k, t.mul(v, f));
        return r;
    }

    std::string to_string(const VarNamer& name) const {
        if (c_.empty()) return "0";
        std::string s;
        for (auto& [k, v] : c_) {
            if (!s.empty()) s += " + ";
            std::string basis;
            for (std::size_t i = 0; i < k.size(); ++i) basis += (i ? "^dt" : "dt") + std::to_string(k[i]);
            s += basis.empty() ? v.to_string(name) : basis + "*(" + v.to_string(name) + ")";
        }
        return s;
    }

    void accumulate(const Basis& k, const Elem& v) {
        if (v.is_zero()) return;
        auto [it, fresh] = c_.emplace(k, v);
        if (!fresh) {
            it->second = it->second + v;
            if (it->second.is_zero()) c_.erase(it);
        }
    }

private:
    Form scaled_by(long k) const {
        Form r = *this;
        for (auto& [b, v] : r.c_) v = k == -1 ? -v : v * Elem(Poly::constant(k, v.characteristic()));
        return r;
    }
    void same(const Form& o) const {
        if (m_ != o.m_ || deg_ != o.deg_) throw std::invalid_argument("adding forms of different shapes");
    }

    unsigned m_;
    unsigned deg_;
    std::map<Basis, Elem> c_;
};

inline Form wedge(const Tower& t, const Form& a, const Form& b) {
    if (a.m() != b.m()) throw std::invalid_argument("forms over different numbers of derivations");
    if (a.degree() + b.degree() > 2) throw std::invalid_argument("wedge would exceed degree 2");
    Form r(a.m(), a.degree() + b.degree());
    for (auto& [ka, va] : a.coeffs())
        for (auto& [kb, vb] : b.coeffs()) {
            Form::Basis k = ka;
            k.insert(k.end(), kb.begin(), kb.end());
            Elem v = t.mul(va, vb);
            if (k.size() == 2) {
                if (k[0] == k[1]) continue;
                if (k[0] > k[1]) std::swap(k[0], k[1]), v = -v;
            }
            r.accumulate(k, v);
        }
    return r;
}

/// d f = sum_i dt^i D_i f; d(sum f_i dt^i) = sum_i d f_i ^ dt^i.
inline Form exterior_d(const DerivationTable& table, const Form& w) {
    const Tower& t = table.tower();
    unsigned m = w.m();
    if (w.degree() == 0) {
        Form r(m, 1);
        if (w.is_zero()) return r;
        Elem f = w.coeff({});
        for (unsigned i = 0; i < m; ++i) r.accumulate({i}, table.derive(i, f));
        return r;
    }
    if (w.degree() == 1) {
        Form r(m, 2);
        for (auto& [k, f] : w.coeffs()) {
            Form df = exterior_d(table, Form::scalar(m, f));
            r = r + wedge(t, df, Form::dt(m, k[0], t.one()));
        }
        return r;
    }
    throw std::invalid_argument("the exterior derivative of a 2-form is not supported");
}

// ---------------------------------------------------------------------------
// First-order reduction

struct FoLabel {
    Var var;
    unsigned direction;
    friend bool operator==(const FoLabel&, const FoLabel&) = default;
    friend auto operator<=>(const FoLabel&, const FoLabel&) = default;
};

struct FirstOrderSystem {
    SystemSpec system;
    unsigned height = 0;  // order of the reduced input
    Tower tower;          // relations among the variables (the f-equations), for normal forms
    std::vector<Var> variables;
    std::map<Var, std::vector<Elem>> assigned;  // y -> (g_0, ..., g_{m-1}) with D_i y = g_i
    std::vector<Poly> relations;                // f-equations among the variables

    bool is_assigned(Var v) const { return assigned.count(v) > 0; }
};

inline FirstOrderSystem first_order_reduction(const SystemSpec& sys) {
    FirstOrderSystem fo;
    fo.system = sys;
    const Space& sp = sys.space;
    const unsigned m = sys.m();
    unsigned H = sys.max_height();
    fo.height = H;
    fo.tower = Tower(sp, sys.characteristic);
    // leaders by rank
    std::map<Var, const Equation*> lead;
    for (auto& e : sys.equations) lead[sp.rank(e.leader)] = &e;
    auto shifted = [&](Var v, unsigned i) {
        DerivIndex d = sp.unrank(v);
        d.index = add_unit(d.index, i);
        return sp.rank(d);
    };
    if (H <= 1) {
        // Already first order: height-1 leaders give the assignments.
        Tower all(sp, sys.characteristic);
        for (auto& [v, e] : lead) {
            if (e->poly.degree(v) != 1) throw Unsupported("first-order reduction needs equations linear in their leaders");
            if (!all.install(v, e->poly).installed) throw Unsupported("an equation collapses below its leader");
        }
        for (auto& [v, e] : lead)
            if (sp.height_of(v) == 0) {
                fo.relations.push_back(e->poly);
                fo.tower.install(v, e->poly);
            }
        for (unsigned k = 0; k < sp.n(); ++k) {
            Var x = sp.rank({MultiIndex(m), k});
            fo.variables.push_back(x);
            bool any = false;
            for (unsigned i = 0; i < m; ++i) any = any || lead.count(shifted(x, i));
            if (!any) continue;
            std::vector<Elem> g;
            for (unsigned i = 0; i < m; ++i) {
                Var y = shifted(x, i);
                if (!lead.count(y)) fo.variables.push_back(y);
                g.push_back(all.var(y));
            }
            fo.assigned[x] = g;
        }
        std::sort(fo.variables.begin(), fo.variables.end());
        return fo;
    }
    // Full triangle: every slot below height H is assigned; leaders at height
    // H are substituted; lower leaders stay as variables with their equations.
    Tower top(sp, sys.characteristic);
    for (auto& [v, e] : lead) {
        if (sp.height_of(v) < H) {
            fo.relations.push_back(e->poly);
            if (!fo.tower.install(v, e->poly).installed) throw Unsupported("an equation collapses below its leader");
        } else if (e->poly.degree(v) != 1) {
            throw Unsupported("first-order reduction needs top-order equations linear in their leaders");
        }
    }
    for (Var v = 0; v < sp.slots_upto(H); ++v) {
        auto it = lead.find(v);
        if (sp.height_of(v) == H && it != lead.end()) {
            const Poly& p = it->second->poly;
            top.install(v, p);  // solved in terms of lesser slots, which stay symbols
            continue;
        }
        fo.variables.push_back(v);
    }
    for (Var v = 0; v < sp.slots_upto(H - 1); ++v) {
        std::vector<Elem> g;
        for (unsigned i = 0; i < m; ++i) g.push_back(top.var(shifted(v, i)));
        fo.assigned[v] = g;
    }
    return fo;
}

struct CommutationSystem {
    LinSystem<Elem, FoLabel> lin;
    std::vector<std::pair<Var, std::pair<unsigned, unsigned>>> origin;  // (y, (h, i)) per row
};

inline std::string label_name(const FoLabel& l, const SystemSpec& sys) {
    return "∂" + std::to_string(l.direction) + "(" + slot_symbol(sys.space.unrank(l.var), sys.unknowns) + ")";
}

/// Rows D_h(g_i^y) - D_i(g_h^y) = 0 for assigned y and h < i, by the chain rule;
/// derivatives of unassigned variables are the unknowns.
inline CommutationSystem commutation_system(const FirstOrderSystem& fo) {
    const Tower& t = fo.tower;
    const unsigned m = fo.system.m();
    std::map<FoLabel, std::size_t> col;
    struct RawRow {
        std::map<FoLabel, Elem> coeff;
        Elem known;
    };
    std::vector<RawRow> raws;
    std::vector<std::pair<Var, std::pair<unsigned, unsigned>>> origin;
    // D_h of an element: chain rule through the variables
    auto derive = [&](const Elem& g, unsigned h, RawRow& row, const Elem& sign) {
        std::set<Var> vs = g.num().vars();
        for (Var v : g.den().vars()) vs.insert(v);
        for (Var v : vs) {
            // partial derivative of num/den in v
            Poly dn = g.num().derivative(v), dd = g.den().derivative(v);
            Elem part = Elem(dn * g.den() - g.num() * dd, g.den() * g.den());
            if (part.is_zero()) continue;
            part = t.mul(t.nf(part), sign);
            auto a = fo.assigned.find(v);
            if (a != fo.assigned.end()) {
                row.known = t.add(row.known, t.mul(part, t.nf(a->second[h])));
            } else {
                FoLabel l{v, h};
                auto it = row.coeff.try_emplace(l, t.zero()).first;
                it->second = t.add(it->second, part);
            }
        }
    };
    for (auto& [y, g] : fo.assigned)
        for (unsigned i = 0; i < m; ++i)
            for (unsigned h = 0; h < i; ++h) {
                RawRow row{{}, t.zero()};
                derive(g[i], h, row, t.one());
                derive(g[h], i, row, t.neg(t.one()));
                for (auto it = row.coeff.begin(); it != row.coeff.end();)
                    it = it->second.is_zero() ? row.coeff.erase(it) : std::next(it);
                if (row.coeff.empty() && row.known.is_zero()) continue;
                raws.push_back(row);
                origin.push_back({y, {h, i}});
                for (auto& [l, c] : row.coeff) col.emplace(l, 0);
            }
    CommutationSystem cs;
    for (auto& [l, idx] : col) {
        idx = cs.lin.unknowns.size();
        cs.lin.unknowns.push_back(l);
    }
    for (auto& r : raws) {
        std::vector<Elem> coeffs(cs.lin.unknowns.size(), t.zero());
        for (auto& [l, c] : r.coeff) coeffs[col.at(l)] = c;
        cs.lin.add_row(std::move(coeffs), t.neg(r.known));
    }
    cs.origin = std::move(origin);
    return cs;
}

/// "c1*u1 + c2*u2 = rhs" per row.
inline std::vector<std::string> describe(const CommutationSystem& cs, const SystemSpec& sys) {
    auto nm = symbol_namer(sys);
    std::vector<std::string> out;
    for (auto& row : cs.lin.rows) {
        std::string s;
        for (std::size_t j = 0; j < row.coeffs.size(); ++j) {
            const Elem& c = row.coeffs[j];
            if (c.is_zero()) continue;
            std::string cstr = c.to_string(nm);
            std::string term = cstr == "1" ? "" : cstr == "-1" ? "-" : "(" + cstr + ")*";
            std::string piece = term + label_name(cs.lin.unknowns[j], sys);
            if (s.empty()) s = piece;
            else if (piece[0] == '-') s += " - " + piece.substr(1);
            else s += " + " + piece;
        }
        out.push_back((s.empty() ? "0" : s) + " = " + row.rhs.to_string(nm));
    }
    return out;
}

}  // namespace prolong
