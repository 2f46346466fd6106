#pragma once

// Letter pictures of a tower for two derivations: rows are powers of D0,
// columns powers of D1. Slots with equal normal forms share a letter; a slot
// equal to no other is drawn as '*'. Letters follow row-major first
// occurrence.

#include "tower.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace prolong {

using Picture = std::vector<std::vector<std::string>>;

namespace detail {

inline std::string letter_name(unsigned k) {
    std::string s;
    do {
        s.insert(s.begin(), static_cast<char>('a' + k % 26));
        k /= 26;
    } while (k-- > 0);
    return s;
}

inline Picture letter_cells(const Tower& t, unsigned unknown, const std::vector<std::pair<unsigned, unsigned>>& cells,
                            const std::vector<std::size_t>& row_len) {
    const Space& sp = t.space();
    if (sp.m() != 2) throw std::invalid_argument("pictures are defined for two derivations only");
    if (unknown >= sp.n()) throw std::invalid_argument("unknown index out of range");
    std::vector<Elem> vals;
    for (auto& [i, j] : cells) vals.push_back(t.var(sp.rank({MultiIndex{i, j}, unknown})));
    std::vector<int> cls(vals.size(), -1);
    std::vector<std::size_t> count;
    for (std::size_t a = 0; a < vals.size(); ++a) {
        if (cls[a] >= 0) continue;
        cls[a] = static_cast<int>(count.size());
        count.push_back(1);
        for (std::size_t b = a + 1; b < vals.size(); ++b)
            if (cls[b] < 0 && vals[b] == vals[a]) cls[b] = cls[a], ++count.back();
    }
    std::vector<std::string> letter(count.size());
    unsigned next = 0;
    auto name = letter_name;
    Picture out;
    std::size_t idx = 0;
    for (std::size_t r = 0; r < row_len.size(); ++r) {
        out.emplace_back();
        for (std::size_t c = 0; c < row_len[r]; ++c, ++idx) {
            int k = cls[idx];
            if (count[k] == 1) out.back().push_back("*");
            else {
                if (letter[k].empty()) letter[k] = name(next++);
                out.back().push_back(letter[k]);
            }
        }
    }
    return out;
}

}  // namespace detail

/// Slots (i, j) with i + j <= h.
inline Picture render_triangle(const Tower& t, unsigned unknown, unsigned h) {
    std::vector<std::pair<unsigned, unsigned>> cells;
    std::vector<std::size_t> len;
    for (unsigned i = 0; i <= h; ++i) {
        len.push_back(h - i + 1);
        for (unsigned j = 0; i + j <= h; ++j) cells.push_back({i, j});
    }
    return detail::letter_cells(t, unknown, cells, len);
}

/// Slots (i, j) with i < rows, j < cols.
inline Picture render_box(const Tower& t, unsigned unknown, unsigned rows, unsigned cols) {
    std::vector<std::pair<unsigned, unsigned>> cells;
    std::vector<std::size_t> len(rows, cols);
    for (unsigned i = 0; i < rows; ++i)
        for (unsigned j = 0; j < cols; ++j) cells.push_back({i, j});
    return detail::letter_cells(t, unknown, cells, len);
}

/// Slots (i, j) with i + j <= h drawn by value. Generators are named a, b,
/// c, ... in ranking order and other slots are drawn as their values. An
/// algebraic slot whose relation is linear in an earlier free slot, with a
/// constant coefficient, takes that slot's place as a generator: the free
/// slot is then drawn solved (D1 x = (D0 x)^p + x shows D1 x as b^p + a).
inline Picture render_values(const Tower& t, unsigned unknown, unsigned h) {
    const Space& sp = t.space();
    if (sp.m() != 2) throw std::invalid_argument("pictures are defined for two derivations only");
    if (unknown >= sp.n()) throw std::invalid_argument("unknown index out of range");
    const Var end = sp.slots_upto(h);
    std::map<Var, Poly> solved_for;  // swapped free slot -> value
    std::set<Var> promoted;
    for (auto& [y, s] : t.slots()) {
        if (y >= end || s.kind != SlotKind::Algebraic) continue;
        auto vs = s.relation.vars();
        for (auto it = vs.rbegin(); it != vs.rend(); ++it) {
            Var z = *it;
            if (z >= y || t.kind(z) != SlotKind::Free || solved_for.count(z)) continue;
            if (s.relation.degree(z) != 1 || !s.relation.coeff(z, 1).is_constant()) continue;
            Scalar c = s.relation.coeff(z, 1).constant_value();
            solved_for[z] = s.relation.coeff(z, 0).scaled(-c.inverse());
            promoted.insert(y);
            break;
        }
    }
    std::map<Var, std::string> names;
    for (Var v = 0; v < end; ++v)
        if ((t.kind(v) == SlotKind::Free && !solved_for.count(v)) || promoted.count(v))
            names[v] = detail::letter_name(static_cast<unsigned>(names.size()));
    VarNamer nm = [&](Var v) {
        auto it = names.find(v);
        return it != names.end() ? it->second : slot_name(sp.unrank(v), {});
    };
    auto expand = [&](Poly p) {
        for (std::size_t round = 0; round <= solved_for.size(); ++round) {
            bool changed = false;
            for (auto& [z, val] : solved_for)
                if (p.degree(z) > 0) p = p.substitute(z, val), changed = true;
            if (!changed) break;
        }
        return p;
    };
    Picture out;
    for (unsigned i = 0; i <= h; ++i) {
        out.emplace_back();
        for (unsigned j = 0; i + j <= h; ++j) {
            Elem e = t.var(sp.rank({MultiIndex{i, j}, unknown}));
            out.back().push_back(Elem(expand(e.num()), expand(e.den())).to_string(nm));
        }
    }
    return out;
}

inline std::string picture_text(const Picture& p) {
    std::size_t w = 1;
    for (auto& row : p)
        for (auto& cell : row) w = std::max(w, cell.size());
    std::string s;
    for (auto& row : p) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) line += w > 1 ? "  " : " ";
            line += row[c];
            if (w > 1 && c + 1 < row.size()) line += std::string(w - row[c].size(), ' ');
        }
        s += line + "\n";
    }
    return s;
}

}  // namespace prolong
