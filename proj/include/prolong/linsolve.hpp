#pragma once

// Gauss-Jordan elimination over an exact field supplied through an ops
// object:
//   T zero(); T one(); bool is_zero(const T&);
//   T add(const T&, const T&); T sub(...); T mul(...); T div(...);

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace prolong {

template <class T>
struct LinRow {
    std::vector<T> coeffs;  // one per unknown
    T rhs;                  // sum coeffs[j] * x_j = rhs
};

template <class T, class Label>
struct LinSystem {
    std::vector<Label> unknowns;
    std::vector<LinRow<T>> rows;

    void add_row(std::vector<T> coeffs, T rhs) {
        if (coeffs.size() != unknowns.size()) throw std::invalid_argument("row width does not match the number of unknowns");
        rows.push_back({std::move(coeffs), std::move(rhs)});
    }
};

/// Reduced row echelon form with the original row each reduced row came from.
template <class T>
struct Echelon {
    std::vector<LinRow<T>> rows;      // pivot rows first, then residual rows (all-zero coefficients)
    std::vector<std::size_t> origin;  // index of the input row that ended up here
    std::vector<std::size_t> pivots;  // pivot column of rows[0..rank)
    std::size_t rank() const { return pivots.size(); }
};

template <class T>
struct SolutionSpace {
    bool inconsistent = false;
    std::optional<std::size_t> failing_row;  // input row reducing to 0 = nonzero
    std::vector<T> particular;
    std::vector<std::vector<T>> kernel;
};

template <class T, class Label, class Ops>
Echelon<T> eliminate(const LinSystem<T, Label>& sys, const Ops& ops) {
    Echelon<T> e;
    e.rows = sys.rows;
    for (std::size_t i = 0; i < e.rows.size(); ++i) e.origin.push_back(i);
    const std::size_t ncols = sys.unknowns.size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < ncols && r < e.rows.size(); ++c) {
        std::size_t piv = r;
        while (piv < e.rows.size() && ops.is_zero(e.rows[piv].coeffs[c])) ++piv;
        if (piv == e.rows.size()) continue;
        std::swap(e.rows[r], e.rows[piv]);
        std::swap(e.origin[r], e.origin[piv]);
        LinRow<T>& pr = e.rows[r];
        T inv = ops.div(ops.one(), pr.coeffs[c]);
        for (std::size_t k = c; k < ncols; ++k)
            if (!ops.is_zero(pr.coeffs[k])) pr.coeffs[k] = ops.mul(pr.coeffs[k], inv);
        pr.rhs = ops.mul(pr.rhs, inv);
        for (std::size_t o = 0; o < e.rows.size(); ++o) {
            if (o == r || ops.is_zero(e.rows[o].coeffs[c])) continue;
            T f = e.rows[o].coeffs[c];
            for (std::size_t k = c; k < ncols; ++k)
                if (!ops.is_zero(pr.coeffs[k])) e.rows[o].coeffs[k] = ops.sub(e.rows[o].coeffs[k], ops.mul(f, pr.coeffs[k]));
            e.rows[o].rhs = ops.sub(e.rows[o].rhs, ops.mul(f, pr.rhs));
        }
        e.pivots.push_back(c);
        ++r;
    }
    return e;
}

template <class T, class Label, class Ops>
SolutionSpace<T> linsolve(const LinSystem<T, Label>& sys, const Ops& ops) {
    Echelon<T> e = eliminate(sys, ops);
    SolutionSpace<T> s;
    for (std::size_t i = e.rank(); i < e.rows.size(); ++i)
        if (!ops.is_zero(e.rows[i].rhs)) {
            s.inconsistent = true;
            s.failing_row = e.origin[i];
            return s;
        }
    const std::size_t n = sys.unknowns.size();
    s.particular.assign(n, ops.zero());
    std::vector<bool> is_pivot(n, false);
    for (std::size_t i = 0; i < e.rank(); ++i) {
        s.particular[e.pivots[i]] = e.rows[i].rhs;
        is_pivot[e.pivots[i]] = true;
    }
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        std::vector<T> v(n, ops.zero());
        v[f] = ops.one();
        for (std::size_t i = 0; i < e.rank(); ++i)
            if (!ops.is_zero(e.rows[i].coeffs[f])) v[e.pivots[i]] = ops.sub(ops.zero(), e.rows[i].coeffs[f]);
        s.kernel.push_back(std::move(v));
    }
    return s;
}

/// Sum_j coeffs[j] * x[j] - rhs for every row; all zero iff x solves the system.
template <class T, class Label, class Ops>
std::vector<T> residuals(const LinSystem<T, Label>& sys, const std::vector<T>& x, const Ops& ops) {
    std::vector<T> out;
    for (auto& row : sys.rows) {
        T acc = ops.sub(ops.zero(), row.rhs);
        for (std::size_t j = 0; j < x.size(); ++j) acc = ops.add(acc, ops.mul(row.coeffs[j], x[j]));
        out.push_back(acc);
    }
    return out;
}

}  // namespace prolong
