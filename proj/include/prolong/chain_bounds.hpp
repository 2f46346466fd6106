#pragma once

// Antichains of (N^m x n, <=): exhaustive maxima for tiny grids, and the
// divide-and-conquer upper bound on strictly increasing chains of antichains
// S_0 < S_1 < ... with S_k inside height a_k.

#include "deriv_index.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace prolong {

struct BoundOverflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Height bounds a(0), a(1), ... given by a rule.
struct ChainSpec {
    unsigned m = 1;
    unsigned n = 1;
    std::function<mpz_class(const mpz_class&)> a;

    static ChainSpec constant(unsigned m, unsigned n, unsigned c) {
        return {m, n, [c](const mpz_class&) { return mpz_class(c); }};
    }
    /// a(i) = values[i], the last value repeating.
    static ChainSpec prefix(unsigned m, unsigned n, std::vector<unsigned> values) {
        if (values.empty()) throw std::invalid_argument("empty height sequence");
        return {m, n, [values](const mpz_class& i) {
                    if (i >= static_cast<unsigned long>(values.size())) return mpz_class(values.back());
                    return mpz_class(values[i.get_ui()]);
                }};
    }
    /// a(u) = 2^u * r.
    static ChainSpec geometric(unsigned m, unsigned n, unsigned r) {
        return {m, n, [r](const mpz_class& u) {
                    if (u > 1u << 16) throw BoundOverflow("height sequence 2^u*r evaluated at an astronomically large index");
                    mpz_class v;
                    mpz_ui_pow_ui(v.get_mpz_t(), 2, u.get_ui());
                    return mpz_class(v * r);
                }};
    }

    unsigned at(unsigned i) const { return static_cast<unsigned>(a(mpz_class(i)).get_ui()); }
};

namespace detail {

struct Grid {
    std::vector<DerivIndex> elems;
    std::vector<std::uint64_t> comparable;  // bitmask of elements comparable to each (including itself)
    std::vector<unsigned> heights;
};

inline Grid make_grid(unsigned m, unsigned n, unsigned cap) {
    Grid g;
    g.elems = enumerate_upto(m, n, cap);
    if (g.elems.size() > 64) throw std::invalid_argument("grid too large for exhaustive search (more than 64 indices)");
    for (auto& d : g.elems) g.heights.push_back(height(d.index));
    for (std::size_t i = 0; i < g.elems.size(); ++i) {
        std::uint64_t mask = 0;
        for (std::size_t j = 0; j < g.elems.size(); ++j)
            if (below(g.elems[i], g.elems[j]) || below(g.elems[j], g.elems[i])) mask |= 1ull << j;
        g.comparable.push_back(mask);
    }
    return g;
}

inline std::uint64_t height_mask(const Grid& g, unsigned h) {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < g.elems.size(); ++i)
        if (g.heights[i] <= h) m |= 1ull << i;
    return m;
}

/// Elements that can be added to antichain s.
inline std::uint64_t addable(const Grid& g, std::uint64_t s) {
    std::uint64_t bad = 0;
    for (std::size_t i = 0; i < g.elems.size(); ++i)
        if (s >> i & 1) bad |= g.comparable[i];
    std::uint64_t all = g.elems.size() == 64 ? ~0ull : (1ull << g.elems.size()) - 1;
    return all & ~bad;
}

inline unsigned popcount(std::uint64_t x) { return static_cast<unsigned>(__builtin_popcountll(x)); }

}  // namespace detail

/// Largest antichain among indices of height <= cap, by exhaustive search.
inline unsigned max_antichain_size(unsigned m, unsigned n, unsigned cap) {
    auto g = detail::make_grid(m, n, cap);
    unsigned best = 0;
    std::size_t visited = 0;
    std::function<void(std::uint64_t, std::uint64_t)> go = [&](std::uint64_t s, std::uint64_t cand) {
        if (++visited > 1000000) throw std::length_error("antichain search exceeds 10^6 states");
        best = std::max(best, detail::popcount(s));
        if (detail::popcount(s) + detail::popcount(cand) <= best) return;
        while (cand) {
            unsigned i = static_cast<unsigned>(__builtin_ctzll(cand));
            cand &= cand - 1;
            go(s | 1ull << i, cand & ~g.comparable[i]);
        }
    };
    go(0, detail::addable(g, 0));
    return best;
}

struct ChainResult {
    unsigned length = 0;                           // number of sets in the chain
    std::vector<std::vector<DerivIndex>> witness;  // S_0, S_1, ...
};

/// Longest chain S_0 < S_1 < ... (at most rounds_cap sets) of antichains with
/// S_k inside height a(k); S_0 may be empty.
inline ChainResult brute_force_max_chain(const ChainSpec& spec, unsigned rounds_cap) {
    if (rounds_cap == 0) return {};
    std::vector<unsigned> a(rounds_cap);
    unsigned amax = 0;
    for (unsigned k = 0; k < rounds_cap; ++k) amax = std::max(amax, a[k] = spec.at(k));
    auto g = detail::make_grid(spec.m, spec.n, amax);
    std::vector<std::uint64_t> hm(rounds_cap);
    for (unsigned k = 0; k < rounds_cap; ++k) hm[k] = detail::height_mask(g, a[k]);
    std::map<std::pair<unsigned, std::uint64_t>, std::pair<unsigned, std::uint64_t>> memo;  // -> (length, next)
    std::size_t states = 0;
    // Longest chain continuing from S_k = s (counting s itself).
    std::function<unsigned(unsigned, std::uint64_t)> best = [&](unsigned k, std::uint64_t s) -> unsigned {
        auto key = std::make_pair(k, s);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second.first;
        if (++states > 1000000) throw std::length_error("chain search exceeds 10^6 states");
        unsigned len = 1;
        std::uint64_t next = 0;
        if (k + 1 < rounds_cap && (s & ~hm[k + 1]) == 0) {
            std::uint64_t cand = detail::addable(g, s) & hm[k + 1];
            // every nonempty antichain X inside cand gives T = s | X
            std::function<void(std::uint64_t, std::uint64_t)> ext = [&](std::uint64_t x, std::uint64_t c) {
                while (c) {
                    unsigned i = static_cast<unsigned>(__builtin_ctzll(c));
                    c &= c - 1;
                    std::uint64_t t = x | 1ull << i;
                    unsigned l = 1 + best(k + 1, s | t);
                    if (l > len) len = l, next = s | t;
                    ext(t, c & ~g.comparable[i]);
                }
            };
            ext(0, cand);
        }
        memo[key] = {len, next};
        return len;
    };
    ChainResult res;
    std::uint64_t start = 0;
    std::function<void(std::uint64_t, std::uint64_t)> roots = [&](std::uint64_t x, std::uint64_t c) {
        unsigned l = best(0, x);
        if (l > res.length) res.length = l, start = x;
        while (c) {
            unsigned i = static_cast<unsigned>(__builtin_ctzll(c));
            c &= c - 1;
            roots(x | 1ull << i, c & ~g.comparable[i]);
        }
    };
    roots(0, detail::addable(g, 0) & hm[0]);
    std::uint64_t s = start;
    for (unsigned k = 0; k < res.length; ++k) {
        std::vector<DerivIndex> set;
        for (std::size_t i = 0; i < g.elems.size(); ++i)
            if (s >> i & 1) set.push_back(g.elems[i]);
        res.witness.push_back(set);
        s = memo.at({k, s}).second;
    }
    return res;
}

namespace detail {

inline constexpr unsigned long kIterationLimit = 1000000;

inline void guard(const mpz_class& x) {
    if (mpz_sizeinbase(x.get_mpz_t(), 2) > 4096) throw BoundOverflow("chain bound exceeds 4096 bits");
}

using Seq = std::function<mpz_class(const mpz_class&)>;

inline Seq shift(const Seq& a, const mpz_class& k) {
    return [a, k](const mpz_class& i) { return a(i + k); };
}

inline mpz_class chain_bound(unsigned m, const mpz_class& n, const Seq& a);

/// n = 1 and m >= 2: slice by coordinate value below some sigma in the first
/// nonempty set; at most |sigma| + m slices, each an antichain in m - 1 coordinates.
inline mpz_class chain_bound_n1(unsigned m, const Seq& a) {
    mpz_class first = chain_bound(m - 1, a(0) + m, a);
    mpz_class later = 1 + chain_bound(m - 1, a(1) + m, shift(a, 1));
    return first > later ? first : later;
}

inline mpz_class chain_bound(unsigned m, const mpz_class& n, const Seq& a) {
    if (m == 1) return n + 1;
    if (n == 1) return chain_bound_n1(m, a);
    if (!n.fits_ulong_p() || n > kIterationLimit) throw BoundOverflow("number of unknowns too large for the recursion");
    // Split off the last unknown: f(k) bounds chains of its part starting at k.
    std::map<mpz_class, mpz_class> fmemo, gmemo;
    std::function<mpz_class(const mpz_class&)> f = [&](const mpz_class& k) {
        auto it = fmemo.find(k);
        if (it != fmemo.end()) return it->second;
        mpz_class v = k + chain_bound(m, 1, shift(a, k));
        guard(v);
        fmemo[k] = v;
        return v;
    };
    // g(k) = max_{i<=k} f(i), evaluated incrementally.
    mpz_class gk_arg = -1, gk_val = 0;
    auto g = [&](const mpz_class& k) {
        if (k > kIterationLimit) throw BoundOverflow("g evaluated beyond the iteration limit");
        if (k < gk_arg) {
            mpz_class best = 0;
            for (mpz_class i = 0; i <= k; ++i) best = std::max(best, f(i));
            return best;
        }
        while (gk_arg < k) {
            ++gk_arg;
            gk_val = std::max(gk_val, f(gk_arg));
        }
        return gk_val;
    };
    // g^i(0) for the subsequence of the first n-1 unknowns.
    std::vector<mpz_class> iter{0};
    auto giter = [&](const mpz_class& i) {
        if (!i.fits_ulong_p() || i > kIterationLimit) throw BoundOverflow("iteration count too large");
        unsigned long ii = i.get_ui();
        while (iter.size() <= ii) iter.push_back(g(iter.back()));
        return iter[ii];
    };
    Seq sub = [&, a](const mpz_class& i) { return a(giter(i)); };
    mpz_class s = chain_bound(m, n - 1, sub);
    guard(s);
    return giter(s + 1);
}

}  // namespace detail

/// Upper bound on the number of sets in any such chain.
inline mpz_class chain_bound(const ChainSpec& spec) {
    if (spec.m == 0 || spec.n == 0) throw std::invalid_argument("m and n must be positive");
    return detail::chain_bound(spec.m, mpz_class(spec.n), spec.a);
}

struct SBound {
    mpz_class t;
    mpz_class s;
};

/// t = chain_bound for a(u) = 2^u r and s = 2^t r.
inline SBound thm_s_bound(unsigned m, unsigned n, unsigned r) {
    if (r == 0 || n == 0 || m == 0) throw std::invalid_argument("m, n and r must be positive");
    SBound b;
    b.t = chain_bound(ChainSpec::geometric(m, n, r));
    if (b.t > 1u << 16) throw BoundOverflow("2^t*r with t = " + b.t.get_str() + " is too large to write out");
    mpz_ui_pow_ui(b.s.get_mpz_t(), 2, b.t.get_ui());
    b.s *= r;
    return b;
}

}  // namespace prolong
