#include "prolong/chain_bounds.hpp"

#include <gtest/gtest.h>

#include <map>
#include <random>

using namespace prolong;

namespace {

// Independent oracle: plain loops over (N^m x n) below a cap and memoized
// search over bitmask antichains.
struct Oracle {
    struct E {
        std::vector<unsigned> idx;
        unsigned u, h;
    };
    std::vector<E> elems;

    Oracle(unsigned m, unsigned n, unsigned cap) {
        std::vector<unsigned> cur(m, 0);
        std::function<void(unsigned, unsigned)> rec = [&](unsigned i, unsigned left) {
            if (i == m) {
                unsigned h = 0;
                for (unsigned c : cur) h += c;
                for (unsigned u = 0; u < n; ++u) elems.push_back({cur, u, h});
                return;
            }
            for (unsigned v = 0; v <= left; ++v) {
                cur[i] = v;
                rec(i + 1, left - v);
            }
        };
        rec(0, cap);
    }

    bool comparable(const E& a, const E& b) const {
        if (a.u != b.u) return false;
        bool le = true, ge = true;
        for (std::size_t i = 0; i < a.idx.size(); ++i) le &= a.idx[i] <= b.idx[i], ge &= a.idx[i] >= b.idx[i];
        return le || ge;
    }

    bool antichain(std::uint64_t s) const {
        for (std::size_t i = 0; i < elems.size(); ++i)
            for (std::size_t j = i + 1; j < elems.size(); ++j)
                if ((s >> i & 1) && (s >> j & 1) && comparable(elems[i], elems[j])) return false;
        return true;
    }

    std::uint64_t within(unsigned h) const {
        std::uint64_t m = 0;
        for (std::size_t i = 0; i < elems.size(); ++i)
            if (elems[i].h <= h) m |= 1ull << i;
        return m;
    }

    unsigned max_antichain() const {
        unsigned best = 0;
        for (std::uint64_t s = 0; s < (1ull << elems.size()); ++s)
            if (antichain(s)) best = std::max(best, static_cast<unsigned>(__builtin_popcountll(s)));
        return best;
    }

    // longest S_0 < S_1 < ... with S_k an antichain inside height a[k]
    unsigned longest_chain(const std::vector<unsigned>& a) const {
        std::map<std::pair<unsigned, std::uint64_t>, unsigned> memo;
        std::function<unsigned(unsigned, std::uint64_t)> go = [&](unsigned k, std::uint64_t s) -> unsigned {
            auto key = std::make_pair(k, s);
            if (auto it = memo.find(key); it != memo.end()) return it->second;
            unsigned best = 1;
            if (k + 1 < a.size()) {
                std::uint64_t room = within(a[k + 1]);
                if ((s & ~room) == 0)
                    for (std::size_t i = 0; i < elems.size(); ++i) {
                        std::uint64_t t = s | 1ull << i;
                        if (t == s || !(room >> i & 1) || !antichain(t)) continue;
                        // T may gain several elements at once; reach it through single additions at the same k
                        best = std::max(best, 1 + go(k + 1, t));
                        best = std::max(best, grow(k, t, room, go));
                    }
            }
            return memo[key] = best;
        };
        unsigned best = 0;
        for (std::uint64_t s = 0; s < (1ull << elems.size()); ++s)
            if ((s & ~within(a[0])) == 0 && antichain(s)) best = std::max(best, go(0, s));
        return best;
    }

    // chains whose next set is a superset of t
    template <class F>
    unsigned grow(unsigned k, std::uint64_t t, std::uint64_t room, F& go) const {
        unsigned best = 0;
        for (std::size_t j = 0; j < elems.size(); ++j) {
            std::uint64_t w = t | 1ull << j;
            if (w == t || !(room >> j & 1) || !antichain(w)) continue;
            best = std::max(best, 1 + go(k + 1, w));
            best = std::max(best, grow(k, w, room, go));
        }
        return best;
    }
};

}  // namespace

TEST(Antichains, MaximumSize) {
    EXPECT_EQ(max_antichain_size(2, 1, 3), 4u);
    EXPECT_EQ(max_antichain_size(1, 2, 3), 2u);
    EXPECT_EQ(max_antichain_size(2, 2, 1), 4u);
    for (unsigned m = 1; m <= 3; ++m)
        for (unsigned n = 1; n <= 2; ++n)
            for (unsigned cap = 0; cap <= 2; ++cap) {
                Oracle o(m, n, cap);
                if (o.elems.size() > 20) continue;
                EXPECT_EQ(max_antichain_size(m, n, cap), o.max_antichain()) << m << " " << n << " " << cap;
            }
}

TEST(Antichains, RandomAntichainsFitTheMaximum) {
    std::mt19937 rng(8);
    for (int t = 0; t < 200; ++t) {
        unsigned m = 1 + rng() % 3, cap = rng() % 4;
        auto all = enumerate_upto(m, 1, cap);
        std::vector<DerivIndex> s;
        for (int k = 0; k < 10; ++k) {
            auto d = all[rng() % all.size()];
            s.push_back(d);
            if (!is_antichain(s)) s.pop_back();
        }
        EXPECT_LE(s.size(), max_antichain_size(m, 1, cap));
    }
}

TEST(ChainBound, PinnedValues) {
    EXPECT_EQ(brute_force_max_chain(ChainSpec::constant(1, 1, 3), 8).length, 2u);
    EXPECT_EQ(brute_force_max_chain(ChainSpec::constant(2, 1, 1), 8).length, 3u);
    EXPECT_EQ(brute_force_max_chain(ChainSpec::prefix(2, 1, {1, 2, 3}), 8).length, 4u);
    EXPECT_EQ(chain_bound(ChainSpec::prefix(2, 1, {1, 2, 3})), 6);
    for (unsigned n = 1; n <= 5; ++n) EXPECT_EQ(chain_bound(ChainSpec::constant(1, n, 7)), n + 1);
    unsigned want[2][2][3] = {{{2, 2, 2}, {3, 3, 3}}, {{5, 6, 7}, {30, 42, 56}}};
    for (unsigned m = 1; m <= 2; ++m)
        for (unsigned n = 1; n <= 2; ++n)
            for (unsigned c = 1; c <= 3; ++c) EXPECT_EQ(chain_bound(ChainSpec::constant(m, n, c)), want[m - 1][n - 1][c - 1]);
}

TEST(ChainBound, WitnessIsAStrictChain) {
    auto r = brute_force_max_chain(ChainSpec::prefix(2, 1, {1, 2, 3}), 8);
    ASSERT_EQ(r.witness.size(), r.length);
    std::vector<unsigned> a{1, 2, 3};
    for (std::size_t k = 0; k < r.witness.size(); ++k) {
        EXPECT_TRUE(is_antichain(r.witness[k]));
        for (auto& d : r.witness[k]) EXPECT_LE(height(d.index), a[std::min<std::size_t>(k, 2)]);
        if (k) {
            EXPECT_LT(r.witness[k - 1].size(), r.witness[k].size());
            for (auto& d : r.witness[k - 1]) EXPECT_NE(std::find(r.witness[k].begin(), r.witness[k].end(), d), r.witness[k].end());
        }
    }
}

TEST(ChainBound, BruteForceBelowBound) {
    std::vector<std::vector<unsigned>> prefixes{{1}, {2}, {3}, {1, 2}, {1, 3}, {2, 3}, {1, 2, 3}, {3, 1}, {2, 1, 3}};
    for (unsigned m = 1; m <= 2; ++m)
        for (unsigned n = 1; n <= 2; ++n)
            for (auto& pre : prefixes) {
                auto spec = ChainSpec::prefix(m, n, pre);
                unsigned cap = 8;
                auto brute = brute_force_max_chain(spec, cap).length;
                EXPECT_LE(brute, chain_bound(spec)) << m << n;
                std::vector<unsigned> a;
                for (unsigned k = 0; k < cap; ++k) a.push_back(spec.at(k));
                Oracle o(m, n, *std::max_element(a.begin(), a.end()));
                if (o.elems.size() <= 14) { EXPECT_EQ(brute, o.longest_chain(a)) << m << n << " prefix " << pre.size(); }
            }
}

TEST(SBound, Values) {
    auto b = thm_s_bound(2, 1, 1);
    EXPECT_EQ(b.t, 6);
    EXPECT_EQ(b.s, 64);
    EXPECT_EQ(thm_s_bound(1, 1, 1).t, 2);
    EXPECT_EQ(thm_s_bound(1, 3, 2).s, 32);
    EXPECT_EQ(thm_s_bound(2, 1, 2).t, 8);
    EXPECT_EQ(thm_s_bound(2, 1, 3).s, 3072);
    for (unsigned r = 1; r <= 4; ++r) EXPECT_GE(thm_s_bound(2, 1, r).s, r);
}

TEST(SBound, Guards) {
    EXPECT_THROW(thm_s_bound(3, 1, 1), BoundOverflow);
    EXPECT_THROW(thm_s_bound(2, 2, 1), BoundOverflow);
    EXPECT_THROW(thm_s_bound(2, 1, 0), std::invalid_argument);
    EXPECT_THROW(max_antichain_size(3, 2, 5), std::invalid_argument);
}
