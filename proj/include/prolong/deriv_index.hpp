#pragma once

// Multi-indices over m commuting derivations, the product order, and the
// orderly ranking on N^m x n.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace prolong {

/// Heights above this are rejected; ranks and binomials stay inside 64 bits.
inline constexpr unsigned kMaxHeight = 1000;

class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::size_t m) : e_(m, 0) {}
    MultiIndex(std::initializer_list<unsigned> xs) : e_(xs) {}
    explicit MultiIndex(std::vector<unsigned> xs) : e_(std::move(xs)) {}

    static MultiIndex unit(std::size_t m, std::size_t i) {
        MultiIndex r(m);
        r.e_.at(i) = 1;
        return r;
    }

    std::size_t size() const { return e_.size(); }
    unsigned operator[](std::size_t i) const { return e_[i]; }
    unsigned& operator[](std::size_t i) { return e_[i]; }
    const std::vector<unsigned>& entries() const { return e_; }

    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
    // Plain lexicographic order, for use as a map key only.
    friend auto operator<=>(const MultiIndex& a, const MultiIndex& b) { return a.e_ <=> b.e_; }

    std::string to_string() const {
        std::string s = "(";
        for (std::size_t i = 0; i < e_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(e_[i]);
        }
        return s + ")";
    }

private:
    std::vector<unsigned> e_;
};

inline void require_same_m(const MultiIndex& a, const MultiIndex& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("multi-index length mismatch: " + a.to_string() + " vs " + b.to_string());
}

inline unsigned height(const MultiIndex& s) {
    return std::accumulate(s.entries().begin(), s.entries().end(), 0u);
}

/// Product order: s(i) <= t(i) for every i.
inline bool below(const MultiIndex& s, const MultiIndex& t) {
    require_same_m(s, t);
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] > t[i]) return false;
    return true;
}

inline bool strictly_below(const MultiIndex& s, const MultiIndex& t) { return s != t && below(s, t); }

inline MultiIndex add(const MultiIndex& s, const MultiIndex& t) {
    require_same_m(s, t);
    MultiIndex r = s;
    for (std::size_t i = 0; i < s.size(); ++i) r[i] += t[i];
    return r;
}

inline MultiIndex add_unit(const MultiIndex& s, std::size_t i) {
    MultiIndex r = s;
    r[i] += 1;
    return r;
}

/// s - iota_i, or nothing when s(i) == 0.
inline std::optional<MultiIndex> sub_unit(const MultiIndex& s, std::size_t i) {
    if (i >= s.size()) throw std::out_of_range("derivation index out of range");
    if (s[i] == 0) return std::nullopt;
    MultiIndex r = s;
    r[i] -= 1;
    return r;
}

/// Least upper bound under the product order (componentwise max).
inline MultiIndex join(const MultiIndex& a, const MultiIndex& b) {
    require_same_m(a, b);
    MultiIndex r = a;
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
    return r;
}

struct DerivIndex {
    MultiIndex index;
    unsigned unknown = 0;

    friend bool operator==(const DerivIndex&, const DerivIndex&) = default;
    std::size_t m() const { return index.size(); }
};

/// Lexicographic comparison of RankKeys realizes the orderly ranking.
struct RankKey {
    unsigned height = 0;
    unsigned unknown = 0;
    std::vector<unsigned> prefix;

    friend auto operator<=>(const RankKey&, const RankKey&) = default;
    friend bool operator==(const RankKey&, const RankKey&) = default;
};

inline RankKey rank_key(const DerivIndex& d) {
    RankKey k;
    k.height = height(d.index);
    k.unknown = d.unknown;
    const auto& e = d.index.entries();
    if (!e.empty()) k.prefix.assign(e.begin(), e.end() - 1);
    return k;
}

inline std::strong_ordering orderly_compare(const DerivIndex& a, const DerivIndex& b) {
    if (a.m() != b.m()) throw std::invalid_argument("derivative indices over different numbers of derivations");
    return rank_key(a) <=> rank_key(b);
}

/// Comparable only on the same unknown.
inline bool below(const DerivIndex& a, const DerivIndex& b) {
    return a.unknown == b.unknown && below(a.index, b.index);
}

inline bool strictly_below(const DerivIndex& a, const DerivIndex& b) {
    return a.unknown == b.unknown && strictly_below(a.index, b.index);
}

inline bool is_antichain(const std::vector<DerivIndex>& s) {
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < s.size(); ++j)
            if (i != j && below(s[i], s[j])) return false;
    return true;
}

namespace detail {

inline std::uint64_t binom(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > std::numeric_limits<std::uint64_t>::max()) throw std::overflow_error("binomial overflow");
    }
    return static_cast<std::uint64_t>(r);
}

}  // namespace detail

/// The ambient (m, n): number of derivations and of unknowns. Converts between
/// derivative indices and their position in the orderly ranking.
class Space {
public:
    Space() = default;
    Space(unsigned m, unsigned n) : m_(m), n_(n) {
        if (m == 0) throw std::invalid_argument("at least one derivation is required");
        if (n == 0) throw std::invalid_argument("at least one unknown is required");
    }

    unsigned m() const { return m_; }
    unsigned n() const { return n_; }

    friend bool operator==(const Space&, const Space&) = default;

    /// Number of multi-indices of height exactly h.
    std::uint64_t count_at(unsigned h) const { return detail::binom(h + m_ - 1, m_ - 1); }
    /// Number of multi-indices of height < h.
    std::uint64_t count_below(unsigned h) const { return h == 0 ? 0 : detail::binom(h - 1 + m_, m_); }
    /// Number of derivative indices (all unknowns) with height <= h.
    std::uint64_t slots_upto(unsigned h) const { return n_ * count_below(h + 1); }

    std::uint64_t rank(const DerivIndex& d) const {
        check(d);
        unsigned h = height(d.index);
        if (h > kMaxHeight) throw std::out_of_range("height " + std::to_string(h) + " exceeds the supported maximum");
        std::uint64_t r = n_ * count_below(h) + d.unknown * count_at(h);
        unsigned rem = h;
        for (unsigned i = 0; i + 1 < m_; ++i) {
            unsigned tail = m_ - 1 - i;  // coordinates after i
            for (unsigned v = 0; v < d.index[i]; ++v) r += detail::binom(rem - v + tail - 1, tail - 1);
            rem -= d.index[i];
        }
        return r;
    }

    DerivIndex unrank(std::uint64_t r) const {
        unsigned h = 0;
        while (n_ * count_below(h + 1) <= r) {
            if (++h > kMaxHeight) throw std::out_of_range("rank beyond supported height");
        }
        r -= n_ * count_below(h);
        DerivIndex d{MultiIndex(m_), static_cast<unsigned>(r / count_at(h))};
        r %= count_at(h);
        unsigned rem = h;
        for (unsigned i = 0; i + 1 < m_; ++i) {
            unsigned tail = m_ - 1 - i;
            unsigned v = 0;
            for (;; ++v) {
                std::uint64_t c = detail::binom(rem - v + tail - 1, tail - 1);
                if (r < c) break;
                r -= c;
            }
            d.index[i] = v;
            rem -= v;
        }
        d.index[m_ - 1] = rem;
        return d;
    }

    unsigned height_of(std::uint64_t r) const { return height(unrank(r).index); }

    void check(const DerivIndex& d) const {
        if (d.m() != m_) throw std::invalid_argument("derivative index has wrong number of derivations");
        if (d.unknown >= n_) throw std::invalid_argument("unknown index out of range");
    }

private:
    unsigned m_ = 1;
    unsigned n_ = 1;
};

/// All (s, k) with |s| <= cap, in orderly-ranking order.
inline std::vector<DerivIndex> enumerate_upto(unsigned m, unsigned n, unsigned cap) {
    if (cap > kMaxHeight) throw std::out_of_range("height cap exceeds the supported maximum");
    Space sp(m, n);
    std::vector<DerivIndex> out;
    std::uint64_t total = sp.slots_upto(cap);
    out.reserve(total);
    for (std::uint64_t r = 0; r < total; ++r) out.push_back(sp.unrank(r));
    return out;
}

}  // namespace prolong
