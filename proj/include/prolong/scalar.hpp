#pragma once

// Base-field constants: rationals in lowest terms, or residues mod a prime p.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace prolong {

inline bool is_prime(std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

/// Characteristic 0 or a prime below 2^31.
inline void check_characteristic(std::uint64_t p) {
    if (p != 0 && (!is_prime(p) || p >= (1ull << 31)))
        throw std::invalid_argument("characteristic must be 0 or a prime below 2^31, got " + std::to_string(p));
}

class Scalar {
public:
    Scalar() = default;
    explicit Scalar(long v, std::uint32_t p = 0) : v_(v), p_(p) { canon(); }
    Scalar(mpq_class v, std::uint32_t p) : v_(std::move(v)), p_(p) { canon(); }

    static Scalar zero(std::uint32_t p) { return Scalar(0, p); }
    static Scalar one(std::uint32_t p) { return Scalar(1, p); }

    /// Parses "n" or "n/d".
    static Scalar parse(const std::string& s, std::uint32_t p) {
        mpq_class q;
        if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad scalar literal '" + s + "'");
        if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
        return Scalar(q, p);
    }

    std::uint32_t characteristic() const { return p_; }
    const mpq_class& value() const { return v_; }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }

    Scalar operator-() const { return Scalar(-v_, p_); }
    friend Scalar operator+(const Scalar& a, const Scalar& b) { same(a, b); return Scalar(a.v_ + b.v_, a.p_); }
    friend Scalar operator-(const Scalar& a, const Scalar& b) { same(a, b); return Scalar(a.v_ - b.v_, a.p_); }
    friend Scalar operator*(const Scalar& a, const Scalar& b) { same(a, b); return Scalar(a.v_ * b.v_, a.p_); }
    friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    Scalar inverse() const {
        if (is_zero()) throw std::domain_error("division by zero scalar");
        if (p_ == 0) return Scalar(1 / v_, 0);
        mpz_class r, m(p_), x(v_.get_num());
        mpz_invert(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
        return Scalar(mpq_class(r), p_);
    }

    friend bool operator==(const Scalar& a, const Scalar& b) { return a.p_ == b.p_ && a.v_ == b.v_; }
    /// Deterministic total order for canonical output; not a field order.
    friend bool operator<(const Scalar& a, const Scalar& b) { return a.v_ < b.v_; }

    /// Integer square test and root; nullopt-style via bool.
    bool sqrt(Scalar& out) const {
        if (p_ != 0) {
            for (std::uint64_t x = 0; x < p_; ++x)
                if ((x * x) % p_ == v_.get_num().get_ui()) { out = Scalar(static_cast<long>(x), p_); return true; }
            return false;
        }
        if (sgn(v_) < 0) return false;
        mpz_class n = v_.get_num(), d = v_.get_den();
        if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return false;
        mpz_class rn, rd;
        mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
        mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
        out = Scalar(mpq_class(rn, rd), 0);
        return true;
    }

    std::string to_string() const { return v_.get_str(); }

private:
    static void same(const Scalar& a, const Scalar& b) {
        if (a.p_ != b.p_)
            throw std::invalid_argument("characteristic mismatch: " + std::to_string(a.p_) + " vs " + std::to_string(b.p_));
    }

    void canon() {
        v_.canonicalize();
        if (p_ == 0) return;
        mpz_class m(p_);
        mpz_class num = v_.get_num() % m, den = v_.get_den() % m;
        if (num < 0) num += m;
        if (den < 0) den += m;
        if (den == 0) throw std::domain_error("denominator divisible by the characteristic");
        if (den != 1) {
            mpz_class inv;
            mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t());
            num = (num * inv) % m;
        }
        v_ = mpq_class(num);
    }

    mpq_class v_{0};
    std::uint32_t p_ = 0;
};

}  // namespace prolong
