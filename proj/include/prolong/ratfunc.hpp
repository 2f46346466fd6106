#pragma once

// Quotients num/den of polynomials, kept with gcd(num, den) = 1 and den monic.

#include "poly.hpp"

namespace prolong {

class RatFunc {
public:
    RatFunc() = default;
    explicit RatFunc(std::uint32_t p) : num_(p), den_(Poly::constant(1, p)) {}
    RatFunc(Poly n) : num_(std::move(n)), den_(Poly::constant(1, num_.characteristic())) {}
    RatFunc(Poly n, Poly d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    std::uint32_t characteristic() const { return num_.characteristic(); }
    bool is_zero() const { return num_.is_zero(); }

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_);
        return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
    RatFunc operator-() const {
        RatFunc r = *this;
        r.num_ = -r.num_;
        return r;
    }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        if (b.is_zero()) throw std::domain_error("rational function division by zero");
        return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
    }
    friend bool operator==(const RatFunc& a, const RatFunc& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

    std::string to_string(const VarNamer& name) const {
        if (den_.is_constant() && den_.constant_value().is_one()) return num_.to_string(name);
        return "(" + num_.to_string(name) + ")/(" + den_.to_string(name) + ")";
    }

private:
    void normalize() {
        if (den_.is_zero()) throw std::domain_error("zero denominator");
        if (num_.is_zero()) {
            den_ = Poly::constant(1, num_.characteristic());
            return;
        }
        if (!den_.is_constant()) {
            Poly g = gcd(num_, den_);
            if (!g.is_constant()) {
                num_ = *divide_exact(num_, g);
                den_ = *divide_exact(den_, g);
            }
        }
        Scalar l = den_.leading_coefficient();
        if (!l.is_one()) {
            Scalar inv = l.inverse();
            num_ = num_.scaled(inv);
            den_ = den_.scaled(inv);
        }
    }

    Poly num_;
    Poly den_ = Poly::constant(1, 0);
};

}  // namespace prolong
