#pragma once

#include <map>
#include <utility>
#include <vector>

#include "fseries/rational.hpp"

namespace fseries {

// Dense univariate polynomial over Q; coefficient i is the x^i coefficient.
// Internal helper for cyclotomic reduction and inversion.
class Poly {
  public:
    Poly() = default;
    explicit Poly(std::vector<Rational> c) : c_(std::move(c)) { trim(); }
    static Poly monomial(std::size_t deg, Rational coeff = Rational(1)) {
        std::vector<Rational> c(deg + 1);
        c[deg] = std::move(coeff);
        return Poly(std::move(c));
    }

    bool is_zero() const { return c_.empty(); }
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    const std::vector<Rational>& coeffs() const { return c_; }
    Rational coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }
    Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
        return Poly(std::move(c));
    }
    friend Poly operator-(const Poly& a, const Poly& b) {
        std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) - b.coeff(i);
        return Poly(std::move(c));
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i].is_zero()) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        }
        return Poly(std::move(c));
    }
    Poly scaled(const Rational& s) const {
        std::vector<Rational> c(c_);
        for (auto& x : c) x *= s;
        return Poly(std::move(c));
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

    // Euclidean division: *this = q*d + r with deg r < deg d.
    std::pair<Poly, Poly> divmod(const Poly& d) const {
        if (d.is_zero()) throw division_by_zero();
        std::vector<Rational> rem(c_);
        std::vector<Rational> quo;
        long dd = d.degree();
        Rational lead_inv = d.leading().inverse();
        long rd = static_cast<long>(rem.size()) - 1;
        if (rd >= dd) quo.assign(rd - dd + 1, Rational(0));
        while (rd >= dd) {
            if (!rem[rd].is_zero()) {
                Rational f = rem[rd] * lead_inv;
                quo[rd - dd] = f;
                for (long i = 0; i <= dd; ++i) rem[rd - dd + i] -= f * d.c_[i];
            }
            --rd;
        }
        return {Poly(std::move(quo)), Poly(std::move(rem))};
    }

    Rational eval(const Rational& x) const {
        Rational r(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
        return r;
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<Rational> c_;
};

// Extended Euclid: returns (g, s) with s*a = g (mod m), g = gcd(a, m) normalized monic.
inline std::pair<Poly, Poly> poly_half_ext_gcd(Poly a, Poly m) {
    Poly r0 = std::move(m), r1 = std::move(a);
    Poly s0, s1(std::vector<Rational>{Rational(1)});
    while (!r1.is_zero()) {
        auto [q, r] = r0.divmod(r1);
        Poly s = s0 - q * s1;
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s);
    }
    if (!r0.is_zero()) {
        Rational inv = r0.leading().inverse();
        r0 = r0.scaled(inv);
        s0 = s0.scaled(inv);
    }
    return {r0, s0};
}

// Phi_M, computed by dividing x^M - 1 by the product of Phi_d over proper divisors d | M.
inline const Poly& cyclotomic_polynomial(long m) {
    static std::map<long, Poly> cache;
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    if (m < 1) throw arithmetic_error("cyclotomic polynomial order must be >= 1");
    std::vector<Rational> xm(static_cast<std::size_t>(m) + 1);
    xm[0] = Rational(-1);
    xm[static_cast<std::size_t>(m)] = Rational(1);
    Poly num{std::move(xm)};
    Poly den(std::vector<Rational>{Rational(1)});
    for (long d = 1; d < m; ++d)
        if (m % d == 0) den = den * cyclotomic_polynomial(d);
    auto [q, r] = num.divmod(den);
    if (!r.is_zero()) throw arithmetic_error("cyclotomic division left a remainder");
    return cache.emplace(m, std::move(q)).first->second;
}

}  // namespace fseries
