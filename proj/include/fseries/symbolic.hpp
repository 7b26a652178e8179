#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fseries/cyclotomic.hpp"

namespace fseries {

// Power product of named indeterminates, exponents >= 1.
using Monomial = std::map<std::string, long>;

inline Monomial monomial_mul(const Monomial& a, const Monomial& b) {
    Monomial out = a;
    for (const auto& [v, e] : b) {
        long& slot = out[v];
        slot += e;
        if (slot == 0) out.erase(v);
    }
    return out;
}

// Multivariate polynomial with cyclotomic-rational coefficients.
class MultiPoly {
  public:
    MultiPoly() = default;
    explicit MultiPoly(const Cyclotomic& c) {
        if (!c.is_zero()) terms_[Monomial{}] = c;
    }
    explicit MultiPoly(const Rational& r) : MultiPoly(Cyclotomic(r)) {}
    static MultiPoly variable(const std::string& name) {
        MultiPoly p;
        p.terms_[Monomial{{name, 1}}] = Cyclotomic(Rational(1));
        return p;
    }

    bool is_zero() const {
        for (const auto& [m, c] : terms_)
            if (!c.is_zero()) return false;
        return true;
    }
    bool is_constant() const {
        for (const auto& [m, c] : terms_)
            if (!m.empty() && !c.is_zero()) return false;
        return true;
    }
    Cyclotomic constant_part() const {
        auto it = terms_.find(Monomial{});
        return it == terms_.end() ? Cyclotomic() : it->second;
    }

    friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
        MultiPoly out = a;
        for (const auto& [m, c] : b.terms_) out.add_term(m, c);
        return out;
    }
    friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) {
        MultiPoly out = a;
        for (const auto& [m, c] : b.terms_) out.add_term(m, -c);
        return out;
    }
    MultiPoly operator-() const {
        MultiPoly out;
        for (const auto& [m, c] : terms_) out.terms_[m] = -c;
        return out;
    }
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        MultiPoly out;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) out.add_term(monomial_mul(ma, mb), ca * cb);
        return out;
    }
    MultiPoly scaled(const Cyclotomic& s) const {
        MultiPoly out;
        if (s.is_zero()) return out;
        for (const auto& [m, c] : terms_) out.add_term(m, c * s);
        return out;
    }
    MultiPoly scaled(const Rational& s) const { return scaled(Cyclotomic(s)); }

    friend bool operator==(const MultiPoly& a, const MultiPoly& b) { return (a - b).is_zero(); }

    const std::map<Monomial, Cyclotomic>& terms() const { return terms_; }

    // Smallest positive rational c so that dividing every coefficient by c keeps
    // integer numerators; used for size control, never for equality decisions.
    Rational rational_content() const {
        BigInt g = 0, l = 1;
        for (const auto& [m, c] : terms_)
            for (const auto& [e, r] : c.terms()) {
                mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), r.num().get_mpz_t());
                mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), r.den().get_mpz_t());
            }
        if (g == 0) return Rational(1);
        return Rational(g, l);
    }

    std::string str() const {
        auto can = canonical_terms();
        if (can.empty()) return "0";
        std::string s;
        bool first = true;
        for (const auto& [m, c] : can) {
            std::string cs = c.str();
            bool neg = !cs.empty() && cs[0] == '-' && cs.find(" + ") == std::string::npos &&
                       cs.find(" - ") == std::string::npos;
            if (first) {
                first = false;
                if (neg) {
                    s += "-";
                    cs = cs.substr(1);
                }
            } else if (neg) {
                s += " - ";
                cs = cs.substr(1);
            } else {
                s += " + ";
            }
            bool needs_parens = cs.find(" + ") != std::string::npos || cs.find(" - ") != std::string::npos;
            std::string mono;
            for (const auto& [v, e] : m) {
                if (!mono.empty()) mono += "*";
                mono += v;
                if (e != 1) mono += "^" + std::to_string(e);
            }
            if (mono.empty()) {
                s += needs_parens ? "(" + cs + ")" : cs;
            } else if (cs == "1") {
                s += mono;
            } else {
                s += (needs_parens ? "(" + cs + ")" : cs) + "*" + mono;
            }
        }
        return s;
    }

    std::vector<std::pair<Monomial, Cyclotomic>> canonical_terms() const {
        std::vector<std::pair<Monomial, Cyclotomic>> out;
        for (const auto& [m, c] : terms_) {
            Cyclotomic cc = c.canonicalized();
            if (!cc.is_zero()) out.emplace_back(m, std::move(cc));
        }
        return out;
    }

  private:
    void add_term(const Monomial& m, const Cyclotomic& c) {
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            if (!c.is_zero()) terms_.emplace(m, c);
        } else {
            it->second = it->second + c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
    std::map<Monomial, Cyclotomic> terms_;
};

// Fraction of multivariate polynomials. Not reduced to lowest terms; equality is
// decided by cross-multiplication.
class SymbolicScalar {
  public:
    SymbolicScalar() : num_(), den_(Rational(1)) {}
    explicit SymbolicScalar(MultiPoly n) : num_(std::move(n)), den_(Rational(1)) {}
    SymbolicScalar(MultiPoly n, MultiPoly d) : num_(std::move(n)), den_(std::move(d)) {
        if (den_.is_zero()) throw division_by_zero();
        control_size();
    }
    static SymbolicScalar variable(const std::string& name) {
        return SymbolicScalar(MultiPoly::variable(name));
    }

    const MultiPoly& num() const { return num_; }
    const MultiPoly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    Cyclotomic constant_value() const {
        if (!is_constant()) throw arithmetic_error("symbolic value is not constant");
        return num_.constant_part() * den_.constant_part().inverse();
    }

    friend SymbolicScalar operator+(const SymbolicScalar& a, const SymbolicScalar& b) {
        return SymbolicScalar(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend SymbolicScalar operator-(const SymbolicScalar& a, const SymbolicScalar& b) {
        return SymbolicScalar(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    SymbolicScalar operator-() const { return SymbolicScalar(-num_, den_); }
    friend SymbolicScalar operator*(const SymbolicScalar& a, const SymbolicScalar& b) {
        return SymbolicScalar(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend SymbolicScalar operator/(const SymbolicScalar& a, const SymbolicScalar& b) {
        if (b.is_zero()) throw division_by_zero();
        return SymbolicScalar(a.num_ * b.den_, a.den_ * b.num_);
    }
    SymbolicScalar inverse() const {
        if (is_zero()) throw division_by_zero();
        return SymbolicScalar(den_, num_);
    }

    friend bool operator==(const SymbolicScalar& a, const SymbolicScalar& b) {
        return (a.num_ * b.den_ - b.num_ * a.den_).is_zero();
    }
    friend bool operator!=(const SymbolicScalar& a, const SymbolicScalar& b) { return !(a == b); }

    std::string str() const {
        bool den_is_one = [&] {
            if (!den_.is_constant()) return false;
            Cyclotomic c = den_.constant_part();
            return c.is_rational() && c.as_rational().is_one();
        }();
        if (den_is_one) return num_.str();
        return "(" + num_.str() + ")/(" + den_.str() + ")";
    }

  private:
    // Rational-content rescaling only; keeps equality semantics intact.
    void control_size() {
        Rational cd = den_.rational_content();
        if (!cd.is_zero() && !cd.is_one()) {
            Rational inv = cd.inverse();
            num_ = num_.scaled(inv);
            den_ = den_.scaled(inv);
        }
    }
    MultiPoly num_, den_;
};

}  // namespace fseries
