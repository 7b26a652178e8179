#pragma once

#include <cctype>
#include <map>
#include <string>
#include <utility>
#include <variant>

#include "fseries/symbolic.hpp"

namespace fseries {

struct denominator_vanishes : arithmetic_error {
    denominator_vanishes() : arithmetic_error("substitution zeroes a symbolic denominator") {}
};

// Three-level exact scalar: rational, cyclotomic, or symbolic rational function.
// Coercion is always upward and never loses exactness.
class ExactScalar {
  public:
    ExactScalar() : v_(Rational(0)) {}
    ExactScalar(long n) : v_(Rational(n)) {}
    ExactScalar(Rational r) : v_(std::move(r)) {}
    ExactScalar(Cyclotomic c) : v_(std::move(c)) {}
    ExactScalar(SymbolicScalar s) : v_(std::move(s)) {}

    static ExactScalar root_of_unity(long m, const BigInt& k) {
        Cyclotomic z = Cyclotomic::root_of_unity(m, k);
        if (z.order() == 1) return ExactScalar(z.is_zero() ? Rational(0) : Rational(1));
        return ExactScalar(std::move(z));
    }
    static ExactScalar variable(const std::string& name) {
        return ExactScalar(SymbolicScalar::variable(name));
    }

    int tier() const { return static_cast<int>(v_.index()); }
    bool is_symbolic() const { return tier() == 2; }

    bool is_zero() const {
        switch (tier()) {
            case 0: return std::get<0>(v_).is_zero();
            case 1: return std::get<1>(v_).is_zero();
            default: return std::get<2>(v_).is_zero();
        }
    }
    bool is_one() const { return *this == ExactScalar(Rational(1)); }

    const Rational& rational() const { return std::get<0>(v_); }
    const Cyclotomic& cyclotomic() const { return std::get<1>(v_); }
    const SymbolicScalar& symbolic() const { return std::get<2>(v_); }

    Cyclotomic as_cyclotomic() const {
        switch (tier()) {
            case 0: return Cyclotomic(std::get<0>(v_));
            case 1: return std::get<1>(v_);
            default: return std::get<2>(v_).constant_value();
        }
    }
    SymbolicScalar as_symbolic() const {
        if (tier() == 2) return std::get<2>(v_);
        return SymbolicScalar(MultiPoly(as_cyclotomic()));
    }
    Rational as_rational() const { return as_cyclotomic().as_rational(); }

    // Lowers the representation tier when the value allows it.
    ExactScalar demoted() const {
        if (tier() == 2) {
            const auto& s = std::get<2>(v_);
            if (s.is_constant()) return ExactScalar(s.constant_value()).demoted();
            return *this;
        }
        if (tier() == 1) {
            const auto& c = std::get<1>(v_);
            if (c.is_rational()) return ExactScalar(c.as_rational());
            return ExactScalar(c.canonicalized());
        }
        return *this;
    }

    friend ExactScalar operator+(const ExactScalar& a, const ExactScalar& b) {
        return apply(a, b, [](auto& x, auto& y) { return x + y; });
    }
    friend ExactScalar operator-(const ExactScalar& a, const ExactScalar& b) {
        return apply(a, b, [](auto& x, auto& y) { return x - y; });
    }
    friend ExactScalar operator*(const ExactScalar& a, const ExactScalar& b) {
        return apply(a, b, [](auto& x, auto& y) { return x * y; });
    }
    friend ExactScalar operator/(const ExactScalar& a, const ExactScalar& b) {
        return a * b.inverse();
    }
    ExactScalar operator-() const {
        switch (tier()) {
            case 0: return ExactScalar(-std::get<0>(v_));
            case 1: return ExactScalar(-std::get<1>(v_));
            default: return ExactScalar(-std::get<2>(v_));
        }
    }
    ExactScalar& operator+=(const ExactScalar& o) { return *this = *this + o; }
    ExactScalar& operator-=(const ExactScalar& o) { return *this = *this - o; }
    ExactScalar& operator*=(const ExactScalar& o) { return *this = *this * o; }

    ExactScalar inverse() const {
        switch (tier()) {
            case 0: return ExactScalar(std::get<0>(v_).inverse());
            case 1: return ExactScalar(std::get<1>(v_).inverse());
            default: return ExactScalar(std::get<2>(v_).inverse());
        }
    }

    ExactScalar pow(long e) const {
        if (e == 0) return ExactScalar(Rational(1));
        if (e < 0) return inverse().pow(-e);
        ExactScalar r(Rational(1)), base = *this;
        unsigned long k = static_cast<unsigned long>(e);
        while (k) {
            if (k & 1) r = r * base;
            base = base * base;
            k >>= 1;
        }
        return r;
    }

    friend bool operator==(const ExactScalar& a, const ExactScalar& b) {
        int t = std::max(a.tier(), b.tier());
        switch (t) {
            case 0: return a.rational() == b.rational();
            case 1: return a.as_cyclotomic() == b.as_cyclotomic();
            default: return a.as_symbolic() == b.as_symbolic();
        }
    }
    friend bool operator!=(const ExactScalar& a, const ExactScalar& b) { return !(a == b); }

    RealInterval arch_norm(mpfr_prec_t prec = 128) const { return as_cyclotomic().arch_norm(prec); }
    ComplexInterval arch_embed(mpfr_prec_t prec = 128) const {
        return as_cyclotomic().arch_embed(prec);
    }
    Rational ell_adic_upper_bound(const BigInt& ell) const {
        if (tier() == 0) return ell_adic_abs(rational(), ell);
        return as_cyclotomic().ell_adic_upper_bound(ell);
    }

    std::string str() const {
        ExactScalar d = demoted();
        switch (d.tier()) {
            case 0: return d.rational().str();
            case 1: return d.cyclotomic().str();
            default: return d.symbolic().str();
        }
    }

  private:
    template <class F>
    static ExactScalar apply(const ExactScalar& a, const ExactScalar& b, F f) {
        int t = std::max(a.tier(), b.tier());
        switch (t) {
            case 0: return ExactScalar(f(a.rational(), b.rational()));
            case 1: {
                Cyclotomic x = a.as_cyclotomic(), y = b.as_cyclotomic();
                return ExactScalar(f(x, y));
            }
            default: {
                SymbolicScalar x = a.as_symbolic(), y = b.as_symbolic();
                return ExactScalar(f(x, y));
            }
        }
    }

    std::variant<Rational, Cyclotomic, SymbolicScalar> v_;
};

using Evaluation = std::map<std::string, ExactScalar>;

inline ExactScalar evaluate(const MultiPoly& p, const Evaluation& sub) {
    ExactScalar acc(Rational(0));
    for (const auto& [mono, coeff] : p.terms()) {
        ExactScalar term{coeff};
        for (const auto& [var, e] : mono) {
            auto it = sub.find(var);
            ExactScalar base = it != sub.end() ? it->second : ExactScalar::variable(var);
            term = term * base.pow(e);
        }
        acc = acc + term;
    }
    return acc;
}

// Substitutes parameters; exact, with a guard on vanishing denominators.
inline ExactScalar apply_evaluation(const ExactScalar& x, const Evaluation& sub) {
    if (!x.is_symbolic()) return x;
    const SymbolicScalar& s = x.symbolic();
    ExactScalar den = evaluate(s.den(), sub);
    if (den.is_zero()) throw denominator_vanishes();
    ExactScalar num = evaluate(s.num(), sub);
    return (num / den).demoted();
}

// ---- scalar-string grammar -------------------------------------------------
// expr  := term (('+'|'-') term)*
// term  := factor (('*'|'/') factor)*
// factor:= atom ('^' ['-'] int)?
// atom  := int | 'zeta' '(' int ')' | ident | '(' expr ')' | '-' factor

namespace detail {

class ScalarParser {
  public:
    explicit ScalarParser(const std::string& s) : s_(s) {}

    ExactScalar parse() {
        ExactScalar v = expr();
        skip_ws();
        if (pos_ != s_.size()) throw arithmetic_error("trailing characters in scalar: " + s_);
        return v;
    }

  private:
    ExactScalar expr() {
        ExactScalar v = term();
        for (;;) {
            skip_ws();
            if (peek() == '+') {
                ++pos_;
                v = v + term();
            } else if (peek() == '-') {
                ++pos_;
                v = v - term();
            } else {
                return v;
            }
        }
    }
    ExactScalar term() {
        ExactScalar v = factor();
        for (;;) {
            skip_ws();
            if (peek() == '*') {
                ++pos_;
                v = v * factor();
            } else if (peek() == '/') {
                ++pos_;
                v = v / factor();
            } else {
                return v;
            }
        }
    }
    ExactScalar factor() {
        ExactScalar v = atom();
        skip_ws();
        if (peek() == '^') {
            ++pos_;
            skip_ws();
            bool neg = false;
            if (peek() == '-') {
                neg = true;
                ++pos_;
            }
            long e = integer();
            v = v.pow(neg ? -e : e);
        }
        return v;
    }
    ExactScalar atom() {
        skip_ws();
        char c = peek();
        if (c == '-') {
            ++pos_;
            return -factor();
        }
        if (c == '(') {
            ++pos_;
            ExactScalar v = expr();
            skip_ws();
            expect(')');
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string digits;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                digits += s_[pos_++];
            return ExactScalar(Rational(BigInt(digits)));
        }
        if (is_ident_start(c)) {
            std::string name;
            while (pos_ < s_.size() && is_ident_char(s_[pos_])) name += s_[pos_++];
            skip_ws();
            if (name == "zeta" && peek() == '(') {
                ++pos_;
                long m = integer();
                skip_ws();
                expect(')');
                return ExactScalar::root_of_unity(m, BigInt(1));
            }
            return ExactScalar::variable(name);
        }
        throw arithmetic_error("unexpected character in scalar: " + s_);
    }
    long integer() {
        skip_ws();
        std::string digits;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
            digits += s_[pos_++];
        if (digits.empty()) throw arithmetic_error("expected integer in scalar: " + s_);
        return std::stol(digits);
    }
    static bool is_ident_start(char c) {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }
    static bool is_ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '{' || c == '}' ||
               c == ',';
    }
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    void expect(char c) {
        if (peek() != c) throw arithmetic_error(std::string("expected '") + c + "' in scalar: " + s_);
        ++pos_;
    }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline ExactScalar parse_scalar(const std::string& s) { return detail::ScalarParser(s).parse(); }

}  // namespace fseries
