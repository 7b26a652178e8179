#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fseries {

using BigInt = mpz_class;

struct arithmetic_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct division_by_zero : arithmetic_error {
    division_by_zero() : arithmetic_error("division by zero") {}
};

// Arbitrary-precision rational, always canonical: gcd(|num|, den) = 1, den >= 1.
class Rational {
  public:
    Rational() : q_(0) {}
    Rational(long n) : q_(n) {}
    Rational(const BigInt& n) : q_(n) {}
    Rational(long n, long d) : q_(n, d) {
        if (d == 0) throw division_by_zero();
        q_.canonicalize();
    }
    Rational(const BigInt& n, const BigInt& d) : q_(n, d) {
        if (d == 0) throw division_by_zero();
        q_.canonicalize();
    }
    explicit Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

    const BigInt num() const { return q_.get_num(); }
    const BigInt den() const { return q_.get_den(); }

    bool is_zero() const { return sgn(q_) == 0; }
    bool is_one() const { return q_ == 1; }
    bool is_integer() const { return q_.get_den() == 1; }
    int sign() const { return sgn(q_); }

    Rational operator-() const { return Rational(mpq_class(-q_), no_canon{}); }
    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw division_by_zero();
        q_ /= o.q_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.q_ != b.q_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.q_ <= b.q_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.q_ > b.q_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.q_ >= b.q_; }

    Rational inverse() const {
        if (is_zero()) throw division_by_zero();
        return Rational(mpq_class(1) / q_, no_canon{});
    }

    Rational abs() const { return Rational(mpq_class(::abs(q_)), no_canon{}); }

    // x^e for e in Z (e < 0 requires x != 0)
    Rational pow(long e) const {
        if (e == 0) return Rational(1);
        bool inv = e < 0;
        unsigned long k = inv ? static_cast<unsigned long>(-(e + 1)) + 1 : static_cast<unsigned long>(e);
        mpq_class r;
        mpz_pow_ui(r.get_num_mpz_t(), q_.get_num_mpz_t(), k);
        mpz_pow_ui(r.get_den_mpz_t(), q_.get_den_mpz_t(), k);
        Rational out(r, no_canon{});
        return inv ? out.inverse() : out;
    }

    std::string str() const {
        if (is_integer()) return q_.get_num().get_str();
        return q_.get_num().get_str() + "/" + q_.get_den().get_str();
    }

    double to_double() const { return q_.get_d(); }
    const mpq_class& raw() const { return q_; }

  private:
    struct no_canon {};
    Rational(mpq_class q, no_canon) : q_(std::move(q)) {}
    mpq_class q_;
};

// ell-adic valuation of a rational; caller supplies infinity sentinel handling (is_zero first).
inline long ell_adic_valuation(const Rational& x, const BigInt& ell) {
    if (x.is_zero()) throw arithmetic_error("valuation of zero is +infinity");
    mpz_class tmp;
    long vn = static_cast<long>(mpz_remove(tmp.get_mpz_t(), x.num().get_mpz_t(), ell.get_mpz_t()));
    long vd = static_cast<long>(mpz_remove(tmp.get_mpz_t(), x.den().get_mpz_t(), ell.get_mpz_t()));
    return vn - vd;
}

// |x|_ell = ell^{-v_ell(x)}; 0 for x = 0.
inline Rational ell_adic_abs(const Rational& x, const BigInt& ell) {
    if (x.is_zero()) return Rational(0);
    long v = ell_adic_valuation(x, ell);
    Rational base{ell};
    return base.pow(-v);
}

inline BigInt big_pow(const BigInt& b, unsigned long e) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

inline BigInt binomial(unsigned long n, unsigned long k) {
    BigInt r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

}  // namespace fseries
