#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "fseries/cyclotomic.hpp"
#include "fseries/scalar.hpp"

namespace fseries {

struct digit_out_of_range : arithmetic_error {
    digit_out_of_range() : arithmetic_error("digit not representable in target base") {}
};

inline long checked_pow_long(long base, long exp) {
    long r = 1;
    for (long i = 0; i < exp; ++i) {
        if (r > (1L << 60) / base) throw arithmetic_error("power exceeds machine range");
        r *= base;
    }
    return r;
}

// p-adic integer with an eventually periodic digit stream: finite preperiod then a
// repeating period. Period [0] encodes the non-negative integers. Canonical form:
// primitive period, preperiod digits absorbed into the period greedily from the right.
class PAdicInt {
  public:
    PAdicInt(long p, std::vector<int> pre, std::vector<int> per)
        : p_(p), pre_(std::move(pre)), per_(std::move(per)) {
        if (p_ < 2) throw arithmetic_error("base must be >= 2");
        if (per_.empty()) throw arithmetic_error("period must be nonempty");
        for (int d : pre_)
            if (d < 0 || d >= p_) throw digit_out_of_range();
        for (int d : per_)
            if (d < 0 || d >= p_) throw digit_out_of_range();
        canonicalize();
    }

    static PAdicInt from_integer(long p, const BigInt& n) {
        if (n < 0) throw arithmetic_error("from_integer expects n >= 0");
        std::vector<int> pre;
        BigInt m = n;
        while (m > 0) {
            pre.push_back(static_cast<int>(mpz_class(m % p).get_si()));
            m /= p;
        }
        return PAdicInt(p, std::move(pre), {0});
    }

    // Text form "pre:<digits>;per:<digits>", digits little-endian; commas allowed.
    static PAdicInt parse(long p, const std::string& s) {
        auto semi = s.find(';');
        if (semi == std::string::npos || s.rfind("pre:", 0) != 0 ||
            s.compare(semi + 1, 4, "per:") != 0)
            throw arithmetic_error("point syntax is pre:<digits>;per:<digits>");
        auto digits = [&](const std::string& part) {
            std::vector<int> out;
            if (part.find(',') != std::string::npos) {
                std::size_t i = 0;
                while (i < part.size()) {
                    std::size_t j = part.find(',', i);
                    if (j == std::string::npos) j = part.size();
                    out.push_back(std::stoi(part.substr(i, j - i)));
                    i = j + 1;
                }
            } else {
                for (char c : part) out.push_back(c - '0');
            }
            return out;
        };
        return PAdicInt(p, digits(s.substr(4, semi - 4)), digits(s.substr(semi + 5)));
    }

    long base() const { return p_; }
    const std::vector<int>& preperiod() const { return pre_; }
    const std::vector<int>& period() const { return per_; }
    bool is_nonneg_integer() const { return per_.size() == 1 && per_[0] == 0; }

    int digit(std::size_t i) const {
        if (i < pre_.size()) return pre_[i];
        return per_[(i - pre_.size()) % per_.size()];
    }

    // [z]_{p^n}
    BigInt truncate(long n) const {
        BigInt acc = 0, pw = 1;
        for (long i = 0; i < n; ++i) {
            acc += pw * digit(static_cast<std::size_t>(i));
            pw *= p_;
        }
        return acc;
    }

    PAdicInt shifted() const { return shifted(1); }
    PAdicInt shifted(long m) const {
        std::vector<int> pre = pre_, per = per_;
        long drop = std::min<long>(m, static_cast<long>(pre.size()));
        pre.erase(pre.begin(), pre.begin() + drop);
        long rot = (m - drop) % static_cast<long>(per.size());
        std::rotate(per.begin(), per.begin() + rot, per.end());
        return PAdicInt(p_, std::move(pre), std::move(per));
    }

    friend bool operator==(const PAdicInt& a, const PAdicInt& b) {
        return a.p_ == b.p_ && a.pre_ == b.pre_ && a.per_ == b.per_;
    }
    friend bool operator!=(const PAdicInt& a, const PAdicInt& b) { return !(a == b); }

    std::string str() const {
        auto digits = [&](const std::vector<int>& v) {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (p_ > 10 && i) s += ",";
                s += p_ > 10 ? std::to_string(v[i]) : std::string(1, static_cast<char>('0' + v[i]));
            }
            return s;
        };
        return "pre:" + digits(pre_) + ";per:" + digits(per_);
    }

  private:
    void canonicalize() {
        // primitive period
        for (std::size_t d = 1; d <= per_.size() / 2; ++d) {
            if (per_.size() % d != 0) continue;
            bool ok = true;
            for (std::size_t i = d; i < per_.size() && ok; ++i) ok = per_[i] == per_[i % d];
            if (ok) {
                per_.resize(d);
                break;
            }
        }
        // absorb matching preperiod tail into a rotation of the period
        while (!pre_.empty() && pre_.back() == per_.back()) {
            std::rotate(per_.begin(), per_.end() - 1, per_.end());
            pre_.pop_back();
        }
    }

    long p_;
    std::vector<int> pre_, per_;
};

// lambda_p(n) = ceil(log_p(n+1)) = number of base-p digits of n.
inline long lambda_p(long p, const BigInt& n) {
    long count = 0;
    BigInt m = n;
    while (m > 0) {
        ++count;
        m /= p;
    }
    return count;
}

// #_{p:k}([z]_{p^n}); digit counts of the integer truncation, so for k = 0 only
// positions below the leading digit count.
inline long digit_count(const PAdicInt& z, int k, long n) {
    long lambda = 0;
    for (long i = 0; i < n; ++i)
        if (z.digit(static_cast<std::size_t>(i)) != 0) lambda = i + 1;
    if (k != 0) {
        long c = 0;
        for (long i = 0; i < n; ++i)
            if (z.digit(static_cast<std::size_t>(i)) == k) ++c;
        return c;
    }
    long zeros = 0;
    for (long i = 0; i < lambda; ++i)
        if (z.digit(static_cast<std::size_t>(i)) == 0) ++zeros;
    return zeros;
}

inline long digit_count(long p, const BigInt& m, int k) {
    BigInt x = m;
    long c = 0, lambda = 0, pos = 0;
    while (x > 0) {
        int d = static_cast<int>(mpz_class(x % p).get_si());
        if (d == k) ++c;
        if (d != 0) lambda = pos + 1;
        x /= p;
        ++pos;
    }
    if (k != 0) return c;
    // zeros below the leading digit
    x = m;
    c = 0;
    for (long i = 0; i < lambda; ++i) {
        if (mpz_class(x % p).get_si() == 0) ++c;
        x /= p;
    }
    return c;
}

// eps_n(z): the digit-n root of unity, order-reduced.
inline Cyclotomic epsilon_n(const PAdicInt& z, long n) {
    long p = z.base();
    long order = checked_pow_long(p, n + 1);
    BigInt e = BigInt(z.digit(static_cast<std::size_t>(n))) * big_pow(p, static_cast<unsigned long>(n));
    return Cyclotomic::root_of_unity(order, e);
}

// Element t = k/p^n of the Pontryagin dual Z[1/p]/Z, in lowest terms.
class DualElement {
  public:
    DualElement(long p, BigInt k, long n) : p_(p) {
        if (n < 0) throw arithmetic_error("dual element exponent must be >= 0");
        BigInt mod = big_pow(p, static_cast<unsigned long>(n));
        k = ((k % mod) + mod) % mod;
        while (n > 0 && k % p == 0) {
            k /= p;
            --n;
        }
        if (k == 0) n = 0;
        k_ = k;
        n_ = n;
    }
    static DualElement zero(long p) { return DualElement(p, 0, 0); }

    long base() const { return p_; }
    const BigInt& numerator() const { return k_; }  // t*|t|_p
    long exponent() const { return n_; }            // |t|_p = p^n
    bool is_zero() const { return n_ == 0 && k_ == 0; }
    long vp() const {
        if (is_zero()) throw arithmetic_error("v_p(0) is +infinity");
        return -n_;
    }
    BigInt abs_p() const { return big_pow(p_, static_cast<unsigned long>(n_)); }

    DualElement times_p() const {
        if (n_ <= 1) return zero(p_);
        return DualElement(p_, k_, n_ - 1);
    }
    DualElement times_p_pow(long m) const {
        if (m >= n_) return zero(p_);
        return DualElement(p_, k_, n_ - m);
    }
    DualElement div_p_pow(long m) const { return DualElement(p_, k_, n_ + m); }
    // t|t|_p / p
    DualElement leading() const {
        if (is_zero()) return zero(p_);
        return DualElement(p_, k_ % p_, 1);
    }
    DualElement negated() const {
        if (is_zero()) return *this;
        return DualElement(p_, abs_p() - k_, n_);
    }
    DualElement plus(const DualElement& o) const {
        long n = std::max(n_, o.n_);
        BigInt a = k_ * big_pow(p_, static_cast<unsigned long>(n - n_));
        BigInt b = o.k_ * big_pow(p_, static_cast<unsigned long>(n - o.n_));
        return DualElement(p_, a + b, n);
    }

    // e^{2 pi i {t z}_p}
    Cyclotomic character(const PAdicInt& z) const {
        if (is_zero()) return Cyclotomic(Rational(1));
        long order = checked_pow_long(p_, n_);
        return Cyclotomic::root_of_unity(order, k_ * z.truncate(n_));
    }
    // e^{2 pi i t m} for an integer m
    Cyclotomic character_at_int(const BigInt& m) const {
        if (is_zero()) return Cyclotomic(Rational(1));
        long order = checked_pow_long(p_, n_);
        return Cyclotomic::root_of_unity(order, k_ * m);
    }

    friend bool operator==(const DualElement& a, const DualElement& b) {
        return a.p_ == b.p_ && a.n_ == b.n_ && a.k_ == b.k_;
    }
    friend bool operator<(const DualElement& a, const DualElement& b) {
        if (a.n_ != b.n_) return a.n_ < b.n_;
        return a.k_ < b.k_;
    }

    std::string str() const {
        if (is_zero()) return "0";
        return k_.get_str() + "/" + abs_p().get_str();
    }
    static DualElement parse(long p, const std::string& s) {
        auto slash = s.find('/');
        if (slash == std::string::npos) return zero(p);  // integers are 0 in Z[1/p]/Z
        BigInt k(s.substr(0, slash));
        std::string den = s.substr(slash + 1);
        BigInt d;
        auto caret = den.find('^');
        if (caret != std::string::npos) {
            d = big_pow(BigInt(den.substr(0, caret)).get_si(),
                        std::stoul(den.substr(caret + 1)));
        } else {
            d = BigInt(den);
        }
        long n = 0;
        BigInt dd = d;
        while (dd > 1) {
            if (dd % p != 0) throw arithmetic_error("dual element denominator is not a power of p");
            dd /= p;
            ++n;
        }
        return DualElement(p, k, n);
    }

  private:
    long p_;
    BigInt k_;
    long n_;
};

// All t with |t|_p <= p^N, ordered by (|t|, numerator); 0 first.
inline std::vector<DualElement> dual_ball(long p, long nmax) {
    std::vector<DualElement> out;
    out.push_back(DualElement::zero(p));
    for (long n = 1; n <= nmax; ++n) {
        BigInt pn = big_pow(p, static_cast<unsigned long>(n));
        for (BigInt k = 1; k < pn; ++k)
            if (k % p != 0) out.emplace_back(p, k, n);
    }
    return out;
}

struct DigitDensities {
    std::vector<Rational> density;  // indexed by digit
    int digit_class = 0;            // 0 for N0, else the least digit occurring infinitely often
};

inline DigitDensities densities(const PAdicInt& z) {
    DigitDensities out;
    out.density.assign(static_cast<std::size_t>(z.base()), Rational(0));
    const auto& per = z.period();
    for (int d : per) out.density[static_cast<std::size_t>(d)] += Rational(1, static_cast<long>(per.size()));
    if (z.is_nonneg_integer()) {
        out.digit_class = 0;
    } else {
        int cls = 0;
        for (int k = 1; k < z.base(); ++k)
            if (std::find(per.begin(), per.end(), k) != per.end()) {
                cls = k;
                break;
            }
        out.digit_class = cls;  // cls stays 0 only for period [0], handled above
    }
    return out;
}

// Digit transport sum d_n p^n -> sum d_n q^n; rejects digits >= q.
inline PAdicInt space_change(const PAdicInt& z, long q) {
    for (int d : z.preperiod())
        if (d >= q) throw digit_out_of_range();
    for (int d : z.period())
        if (d >= q) throw digit_out_of_range();
    return PAdicInt(q, z.preperiod(), z.period());
}

}  // namespace fseries
