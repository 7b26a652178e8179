#pragma once

#include <mpfr.h>

#include <algorithm>
#include <string>

#include "fseries/rational.hpp"

namespace fseries {

// Real interval [lo, hi] with MPFR directed rounding. Used only for archimedean
// enclosures; exact identities never route through this type.
class RealInterval {
  public:
    explicit RealInterval(mpfr_prec_t prec = 128) : prec_(prec) {
        mpfr_init2(lo_, prec_);
        mpfr_init2(hi_, prec_);
        mpfr_set_zero(lo_, 1);
        mpfr_set_zero(hi_, 1);
    }
    RealInterval(const Rational& x, mpfr_prec_t prec) : RealInterval(prec) {
        mpfr_set_q(lo_, x.raw().get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(hi_, x.raw().get_mpq_t(), MPFR_RNDU);
    }
    RealInterval(const RealInterval& o) : RealInterval(o.prec_) {
        mpfr_set(lo_, o.lo_, MPFR_RNDD);
        mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }
    RealInterval& operator=(const RealInterval& o) {
        if (this != &o) {
            mpfr_set_prec(lo_, o.prec_);
            mpfr_set_prec(hi_, o.prec_);
            prec_ = o.prec_;
            mpfr_set(lo_, o.lo_, MPFR_RNDD);
            mpfr_set(hi_, o.hi_, MPFR_RNDU);
        }
        return *this;
    }
    ~RealInterval() {
        mpfr_clear(lo_);
        mpfr_clear(hi_);
    }

    static RealInterval pi(mpfr_prec_t prec) {
        RealInterval r(prec);
        mpfr_const_pi(r.lo_, MPFR_RNDD);
        mpfr_const_pi(r.hi_, MPFR_RNDU);
        return r;
    }
    static RealInterval log_of_ui(unsigned long n, mpfr_prec_t prec) {
        RealInterval r(prec);
        mpfr_set_ui(r.lo_, n, MPFR_RNDD);
        mpfr_log(r.lo_, r.lo_, MPFR_RNDD);
        mpfr_set_ui(r.hi_, n, MPFR_RNDU);
        mpfr_log(r.hi_, r.hi_, MPFR_RNDU);
        return r;
    }

    friend RealInterval operator+(const RealInterval& a, const RealInterval& b) {
        RealInterval r(std::max(a.prec_, b.prec_));
        mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
        mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
        return r;
    }
    friend RealInterval operator-(const RealInterval& a, const RealInterval& b) {
        RealInterval r(std::max(a.prec_, b.prec_));
        mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
        mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
        return r;
    }
    friend RealInterval operator*(const RealInterval& a, const RealInterval& b) {
        RealInterval r(std::max(a.prec_, b.prec_));
        mpfr_t t;
        mpfr_init2(t, r.prec_);
        mpfr_mul(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
        mpfr_mul(r.hi_, a.lo_, b.lo_, MPFR_RNDU);
        const mpfr_srcptr xs[4][2] = {{a.lo_, b.hi_}, {a.hi_, b.lo_}, {a.hi_, b.hi_}, {nullptr, nullptr}};
        for (int i = 0; i < 3; ++i) {
            mpfr_mul(t, xs[i][0], xs[i][1], MPFR_RNDD);
            if (mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
            mpfr_mul(t, xs[i][0], xs[i][1], MPFR_RNDU);
            if (mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
        }
        mpfr_clear(t);
        return r;
    }

    RealInterval scaled_by_rational(const Rational& s) const {
        return *this * RealInterval(s, prec_);
    }

    // cos/sin enclosure: directed evaluation at lo plus Lipschitz-1 widening by the width.
    RealInterval cos() const { return trig(/*is_cos=*/true); }
    RealInterval sin() const { return trig(/*is_cos=*/false); }

    // log enclosure; requires lo > 0
    RealInterval log() const {
        RealInterval r(prec_);
        mpfr_log(r.lo_, lo_, MPFR_RNDD);
        mpfr_log(r.hi_, hi_, MPFR_RNDU);
        return r;
    }

    RealInterval sqrt() const {
        RealInterval r(prec_);
        mpfr_t z;
        mpfr_init2(z, prec_);
        mpfr_set_zero(z, 1);
        mpfr_max(r.lo_, lo_, z, MPFR_RNDD);
        mpfr_sqrt(r.lo_, r.lo_, MPFR_RNDD);
        mpfr_max(r.hi_, hi_, z, MPFR_RNDU);
        mpfr_sqrt(r.hi_, r.hi_, MPFR_RNDU);
        mpfr_clear(z);
        return r;
    }

    double lo() const { return mpfr_get_d(lo_, MPFR_RNDD); }
    double hi() const { return mpfr_get_d(hi_, MPFR_RNDU); }
    double width() const {
        mpfr_t w;
        mpfr_init2(w, prec_);
        mpfr_sub(w, hi_, lo_, MPFR_RNDU);
        double out = mpfr_get_d(w, MPFR_RNDU);
        mpfr_clear(w);
        return out;
    }
    bool strictly_less(double bound) const { return mpfr_cmp_d(hi_, bound) < 0; }
    bool strictly_greater(double bound) const { return mpfr_cmp_d(lo_, bound) > 0; }
    bool contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }
    mpfr_prec_t precision() const { return prec_; }

    std::string str() const {
        char buf[64];
        mpfr_snprintf(buf, sizeof buf, "%.12Rg", lo_);
        std::string s = "[" + std::string(buf) + ", ";
        mpfr_snprintf(buf, sizeof buf, "%.12Rg", hi_);
        return s + std::string(buf) + "]";
    }

  private:
    RealInterval trig(bool is_cos) const {
        RealInterval r(prec_);
        mpfr_t w;
        mpfr_init2(w, prec_);
        mpfr_sub(w, hi_, lo_, MPFR_RNDU);
        if (is_cos) {
            mpfr_cos(r.lo_, lo_, MPFR_RNDD);
            mpfr_cos(r.hi_, lo_, MPFR_RNDU);
        } else {
            mpfr_sin(r.lo_, lo_, MPFR_RNDD);
            mpfr_sin(r.hi_, lo_, MPFR_RNDU);
        }
        mpfr_sub(r.lo_, r.lo_, w, MPFR_RNDD);
        mpfr_add(r.hi_, r.hi_, w, MPFR_RNDU);
        // clamp to [-1, 1]
        mpfr_t one;
        mpfr_init2(one, prec_);
        mpfr_set_si(one, -1, MPFR_RNDD);
        mpfr_max(r.lo_, r.lo_, one, MPFR_RNDD);
        mpfr_set_si(one, 1, MPFR_RNDU);
        mpfr_min(r.hi_, r.hi_, one, MPFR_RNDU);
        mpfr_clear(one);
        mpfr_clear(w);
        return r;
    }

    mpfr_prec_t prec_;
    mpfr_t lo_, hi_;
};

struct ComplexInterval {
    RealInterval re, im;
    ComplexInterval(mpfr_prec_t prec = 128) : re(prec), im(prec) {}
    ComplexInterval(RealInterval r, RealInterval i) : re(std::move(r)), im(std::move(i)) {}

    friend ComplexInterval operator+(const ComplexInterval& a, const ComplexInterval& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend ComplexInterval operator-(const ComplexInterval& a, const ComplexInterval& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend ComplexInterval operator*(const ComplexInterval& a, const ComplexInterval& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    RealInterval magnitude() const { return (re * re + im * im).sqrt(); }
};

}  // namespace fseries
