#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "fseries/interval.hpp"
#include "fseries/poly.hpp"
#include "fseries/rational.hpp"

namespace fseries {

struct ramified_place : arithmetic_error {
    ramified_place() : arithmetic_error("place is ramified in the cyclotomic order") {}
};

inline long euler_phi(long m) {
    long r = m;
    long n = m;
    for (long d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            r -= r / d;
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) r -= r / n;
    return r;
}

inline long radical(long m) {
    long r = 1, n = m;
    for (long d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            r *= d;
            while (n % d == 0) n /= d;
        }
    }
    return n > 1 ? r * n : r;
}

// Phi_M as a sparse list of (exponent, coefficient), monic term last.
// Phi_M(x) = Phi_rad(M)(x^{M/rad(M)}), so the list stays short for every order
// this library touches; reduction mod Phi_M is a short synthetic division.
inline const std::vector<std::pair<long, Rational>>& sparse_cyclotomic(long m) {
    static std::map<long, std::vector<std::pair<long, Rational>>> cache;
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    long rad = radical(m);
    long stretch = m / rad;
    const Poly& base = cyclotomic_polynomial(rad);
    std::vector<std::pair<long, Rational>> terms;
    for (long e = 0; e <= base.degree(); ++e) {
        Rational c = base.coeff(static_cast<std::size_t>(e));
        if (!c.is_zero()) terms.emplace_back(e * stretch, c);
    }
    return cache.emplace(m, std::move(terms)).first->second;
}

// Element of Q(zeta_M), stored as a sparse combination of powers of zeta_M
// (group-algebra representative). Equality and zero tests reduce mod Phi_M.
// Immutable value semantics; all operations are pure.
class Cyclotomic {
  public:
    Cyclotomic() : order_(1) {}
    explicit Cyclotomic(const Rational& r) : order_(1) {
        if (!r.is_zero()) terms_.emplace_back(0, r);
    }

    static Cyclotomic root_of_unity(long m, const BigInt& k) {
        if (m < 1) throw arithmetic_error("root of unity order must be >= 1");
        BigInt km = ((k % m) + m) % m;
        long e = km.get_si();
        long g = std::gcd(e, m);
        Cyclotomic z;
        z.order_ = m / g;
        z.terms_.assign(1, {e / g, Rational(1)});
        if (z.order_ == 1) {
            z.terms_.assign(1, {0, Rational(1)});
        }
        return z;
    }
    static Cyclotomic root_of_unity(long m, long k) { return root_of_unity(m, BigInt(k)); }

    // Raw group-algebra assembly; exponents must be in [0, m) with no duplicates.
    static Cyclotomic from_terms(long m, std::vector<std::pair<long, Rational>> terms) {
        Cyclotomic z;
        z.order_ = m;
        std::erase_if(terms, [](const auto& t) { return t.second.is_zero(); });
        std::sort(terms.begin(), terms.end(),
                  [](const auto& u, const auto& v) { return u.first < v.first; });
        z.terms_ = std::move(terms);
        if (z.terms_.empty()) z.order_ = 1;
        return z;
    }

    long order() const { return order_; }
    std::size_t term_count() const { return terms_.size(); }

    bool is_zero() const {
        if (terms_.empty()) return true;
        for (const auto& [e, c] : canonical())
            if (!c.is_zero()) return false;
        return true;
    }
    bool is_rational() const {
        for (const auto& [e, c] : canonical())
            if (e != 0 && !c.is_zero()) return false;
        return true;
    }
    Rational as_rational() const {
        Rational r(0);
        for (const auto& [e, c] : canonical()) {
            if (e == 0)
                r = c;
            else if (!c.is_zero())
                throw arithmetic_error("cyclotomic value is not rational");
        }
        return r;
    }

    Cyclotomic lifted_to(long m) const {
        if (m == order_) return *this;
        if (m % order_ != 0) throw arithmetic_error("cannot lift cyclotomic to non-multiple order");
        long c = m / order_;
        Cyclotomic out;
        out.order_ = m;
        out.terms_.reserve(terms_.size());
        for (const auto& [e, coef] : terms_) out.terms_.emplace_back(e * c, coef);
        return out;
    }

    friend Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b) {
        long m = std::lcm(a.order_, b.order_);
        Cyclotomic x = a.lifted_to(m), y = b.lifted_to(m);
        Cyclotomic out;
        out.order_ = m;
        out.terms_ = merge_terms(x.terms_, y.terms_, false);
        return out;
    }
    friend Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b) {
        long m = std::lcm(a.order_, b.order_);
        Cyclotomic x = a.lifted_to(m), y = b.lifted_to(m);
        Cyclotomic out;
        out.order_ = m;
        out.terms_ = merge_terms(x.terms_, y.terms_, true);
        return out;
    }
    Cyclotomic operator-() const {
        Cyclotomic out(*this);
        for (auto& [e, c] : out.terms_) c = -c;
        return out;
    }
    friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
        if (a.terms_.empty() || b.terms_.empty()) return Cyclotomic();
        long m = std::lcm(a.order_, b.order_);
        Cyclotomic x = a.lifted_to(m), y = b.lifted_to(m);
        if (y.terms_.size() == 1) return monomial_product(std::move(x), y.terms_[0], m);
        if (x.terms_.size() == 1) return monomial_product(std::move(y), x.terms_[0], m);
        std::vector<std::pair<long, Rational>> acc;
        acc.reserve(x.terms_.size() * y.terms_.size());
        for (const auto& [ea, ca] : x.terms_)
            for (const auto& [eb, cb] : y.terms_) acc.emplace_back((ea + eb) % m, ca * cb);
        std::sort(acc.begin(), acc.end(),
                  [](const auto& u, const auto& v) { return u.first < v.first; });
        Cyclotomic out;
        out.order_ = m;
        out.terms_.reserve(acc.size());
        for (auto& t : acc) {
            if (!out.terms_.empty() && out.terms_.back().first == t.first)
                out.terms_.back().second += t.second;
            else
                out.terms_.push_back(std::move(t));
        }
        std::erase_if(out.terms_, [](const auto& t) { return t.second.is_zero(); });
        return out;
    }
    Cyclotomic scaled(const Rational& s) const {
        if (s.is_zero()) return Cyclotomic();
        Cyclotomic out(*this);
        for (auto& [e, c] : out.terms_) c *= s;
        return out;
    }

    friend bool operator==(const Cyclotomic& a, const Cyclotomic& b) { return (a - b).is_zero(); }
    friend bool operator!=(const Cyclotomic& a, const Cyclotomic& b) { return !(a == b); }

    Cyclotomic pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        Cyclotomic r{Rational(1)};
        Cyclotomic base(*this);
        unsigned long k = static_cast<unsigned long>(e);
        while (k) {
            if (k & 1) r = r * base;
            base = base * base;
            k >>= 1;
        }
        return r;
    }

    // Inverse via extended Euclid against Phi_M on the canonical representative.
    Cyclotomic inverse() const {
        auto can = canonical();
        std::vector<Rational> dense(static_cast<std::size_t>(euler_phi(order_)), Rational(0));
        bool nz = false;
        for (const auto& [e, c] : can) {
            dense[static_cast<std::size_t>(e)] = c;
            if (!c.is_zero()) nz = true;
        }
        if (!nz) throw division_by_zero();
        Poly a{std::move(dense)};
        auto [g, s] = poly_half_ext_gcd(a, cyclotomic_polynomial(order_));
        if (g.degree() != 0) throw arithmetic_error("cyclotomic inverse: gcd not constant");
        Cyclotomic out;
        out.order_ = order_;
        for (long e = 0; e <= s.degree(); ++e) {
            Rational c = s.coeff(static_cast<std::size_t>(e));
            if (!c.is_zero()) out.terms_.emplace_back(e, c);
        }
        return out;
    }

    // Canonical form: exponent < phi(order), reduced mod Phi_order.
    std::vector<std::pair<long, Rational>> canonical() const {
        long phi = euler_phi(order_);
        bool reduced = true;
        for (const auto& [e, c] : terms_)
            if (e >= phi) {
                reduced = false;
                break;
            }
        if (reduced) return terms_;
        std::vector<Rational> dense(static_cast<std::size_t>(order_), Rational(0));
        for (const auto& [e, c] : terms_) dense[static_cast<std::size_t>(e)] += c;
        const auto& mod = sparse_cyclotomic(order_);
        long top = mod.back().first;  // == phi
        for (long e = order_ - 1; e >= top; --e) {
            Rational c = dense[static_cast<std::size_t>(e)];
            if (c.is_zero()) continue;
            dense[static_cast<std::size_t>(e)] = Rational(0);
            for (std::size_t i = 0; i + 1 < mod.size(); ++i)
                dense[static_cast<std::size_t>(e - top + mod[i].first)] -= c * mod[i].second;
        }
        std::vector<std::pair<long, Rational>> out;
        for (long e = 0; e < top; ++e)
            if (!dense[static_cast<std::size_t>(e)].is_zero())
                out.emplace_back(e, dense[static_cast<std::size_t>(e)]);
        return out;
    }

    // Replaces the representative by its canonical form (value unchanged).
    Cyclotomic canonicalized() const {
        Cyclotomic out;
        out.order_ = order_;
        out.terms_ = canonical();
        if (out.terms_.empty()) out.order_ = 1;
        return out;
    }

    // Enclosure of |x| under the embedding zeta_M -> exp(2*pi*i/M).
    RealInterval arch_norm(mpfr_prec_t prec = 128) const {
        RealInterval two_pi = RealInterval(Rational(2), prec) * RealInterval::pi(prec);
        ComplexInterval acc(prec);
        for (const auto& [e, c] : terms_) {
            RealInterval angle = two_pi.scaled_by_rational(Rational(e, order_));
            ComplexInterval z(angle.cos(), angle.sin());
            ComplexInterval cz(RealInterval(c, prec) * z.re, RealInterval(c, prec) * z.im);
            acc = acc + cz;
        }
        return acc.magnitude();
    }
    ComplexInterval arch_embed(mpfr_prec_t prec = 128) const {
        RealInterval two_pi = RealInterval(Rational(2), prec) * RealInterval::pi(prec);
        ComplexInterval acc(prec);
        for (const auto& [e, c] : terms_) {
            RealInterval angle = two_pi.scaled_by_rational(Rational(e, order_));
            ComplexInterval z(angle.cos(), angle.sin());
            acc = acc + ComplexInterval(RealInterval(c, prec) * z.re, RealInterval(c, prec) * z.im);
        }
        return acc;
    }

    // Upper bound ell^{-min_k v_ell(c_k)} over canonical coefficients; exact |x|_ell
    // when x is rational. Requires ell unramified (gcd(ell, order) = 1).
    Rational ell_adic_upper_bound(const BigInt& ell) const {
        auto can = canonical();
        bool rational = true;
        for (const auto& [e, c] : can)
            if (e != 0 && !c.is_zero()) rational = false;
        if (!rational) {
            BigInt g;
            mpz_gcd(g.get_mpz_t(), BigInt(order_).get_mpz_t(), ell.get_mpz_t());
            if (g != 1) throw ramified_place();
        }
        bool any = false;
        long minv = 0;
        for (const auto& [e, c] : can) {
            if (c.is_zero()) continue;
            long v = ell_adic_valuation(c, ell);
            if (!any || v < minv) minv = v;
            any = true;
        }
        if (!any) return Rational(0);
        return Rational(ell).pow(-minv);
    }

    const std::vector<std::pair<long, Rational>>& terms() const { return terms_; }

    std::string str() const {
        auto can = canonical();
        if (can.empty()) return "0";
        std::string s;
        bool first = true;
        for (const auto& [e, c] : can) {
            Rational a = c.abs();
            bool neg = c.sign() < 0;
            if (first) {
                if (neg) s += "-";
                first = false;
            } else {
                s += neg ? " - " : " + ";
            }
            long g = e == 0 ? 0 : std::gcd(e, order_);
            if (e == 0) {
                s += a.str();
            } else {
                long eo = e / g, mo = order_ / g;
                if (!a.is_one()) s += a.str() + "*";
                s += "zeta(" + std::to_string(mo) + ")";
                if (eo != 1) s += "^" + std::to_string(eo);
            }
        }
        return s;
    }

  private:
    // Shift every exponent by e mod m; sorted order is restored with one rotate.
    static Cyclotomic monomial_product(Cyclotomic x, const std::pair<long, Rational>& mono, long m) {
        const auto& [e, c] = mono;
        bool scale = !c.is_one();
        auto wrap = x.terms_.end();
        for (auto it = x.terms_.begin(); it != x.terms_.end(); ++it) {
            it->first += e;
            if (it->first >= m) {
                it->first -= m;
                if (wrap == x.terms_.end()) wrap = it;
            }
            if (scale) it->second *= c;
        }
        std::rotate(x.terms_.begin(), wrap, x.terms_.end());
        x.order_ = m;
        return x;
    }

    // Both inputs sorted by exponent (a maintained invariant of every operation).
    static std::vector<std::pair<long, Rational>> merge_terms(
        const std::vector<std::pair<long, Rational>>& a,
        const std::vector<std::pair<long, Rational>>& b, bool subtract) {
        std::vector<std::pair<long, Rational>> out;
        out.reserve(a.size() + b.size());
        std::size_t i = 0, j = 0;
        while (i < a.size() || j < b.size()) {
            if (j >= b.size() || (i < a.size() && a[i].first < b[j].first)) {
                out.push_back(a[i++]);
            } else if (i >= a.size() || b[j].first < a[i].first) {
                Rational c = subtract ? -b[j].second : b[j].second;
                if (!c.is_zero()) out.emplace_back(b[j].first, std::move(c));
                ++j;
            } else {
                Rational c = subtract ? a[i].second - b[j].second : a[i].second + b[j].second;
                if (!c.is_zero()) out.emplace_back(a[i].first, std::move(c));
                ++i;
                ++j;
            }
        }
        return out;
    }

    long order_;
    std::vector<std::pair<long, Rational>> terms_;  // sorted construction not enforced; merged on ops
};

}  // namespace fseries
