#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fseries/sb.hpp"

namespace fseries {

struct singular_composite : arithmetic_error {
    singular_composite() : arithmetic_error("periodic affine composite has multiplier 1 with nonzero offset") {}
};
struct affine_family_error : arithmetic_error {
    affine_family_error() : arithmetic_error("value is only determined up to a 1-dimensional affine family") {}
};
struct alpha_vanishes : arithmetic_error {
    explicit alpha_vanishes(const std::string& where)
        : arithmetic_error("alpha vanishes at " + where) {}
};

// Per-digit affine system X(p*z + j) = a_j X(z) + b_j. The a_j are nonzero; when
// a_0 = 1 the system only determines X up to X(0), so b_0 = 0 and an explicit
// X(0) are required. Evaluation memo is confined to a single thread.
class FSeriesSpec {
  public:
    FSeriesSpec(long p, std::vector<ExactScalar> a, std::vector<ExactScalar> b,
                std::optional<ExactScalar> x0 = std::nullopt)
        : p_(p), a_(std::move(a)), b_(std::move(b)), x0_(std::move(x0)) {
        if (static_cast<long>(a_.size()) != p_ || static_cast<long>(b_.size()) != p_)
            throw arithmetic_error("spec needs p coefficients on each side");
        for (const auto& x : a_)
            if (x.is_zero()) throw arithmetic_error("multipliers a_j must be nonzero");
        bool a0_is_one = a_[0] == ExactScalar(Rational(1));
        if (a0_is_one) {
            if (!b_[0].is_zero())
                throw singular_composite();
            if (!x0_) throw affine_family_error();
        }
    }

    long base() const { return p_; }
    const std::vector<ExactScalar>& a() const { return a_; }
    const std::vector<ExactScalar>& b() const { return b_; }
    const std::optional<ExactScalar>& explicit_x0() const { return x0_; }
    bool is_symbolic() const {
        for (const auto& x : a_)
            if (x.is_symbolic()) return true;
        for (const auto& x : b_)
            if (x.is_symbolic()) return true;
        return false;
    }

    ExactScalar x_zero() const {
        if (x0_) return *x0_;
        return b_[0] / (ExactScalar(Rational(1)) - a_[0]);
    }

    // X on N0 via X(pn + j) = a_j X(n) + b_j.
    ExactScalar eval_at_nat(const BigInt& m) const {
        if (auto it = memo_.find(m); it != memo_.end()) return it->second;
        std::vector<int> digits;
        BigInt x = m;
        while (x > 0) {
            digits.push_back(static_cast<int>(mpz_class(x % p_).get_si()));
            x /= p_;
        }
        ExactScalar v = x_zero();
        for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
            std::size_t j = static_cast<std::size_t>(*it);
            v = a_[j] * v + b_[j];
        }
        if (static_cast<long>(memo_.size()) < memo_cap_) memo_.emplace(m, v);
        return v;
    }

    // X at an eventually periodic point: purely periodic fixed point, then the
    // preperiod unrolled through the branch maps.
    ExactScalar eval_at_periodic(const PAdicInt& z) const {
        if (z.base() != p_) throw arithmetic_error("point base differs from spec base");
        PAdicInt tail = z.shifted(static_cast<long>(z.preperiod().size()));
        ExactScalar v(Rational(0));
        if (tail.is_nonneg_integer()) {
            v = x_zero();
        } else {
            ExactScalar mult(Rational(1)), offset(Rational(0));
            for (int d : tail.period()) {
                std::size_t j = static_cast<std::size_t>(d);
                offset = offset + mult * b_[j];
                mult = mult * a_[j];
            }
            ExactScalar one_minus = ExactScalar(Rational(1)) - mult;
            if (one_minus.is_zero()) {
                if (offset.is_zero()) throw affine_family_error();
                throw singular_composite();
            }
            v = offset / one_minus;
        }
        const auto& pre = z.preperiod();
        for (auto it = pre.rbegin(); it != pre.rend(); ++it) {
            std::size_t j = static_cast<std::size_t>(*it);
            v = a_[j] * v + b_[j];
        }
        return v.is_symbolic() ? v : v.demoted();
    }

    // X_N = X([.]_{p^N}) as a level-N SB function.
    SBFunction truncation(long n) const {
        long sz = checked_pow_long(p_, n);
        std::vector<ExactScalar> vals(static_cast<std::size_t>(sz));
        for (long m = 0; m < sz; ++m) vals[static_cast<std::size_t>(m)] = eval_at_nat(m);
        return SBFunction(p_, n, std::move(vals));
    }

    void set_memo_cap(long cap) const { memo_cap_ = cap; }

  private:
    long p_;
    std::vector<ExactScalar> a_, b_;
    std::optional<ExactScalar> x0_;
    mutable std::map<BigInt, ExactScalar> memo_;
    mutable long memo_cap_ = 1 << 20;
};

// M-function M_n(z) = prod_{k<n} r_{digit_k(z)} with nonzero multipliers.
class MFunction {
  public:
    MFunction(long p, std::vector<ExactScalar> multipliers)
        : p_(p), r_(std::move(multipliers)) {
        if (static_cast<long>(r_.size()) != p_) throw arithmetic_error("need p multipliers");
        for (const auto& x : r_)
            if (x.is_zero()) throw arithmetic_error("M-function multipliers must be nonzero");
    }
    long base() const { return p_; }
    const std::vector<ExactScalar>& multipliers() const { return r_; }

    // kappa(m) = prod_{j>=1} (r_j/r_0)^{#_{p:j}(m)}
    ExactScalar kappa(const BigInt& m) const {
        ExactScalar out(Rational(1));
        for (int j = 1; j < p_; ++j) {
            long c = digit_count(p_, m, j);
            if (c) out = out * (r_[static_cast<std::size_t>(j)] / r_[0]).pow(c);
        }
        return out;
    }
    // M_n(z) = r_0^n kappa([z]_{p^n})
    ExactScalar value(long n, const PAdicInt& z) const {
        return r_[0].pow(n) * kappa(z.truncate(n));
    }
    // same thing straight from the digit stream
    ExactScalar value_by_digits(long n, const PAdicInt& z) const {
        ExactScalar out(Rational(1));
        for (long k = 0; k < n; ++k) out = out * r_[static_cast<std::size_t>(z.digit(static_cast<std::size_t>(k)))];
        return out;
    }

  private:
    long p_;
    std::vector<ExactScalar> r_;
};

// t -> p^{-1} sum_k c_k e^{-2 pi i k t}
class TrigPoly {
  public:
    TrigPoly(long p, std::vector<ExactScalar> coeffs) : p_(p), c_(std::move(coeffs)) {}
    long base() const { return p_; }
    const std::vector<ExactScalar>& coeffs() const { return c_; }

    ExactScalar at(const DualElement& t) const {
        ExactScalar acc(Rational(0));
        for (long k = 0; k < p_; ++k) {
            ExactScalar root(t.character_at_int(BigInt(-k)));
            acc += c_[static_cast<std::size_t>(k)] * root;
        }
        return acc * ExactScalar(Rational(1, p_));
    }
    ExactScalar at_zero() const {
        ExactScalar acc(Rational(0));
        for (const auto& x : c_) acc += x;
        return acc * ExactScalar(Rational(1, p_));
    }

  private:
    long p_;
    std::vector<ExactScalar> c_;
};

// alpha/beta/gamma evaluators and the partial product A_hat for one affine system.
class AlphaData {
  public:
    AlphaData(long p, std::vector<ExactScalar> a_coeffs, std::vector<ExactScalar> b_coeffs)
        : alpha_(p, std::move(a_coeffs)), beta_(p, std::move(b_coeffs)) {}

    long base() const { return alpha_.base(); }
    const TrigPoly& alpha() const { return alpha_; }
    const TrigPoly& beta() const { return beta_; }
    ExactScalar alpha0() const { return alpha_.at_zero(); }
    ExactScalar beta0() const { return beta_.at_zero(); }

    ExactScalar gamma(const DualElement& t) const {
        ExactScalar den = alpha_.at(t);
        if (!den.is_symbolic() && den.is_zero()) throw alpha_vanishes("t=" + t.str());
        return beta_.at(t) / den;
    }

    // A_hat(t) = prod_{m < -v_p(t)} alpha(p^m t); empty product 1 at t = 0.
    ExactScalar a_hat(const DualElement& t) const {
        if (t.is_zero()) return ExactScalar(Rational(1));
        long n = t.exponent();
        ExactScalar acc(Rational(1));
        for (long m = 0; m < n; ++m) acc = acc * alpha_.at(t.times_p_pow(m));
        return acc;
    }

  private:
    TrigPoly alpha_, beta_;
};

// A_hat as a coefficient rule (the degenerate direction on the breakdown locus).
class AHatRule final : public CoefficientRule {
  public:
    explicit AHatRule(AlphaData data) : data_(std::move(data)) {}
    ExactScalar at(const DualElement& t) const override { return data_.a_hat(t); }
    long base() const override { return data_.base(); }
    const AlphaData& data() const { return data_; }

  private:
    AlphaData data_;
};

// The closed-form transform of a single affine system: branch chosen by the
// exact test alpha(0) = 1.
class DegreeOneTransform final : public CoefficientRule {
  public:
    explicit DegreeOneTransform(const FSeriesSpec& spec)
        : data_(spec.base(), spec.a(), spec.b()), p_(spec.base()) {
        alpha0_ = data_.alpha0();
        beta0_ = data_.beta0();
        on_variety_ = alpha0_ == ExactScalar(Rational(1));
        if (!on_variety_)
            constant_term_ = beta0_ / (ExactScalar(Rational(1)) - alpha0_);
    }

    long base() const override { return p_; }
    bool on_breakdown_variety() const { return on_variety_; }
    ExactScalar alpha0() const { return alpha0_; }
    ExactScalar beta0() const { return beta0_; }
    const AlphaData& data() const { return data_; }

    ExactScalar at(const DualElement& t) const override {
        if (auto it = memo_.find(t); it != memo_.end()) return it->second;
        ExactScalar v = compute(t);
        memo_.emplace(t, v);
        return v;
    }

  private:
    ExactScalar compute(const DualElement& t) const {
        if (t.is_zero()) return on_variety_ ? ExactScalar(Rational(0)) : constant_term_;
        ExactScalar head = on_variety_
                               ? beta0_ * ExactScalar(Rational(t.vp())) + data_.gamma(t.leading())
                               : constant_term_ + data_.gamma(t.leading());
        return head * data_.a_hat(t);
    }

    AlphaData data_;
    long p_;
    ExactScalar alpha0_, beta0_, constant_term_;
    bool on_variety_;
    mutable std::map<DualElement, ExactScalar> memo_;
};

inline std::shared_ptr<const DegreeOneTransform> closed_transform(const FSeriesSpec& spec) {
    return std::make_shared<DegreeOneTransform>(spec);
}

// ---- literal partial sums, streamed shell-by-shell ---------------------------
//
// Computes S_N = head + sum_{0<|t|<=p^N} sigma(n, k mod p) * A_hat(t) * e^{2 pi i t z}
// for N = 0..n_max, expanding each A_hat(t) through the product of its trig
// factors (a digit-indexed coefficient table), so the t-sum is evaluated term by
// term rather than through any of the summation identities this library verifies.
// Requires rational multipliers.
template <class Sigma>
std::vector<ExactScalar> streamed_partial_sums(long p, const std::vector<ExactScalar>& a,
                                               const ExactScalar& head, Sigma sigma,
                                               const PAdicInt& z, long n_max) {
    // a_j = A_j / Q over a common denominator, so the digit table stays integral
    BigInt q_den = 1;
    for (const auto& x : a) mpz_lcm(q_den.get_mpz_t(), q_den.get_mpz_t(), x.as_rational().den().get_mpz_t());
    std::vector<BigInt> mult(static_cast<std::size_t>(p));
    for (long j = 0; j < p; ++j) {
        Rational r = a[static_cast<std::size_t>(j)].as_rational();
        mult[static_cast<std::size_t>(j)] = r.num() * (q_den / r.den());
    }

    std::vector<ExactScalar> partials;
    partials.reserve(static_cast<std::size_t>(n_max) + 1);
    partials.push_back(head);

    std::vector<BigInt> numw{BigInt(1)};  // numw[w] = prod of A over base-p digits of w
    BigInt qpow = 1;                      // Q^n
    ExactScalar total = head;
    for (long n = 1; n <= n_max; ++n) {
        long pn = checked_pow_long(p, n);
        long pn1 = pn / p;
        qpow *= q_den;
        std::vector<BigInt> next(static_cast<std::size_t>(pn));
        for (long w = 0; w < pn; ++w)
            next[static_cast<std::size_t>(w)] =
                numw[static_cast<std::size_t>(w % pn1)] * mult[static_cast<std::size_t>(w / pn1)];
        numw = std::move(next);

        // sigma(n, j) expanded over powers of zeta_{p^n}, scaled by p^{-n}
        std::vector<std::vector<std::pair<long, Rational>>> sig(static_cast<std::size_t>(p));
        Rational inv_pn(1, pn);
        BigInt denom = qpow * pn;
        for (long j = 1; j < p; ++j) {
            Cyclotomic s = sigma(n, static_cast<int>(j)).as_cyclotomic().lifted_to(pn);
            for (const auto& [e, c] : s.terms()) {
                sig[static_cast<std::size_t>(j)].emplace_back(e, c);
                BigInt full = c.den() * qpow * pn;
                mpz_lcm(denom.get_mpz_t(), denom.get_mpz_t(), full.get_mpz_t());
            }
        }
        // integer weights f = c * denom / (p^n Q^n) per sigma term
        std::vector<std::vector<std::pair<long, BigInt>>> sigint(static_cast<std::size_t>(p));
        for (long j = 1; j < p; ++j)
            for (const auto& [e, c] : sig[static_cast<std::size_t>(j)])
                sigint[static_cast<std::size_t>(j)].emplace_back(e, c.num() * (denom / (c.den() * qpow * pn)));

        long zn = static_cast<long>(z.truncate(n).get_si());
        std::vector<BigInt> acc(static_cast<std::size_t>(pn), BigInt(0));
        for (long k = 1; k < pn; ++k) {
            if (k % p == 0) continue;
            for (const auto& [se, f] : sigint[static_cast<std::size_t>(k % p)]) {
                long e0 = (se + k * (zn % pn)) % pn;
                long step = k % pn;
                long e = e0;
                for (long w = 0; w < pn; ++w) {
                    mpz_addmul(acc[static_cast<std::size_t>(e)].get_mpz_t(), f.get_mpz_t(),
                               numw[static_cast<std::size_t>(w)].get_mpz_t());
                    e -= step;
                    if (e < 0) e += pn;
                }
            }
        }
        std::vector<std::pair<long, Rational>> terms;
        for (long e = 0; e < pn; ++e)
            if (acc[static_cast<std::size_t>(e)] != 0)
                terms.emplace_back(e, Rational(acc[static_cast<std::size_t>(e)], denom));
        total = total + ExactScalar(Cyclotomic::from_terms(pn, std::move(terms))).demoted();
        partials.push_back(total);
    }
    return partials;
}

// Literal partial sums of the closed transform at z for N = 0..n_max.
inline std::vector<ExactScalar> direct_partial_sums(const FSeriesSpec& spec, const PAdicInt& z,
                                                    long n_max) {
    auto rule = closed_transform(spec);
    bool rational_params = true;
    for (const auto& x : spec.a())
        if (x.is_symbolic() || x.demoted().tier() != 0) rational_params = false;
    if (rational_params) {
        AlphaData data(spec.base(), spec.a(), spec.b());
        long p = spec.base();
        std::vector<ExactScalar> gamma_table(static_cast<std::size_t>(p), ExactScalar(Rational(0)));
        for (long j = 1; j < p; ++j)
            gamma_table[static_cast<std::size_t>(j)] = data.gamma(DualElement(p, j, 1));
        ExactScalar beta0 = rule->beta0();
        bool on_variety = rule->on_breakdown_variety();
        ExactScalar constant = on_variety ? ExactScalar(Rational(0))
                                          : beta0 / (ExactScalar(Rational(1)) - rule->alpha0());
        auto sigma = [&](long n, int j) {
            ExactScalar head = on_variety ? beta0 * ExactScalar(Rational(-n)) : constant;
            return head + gamma_table[static_cast<std::size_t>(j)];
        };
        return streamed_partial_sums(spec.base(), spec.a(), rule->at(DualElement::zero(spec.base())),
                                     sigma, z, n_max);
    }
    std::vector<ExactScalar> out;
    for (long n = 0; n <= n_max; ++n) out.push_back(partial_sum(*rule, n, z));
    return out;
}

// ---- verified identities for one affine system -------------------------------

// kappa helper bound to a spec's a-multipliers.
inline MFunction a_mfunction(const FSeriesSpec& spec) { return MFunction(spec.base(), spec.a()); }

// Both partial-sum formulas for A_hat:
//   sum_{|t|<=p^N} A_hat(t) e^{2 pi i t z}
//     = a_0^N kappa([z]_{p^N}) + (1 - alpha(0)) sum_{n<N} a_0^n kappa([z]_{p^n})
// and the gamma-weighted version against the epsilon-digit expansion.
inline IdentityReport ax_sum_report(const FSeriesSpec& spec, long n_max, const PAdicInt& z) {
    IdentityReport rep{"a-hat-partial-sum", "N<=" + std::to_string(n_max) + ", z=" + z.str()};
    AlphaData data(spec.base(), spec.a(), spec.b());
    MFunction mf = a_mfunction(spec);
    long p = spec.base();
    ExactScalar alpha0 = data.alpha0();
    for (long n = 0; n <= n_max; ++n) {
        ExactScalar direct(Rational(0));
        ExactScalar gamma_direct(Rational(0));
        for (const auto& t : dual_ball(p, n)) {
            ExactScalar ahat = data.a_hat(t);
            ExactScalar chr{t.character(z)};
            direct += ahat * chr;
            if (!t.is_zero()) gamma_direct += data.gamma(t.leading()) * ahat * chr;
        }
        ExactScalar closed = mf.value(n, z);
        ExactScalar tail(Rational(0));
        for (long m = 0; m < n; ++m) tail += mf.value(m, z);
        closed = closed + (ExactScalar(Rational(1)) - alpha0) * tail;
        if (direct != closed) rep.record_mismatch("A-sum N=" + std::to_string(n), direct.str(), closed.str());

        ExactScalar gamma_closed(Rational(0));
        for (long m = 0; m < n; ++m) {
            ExactScalar digit_factor(Rational(0));
            Cyclotomic eps = epsilon_n(z, m);
            for (int j = 1; j < p; ++j)
                digit_factor += data.beta().at(DualElement(p, j, 1)) * ExactScalar(eps.pow(j));
            gamma_closed += digit_factor * mf.value(m, z);
        }
        if (gamma_direct != gamma_closed)
            rep.record_mismatch("gamma-sum N=" + std::to_string(n), gamma_direct.str(), gamma_closed.str());
    }
    return rep;
}

// X-tilde recurrence:
//   X~_N(z) = a_{[z]_p} X~_{N-1}(theta z) + b_{[z]_p} - [alpha(0)=1] beta(0) a_0^N kappa([z]_{p^N})
inline IdentityReport tilde_recurrence_report(const FSeriesSpec& spec, long n_max, const PAdicInt& z) {
    IdentityReport rep{"tilde-recurrence", "N<=" + std::to_string(n_max) + ", z=" + z.str()};
    auto rule = closed_transform(spec);
    MFunction mf = a_mfunction(spec);
    PAdicInt tz = z.shifted();
    int j = z.digit(0);
    for (long n = 1; n <= n_max; ++n) {
        ExactScalar lhs = partial_sum(*rule, n, z);
        ExactScalar rhs = spec.a()[static_cast<std::size_t>(j)] * partial_sum(*rule, n - 1, tz) +
                          spec.b()[static_cast<std::size_t>(j)];
        if (rule->on_breakdown_variety()) rhs = rhs - rule->beta0() * mf.value(n, z);
        if (lhs != rhs) rep.record_mismatch("N=" + std::to_string(n), lhs.str(), rhs.str());
    }
    return rep;
}

// Delta_N^{(m)} = X(theta^m z) - X~_N(theta^m z), with the m = 0 case cross-checked
// against (Delta_0^{(N)} + [alpha(0)=1] N beta(0)) a_0^N kappa([z]_{p^N}).
struct DeltaReport {
    std::vector<ExactScalar> direct;     // index N
    std::vector<ExactScalar> triangle;   // index N
    bool exact_equal = true;
};

inline DeltaReport delta_report(const FSeriesSpec& spec, long n_max, const PAdicInt& z) {
    DeltaReport out;
    auto rule = closed_transform(spec);
    MFunction mf = a_mfunction(spec);
    ExactScalar xz = spec.eval_at_periodic(z);
    ExactScalar xhat0 = rule->at(DualElement::zero(spec.base()));
    bool on_variety = rule->on_breakdown_variety();
    std::vector<ExactScalar> sums = direct_partial_sums(spec, z, n_max);
    for (long n = 0; n <= n_max; ++n) {
        ExactScalar direct = xz - sums[static_cast<std::size_t>(n)];
        ExactScalar head = spec.eval_at_periodic(z.shifted(n)) - xhat0;
        if (on_variety) head = head + ExactScalar(Rational(n)) * rule->beta0();
        ExactScalar tri = head * mf.value(n, z);
        out.direct.push_back(direct);
        out.triangle.push_back(tri);
        if (direct != tri) out.exact_equal = false;
    }
    return out;
}

inline ExactScalar delta_n(const FSeriesSpec& spec, long n, long m, const PAdicInt& z) {
    auto rule = closed_transform(spec);
    PAdicInt zz = z.shifted(m);
    return spec.eval_at_periodic(zz) - partial_sum(*rule, n, zz);
}

}  // namespace fseries
