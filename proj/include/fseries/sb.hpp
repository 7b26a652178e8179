#pragma once

#include <map>
#include <memory>
#include <vector>

#include "fseries/padic.hpp"
#include "fseries/report.hpp"

namespace fseries {

// Cap on stored sample counts, so exact arithmetic stays tractable.
inline long& sb_max_points() {
    static long cap = 4096;
    return cap;
}

// Locally constant function Z_p -> scalars at level N: one value per residue mod p^N.
class SBFunction {
  public:
    SBFunction(long p, long level, std::vector<ExactScalar> values)
        : p_(p), level_(level), values_(std::move(values)) {
        long n = checked_pow_long(p_, level_);
        if (n > sb_max_points()) throw arithmetic_error("SB function level exceeds configured cap");
        if (static_cast<long>(values_.size()) != n)
            throw arithmetic_error("SB function value count must be p^level");
    }
    static SBFunction constant(long p, const ExactScalar& c) { return SBFunction(p, 0, {c}); }
    // [z = k mod p^n]
    static SBFunction indicator(long p, long n, const BigInt& k) {
        long sz = checked_pow_long(p, n);
        std::vector<ExactScalar> v(static_cast<std::size_t>(sz), ExactScalar(Rational(0)));
        BigInt kk = ((k % sz) + sz) % sz;
        v[static_cast<std::size_t>(kk.get_si())] = ExactScalar(Rational(1));
        return SBFunction(p, n, std::move(v));
    }

    long base() const { return p_; }
    long level() const { return level_; }
    long size() const { return static_cast<long>(values_.size()); }
    const std::vector<ExactScalar>& values() const { return values_; }

    const ExactScalar& at_index(long m) const { return values_[static_cast<std::size_t>(m)]; }
    ExactScalar operator()(const PAdicInt& z) const {
        return values_[static_cast<std::size_t>(z.truncate(level_).get_si())];
    }
    ExactScalar at_integer(const BigInt& m) const {
        BigInt r = ((m % size()) + size()) % size();
        return values_[static_cast<std::size_t>(r.get_si())];
    }

    SBFunction level_lifted(long new_level) const {
        if (new_level < level_) throw arithmetic_error("cannot lower SB function level");
        if (new_level == level_) return *this;
        long n = checked_pow_long(p_, new_level);
        long mask = size();
        std::vector<ExactScalar> v(static_cast<std::size_t>(n));
        for (long m = 0; m < n; ++m) v[static_cast<std::size_t>(m)] = values_[static_cast<std::size_t>(m % mask)];
        return SBFunction(p_, new_level, std::move(v));
    }

    friend SBFunction operator+(const SBFunction& a, const SBFunction& b) {
        return zip(a, b, [](const ExactScalar& x, const ExactScalar& y) { return x + y; });
    }
    friend SBFunction operator-(const SBFunction& a, const SBFunction& b) {
        return zip(a, b, [](const ExactScalar& x, const ExactScalar& y) { return x - y; });
    }
    friend SBFunction operator*(const SBFunction& a, const SBFunction& b) {
        return zip(a, b, [](const ExactScalar& x, const ExactScalar& y) { return x * y; });
    }
    SBFunction scaled(const ExactScalar& s) const {
        std::vector<ExactScalar> v(values_);
        for (auto& x : v) x = x * s;
        return SBFunction(p_, level_, std::move(v));
    }
    // phi(. + a) for an integer shift a
    SBFunction translated(const BigInt& a) const {
        std::vector<ExactScalar> v(values_.size());
        for (long m = 0; m < size(); ++m) {
            BigInt idx = (m + a) % size();
            v[static_cast<std::size_t>(m)] = values_[static_cast<std::size_t>(idx.get_si())];
        }
        return SBFunction(p_, level_, std::move(v));
    }

    friend bool operator==(const SBFunction& a, const SBFunction& b) {
        if (a.p_ != b.p_) return false;
        long lv = std::max(a.level_, b.level_);
        SBFunction x = a.level_lifted(lv), y = b.level_lifted(lv);
        for (long m = 0; m < x.size(); ++m)
            if (x.values_[static_cast<std::size_t>(m)] != y.values_[static_cast<std::size_t>(m)])
                return false;
        return true;
    }

  private:
    template <class F>
    static SBFunction zip(const SBFunction& a, const SBFunction& b, F f) {
        if (a.p_ != b.p_) throw arithmetic_error("SB functions live over different bases");
        long lv = std::max(a.level_, b.level_);
        SBFunction x = a.level_lifted(lv), y = b.level_lifted(lv);
        std::vector<ExactScalar> v(x.values_.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(x.values_[i], y.values_[i]);
        return SBFunction(a.p_, lv, std::move(v));
    }

    long p_, level_;
    std::vector<ExactScalar> values_;
};

// Finitely supported coefficient table on the dual group; support |t|_p <= p^level.
class FourierTable {
  public:
    FourierTable(long p, long level) : p_(p), level_(level) {}
    FourierTable(long p, long level, std::map<DualElement, ExactScalar> entries)
        : p_(p), level_(level), entries_(std::move(entries)) {}

    long base() const { return p_; }
    long support_level() const { return level_; }
    const std::map<DualElement, ExactScalar>& entries() const { return entries_; }

    ExactScalar at(const DualElement& t) const {
        auto it = entries_.find(t);
        return it == entries_.end() ? ExactScalar(Rational(0)) : it->second;
    }
    void set(const DualElement& t, ExactScalar v) { entries_[t] = std::move(v); }

    friend bool operator==(const FourierTable& a, const FourierTable& b) {
        if (a.p_ != b.p_) return false;
        long lv = std::max(a.level_, b.level_);
        for (const auto& t : dual_ball(a.p_, lv))
            if (a.at(t) != b.at(t)) return false;
        return true;
    }

  private:
    long p_, level_;
    std::map<DualElement, ExactScalar> entries_;
};

namespace detail {

// Exact DFT over Z/p^N by radix-p decimation; sign = -1 analysis, +1 synthesis.
inline std::vector<ExactScalar> dft(const std::vector<ExactScalar>& v, long p, long level, int sign) {
    if (level == 0) return v;
    long n = static_cast<long>(v.size());
    long sub = n / p;
    std::vector<std::vector<ExactScalar>> g(static_cast<std::size_t>(p));
    for (long r = 0; r < p; ++r) {
        std::vector<ExactScalar> part(static_cast<std::size_t>(sub));
        for (long m = 0; m < sub; ++m) part[static_cast<std::size_t>(m)] = v[static_cast<std::size_t>(p * m + r)];
        g[static_cast<std::size_t>(r)] = dft(part, p, level - 1, sign);
    }
    std::vector<ExactScalar> out(static_cast<std::size_t>(n), ExactScalar(Rational(0)));
    for (long k = 0; k < n; ++k) {
        ExactScalar acc(Rational(0));
        for (long r = 0; r < p; ++r) {
            ExactScalar w = ExactScalar::root_of_unity(n, BigInt(sign) * r * k);
            acc += w * g[static_cast<std::size_t>(r)][static_cast<std::size_t>(k % sub)];
        }
        out[static_cast<std::size_t>(k)] = acc;
    }
    return out;
}

}  // namespace detail

// phi_hat(t) = p^{-N} sum_m phi(m) e^{-2 pi i t m}
inline FourierTable forward(const SBFunction& phi) {
    long n = phi.size();
    auto raw = detail::dft(phi.values(), phi.base(), phi.level(), -1);
    Rational scale(1, n);
    std::map<DualElement, ExactScalar> entries;
    for (long k = 0; k < n; ++k)
        entries.emplace(DualElement(phi.base(), k, phi.level()),
                        (raw[static_cast<std::size_t>(k)] * ExactScalar(scale)).demoted());
    return FourierTable(phi.base(), phi.level(), std::move(entries));
}

// phi(z) = sum_t T(t) e^{2 pi i t z}; exact inverse of forward.
inline SBFunction inverse(const FourierTable& table) {
    long p = table.base();
    long level = table.support_level();
    long n = checked_pow_long(p, level);
    std::vector<ExactScalar> dense(static_cast<std::size_t>(n), ExactScalar(Rational(0)));
    for (long k = 0; k < n; ++k) dense[static_cast<std::size_t>(k)] = table.at(DualElement(p, k, level));
    auto raw = detail::dft(dense, p, level, +1);
    for (auto& x : raw) x = x.demoted();
    return SBFunction(p, level, std::move(raw));
}

inline ExactScalar haar_integral(const SBFunction& phi) {
    ExactScalar acc(Rational(0));
    for (const auto& v : phi.values()) acc += v;
    return (acc * ExactScalar(Rational(1, phi.size()))).demoted();
}

inline FourierTable convolve(const FourierTable& a, const FourierTable& b) {
    long p = a.base();
    long lv = std::max(a.support_level(), b.support_level());
    FourierTable out(p, lv);
    auto ball = dual_ball(p, lv);
    for (const auto& t : ball) {
        ExactScalar acc(Rational(0));
        for (const auto& s : ball) acc += a.at(s) * b.at(t.plus(s.negated()));
        out.set(t, acc.demoted());
    }
    return out;
}

// ---- distributions as coefficient rules -------------------------------------

// Fourier–Stieltjes side of a distribution: a coefficient function on the dual.
class CoefficientRule {
  public:
    virtual ~CoefficientRule() = default;
    virtual ExactScalar at(const DualElement& t) const = 0;
    virtual long base() const = 0;
};

class TableRule final : public CoefficientRule {
  public:
    explicit TableRule(FourierTable t) : table_(std::move(t)) {}
    ExactScalar at(const DualElement& t) const override { return table_.at(t); }
    long base() const override { return table_.base(); }
    const FourierTable& table() const { return table_; }

  private:
    FourierTable table_;
};

using Distribution = std::shared_ptr<const CoefficientRule>;

inline Distribution distribution_from_table(FourierTable t) {
    return std::make_shared<TableRule>(std::move(t));
}
inline Distribution haar_distribution(long p) {
    FourierTable t(p, 0);
    t.set(DualElement::zero(p), ExactScalar(Rational(1)));
    return distribution_from_table(std::move(t));
}

// Parseval action: sum_t phi_hat(t) mu_hat(-t) over phi_hat's finite support.
inline ExactScalar pair(const CoefficientRule& mu, const SBFunction& phi) {
    FourierTable phat = forward(phi);
    ExactScalar acc(Rational(0));
    for (const auto& [t, v] : phat.entries()) {
        if (v.is_zero()) continue;
        acc += v * mu.at(t.negated());
    }
    return acc.demoted();
}
inline ExactScalar pair(const Distribution& mu, const SBFunction& phi) { return pair(*mu, phi); }

// D_N(z) = p^N [z = 0 mod p^N]
inline SBFunction dirichlet_kernel(long p, long n) {
    return SBFunction::indicator(p, n, 0).scaled(ExactScalar(Rational(big_pow(p, static_cast<unsigned long>(n)), 1)));
}

// Direct partial Fourier sum sum_{|t| <= p^N} mu_hat(t) e^{2 pi i t z}.
inline ExactScalar partial_sum(const CoefficientRule& mu, long n, const PAdicInt& z) {
    ExactScalar acc(Rational(0));
    for (const auto& t : dual_ball(mu.base(), n)) {
        ExactScalar c = mu.at(t);
        if (c.is_zero()) continue;
        acc += c * ExactScalar(t.character(z));
    }
    return acc.demoted();
}

// Same value through the Dirichlet kernel: pair(mu, D_N(z - .)).
inline ExactScalar partial_sum_via_dirichlet(const CoefficientRule& mu, long n, const PAdicInt& z) {
    long p = mu.base();
    BigInt zn = z.truncate(n);
    SBFunction window = SBFunction::indicator(p, n, zn).scaled(
        ExactScalar(Rational(big_pow(p, static_cast<unsigned long>(n)), 1)));
    return pair(mu, window);
}

// ---- verified identities -----------------------------------------------------

// Resummation across a dual-group isogeny: both groupings of sum f(t) g(p^r t).
inline IdentityReport adjoint_resum(const FourierTable& f, const FourierTable& g, long r, long n) {
    IdentityReport rep{"adjoint-resum", "r=" + std::to_string(r) + ", N=" + std::to_string(n)};
    long p = f.base();
    ExactScalar lhs(Rational(0));
    for (const auto& t : dual_ball(p, n)) lhs += f.at(t) * g.at(t.times_p_pow(r));
    ExactScalar rhs(Rational(0));
    for (const auto& t : dual_ball(p, n - r)) {
        for (const auto& s : dual_ball(p, r)) rhs += f.at(t.div_p_pow(r).plus(s)) * g.at(t);
    }
    if (lhs != rhs) rep.record_mismatch("totals", lhs.str(), rhs.str());
    return rep;
}

// Two evaluations of the shifted-transform identity:
//   sum_{|t|<=p^N} chi_hat(p^n t) prod_{k<n} (p^{-1} sum_j q_j e^{-2 pi i j p^k t}) e^{2 pi i t z}
//   == (prod_{k<n} q_{[theta^k z]_p}) * partial_sum(chi_hat, N-n, theta^n z)
inline IdentityReport shift_transform_check(const CoefficientRule& chi,
                                            const std::vector<ExactScalar>& q, long n, long big_n,
                                            const PAdicInt& z) {
    IdentityReport rep{"shift-transform", "n=" + std::to_string(n) + ", N=" + std::to_string(big_n)};
    long p = chi.base();
    ExactScalar lhs(Rational(0));
    for (const auto& t : dual_ball(p, big_n)) {
        ExactScalar term = chi.at(t.times_p_pow(n));
        if (term.is_zero()) continue;
        for (long k = 0; k < n; ++k) {
            DualElement tk = t.times_p_pow(k);
            ExactScalar factor(Rational(0));
            for (long j = 0; j < p; ++j)
                factor += q[static_cast<std::size_t>(j)] * ExactScalar(tk.character_at_int(-j));
            term = term * factor * ExactScalar(Rational(1, p));
        }
        lhs += term * ExactScalar(t.character(z));
    }
    ExactScalar rhs(Rational(1));
    PAdicInt zz = z;
    for (long k = 0; k < n; ++k) {
        rhs = rhs * q[static_cast<std::size_t>(zz.digit(0))];
        zz = zz.shifted();
    }
    rhs = rhs * partial_sum(chi, big_n - n, z.shifted(n));
    if (lhs != rhs) rep.record_mismatch("z=" + z.str(), lhs.str(), rhs.str());
    return rep;
}

}  // namespace fseries
