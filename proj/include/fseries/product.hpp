#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "fseries/fseries.hpp"

namespace fseries {

struct breakdown_hit : arithmetic_error {
    explicit breakdown_hit(const std::string& idx)
        : arithmetic_error("breakdown locus hit at index " + idx) {}
};

using MultiIndex = std::vector<long>;

inline long index_sum(const MultiIndex& n) {
    long s = 0;
    for (long x : n) s += x;
    return s;
}
inline bool index_leq(const MultiIndex& m, const MultiIndex& n) {
    for (std::size_t j = 0; j < n.size(); ++j)
        if (m[j] > n[j]) return false;
    return true;
}
inline bool index_lt(const MultiIndex& m, const MultiIndex& n) {
    return index_leq(m, n) && m != n;
}
inline std::string index_str(const MultiIndex& n) {
    std::string s = "(";
    for (std::size_t j = 0; j < n.size(); ++j) s += (j ? "," : "") + std::to_string(n[j]);
    return s + ")";
}
// graded lexicographic, the lattice construction order
inline bool graded_lex_less(const MultiIndex& a, const MultiIndex& b) {
    long sa = index_sum(a), sb = index_sum(b);
    if (sa != sb) return sa < sb;
    return a < b;
}
inline std::vector<MultiIndex> indices_below(const MultiIndex& n) {
    std::vector<MultiIndex> out{MultiIndex(n.size(), 0)};
    for (std::size_t j = 0; j < n.size(); ++j) {
        std::vector<MultiIndex> next;
        for (const auto& m : out)
            for (long v = 0; v <= n[j]; ++v) {
                MultiIndex mm = m;
                mm[j] = v;
                next.push_back(std::move(mm));
            }
        out = std::move(next);
    }
    std::sort(out.begin(), out.end(), graded_lex_less);
    return out;
}

// Family of d affine systems over one base; carries the derived functional
// coefficients r_{m,n,k} of the pointwise products X_n = prod_j X_j^{n_j}.
class ProductSpec {
  public:
    explicit ProductSpec(std::vector<FSeriesSpec> series) : series_(std::move(series)) {
        if (series_.empty()) throw arithmetic_error("product spec needs at least one series");
        p_ = series_[0].base();
        for (const auto& s : series_)
            if (s.base() != p_) throw arithmetic_error("series must share one base");
    }

    long base() const { return p_; }
    long dimension() const { return static_cast<long>(series_.size()); }
    const std::vector<FSeriesSpec>& series() const { return series_; }
    bool is_symbolic() const {
        for (const auto& s : series_)
            if (s.is_symbolic()) return true;
        return false;
    }

    // r_{m,n,k} = binom(n,m) prod_j a_{j,k}^{m_j} b_{j,k}^{n_j - m_j}
    ExactScalar r_coeff(const MultiIndex& m, const MultiIndex& n, long k) const {
        ExactScalar out{Rational(1)};
        BigInt binom = 1;
        for (std::size_t j = 0; j < series_.size(); ++j)
            binom *= binomial(static_cast<unsigned long>(n[j]), static_cast<unsigned long>(m[j]));
        out = ExactScalar(Rational(binom));
        for (std::size_t j = 0; j < series_.size(); ++j) {
            if (m[j]) out = out * series_[j].a()[static_cast<std::size_t>(k)].pow(m[j]);
            if (n[j] - m[j]) out = out * series_[j].b()[static_cast<std::size_t>(k)].pow(n[j] - m[j]);
        }
        return out;
    }
    std::vector<ExactScalar> r_coeffs(const MultiIndex& m, const MultiIndex& n) const {
        std::vector<ExactScalar> out;
        for (long k = 0; k < p_; ++k) out.push_back(r_coeff(m, n, k));
        return out;
    }
    TrigPoly alpha_mn(const MultiIndex& m, const MultiIndex& n) const {
        return TrigPoly(p_, r_coeffs(m, n));
    }

    ExactScalar eval_at_nat(const MultiIndex& n, const BigInt& m) const {
        ExactScalar out{Rational(1)};
        for (std::size_t j = 0; j < series_.size(); ++j)
            if (n[j]) out = out * series_[j].eval_at_nat(m).pow(n[j]);
        return out;
    }
    ExactScalar eval_at_periodic(const MultiIndex& n, const PAdicInt& z) const {
        ExactScalar out{Rational(1)};
        for (std::size_t j = 0; j < series_.size(); ++j)
            if (n[j]) out = out * series_[j].eval_at_periodic(z).pow(n[j]);
        return out;
    }
    SBFunction truncation(const MultiIndex& n, long level) const {
        long sz = checked_pow_long(p_, level);
        std::vector<ExactScalar> vals(static_cast<std::size_t>(sz));
        for (long m = 0; m < sz; ++m) vals[static_cast<std::size_t>(m)] = eval_at_nat(n, m);
        return SBFunction(p_, level, std::move(vals));
    }

  private:
    long p_;
    std::vector<FSeriesSpec> series_;
};

class TransformLattice;

// X_hat_n = f_hat_n - g_hat_n for Sigma(n) >= 2, built on the chosen transforms
// of every m < n held by the owning lattice.
class ProductTransform final : public CoefficientRule {
  public:
    ProductTransform(const ProductSpec& spec, MultiIndex n,
                     std::map<MultiIndex, Distribution> lower,
                     std::map<MultiIndex, ExactScalar> lower_at_zero)
        : p_(spec.base()), n_(std::move(n)), lower_(std::move(lower)) {
        alpha_n_ = std::make_unique<TrigPoly>(spec.alpha_mn(n_, n_));
        alpha0_ = alpha_n_->at_zero();
        on_variety_ = alpha0_ == ExactScalar(Rational(1));
        for (const auto& [m, rule] : lower_) alpha_mn_.emplace(m, spec.alpha_mn(m, n_));
        // c_{n,k} = -sum_{m<n} r_{m,n,k} X_hat_m(0)
        std::vector<ExactScalar> c(static_cast<std::size_t>(p_), ExactScalar(Rational(0)));
        for (long k = 0; k < p_; ++k) {
            ExactScalar acc{Rational(0)};
            for (const auto& [m, x0] : lower_at_zero) acc += spec.r_coeff(m, n_, k) * x0;
            c[static_cast<std::size_t>(k)] = -acc;
        }
        c_coeffs_ = c;
        beta_n_ = std::make_unique<TrigPoly>(p_, std::move(c));
    }

    long base() const override { return p_; }
    const MultiIndex& index() const { return n_; }
    ExactScalar alpha0() const { return alpha0_; }
    bool on_breakdown_variety() const { return on_variety_; }
    const std::vector<ExactScalar>& c_coeffs() const { return c_coeffs_; }
    const TrigPoly& alpha() const { return *alpha_n_; }
    const TrigPoly& beta() const { return *beta_n_; }

    ExactScalar f_hat(const DualElement& t) const {
        if (t.is_zero()) return ExactScalar(Rational(0));
        long nt = t.exponent();
        ExactScalar acc{Rational(0)};
        ExactScalar chain{Rational(1)};  // prod_{l<i} alpha_n(p^l t)
        for (long i = 0; i + 2 <= nt; ++i) {
            DualElement ti = t.times_p_pow(i);
            DualElement ti1 = t.times_p_pow(i + 1);
            for (const auto& [m, trig] : alpha_mn_)
                acc += chain * trig.at(ti) * lower_.at(m)->at(ti1);
            chain = chain * alpha_n_->at(ti);
        }
        return acc;
    }
    ExactScalar f_hat_component(const MultiIndex& m, const DualElement& t) const {
        if (t.is_zero()) return ExactScalar(Rational(0));
        long nt = t.exponent();
        ExactScalar acc{Rational(0)};
        ExactScalar chain{Rational(1)};
        const TrigPoly& trig = alpha_mn_.at(m);
        for (long i = 0; i + 2 <= nt; ++i) {
            acc += chain * trig.at(t.times_p_pow(i)) * lower_.at(m)->at(t.times_p_pow(i + 1));
            chain = chain * alpha_n_->at(t.times_p_pow(i));
        }
        return acc;
    }
    ExactScalar g_hat(const DualElement& t) const {
        ExactScalar beta0 = beta_n_->at_zero();
        if (t.is_zero())
            return on_variety_ ? ExactScalar(Rational(0))
                               : beta0 / (ExactScalar(Rational(1)) - alpha0_);
        ExactScalar a_hat{Rational(1)};
        for (long m = 0; m < t.exponent(); ++m) a_hat = a_hat * alpha_n_->at(t.times_p_pow(m));
        ExactScalar gamma = beta_n_->at(t.leading()) / alpha_n_->at(t.leading());
        ExactScalar head = on_variety_ ? beta0 * ExactScalar(Rational(t.vp())) + gamma
                                       : beta0 / (ExactScalar(Rational(1)) - alpha0_) + gamma;
        return head * a_hat;
    }

    ExactScalar at(const DualElement& t) const override {
        if (auto it = memo_.find(t); it != memo_.end()) return it->second;
        ExactScalar v = f_hat(t) - g_hat(t);
        memo_.emplace(t, v);
        return v;
    }

  private:
    long p_;
    MultiIndex n_;
    std::map<MultiIndex, Distribution> lower_;
    std::map<MultiIndex, TrigPoly> alpha_mn_;
    std::unique_ptr<TrigPoly> alpha_n_, beta_n_;
    std::vector<ExactScalar> c_coeffs_;
    ExactScalar alpha0_;
    bool on_variety_ = false;
    mutable std::map<DualElement, ExactScalar> memo_;
};

struct LatticeEntryMeta {
    MultiIndex index;
    ExactScalar alpha0;
    bool on_variety = false;
    std::string branch;  // "identity", "alpha(0)=1", "alpha(0)!=1"
};

// Transforms X_hat_m for all m <= top, built bottom-up in graded-lex order.
// Values at 0 feeding the c-coefficients are read from the lattice itself.
class TransformLattice {
  public:
    // Symbolic lattices are capped to keep expression swell bounded.
    static long& symbolic_sum_cap() {
        static long cap = 4;
        return cap;
    }

    TransformLattice(ProductSpec spec, MultiIndex top) : spec_(std::move(spec)), top_(std::move(top)) {
        if (static_cast<long>(top_.size()) != spec_.dimension())
            throw arithmetic_error("index dimension differs from spec dimension");
        if (spec_.is_symbolic() && (index_sum(top_) > symbolic_sum_cap() || spec_.base() > 3))
            throw arithmetic_error("symbolic lattice capped at Sigma(n) <= 4, p <= 3");
        build();
    }

    const ProductSpec& spec() const { return spec_; }
    const MultiIndex& top() const { return top_; }
    const std::vector<LatticeEntryMeta>& manifest() const { return meta_; }

    const Distribution& entry(const MultiIndex& m) const { return entries_.at(m); }
    ExactScalar at_zero(const MultiIndex& m) const {
        return entries_.at(m)->at(DualElement::zero(spec_.base()));
    }
    const ProductTransform* product_entry(const MultiIndex& m) const {
        return dynamic_cast<const ProductTransform*>(entries_.at(m).get());
    }

  private:
    void build() {
        for (const auto& m : indices_below(top_)) {
            LatticeEntryMeta meta;
            meta.index = m;
            long s = index_sum(m);
            if (s == 0) {
                FourierTable one(spec_.base(), 0);
                one.set(DualElement::zero(spec_.base()), ExactScalar(Rational(1)));
                entries_.emplace(m, distribution_from_table(std::move(one)));
                meta.alpha0 = ExactScalar(Rational(1));
                meta.branch = "identity";
            } else if (s == 1) {
                std::size_t j = 0;
                while (m[j] == 0) ++j;
                auto rule = closed_transform(spec_.series()[j]);
                meta.alpha0 = rule->alpha0();
                meta.on_variety = rule->on_breakdown_variety();
                meta.branch = meta.on_variety ? "alpha(0)=1" : "alpha(0)!=1";
                entries_.emplace(m, std::move(rule));
            } else {
                std::map<MultiIndex, Distribution> lower;
                std::map<MultiIndex, ExactScalar> lower0;
                for (const auto& mm : indices_below(m))
                    if (mm != m) {
                        lower.emplace(mm, entries_.at(mm));
                        lower0.emplace(mm, at_zero(mm));
                    }
                auto rule = std::make_shared<ProductTransform>(spec_, m, std::move(lower), std::move(lower0));
                meta.alpha0 = rule->alpha0();
                meta.on_variety = rule->on_breakdown_variety();
                meta.branch = meta.on_variety ? "alpha(0)=1" : "alpha(0)!=1";
                entries_.emplace(m, std::move(rule));
            }
            meta_.push_back(std::move(meta));
        }
    }

    ProductSpec spec_;
    MultiIndex top_;
    std::map<MultiIndex, Distribution> entries_;
    std::vector<LatticeEntryMeta> meta_;
};

// ---- verified identities ------------------------------------------------------

// X_hat_{n,N}(t) = sum_{m<=n} alpha_{m,n}(t) X_hat_{m,N-1}(pt) on |t| <= p^N,
// where X_hat_{m,N} is the transform of the level-N truncation of X_m.
inline IdentityReport truncated_product_recursion(const ProductSpec& spec, const MultiIndex& n,
                                                  long level) {
    IdentityReport rep{"truncated-product-recursion",
                       "n=" + index_str(n) + ", N=" + std::to_string(level)};
    std::map<MultiIndex, FourierTable> prev;
    for (const auto& m : indices_below(n)) prev.emplace(m, forward(spec.truncation(m, level - 1)));
    FourierTable now = forward(spec.truncation(n, level));
    std::map<MultiIndex, TrigPoly> trig;
    for (const auto& m : indices_below(n)) trig.emplace(m, spec.alpha_mn(m, n));
    for (const auto& t : dual_ball(spec.base(), level)) {
        ExactScalar rhs{Rational(0)};
        for (const auto& [m, table] : prev) rhs += trig.at(m).at(t) * table.at(t.times_p());
        ExactScalar lhs = now.at(t);
        if (lhs != rhs) {
            rep.record_mismatch("t=" + t.str(), lhs.str(), rhs.str());
            break;
        }
    }
    return rep;
}

// Exact sum of r0^i kappa_n([z]_{p^i}) * weight(i) over i >= 0 at an eventually
// periodic point: finite prefix plus a geometric tail over one period.
// weight(i) must be eventually periodic in i with the same period as z's digits.
inline ExactScalar periodic_series_sum(const MFunction& mf, const PAdicInt& z,
                                       const std::function<ExactScalar(long)>& weight) {
    long pre = static_cast<long>(z.preperiod().size());
    long per = static_cast<long>(z.period().size());
    ExactScalar total{Rational(0)};
    for (long i = 0; i < pre; ++i) total += mf.value(i, z) * weight(i);
    // one full period of phases starting at the periodic part
    ExactScalar rho{Rational(1)};
    for (int d : z.period()) rho = rho * mf.multipliers()[static_cast<std::size_t>(d)];
    ExactScalar one_minus = ExactScalar(Rational(1)) - rho;
    if (one_minus.is_zero()) throw singular_composite();
    ExactScalar block{Rational(0)};
    for (long ph = 0; ph < per; ++ph) block += mf.value(pre + ph, z) * weight(pre + ph);
    return total + block / one_minus;
}

// f_{m,n}(z) = sum_i r_{n,0}^i kappa_n([z]_{p^i}) r_{m,n,[theta^i z]_p}
//                  (X_m(theta^{i+1} z) - X_hat_m(0)),  exact at periodic points.
inline ExactScalar f_component_value(const TransformLattice& lat, const MultiIndex& m,
                                     const MultiIndex& n, const PAdicInt& z) {
    const ProductSpec& spec = lat.spec();
    MFunction mf(spec.base(), spec.r_coeffs(n, n));
    ExactScalar x0 = lat.at_zero(m);
    auto weight = [&](long i) {
        int digit = z.digit(static_cast<std::size_t>(i));
        return spec.r_coeff(m, n, digit) * (spec.eval_at_periodic(m, z.shifted(i + 1)) - x0);
    };
    return periodic_series_sum(mf, z, weight);
}

// Partial f-hat sums two ways: the literal t-sum against the resummed form.
inline IdentityReport fhat_partial_sum_report(const TransformLattice& lat, const MultiIndex& n,
                                              long big_n, const PAdicInt& z) {
    IdentityReport rep{"fhat-partial-sum", "n=" + index_str(n) + ", N=" + std::to_string(big_n) +
                                               ", z=" + z.str()};
    const ProductSpec& spec = lat.spec();
    const ProductTransform* rule = lat.product_entry(n);
    if (!rule) throw arithmetic_error("fhat sums need Sigma(n) >= 2");
    MFunction mf(spec.base(), spec.r_coeffs(n, n));
    for (const auto& m : indices_below(n)) {
        if (m == n) continue;
        ExactScalar direct{Rational(0)};
        for (const auto& t : dual_ball(spec.base(), big_n))
            direct += rule->f_hat_component(m, t) * ExactScalar(t.character(z));
        ExactScalar resummed{Rational(0)};
        ExactScalar x0 = lat.at_zero(m);
        for (long i = 0; i + 2 <= big_n; ++i) {
            PAdicInt zi = z.shifted(i + 1);
            ExactScalar tilde = partial_sum(*lat.entry(m), big_n - i - 1, zi);
            int digit = z.digit(static_cast<std::size_t>(i));
            resummed += mf.value(i, z) * spec.r_coeff(m, n, digit) * (tilde - x0);
        }
        if (direct != resummed) {
            rep.record_mismatch("m=" + index_str(m), direct.str(), resummed.str());
            break;
        }
    }
    return rep;
}

// Delta decomposition for f_n plus the g_n triangle, assembled into the full
// Delta_N{X_n}; every quantity exact at an eventually periodic point.
inline IdentityReport product_delta_report(const TransformLattice& lat, const MultiIndex& n,
                                           long big_n, const PAdicInt& z) {
    IdentityReport rep{"product-delta", "n=" + index_str(n) + ", N=" + std::to_string(big_n) +
                                            ", z=" + z.str()};
    const ProductSpec& spec = lat.spec();
    const ProductTransform* rule = lat.product_entry(n);
    if (!rule) throw arithmetic_error("product delta needs Sigma(n) >= 2");
    MFunction mf(spec.base(), spec.r_coeffs(n, n));

    // f_n exact value and its direct partial-sum deltas
    auto f_value_at = [&](const PAdicInt& y) {
        ExactScalar acc{Rational(0)};
        for (const auto& m : indices_below(n))
            if (m != n) acc += f_component_value(lat, m, n, y);
        return acc;
    };
    ExactScalar f_at_z = f_value_at(z);
    auto f_tilde = [&](long level, const PAdicInt& y) {
        ExactScalar acc{Rational(0)};
        for (const auto& t : dual_ball(spec.base(), level))
            acc += rule->f_hat(t) * ExactScalar(t.character(y));
        return acc;
    };

    // decomposition of Delta_N{f_n}
    ExactScalar delta_f_direct = f_at_z - f_tilde(big_n, z);
    ExactScalar decomposed = mf.value(big_n, z) * f_value_at(z.shifted(big_n));
    for (long i = 0; i < big_n; ++i) {
        ExactScalar inner{Rational(0)};
        PAdicInt zi = z.shifted(i + 1);
        int digit = z.digit(static_cast<std::size_t>(i));
        for (const auto& m : indices_below(n)) {
            if (m == n) continue;
            ExactScalar dm = spec.eval_at_periodic(m, zi) -
                             partial_sum(*lat.entry(m), big_n - 1 - i, zi);
            inner += spec.r_coeff(m, n, digit) * dm;
        }
        decomposed += mf.value(i, z) * inner;
    }
    if (delta_f_direct != decomposed)
        rep.record_mismatch("delta-f", delta_f_direct.str(), decomposed.str());

    // g_n = f_n - X_n is itself an affine system; its delta follows the triangle.
    ExactScalar g_at_z = f_at_z - spec.eval_at_periodic(n, z);
    ExactScalar g_tilde{Rational(0)};
    for (const auto& t : dual_ball(spec.base(), big_n))
        g_tilde += rule->g_hat(t) * ExactScalar(t.character(z));
    ExactScalar delta_g = g_at_z - g_tilde;

    ExactScalar g_at_shift = f_value_at(z.shifted(big_n)) - spec.eval_at_periodic(n, z.shifted(big_n));
    ExactScalar head = g_at_shift - rule->g_hat(DualElement::zero(spec.base()));
    if (rule->on_breakdown_variety())
        head = head + ExactScalar(Rational(big_n)) * rule->beta().at_zero();
    ExactScalar delta_g_triangle = head * mf.value(big_n, z);
    if (delta_g != delta_g_triangle)
        rep.record_mismatch("delta-g-triangle", delta_g.str(), delta_g_triangle.str());

    // full Delta_N{X_n}
    ExactScalar delta_x_direct =
        spec.eval_at_periodic(n, z) - partial_sum(*lat.entry(n), big_n, z);
    ExactScalar delta_x_combined = delta_f_direct - delta_g;
    if (delta_x_direct != delta_x_combined)
        rep.record_mismatch("delta-x", delta_x_direct.str(), delta_x_combined.str());
    return rep;
}

// ---- measure certification ----------------------------------------------------

struct MeasureVerdict {
    bool certified = false;
    std::string witness;
};

// Sufficient operator-norm conditions; an upper-bound check only, so the verdict
// never claims non-measure.
inline MeasureVerdict measure_norm_check(const ProductSpec& spec, const MultiIndex& n,
                                         const std::optional<BigInt>& ell,
                                         mpfr_prec_t prec = 128) {
    MeasureVerdict out;
    long p = spec.base();
    if (ell) {
        BigInt g;
        BigInt pp(p);
        mpz_gcd(g.get_mpz_t(), pp.get_mpz_t(), ell->get_mpz_t());
        if (g != 1) throw ramified_place();
        Rational worst(0);
        std::string where;
        for (const auto& m : indices_below(n)) {
            for (long k = 0; k < p; ++k) {
                Rational bound = (spec.r_coeff(m, n, k) * ExactScalar(Rational(1, p)))
                                     .ell_adic_upper_bound(*ell);
                if (bound > worst) {
                    worst = bound;
                    where = "m=" + index_str(m) + ",k=" + std::to_string(k);
                }
            }
        }
        out.certified = worst <= Rational(1);
        out.witness = "sup_k |r_{m,n,k}/p|_" + ell->get_str() + " = " + worst.str() + " at " + where;
        return out;
    }
    // archimedean: every alpha_m and alpha_{m,n} for 0 < m <= n must have norm < 1
    bool all_below = true;
    double worst = 0;
    std::string where;
    for (const auto& m : indices_below(n)) {
        if (index_sum(m) == 0) continue;
        for (int which = 0; which < 2; ++which) {
            const MultiIndex& hi = which ? n : m;
            RealInterval acc(prec);
            for (long k = 0; k < p; ++k)
                acc = acc + spec.r_coeff(m, hi, k).arch_norm(prec);
            acc = acc.scaled_by_rational(Rational(1, p));
            if (!acc.strictly_less(1.0)) all_below = false;
            if (acc.hi() > worst) {
                worst = acc.hi();
                where = "alpha_{" + index_str(m) + "," + index_str(hi) + "}";
            }
        }
    }
    out.certified = all_below;
    out.witness = "max triangle bound " + std::to_string(worst) + " at " + where;
    return out;
}

// Moment sequence m_i = X_hat^{*i}(0) for a single series, read off the lattice.
inline std::vector<ExactScalar> moment_sequence(const FSeriesSpec& spec, long n_max) {
    TransformLattice lat(ProductSpec({spec}), {n_max});
    std::vector<ExactScalar> out;
    for (long i = 0; i <= n_max; ++i) out.push_back(lat.at_zero({i}));
    return out;
}

}  // namespace fseries
