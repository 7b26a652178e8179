#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fseries/frames.hpp"

namespace fseries {

struct on_breakdown_variety : arithmetic_error {
    on_breakdown_variety() : arithmetic_error("alpha(0) = 1: operator 1 - L is not invertible") {}
};
struct no_solution : arithmetic_error {
    no_solution() : arithmetic_error("formal equation has no solution (nonzero obstruction on the breakdown locus)") {}
};
struct affine_solution_family : arithmetic_error {
    affine_solution_family()
        : arithmetic_error("formal equation has a 1-dimensional affine family of solutions") {}
};

// Sorting operator L{phi}(z) = p^{-1} sum_k r_k phi(pz + k).
class SortingOperator {
  public:
    SortingOperator(long p, std::vector<ExactScalar> r) : mf_(p, std::move(r)) {}
    explicit SortingOperator(MFunction mf) : mf_(std::move(mf)) {}

    long base() const { return mf_.base(); }
    const std::vector<ExactScalar>& coeffs() const { return mf_.multipliers(); }
    const MFunction& mfunction() const { return mf_; }
    ExactScalar alpha0() const {
        ExactScalar acc{Rational(0)};
        for (const auto& r : mf_.multipliers()) acc += r;
        return acc * ExactScalar(Rational(1, base()));
    }

    // Valuewise application; drops the level by one.
    SBFunction apply(const SBFunction& phi) const {
        long p = base();
        long lv = std::max<long>(phi.level() - 1, 0);
        long sz = checked_pow_long(p, lv);
        std::vector<ExactScalar> vals(static_cast<std::size_t>(sz));
        for (long m = 0; m < sz; ++m) {
            ExactScalar acc{Rational(0)};
            for (long k = 0; k < p; ++k)
                acc += mf_.multipliers()[static_cast<std::size_t>(k)] *
                       phi.at_integer(BigInt(p) * m + k);
            vals[static_cast<std::size_t>(m)] = acc * ExactScalar(Rational(1, p));
        }
        return SBFunction(p, lv, std::move(vals));
    }
    SBFunction apply_power(const SBFunction& phi, long m) const {
        SBFunction out = phi;
        for (long i = 0; i < m; ++i) out = apply(out);
        return out;
    }

    // Closed form of L^m [ . = k mod p^n ]:
    //   m < n : (r_0^m kappa([k]_{p^m}) / p^m) [ . = theta^m(k) mod p^{n-m} ]
    //   m >= n: (r_0^n kappa(k) / p^n) alpha(0)^{m-n}, a constant
    SBFunction apply_power_closed(long m, long n, const BigInt& k) const {
        long p = base();
        if (m < n) {
            BigInt pm = big_pow(p, static_cast<unsigned long>(m));
            ExactScalar c = mf_.multipliers()[0].pow(m) * mf_.kappa(k % pm) *
                            ExactScalar(Rational(1, pm));
            BigInt shifted_k = k / pm;
            return SBFunction::indicator(p, n - m, shifted_k).scaled(c);
        }
        BigInt pn = big_pow(p, static_cast<unsigned long>(n));
        ExactScalar c = mf_.multipliers()[0].pow(n) * mf_.kappa(k % pn) *
                        ExactScalar(Rational(1, pn)) * alpha0().pow(m - n);
        return SBFunction::constant(p, c);
    }

    // S_{n,k} = (1 - L)^{-1} [ . = k mod p^n ]; requires alpha(0) != 1.
    SBFunction invert_one_minus_l(long n, const BigInt& k) const {
        ExactScalar one_minus = ExactScalar(Rational(1)) - alpha0();
        if (one_minus.is_zero()) throw on_breakdown_variety();
        long p = base();
        BigInt pn = big_pow(p, static_cast<unsigned long>(n));
        ExactScalar constant =
            mf_.multipliers()[0].pow(n) * mf_.kappa(k % pn) * ExactScalar(Rational(1, pn)) / one_minus;
        SBFunction out = SBFunction::constant(p, constant).level_lifted(n);
        for (long m = 0; m < n; ++m) {
            BigInt pm = big_pow(p, static_cast<unsigned long>(m));
            ExactScalar c = mf_.multipliers()[0].pow(m) * mf_.kappa(k % pm) *
                            ExactScalar(Rational(1, pm));
            out = out + SBFunction::indicator(p, n - m, k / pm).scaled(c).level_lifted(n);
        }
        return out;
    }
    // Extension to arbitrary SB functions through the level-N indicator basis.
    SBFunction invert_one_minus_l(const SBFunction& phi) const {
        long n = phi.level();
        SBFunction out = SBFunction::constant(base(), ExactScalar(Rational(0))).level_lifted(n);
        for (long m = 0; m < phi.size(); ++m) {
            const ExactScalar& c = phi.at_index(m);
            if (c.is_zero()) continue;
            out = out + invert_one_minus_l(n, BigInt(m)).scaled(c);
        }
        return out;
    }

  private:
    MFunction mf_;
};

// ---- formal solutions -----------------------------------------------------------

// Solves Y(t) = alpha_n(t) Y(pt) + sum_{m<n} alpha_{m,n}(t) X_m(pt) outward in |t|,
// with the initial transforms supplied for every m < n. Trichotomy on alpha_n(0).
inline FourierTable formal_solve(const ProductSpec& spec, const MultiIndex& n,
                                 const std::map<MultiIndex, Distribution>& initial, long tmax,
                                 std::optional<ExactScalar> initial_value = std::nullopt) {
    long p = spec.base();
    TrigPoly alpha_n = spec.alpha_mn(n, n);
    ExactScalar alpha0 = alpha_n.at_zero();
    std::map<MultiIndex, TrigPoly> trig;
    for (const auto& m : indices_below(n))
        if (m != n) trig.emplace(m, spec.alpha_mn(m, n));
    ExactScalar obstruction{Rational(0)};
    for (const auto& [m, tp] : trig)
        obstruction += tp.at_zero() * initial.at(m)->at(DualElement::zero(p));

    FourierTable out(p, tmax);
    ExactScalar y0{Rational(0)};
    if (alpha0 == ExactScalar(Rational(1))) {
        if (!obstruction.is_zero()) throw no_solution();
        if (!initial_value) throw affine_solution_family();
        y0 = *initial_value;
    } else {
        if (initial_value) throw arithmetic_error("initial value is only free on the breakdown locus");
        y0 = obstruction / (ExactScalar(Rational(1)) - alpha0);
    }
    out.set(DualElement::zero(p), y0);
    for (const auto& t : dual_ball(p, tmax)) {
        if (t.is_zero()) continue;
        DualElement pt = t.times_p();
        ExactScalar v = alpha_n.at(t) * out.at(pt);
        for (const auto& [m, tp] : trig) v += tp.at(t) * initial.at(m)->at(pt);
        out.set(t, v);
    }
    return out;
}

inline std::map<MultiIndex, Distribution> lattice_initial_condition(const TransformLattice& lat,
                                                                    const MultiIndex& n) {
    std::map<MultiIndex, Distribution> initial;
    for (const auto& m : indices_below(n))
        if (m != n) initial.emplace(m, lat.entry(m));
    return initial;
}

// Partial sums of the formal solution against the Dirichlet-kernel closed form:
//   sum_{|t|<=p^N} Y(t) e^{2 pi i t z}
//     = r_{n,0}^N kappa_n([z]_{p^N}) (sum_{m<n} alpha_{m,n}(0) X_m(0)) / (1 - alpha_n(0))
//     + sum_{i<N} r_{n,0}^i kappa_n([z]_{p^i})
//         sum_{m<n} r_{m,n,[theta^i z]_p} X~_{m,N-i-1}(theta^{i+1} z)
inline IdentityReport dirichlet_cross_check(const ProductSpec& spec, const TransformLattice& lat,
                                            const MultiIndex& n, long big_n, const PAdicInt& z) {
    IdentityReport rep{"dirichlet-cross-check",
                       "n=" + index_str(n) + ", N=" + std::to_string(big_n) + ", z=" + z.str()};
    long p = spec.base();
    auto initial = lattice_initial_condition(lat, n);
    FourierTable y = formal_solve(spec, n, initial, big_n);
    ExactScalar lhs{Rational(0)};
    for (const auto& [t, v] : y.entries()) lhs += v * ExactScalar(t.character(z));

    MFunction mf(p, spec.r_coeffs(n, n));
    ExactScalar obstruction{Rational(0)};
    for (const auto& m : indices_below(n))
        if (m != n) obstruction += spec.alpha_mn(m, n).at_zero() * lat.at_zero(m);
    ExactScalar alpha0 = spec.alpha_mn(n, n).at_zero();
    ExactScalar rhs = mf.value(big_n, z) * obstruction / (ExactScalar(Rational(1)) - alpha0);
    for (long i = 0; i < big_n; ++i) {
        PAdicInt zi = z.shifted(i + 1);
        int digit = z.digit(static_cast<std::size_t>(i));
        ExactScalar inner{Rational(0)};
        for (const auto& m : indices_below(n)) {
            if (m == n) continue;
            inner += spec.r_coeff(m, n, digit) * partial_sum(*lat.entry(m), big_n - i - 1, zi);
        }
        rhs += mf.value(i, z) * inner;
    }
    if (lhs != rhs) rep.record_mismatch("z=" + z.str(), lhs.str(), rhs.str());
    return rep;
}

// ---- breakdown varieties ---------------------------------------------------------

struct BreakdownReport {
    MultiIndex index;
    ExactScalar alpha0;
    bool on_variety = false;             // numeric mode verdict
    std::optional<std::string> relation;  // symbolic mode: defining relation
};

inline std::vector<BreakdownReport> breakdown_scan(const ProductSpec& spec, long max_degree) {
    std::vector<BreakdownReport> out;
    MultiIndex top(static_cast<std::size_t>(spec.dimension()), max_degree);
    for (const auto& n : indices_below(top)) {
        long s = index_sum(n);
        if (s < 1 || s > max_degree) continue;
        BreakdownReport rep;
        rep.index = n;
        rep.alpha0 = spec.alpha_mn(n, n).at_zero();
        if (rep.alpha0.is_symbolic()) {
            SymbolicScalar rel = (rep.alpha0 - ExactScalar(Rational(1))).as_symbolic();
            rep.relation = rel.num().str() + " = 0";
            rep.on_variety = false;  // unrelated indeterminates never satisfy the relation
        } else {
            rep.on_variety = rep.alpha0 == ExactScalar(Rational(1));
        }
        out.push_back(std::move(rep));
    }
    return out;
}

// ---- degeneracy -----------------------------------------------------------------

enum class Degeneracy { degenerate, not_certified, inconclusive };

inline std::string degeneracy_str(Degeneracy d) {
    switch (d) {
        case Degeneracy::degenerate: return "degenerate";
        case Degeneracy::not_certified: return "not-certified";
        default: return "inconclusive";
    }
}

// Certifies frame-wise decay of partial sums to 0. A-hat rules on the breakdown
// locus collapse to the M-function r_0^N kappa([z]_{p^N}) (checked exactly), whose
// decay at each sample point is the root test at the point's assigned place.
// Finite tables are degenerate exactly when the inverse transform vanishes.
inline Degeneracy degeneracy_test(const Distribution& mu, const DigitalFrame& frame,
                                  const std::vector<PAdicInt>& sample_points, long n_max) {
    if (auto table_rule = std::dynamic_pointer_cast<const TableRule>(mu)) {
        SBFunction f = inverse(table_rule->table());
        for (const auto& v : f.values())
            if (!v.is_zero()) return Degeneracy::not_certified;
        return Degeneracy::degenerate;
    }
    if (auto ahat = std::dynamic_pointer_cast<const AHatRule>(mu)) {
        const AlphaData& data = ahat->data();
        if (!(data.alpha0() == ExactScalar(Rational(1)))) return Degeneracy::inconclusive;
        MFunction mf(data.base(), data.alpha().coeffs());
        for (const auto& z : sample_points) {
            for (long n = 0; n <= n_max; ++n)
                if (partial_sum(*mu, n, z) != mf.value(n, z))
                    throw arithmetic_error("A-hat partial sums failed to collapse");
            RootTestResult rt = root_test_certify(mf, z, frame.place_at(z));
            if (rt.verdict != Verdict::summable) return Degeneracy::not_certified;
        }
        return Degeneracy::degenerate;
    }
    return Degeneracy::inconclusive;
}

// ---- eigen and tensor pairings ----------------------------------------------------

// integral of (1 - L_M){phi} against dM equals (1 - alpha_M(0)) phi_hat(0).
inline IdentityReport eigen_pairing(const MFunction& mf, const SBFunction& phi) {
    IdentityReport rep{"eigen-pairing", "p=" + std::to_string(mf.base())};
    SortingOperator op(mf);
    AlphaData data(mf.base(), mf.multipliers(),
                   std::vector<ExactScalar>(static_cast<std::size_t>(mf.base()), ExactScalar(Rational(0))));
    auto dm = std::make_shared<AHatRule>(data);
    SBFunction lhs_fn = phi - op.apply(phi).level_lifted(phi.level());
    ExactScalar lhs = pair(*dm, lhs_fn);
    ExactScalar rhs = (ExactScalar(Rational(1)) - op.alpha0()) * haar_integral(phi);
    if (lhs != rhs) rep.record_mismatch("phi", lhs.str(), rhs.str());
    return rep;
}

// Product test function: coeff * prod_i [ . = k_i mod p_i^{n_i} ].
struct ProductIndicator {
    ExactScalar coeff;
    std::vector<std::pair<long, BigInt>> factors;  // (level n_i, residue k_i) per axis
};

// d-fold tensor version: apply (1 - L_i) per axis, integrate against dM_1 x ... x dM_d,
// compare with phi_hat(0) prod_i (1 - alpha_i(0)).
inline IdentityReport tensor_pairing(const std::vector<MFunction>& mfs,
                                     const std::vector<ProductIndicator>& phi) {
    IdentityReport rep{"tensor-pairing", "d=" + std::to_string(mfs.size())};
    ExactScalar lhs{Rational(0)};
    ExactScalar phi_hat0{Rational(0)};
    for (const auto& term : phi) {
        ExactScalar prod = term.coeff;
        ExactScalar mass = term.coeff;
        for (std::size_t i = 0; i < mfs.size(); ++i) {
            const auto& [n_i, k_i] = term.factors[i];
            long p = mfs[i].base();
            SortingOperator op(mfs[i]);
            SBFunction ind = SBFunction::indicator(p, n_i, k_i);
            SBFunction piece = ind - op.apply(ind).level_lifted(ind.level());
            AlphaData data(p, mfs[i].multipliers(),
                           std::vector<ExactScalar>(static_cast<std::size_t>(p), ExactScalar(Rational(0))));
            AHatRule dm(data);
            prod = prod * pair(dm, piece);
            mass = mass * haar_integral(ind);
        }
        lhs += prod;
        phi_hat0 += mass;
    }
    ExactScalar rhs = phi_hat0;
    for (const auto& mf : mfs) {
        SortingOperator op(mf);
        rhs = rhs * (ExactScalar(Rational(1)) - op.alpha0());
    }
    if (lhs != rhs) rep.record_mismatch("tensor", lhs.str(), rhs.str());
    return rep;
}

}  // namespace fseries
