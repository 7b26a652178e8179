#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fseries/product.hpp"

namespace fseries {

struct non_unique_solution_ideal : arithmetic_error {
    non_unique_solution_ideal()
        : arithmetic_error("evaluation sends a_0 to 1 without b_0 = 0 and an explicit X(0)") {}
};

// A place of Q: archimedean or a prime ell.
struct Place {
    bool archimedean = true;
    BigInt ell = 0;

    static Place infinite() { return Place{true, 0}; }
    static Place prime(const BigInt& ell) { return Place{false, ell}; }
    static Place parse(const std::string& s) {
        if (s == "inf" || s == "infinity" || s == "arch") return infinite();
        if (s.rfind("prime:", 0) == 0) return prime(BigInt(s.substr(6)));
        throw arithmetic_error("place syntax is 'inf' or 'prime:<ell>'");
    }
    std::string str() const { return archimedean ? "inf" : "prime:" + ell.get_str(); }
    friend bool operator==(const Place& a, const Place& b) {
        return a.archimedean == b.archimedean && (a.archimedean || a.ell == b.ell);
    }
};

// Assignment of a place to each digit class D_0..D_{p-1}. Shift-compatible by
// construction: class membership depends only on which digits recur.
class DigitalFrame {
  public:
    DigitalFrame(long p, std::vector<Place> class_places)
        : p_(p), places_(std::move(class_places)) {
        if (static_cast<long>(places_.size()) != p_)
            throw arithmetic_error("digital frame needs one place per digit class");
        for (const auto& pl : places_)
            if (!pl.archimedean) {
                BigInt g, pp(p_);
                mpz_gcd(g.get_mpz_t(), pp.get_mpz_t(), pl.ell.get_mpz_t());
                if (g != 1)
                    throw ramified_place();
            }
    }
    long base() const { return p_; }
    const Place& class_place(int digit_class) const {
        return places_[static_cast<std::size_t>(digit_class)];
    }
    const Place& place_at(const PAdicInt& z) const {
        return class_place(densities(z).digit_class);
    }

  private:
    long p_;
    std::vector<Place> places_;
};

enum class Verdict { summable, not_summable, inconclusive };

inline std::string verdict_str(Verdict v) {
    switch (v) {
        case Verdict::summable: return "summable";
        case Verdict::not_summable: return "not-summable";
        default: return "inconclusive";
    }
}

// Root-test margin: log|r_0| + sum_k d_k log|r_k/r_0| at the place. Strictly
// negative certifies summable decay of the M-function at z.
struct RootTestResult {
    Verdict verdict = Verdict::inconclusive;
    std::string margin;       // human-readable
    double margin_lo = 0.0;   // enclosure of the margin
    double margin_hi = 0.0;
    bool exact = false;       // margin decided by exact valuations
};

inline RootTestResult root_test_certify(const MFunction& mf, const PAdicInt& z, const Place& place,
                                        mpfr_prec_t prec = 128) {
    RootTestResult out;
    DigitDensities dens = densities(z);
    long p = mf.base();
    if (!place.archimedean) {
        bool all_rational = true;
        for (const auto& r : mf.multipliers())
            if (r.demoted().tier() != 0) all_rational = false;
        // exponent of ell in limsup |M_n|^{1/n}: E = -v(r_0) - sum_k d_k v(r_k/r_0)
        if (all_rational) {
            Rational e(0);
            Rational v0(ell_adic_valuation(mf.multipliers()[0].as_rational(), place.ell));
            e = -v0;
            for (long k = 1; k < p; ++k) {
                if (dens.density[static_cast<std::size_t>(k)].is_zero()) continue;
                Rational ratio = mf.multipliers()[static_cast<std::size_t>(k)].as_rational() /
                                 mf.multipliers()[0].as_rational();
                e -= dens.density[static_cast<std::size_t>(k)] *
                     Rational(ell_adic_valuation(ratio, place.ell));
            }
            out.exact = true;
            out.verdict = e < Rational(0) ? Verdict::summable : Verdict::not_summable;
            out.margin = "(" + e.str() + ")*log(" + place.ell.get_str() + ")";
            RealInterval m = RealInterval(e, prec) * RealInterval::log_of_ui(
                                                          place.ell.get_ui(), prec);
            out.margin_lo = m.lo();
            out.margin_hi = m.hi();
            return out;
        }
        // cyclotomic multipliers: upper bound only, so only 'summable' can be certified
        RealInterval acc(prec);
        Rational b0 = mf.multipliers()[0].ell_adic_upper_bound(place.ell);
        acc = RealInterval(b0, prec).log();
        for (long k = 1; k < p; ++k) {
            const Rational& d = dens.density[static_cast<std::size_t>(k)];
            if (d.is_zero()) continue;
            Rational bk = (mf.multipliers()[static_cast<std::size_t>(k)] / mf.multipliers()[0])
                              .ell_adic_upper_bound(place.ell);
            acc = acc + RealInterval(bk, prec).log().scaled_by_rational(d);
        }
        out.margin_lo = acc.lo();
        out.margin_hi = acc.hi();
        out.margin = acc.str() + " (upper bound)";
        out.verdict = acc.strictly_less(0.0) ? Verdict::summable : Verdict::inconclusive;
        return out;
    }
    // archimedean, interval arithmetic with directed rounding
    RealInterval acc = mf.multipliers()[0].arch_norm(prec).log();
    for (long k = 1; k < p; ++k) {
        const Rational& d = dens.density[static_cast<std::size_t>(k)];
        if (d.is_zero()) continue;
        RealInterval ratio_log =
            (mf.multipliers()[static_cast<std::size_t>(k)] / mf.multipliers()[0])
                .arch_norm(prec)
                .log();
        acc = acc + ratio_log.scaled_by_rational(d);
    }
    out.margin_lo = acc.lo();
    out.margin_hi = acc.hi();
    out.margin = acc.str();
    if (acc.strictly_less(0.0))
        out.verdict = Verdict::summable;
    else if (acc.strictly_greater(0.0))
        out.verdict = Verdict::not_summable;
    else
        out.verdict = Verdict::inconclusive;
    return out;
}

struct FrameCertificate {
    bool certified = true;
    struct Row {
        std::string point;
        std::string place;
        long series_index;
        RootTestResult result;
    };
    std::vector<Row> rows;
};

// Runs the root test for each series' a-multipliers at each sample point against
// the place the frame assigns there.
inline FrameCertificate frame_certify(const DigitalFrame& frame,
                                      const std::vector<FSeriesSpec>& specs,
                                      const std::vector<PAdicInt>& sample_points,
                                      mpfr_prec_t prec = 128) {
    FrameCertificate out;
    for (const auto& z : sample_points) {
        const Place& pl = frame.place_at(z);
        for (std::size_t j = 0; j < specs.size(); ++j) {
            MFunction mf(specs[j].base(), specs[j].a());
            RootTestResult r = root_test_certify(mf, z, pl, prec);
            if (r.verdict != Verdict::summable) out.certified = false;
            out.rows.push_back({z.str(), pl.str(), static_cast<long>(j), r});
        }
    }
    return out;
}

struct ConvergenceRow {
    long level;
    ExactScalar delta;
    std::string size;       // exact valuation or interval magnitude
    std::optional<long> valuation;  // at a prime place, when delta != 0
    double magnitude_hi = 0.0;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    bool two_paths_agree = true;
    std::string trend;
};

// Exact Delta_N at a certified point, reported in the geometry of the assigned
// place. Both evaluation paths must agree before anything is reported.
inline ConvergenceTable convergence_demo(const FSeriesSpec& spec, const DigitalFrame& frame,
                                         const PAdicInt& z, long n_max, mpfr_prec_t prec = 128) {
    ConvergenceTable out;
    DeltaReport dr = delta_report(spec, n_max, z);
    out.two_paths_agree = dr.exact_equal;
    const Place& pl = frame.place_at(z);
    long improvements = 0;
    for (long n = 0; n <= n_max; ++n) {
        ConvergenceRow row;
        row.level = n;
        row.delta = dr.direct[static_cast<std::size_t>(n)];
        if (!pl.archimedean) {
            if (row.delta.is_zero()) {
                row.size = "v_" + pl.ell.get_str() + " = +inf";
            } else {
                long v = ell_adic_valuation(row.delta.as_rational(), pl.ell);
                row.valuation = v;
                row.size = "v_" + pl.ell.get_str() + " = " + std::to_string(v);
            }
        } else {
            RealInterval mag = row.delta.arch_norm(prec);
            row.magnitude_hi = mag.hi();
            row.size = "|.| in " + mag.str();
        }
        if (n > 0) {
            const ConvergenceRow& prev = out.rows.back();
            if (!pl.archimedean) {
                long a = prev.valuation.value_or(1 << 20);
                long b = row.valuation.value_or(1 << 20);
                if (b >= a) ++improvements;
            } else if (row.magnitude_hi <= prev.magnitude_hi) {
                ++improvements;
            }
        }
        out.rows.push_back(std::move(row));
    }
    out.trend = std::to_string(improvements) + "/" + std::to_string(n_max) + " steps non-increasing";
    return out;
}

// ---- parameter evaluation (quotient-frame) maps --------------------------------

// Guard: each evaluated series must either keep a_0 != 1, or land exactly on
// (a_0 = 1, b_0 = 0) with an explicit X(0) supplied via the x0 map.
inline FSeriesSpec apply_evaluation(const FSeriesSpec& spec, const Evaluation& sub,
                                    std::optional<ExactScalar> x0_override = std::nullopt) {
    std::vector<ExactScalar> a, b;
    for (const auto& x : spec.a()) a.push_back(apply_evaluation(x, sub));
    for (const auto& x : spec.b()) b.push_back(apply_evaluation(x, sub));
    std::optional<ExactScalar> x0;
    if (spec.explicit_x0()) x0 = apply_evaluation(*spec.explicit_x0(), sub);
    if (x0_override) x0 = x0_override;
    if (a[0] == ExactScalar(Rational(1))) {
        if (!b[0].is_zero() || !x0) throw non_unique_solution_ideal();
    }
    return FSeriesSpec(spec.base(), std::move(a), std::move(b), std::move(x0));
}

inline ProductSpec apply_evaluation(const ProductSpec& spec, const Evaluation& sub) {
    std::vector<FSeriesSpec> series;
    for (const auto& s : spec.series()) series.push_back(apply_evaluation(s, sub));
    return ProductSpec(std::move(series));
}

inline FourierTable apply_evaluation(const FourierTable& table, const Evaluation& sub) {
    FourierTable out(table.base(), table.support_level());
    for (const auto& [t, v] : table.entries()) out.set(t, apply_evaluation(v, sub));
    return out;
}

// Tabulates a coefficient rule on |t| <= p^tmax (the lattice-facing dump format).
inline FourierTable tabulate(const CoefficientRule& rule, long tmax) {
    FourierTable out(rule.base(), tmax);
    for (const auto& t : dual_ball(rule.base(), tmax)) out.set(t, rule.at(t));
    return out;
}

}  // namespace fseries
