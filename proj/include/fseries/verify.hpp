#pragma once

#include <random>
#include <string>
#include <vector>

#include "fseries/io.hpp"

namespace fseries {

// Seeded generators for the property suites; every suite is deterministic in the seed.
class Sampler {
  public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    long uniform(long lo, long hi) {  // inclusive
        return lo + static_cast<long>(rng_() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    Rational rational(long num_range = 9, long den_range = 6) {
        long n = uniform(-num_range, num_range);
        long d = uniform(1, den_range);
        return Rational(n, d);
    }
    Rational nonzero_rational(long num_range = 9, long den_range = 6) {
        Rational r = rational(num_range, den_range);
        while (r.is_zero()) r = rational(num_range, den_range);
        return r;
    }
    Cyclotomic cyclotomic(long p) {
        long order = checked_pow_long(p, uniform(1, 2));
        Cyclotomic out{rational()};
        long terms = uniform(1, 2);
        for (long i = 0; i < terms; ++i)
            out = out + Cyclotomic::root_of_unity(order, uniform(0, order - 1)).scaled(rational());
        return out;
    }
    // small degree-<=1 polynomial in q over the rationals
    SymbolicScalar symbolic() {
        MultiPoly p = MultiPoly(rational()) + MultiPoly::variable("q").scaled(Cyclotomic(rational()));
        return SymbolicScalar(std::move(p));
    }
    ExactScalar scalar(int tier, long p) {
        switch (tier) {
            case 0: return ExactScalar(rational());
            case 1: return ExactScalar(cyclotomic(p));
            default: return ExactScalar(symbolic());
        }
    }
    SBFunction sb_function(long p, long level, int tier) {
        long sz = checked_pow_long(p, level);
        std::vector<ExactScalar> v(static_cast<std::size_t>(sz));
        for (auto& x : v) x = scalar(tier, p);
        return SBFunction(p, level, std::move(v));
    }
    PAdicInt point(long p) {
        long pre_len = uniform(0, 2), per_len = uniform(1, 3);
        std::vector<int> pre, per;
        for (long i = 0; i < pre_len; ++i) pre.push_back(static_cast<int>(uniform(0, p - 1)));
        for (long i = 0; i < per_len; ++i) per.push_back(static_cast<int>(uniform(0, p - 1)));
        return PAdicInt(p, std::move(pre), std::move(per));
    }

  private:
    std::mt19937_64 rng_;
};

struct SuiteResult {
    std::string suite;
    bool passed = true;
    std::vector<std::string> lines;

    void check(bool ok, const std::string& what) {
        lines.push_back(std::string(ok ? "  ok   " : "  FAIL ") + what);
        if (!ok) passed = false;
    }
    void note(const std::string& what) { lines.push_back("  note " + what); }
};

// Built-in specs the suites default to.
inline FSeriesSpec default_chi3() {
    return FSeriesSpec(2, {ExactScalar(Rational(1, 2)), ExactScalar(Rational(3, 2))},
                       {ExactScalar(Rational(0)), ExactScalar(Rational(1, 2))});
}
inline FSeriesSpec default_off_variety() {
    return FSeriesSpec(2, {ExactScalar(Rational(1, 2)), ExactScalar(Rational(5, 2))},
                       {ExactScalar(Rational(0)), ExactScalar(Rational(1, 2))});
}
inline FSeriesSpec default_p3() {
    return FSeriesSpec(3,
                       {ExactScalar(Rational(1, 2)), ExactScalar(Rational(3, 2)), ExactScalar(Rational(5, 2))},
                       {ExactScalar(Rational(1)), ExactScalar(Rational(0)), ExactScalar(Rational(2))});
}
inline FSeriesSpec chi_q_symbolic() {
    ExactScalar q = ExactScalar::variable("q");
    return FSeriesSpec(2, {ExactScalar(Rational(1, 2)), q * ExactScalar(Rational(1, 2))},
                       {ExactScalar(Rational(0)), ExactScalar(Rational(1, 2))});
}
inline ProductSpec default_pair() {
    return ProductSpec({default_off_variety(),
                        FSeriesSpec(2, {ExactScalar(Rational(3, 4)), ExactScalar(Rational(1, 4))},
                                    {ExactScalar(Rational(1)), ExactScalar(Rational(1, 2))})});
}

inline SuiteResult run_suite_inversion(std::uint64_t seed) {
    SuiteResult out{"inversion"};
    Sampler smp(seed);
    for (long p : {2L, 3L}) {
        for (int tier = 0; tier < 3; ++tier) {
            for (int rep = 0; rep < 8; ++rep) {
                long level = smp.uniform(0, 3);
                SBFunction f = smp.sb_function(p, level, tier);
                bool ok = inverse(forward(f)) == f;
                out.check(ok, "roundtrip p=" + std::to_string(p) + " tier=" + std::to_string(tier) +
                                  " N=" + std::to_string(level));
                if (!ok) return out;
            }
        }
    }
    return out;
}

inline SuiteResult run_suite_truncation(std::uint64_t seed) {
    SuiteResult out{"truncation"};
    (void)seed;
    for (long level = 1; level <= 3; ++level) {
        out.check(truncated_product_recursion(ProductSpec({default_chi3()}), {2}, level).exact_equal,
                  "d=1 n=2 N=" + std::to_string(level));
        out.check(truncated_product_recursion(default_pair(), {1, 1}, level).exact_equal,
                  "d=2 n=(1,1) N=" + std::to_string(level));
    }
    return out;
}

inline SuiteResult run_suite_axsum(std::uint64_t seed) {
    SuiteResult out{"axsum"};
    Sampler smp(seed);
    for (auto spec : {default_chi3(), default_off_variety()}) {
        for (int i = 0; i < 4; ++i) {
            PAdicInt z = smp.point(2);
            out.check(ax_sum_report(spec, 4, z).exact_equal, "p=2 z=" + z.str());
        }
    }
    for (int i = 0; i < 4; ++i) {
        PAdicInt z = smp.point(3);
        out.check(ax_sum_report(default_p3(), 3, z).exact_equal, "p=3 z=" + z.str());
    }
    return out;
}

inline SuiteResult run_suite_tilde(std::uint64_t seed) {
    SuiteResult out{"tilde"};
    Sampler smp(seed);
    for (auto spec : {default_chi3(), default_off_variety()}) {
        PAdicInt z = smp.point(2);
        out.check(tilde_recurrence_report(spec, 4, z).exact_equal, "z=" + z.str());
    }
    return out;
}

inline SuiteResult run_suite_delta(std::uint64_t seed) {
    SuiteResult out{"delta"};
    Sampler smp(seed);
    for (auto spec : {default_chi3(), default_off_variety()}) {
        PAdicInt z = smp.point(2);
        out.check(delta_report(spec, 6, z).exact_equal, "two paths z=" + z.str());
    }
    TransformLattice lat(ProductSpec({default_chi3()}), {2});
    out.check(product_delta_report(lat, {2}, 4, PAdicInt::parse(2, "pre:;per:10")).exact_equal,
              "product delta chi3^2");
    return out;
}

inline SuiteResult run_suite_fhat(std::uint64_t seed) {
    SuiteResult out{"fhat"};
    (void)seed;
    TransformLattice lat(ProductSpec({default_off_variety()}), {2});
    for (const PAdicInt& z :
         {PAdicInt::from_integer(2, 5), PAdicInt::parse(2, "pre:1;per:10")})
        out.check(fhat_partial_sum_report(lat, {2}, 3, z).exact_equal, "n=2 z=" + z.str());
    return out;
}

inline SuiteResult run_suite_adjoint(std::uint64_t seed) {
    SuiteResult out{"adjoint"};
    Sampler smp(seed);
    for (long p : {2L, 3L}) {
        FourierTable f = forward(smp.sb_function(p, 3, 0));
        FourierTable g = forward(smp.sb_function(p, 3, 0));
        for (long r = 1; r <= 2; ++r)
            out.check(adjoint_resum(f, g, r, 3).exact_equal,
                      "p=" + std::to_string(p) + " r=" + std::to_string(r));
    }
    return out;
}

inline SuiteResult run_suite_shift(std::uint64_t seed) {
    SuiteResult out{"shift"};
    Sampler smp(seed);
    for (long p : {2L, 3L}) {
        auto chi = distribution_from_table(forward(smp.sb_function(p, 2, 0)));
        std::vector<ExactScalar> q;
        for (long j = 0; j < p; ++j) q.push_back(ExactScalar(smp.rational()));
        for (long n = 1; n <= 2; ++n) {
            PAdicInt z = smp.point(p);
            out.check(shift_transform_check(*chi, q, n, 3, z).exact_equal,
                      "p=" + std::to_string(p) + " n=" + std::to_string(n));
        }
    }
    return out;
}

inline SuiteResult run_suite_eigen(std::uint64_t seed) {
    SuiteResult out{"eigen"};
    Sampler smp(seed);
    for (int rep = 0; rep < 4; ++rep) {
        std::vector<ExactScalar> r{ExactScalar(smp.nonzero_rational()), ExactScalar(smp.nonzero_rational())};
        MFunction mf(2, r);
        SBFunction phi = smp.sb_function(2, 2, 0);
        out.check(eigen_pairing(mf, phi).exact_equal, "random multipliers #" + std::to_string(rep));
    }
    return out;
}

inline SuiteResult run_suite_tensor(std::uint64_t seed) {
    SuiteResult out{"tensor"};
    Sampler smp(seed);
    std::vector<MFunction> mfs{
        MFunction(2, {ExactScalar(smp.nonzero_rational()), ExactScalar(smp.nonzero_rational())}),
        MFunction(3, {ExactScalar(smp.nonzero_rational()), ExactScalar(smp.nonzero_rational()),
                      ExactScalar(smp.nonzero_rational())})};
    std::vector<ProductIndicator> phi;
    for (int i = 0; i < 3; ++i)
        phi.push_back({ExactScalar(smp.rational()),
                       {{smp.uniform(0, 2), BigInt(smp.uniform(0, 3))},
                        {smp.uniform(0, 2), BigInt(smp.uniform(0, 8))}}});
    out.check(tensor_pairing(mfs, phi).exact_equal, "d=2 bases 2,3");
    return out;
}

inline SuiteResult run_suite_dirichlet(std::uint64_t seed) {
    SuiteResult out{"dirichlet"};
    Sampler smp(seed);
    ProductSpec ps({default_off_variety()});
    TransformLattice lat(ps, {2});
    for (int i = 0; i < 3; ++i) {
        PAdicInt z = smp.point(2);
        out.check(dirichlet_cross_check(ps, lat, {2}, 3, z).exact_equal, "n=2 z=" + z.str());
        auto rule = lat.entry({2});
        out.check(partial_sum(*rule, 3, z) == partial_sum_via_dirichlet(*rule, 3, z),
                  "partial-sum two paths z=" + z.str());
    }
    return out;
}

inline SuiteResult run_suite_formal_vs_closed(std::uint64_t seed) {
    SuiteResult out{"formal-vs-closed"};
    (void)seed;
    ProductSpec ps({default_off_variety()});
    TransformLattice lat(ps, {3});
    for (long n = 2; n <= 3; ++n) {
        FourierTable y = formal_solve(ps, {n}, lattice_initial_condition(lat, {n}), 4);
        out.check(y == tabulate(*lat.entry({n}), 4), "tables equal n=" + std::to_string(n));
    }
    ProductSpec chi3({default_chi3()});
    TransformLattice lat3(chi3, {1});
    bool threw = false;
    try {
        formal_solve(chi3, {1}, lattice_initial_condition(lat3, {1}), 2);
    } catch (const no_solution&) {
        threw = true;
    }
    out.check(threw, "chi3 n=1 raises no-solution (expected)");
    return out;
}

inline SuiteResult run_suite(const std::string& name, std::uint64_t seed) {
    if (name == "inversion") return run_suite_inversion(seed);
    if (name == "truncation") return run_suite_truncation(seed);
    if (name == "axsum") return run_suite_axsum(seed);
    if (name == "tilde") return run_suite_tilde(seed);
    if (name == "delta") return run_suite_delta(seed);
    if (name == "fhat") return run_suite_fhat(seed);
    if (name == "adjoint") return run_suite_adjoint(seed);
    if (name == "shift") return run_suite_shift(seed);
    if (name == "eigen") return run_suite_eigen(seed);
    if (name == "tensor") return run_suite_tensor(seed);
    if (name == "dirichlet") return run_suite_dirichlet(seed);
    if (name == "formal-vs-closed") return run_suite_formal_vs_closed(seed);
    throw arithmetic_error("unknown verify suite: " + name);
}

inline std::vector<std::string> all_suites() {
    return {"inversion", "truncation", "axsum",  "tilde",  "delta",     "fhat",
            "adjoint",   "shift",      "eigen",  "tensor", "dirichlet", "formal-vs-closed"};
}

}  // namespace fseries
