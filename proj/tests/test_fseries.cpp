#include <catch2/catch_amalgamated.hpp>

#include "fseries/fseries.hpp"
#include "fseries/verify.hpp"

using namespace fseries;

namespace {
PAdicInt minus_third() { return PAdicInt::parse(2, "pre:;per:10"); }
}  // namespace

TEST_CASE("values on the non-negative integers") {
    // X(2z) = 1 + X/4, X(2z+1) = 1 + 5X/4: X(0) = 4/3, X(1) = 1 + 5/3
    FSeriesSpec s(2, {ExactScalar(Rational(1, 4)), ExactScalar(Rational(5, 4))},
                  {ExactScalar(Rational(1)), ExactScalar(Rational(1))});
    CHECK(s.eval_at_nat(0) == ExactScalar(Rational(4, 3)));
    CHECK(s.eval_at_nat(1) == ExactScalar(Rational(8, 3)));
    // the same with symbolic top multiplier: X(1) = 1 + q/3
    ExactScalar q = ExactScalar::variable("q");
    FSeriesSpec sym(2, {ExactScalar(Rational(1, 4)), q * ExactScalar(Rational(1, 4))},
                    {ExactScalar(Rational(1)), ExactScalar(Rational(1))});
    CHECK(sym.eval_at_nat(1) == ExactScalar(Rational(1)) + q / ExactScalar(Rational(3)));
    CHECK(chi_q_symbolic().eval_at_nat(0) == ExactScalar(Rational(0)));
    // functional equation on a range
    FSeriesSpec chi3 = default_chi3();
    for (long n = 0; n < 64; ++n)
        for (long j = 0; j < 2; ++j)
            CHECK(chi3.eval_at_nat(2 * n + j) ==
                  chi3.a()[static_cast<std::size_t>(j)] * chi3.eval_at_nat(n) +
                      chi3.b()[static_cast<std::size_t>(j)]);
}

TEST_CASE("construction guards") {
    // a_0 = 1 needs b_0 = 0 and an explicit X(0)
    CHECK_THROWS_AS(FSeriesSpec(2, {ExactScalar(Rational(1)), ExactScalar(Rational(2))},
                                {ExactScalar(Rational(1)), ExactScalar(Rational(0))}),
                    singular_composite);
    CHECK_THROWS_AS(FSeriesSpec(2, {ExactScalar(Rational(1)), ExactScalar(Rational(2))},
                                {ExactScalar(Rational(0)), ExactScalar(Rational(1))}),
                    affine_family_error);
    FSeriesSpec ok(2, {ExactScalar(Rational(1)), ExactScalar(Rational(2))},
                   {ExactScalar(Rational(0)), ExactScalar(Rational(1))}, ExactScalar(Rational(7)));
    CHECK(ok.eval_at_nat(0) == ExactScalar(Rational(7)));
    CHECK_THROWS_AS(FSeriesSpec(2, {ExactScalar(Rational(0)), ExactScalar(Rational(1))},
                                {ExactScalar(Rational(0)), ExactScalar(Rational(1))}),
                    arithmetic_error);
}

TEST_CASE("values at eventually periodic points") {
    FSeriesSpec chi3 = default_chi3();
    CHECK(chi3.eval_at_periodic(minus_third()) == ExactScalar(Rational(2)));
    CHECK(chi3.eval_at_periodic(PAdicInt::parse(2, "pre:;per:01")) == ExactScalar(Rational(1)));
    CHECK(chi3.eval_at_periodic(PAdicInt::from_integer(2, 0)) == chi3.x_zero());
    CHECK(chi3.eval_at_periodic(PAdicInt::from_integer(2, 27)) == chi3.eval_at_nat(27));
    // composite multiplier 1 with nonzero offset has no fixed point
    FSeriesSpec bad(2, {ExactScalar(Rational(2)), ExactScalar(Rational(1, 2))},
                    {ExactScalar(Rational(1)), ExactScalar(Rational(1))});
    CHECK_THROWS_AS(bad.eval_at_periodic(PAdicInt::parse(2, "pre:;per:01")), singular_composite);
    FSeriesSpec amb(2, {ExactScalar(Rational(2)), ExactScalar(Rational(1, 2))},
                    {ExactScalar(Rational(0)), ExactScalar(Rational(0))});
    CHECK_THROWS_AS(amb.eval_at_periodic(PAdicInt::parse(2, "pre:;per:01")), affine_family_error);
}

TEST_CASE("truncations") {
    FSeriesSpec chi3 = default_chi3();
    auto t0 = forward(chi3.truncation(0));
    CHECK(t0.at(DualElement::zero(2)) == chi3.x_zero());
    auto t1 = forward(chi3.truncation(1));
    CHECK(t1.at(DualElement::zero(2)) == ExactScalar(Rational(1, 4)));
    // lifts of lower truncations differ from higher ones off the determined block
    CHECK(chi3.truncation(1).level_lifted(2) != chi3.truncation(2));
    CHECK(chi3.truncation(1).at_index(1) == chi3.truncation(2).at_index(1));
}

TEST_CASE("m-functions") {
    MFunction mf(2, {ExactScalar(Rational(1, 4)), ExactScalar(Rational(3, 4))});
    PAdicInt all_ones = PAdicInt::parse(2, "pre:;per:1");
    CHECK(mf.value(0, all_ones) == ExactScalar(Rational(1)));
    CHECK(mf.value(3, all_ones) == ExactScalar(Rational(27, 64)));
    CHECK(mf.value_by_digits(3, all_ones) == ExactScalar(Rational(27, 64)));
    Sampler smp(13);
    for (int rep = 0; rep < 6; ++rep) {
        long p = rep % 2 ? 3 : 2;
        std::vector<ExactScalar> r;
        for (long j = 0; j < p; ++j) r.push_back(ExactScalar(smp.nonzero_rational()));
        MFunction m2(p, r);
        PAdicInt z = smp.point(p);
        for (long n = 0; n <= 8; ++n) CHECK(m2.value(n, z) == m2.value_by_digits(n, z));
        // kappa shift law
        for (long m = 0; m <= 4; ++m)
            for (long n = 0; n <= 4; ++n)
                CHECK(m2.kappa(z.shifted(m).truncate(n)) ==
                      m2.kappa(z.truncate(m + n)) / m2.kappa(z.truncate(m)));
    }
}

TEST_CASE("alpha data") {
    FSeriesSpec chi3 = default_chi3();
    AlphaData data(2, chi3.a(), chi3.b());
    CHECK(data.alpha0() == ExactScalar(Rational(1)));
    CHECK(data.a_hat(DualElement::zero(2)) == ExactScalar(Rational(1)));
    for (const auto& t : dual_ball(2, 1))
        if (!t.is_zero()) CHECK(data.a_hat(t) == data.alpha().at(t));
    // numeric alpha vanishing is flagged
    AlphaData flat(2, {ExactScalar(Rational(1)), ExactScalar(Rational(1))},
                   {ExactScalar(Rational(0)), ExactScalar(Rational(1))});
    CHECK_THROWS_AS(flat.gamma(DualElement(2, 1, 1)), alpha_vanishes);
}

TEST_CASE("closed transform values") {
    auto chi3_rule = closed_transform(default_chi3());
    CHECK(chi3_rule->on_breakdown_variety());
    CHECK(chi3_rule->at(DualElement::zero(2)) == ExactScalar(Rational(0)));
    CHECK(chi3_rule->at(DualElement(2, 1, 1)) == ExactScalar(Rational(-1, 8)));

    // sum of 5^{#1}/4^n: X_hat(0) = 4
    FSeriesSpec s45(2, {ExactScalar(Rational(1, 4)), ExactScalar(Rational(5, 4))},
                    {ExactScalar(Rational(1)), ExactScalar(Rational(1))});
    CHECK(closed_transform(s45)->at(DualElement::zero(2)) == ExactScalar(Rational(4)));

    // symbolic chi_q: X_hat(0) = -1/(q-3) and X_hat(1/2) = 1/(2(q-3))
    auto rule_q = closed_transform(chi_q_symbolic());
    ExactScalar q = ExactScalar::variable("q");
    CHECK(rule_q->at(DualElement::zero(2)) ==
          ExactScalar(Rational(-1)) / (q - ExactScalar(Rational(3))));
    CHECK(rule_q->at(DualElement(2, 1, 1)) ==
          (ExactScalar(Rational(2)) * (q - ExactScalar(Rational(3)))).inverse());
}

TEST_CASE("uncorrected equation: satisfied off the locus, violated on it") {
    auto off = closed_transform(default_off_variety());
    AlphaData data(2, default_off_variety().a(), default_off_variety().b());
    for (const auto& t : dual_ball(2, 4)) {
        ExactScalar rhs = data.alpha().at(t) * off->at(t.times_p());
        if (t.exponent() <= 1) rhs += data.beta().at(t);  // 1_0(pt) = 1 iff |t| <= p
        CHECK(off->at(t) == rhs);
    }
    auto on = closed_transform(default_chi3());
    AlphaData d3(2, default_chi3().a(), default_chi3().b());
    ExactScalar lhs = on->at(DualElement::zero(2));
    ExactScalar rhs = d3.alpha0() * on->at(DualElement::zero(2)) + d3.beta0();
    CHECK(lhs != rhs);  // existence failure at t = 0 when beta(0) != 0
}

TEST_CASE("a-hat recurrence") {
    FSeriesSpec s = default_off_variety();
    AlphaData data(2, s.a(), s.b());
    for (const auto& t : dual_ball(2, 4)) {
        ExactScalar lhs = data.a_hat(t.times_p());
        ExactScalar rhs = t.exponent() <= 1 ? ExactScalar(Rational(1))
                                            : data.a_hat(t) / data.alpha().at(t);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("truncated transform recursion, numeric and symbolic") {
    for (const FSeriesSpec& s : {default_chi3(), default_off_variety(), chi_q_symbolic()}) {
        AlphaData data(2, s.a(), s.b());
        for (long n = 1; n <= (s.is_symbolic() ? 3 : 4); ++n) {
            auto now = forward(s.truncation(n));
            auto prev = forward(s.truncation(n - 1));
            for (const auto& t : dual_ball(2, n)) {
                ExactScalar rhs = data.alpha().at(t) * prev.at(t.times_p());
                if (t.exponent() <= 1) rhs += data.beta().at(t);
                CHECK(now.at(t) == rhs);
            }
        }
    }
}

TEST_CASE("a-hat partial sums, closed two ways") {
    Sampler smp(17);
    CHECK(ax_sum_report(default_chi3(), 0, minus_third()).exact_equal);
    // on the locus the sum collapses to the m-function value
    FSeriesSpec chi3 = default_chi3();
    AlphaData data(2, chi3.a(), chi3.b());
    MFunction mf = a_mfunction(chi3);
    for (long n = 0; n <= 5; ++n) {
        ExactScalar direct{Rational(0)};
        for (const auto& t : dual_ball(2, n))
            direct += data.a_hat(t) * ExactScalar(t.character(minus_third()));
        CHECK(direct == mf.value(n, minus_third()));
    }
    for (int rep = 0; rep < 4; ++rep)
        CHECK(ax_sum_report(default_off_variety(), 5, smp.point(2)).exact_equal);
    CHECK(ax_sum_report(default_p3(), 4, smp.point(3)).exact_equal);
    CHECK(ax_sum_report(chi_q_symbolic(), 4, smp.point(2)).exact_equal);
}

TEST_CASE("tilde recurrence and deltas") {
    Sampler smp(19);
    for (const FSeriesSpec& s : {default_chi3(), default_off_variety()})
        CHECK(tilde_recurrence_report(s, 4, smp.point(2)).exact_equal);

    // Delta_N at an integer point with alpha(0) != 1 collapses to (X(0)-X_hat(0)) a_0^N kappa
    FSeriesSpec off = default_off_variety();
    auto rule = closed_transform(off);
    MFunction mf = a_mfunction(off);
    PAdicInt seven = PAdicInt::from_integer(2, 7);
    DeltaReport rep = delta_report(off, 6, seven);
    CHECK(rep.exact_equal);
    for (long n = 4; n <= 6; ++n) {
        ExactScalar expect =
            (off.x_zero() - rule->at(DualElement::zero(2))) * mf.value(n, seven);
        CHECK(rep.direct[static_cast<std::size_t>(n)] == expect);
    }
    // chi_3 at -1/3: Delta_N = (chi3(theta^N z) + N/4) 2^{-N} 3^{ceil(N/2)}
    FSeriesSpec chi3 = default_chi3();
    DeltaReport rep3 = delta_report(chi3, 8, minus_third());
    CHECK(rep3.exact_equal);
    for (long n = 0; n <= 8; ++n) {
        ExactScalar head = chi3.eval_at_periodic(minus_third().shifted(n)) +
                           ExactScalar(Rational(n, 4));
        ExactScalar expect = head * ExactScalar(Rational(1, checked_pow_long(2, n))) *
                             ExactScalar(Rational(big_pow(3, static_cast<unsigned long>((n + 1) / 2)), 1));
        CHECK(rep3.direct[static_cast<std::size_t>(n)] == expect);
    }
    // N = 0: Delta = X(z) - X_hat(0)
    CHECK(rep3.direct[0] == chi3.eval_at_periodic(minus_third()) - ExactScalar(Rational(0)));
    CHECK(delta_n(chi3, 2, 1, minus_third()) ==
          chi3.eval_at_periodic(minus_third().shifted()) -
              partial_sum(*closed_transform(chi3), 2, minus_third().shifted()));
}

TEST_CASE("streamed partial sums match the generic path") {
    Sampler smp(23);
    for (const FSeriesSpec& s : {default_chi3(), default_off_variety(), default_p3()}) {
        PAdicInt z = smp.point(s.base());
        auto fast = direct_partial_sums(s, z, 4);
        auto rule = closed_transform(s);
        for (long n = 0; n <= 4; ++n)
            CHECK(fast[static_cast<std::size_t>(n)] == partial_sum(*rule, n, z));
    }
}

TEST_CASE("memo cap keeps evaluation correct") {
    FSeriesSpec chi3 = default_chi3();
    chi3.set_memo_cap(4);
    ExactScalar full = chi3.eval_at_nat(1000);
    FSeriesSpec fresh = default_chi3();
    CHECK(full == fresh.eval_at_nat(1000));
}
