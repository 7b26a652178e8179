#include <catch2/catch_amalgamated.hpp>

#include "fseries/product.hpp"
#include "fseries/verify.hpp"

using namespace fseries;

TEST_CASE("functional coefficients") {
    ProductSpec d1({default_off_variety()});
    // top term r_{n,n,k} = a_k^n, bottom r_{0,(1),k} = b_k
    for (long k = 0; k < 2; ++k) {
        CHECK(d1.r_coeff({2}, {2}, k) == d1.series()[0].a()[static_cast<std::size_t>(k)].pow(2));
        CHECK(d1.r_coeff({0}, {1}, k) == d1.series()[0].b()[static_cast<std::size_t>(k)]);
    }
    ProductSpec d2 = default_pair();
    for (long k = 0; k < 2; ++k)
        CHECK(d2.r_coeff({1, 0}, {1, 1}, k) ==
              d2.series()[0].a()[static_cast<std::size_t>(k)] *
                  d2.series()[1].b()[static_cast<std::size_t>(k)]);
    // X_n(pz + k) = sum_{m<=n} r_{m,n,k} X_m(z), exact on the integers
    Sampler smp(3);
    for (const MultiIndex& n : {MultiIndex{2}, MultiIndex{3}})
        for (int rep = 0; rep < 6; ++rep) {
            BigInt z = smp.uniform(0, 40);
            long k = smp.uniform(0, 1);
            ExactScalar lhs = d1.eval_at_nat(n, 2 * z + k);
            ExactScalar rhs{Rational(0)};
            for (const auto& m : indices_below(n)) rhs += d1.r_coeff(m, n, k) * d1.eval_at_nat(m, z);
            CHECK(lhs == rhs);
        }
    for (int rep = 0; rep < 6; ++rep) {
        BigInt z = smp.uniform(0, 40);
        long k = smp.uniform(0, 1);
        MultiIndex n{1, 1};
        ExactScalar lhs = d2.eval_at_nat(n, 2 * z + k);
        ExactScalar rhs{Rational(0)};
        for (const auto& m : indices_below(n)) rhs += d2.r_coeff(m, n, k) * d2.eval_at_nat(m, z);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("truncated product recursion") {
    // n = 0 is the 1_0 tautology
    CHECK(truncated_product_recursion(ProductSpec({default_chi3()}), {0}, 1).exact_equal);
    for (long level = 1; level <= 3; ++level) {
        CHECK(truncated_product_recursion(ProductSpec({default_chi3()}), {2}, level).exact_equal);
        CHECK(truncated_product_recursion(default_pair(), {1, 1}, level).exact_equal);
    }
    // d=2 symbolic at N=2, exact as rational functions
    ProductSpec sym({chi_q_symbolic(), default_off_variety()});
    CHECK(truncated_product_recursion(sym, {1, 1}, 2).exact_equal);
}

TEST_CASE("lattice construction and branches") {
    ProductSpec chi_q({chi_q_symbolic()});
    TransformLattice lat(chi_q, {2});
    // base case delegates to the degree-one formula
    auto base = closed_transform(chi_q.series()[0]);
    for (const auto& t : dual_ball(2, 3)) CHECK(lat.entry({1})->at(t) == base->at(t));
    CHECK(lat.at_zero({0}) == ExactScalar(Rational(1)));
    // branch for n=2 decided by alpha_2(0) = (1 + q^2)/8 against 1
    const ProductTransform* n2 = lat.product_entry({2});
    REQUIRE(n2 != nullptr);
    ExactScalar q = ExactScalar::variable("q");
    CHECK(n2->alpha0() ==
          (ExactScalar(Rational(1)) + q * q) * ExactScalar(Rational(1, 8)));
    CHECK_FALSE(n2->on_breakdown_variety());
    // manifest records the choices
    bool saw = false;
    for (const auto& meta : lat.manifest())
        if (meta.index == MultiIndex{2}) {
            saw = true;
            CHECK(meta.branch == "alpha(0)!=1");
        }
    CHECK(saw);
}

TEST_CASE("f-hat support and g-hat branch values") {
    ProductSpec ps({default_off_variety()});
    TransformLattice lat(ps, {2});
    const ProductTransform* rule = lat.product_entry({2});
    REQUIRE(rule);
    // f_hat vanishes on |t| <= p
    for (const auto& t : dual_ball(2, 1)) CHECK(rule->f_hat(t).is_zero());
    // off the locus g_hat(0) = beta(0)/(1 - alpha(0))
    ExactScalar expect = rule->beta().at_zero() /
                         (ExactScalar(Rational(1)) - rule->alpha0());
    CHECK(rule->g_hat(DualElement::zero(2)) == expect);
    // the assembled transform satisfies the formal equation on |t| <= p^4
    std::map<MultiIndex, TrigPoly> trig;
    for (const auto& m : indices_below(MultiIndex{2})) trig.emplace(m, ps.alpha_mn(m, {2}));
    for (const auto& t : dual_ball(2, 4)) {
        ExactScalar rhs{Rational(0)};
        for (const auto& [m, tp] : trig) rhs += tp.at(t) * lat.entry(m)->at(t.times_p());
        CHECK(lat.entry({2})->at(t) == rhs);
    }
}

TEST_CASE("product and truncation commute; transforms are a convolution homomorphism") {
    Sampler smp(5);
    ProductSpec d2 = default_pair();
    for (int rep = 0; rep < 4; ++rep) {
        MultiIndex m{smp.uniform(0, 1), smp.uniform(0, 1)};
        MultiIndex n{smp.uniform(0, 1), smp.uniform(0, 1)};
        MultiIndex sum{m[0] + n[0], m[1] + n[1]};
        long level = smp.uniform(1, 3);
        SBFunction lhs = d2.truncation(sum, level);
        SBFunction rhs = d2.truncation(m, level) * d2.truncation(n, level);
        CHECK(lhs == rhs);
        CHECK(forward(lhs) == convolve(forward(d2.truncation(m, level)), forward(d2.truncation(n, level))));
    }
}

TEST_CASE("f-hat partial sums, two routes") {
    TransformLattice lat(ProductSpec({default_off_variety()}), {2});
    CHECK(fhat_partial_sum_report(lat, {2}, 3, PAdicInt::from_integer(2, 5)).exact_equal);
    CHECK(fhat_partial_sum_report(lat, {2}, 2, PAdicInt::from_integer(2, 5)).exact_equal);
    CHECK(fhat_partial_sum_report(lat, {2}, 4, PAdicInt::parse(2, "pre:;per:10")).exact_equal);
}

TEST_CASE("product delta identity") {
    // N = 1 window degenerates but must still balance
    TransformLattice lat3(ProductSpec({default_chi3()}), {2});
    PAdicInt z = PAdicInt::parse(2, "pre:;per:10");
    CHECK(product_delta_report(lat3, {2}, 1, z).exact_equal);
    for (long n = 2; n <= 6; ++n) CHECK(product_delta_report(lat3, {2}, n, z).exact_equal);
    // symbolic d=1 n=2 at N=2
    TransformLattice latq(ProductSpec({chi_q_symbolic()}), {2});
    CHECK(product_delta_report(latq, {2}, 2, z).exact_equal);
}

TEST_CASE("measure certification") {
    ProductSpec s45({FSeriesSpec(2, {ExactScalar(Rational(1, 4)), ExactScalar(Rational(5, 4))},
                                 {ExactScalar(Rational(1)), ExactScalar(Rational(1))})});
    CHECK(measure_norm_check(s45, {1}, BigInt(3)).certified);
    CHECK(measure_norm_check(s45, {1}, std::nullopt).certified);
    ProductSpec chi3({default_chi3()});
    CHECK_FALSE(measure_norm_check(chi3, {1}, std::nullopt).certified);
    CHECK_THROWS_AS(measure_norm_check(s45, {1}, BigInt(2)), ramified_place);
}

TEST_CASE("moment sequence") {
    FSeriesSpec s45(2, {ExactScalar(Rational(1, 4)), ExactScalar(Rational(5, 4))},
                    {ExactScalar(Rational(1)), ExactScalar(Rational(1))});
    auto mom = moment_sequence(s45, 1);
    CHECK(mom[0] == ExactScalar(Rational(1)));
    CHECK(mom[1] == ExactScalar(Rational(4)));
    // complex-parameter spec: frozen values in Q(zeta_4)
    ExactScalar i{Cyclotomic::root_of_unity(4, 1)};
    FSeriesSpec cx(2, {(ExactScalar(Rational(1)) + i).inverse(), ExactScalar(Rational(1))},
                   {ExactScalar(Rational(0)), i});
    auto m = moment_sequence(cx, 3);
    CHECK(m[1] == ExactScalar(Rational(1)) + i);
    CHECK(m[2] == ExactScalar(Rational(-8, 5)) + ExactScalar(Rational(14, 5)) * i);
    CHECK(m[3] == ExactScalar(Rational(-658, 65)) - ExactScalar(Rational(326, 65)) * i);
}

TEST_CASE("symbolic lattice depth is capped") {
    CHECK_THROWS_AS(TransformLattice(ProductSpec({chi_q_symbolic()}), {5}), arithmetic_error);
}
