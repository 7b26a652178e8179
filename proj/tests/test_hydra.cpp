#include <catch2/catch_amalgamated.hpp>

#include "fseries/hydra.hpp"
#include "fseries/verify.hpp"

using namespace fseries;

TEST_CASE("shortened qx+1 orbits") {
    HydraMapZ t3 = HydraMapZ::shortened_qx_plus_one(3);
    OrbitRecord<BigInt> rec = t3.iterate(3, 1000, BigInt(1) << 40);
    REQUIRE(rec.status == OrbitStatus::cycle);
    CHECK(rec.steps[0] == 3);
    CHECK(rec.steps[1] == 5);
    CHECK(rec.steps[2] == 8);
    CHECK(rec.steps[3] == 4);
    std::set<BigInt> cyc(rec.cycle.begin(), rec.cycle.end());
    CHECK(cyc == std::set<BigInt>{1, 2});
    // every start up to 100 under T_1 lands on the fixed point 1
    HydraMapZ t1 = HydraMapZ::shortened_qx_plus_one(1);
    for (long n = 1; n <= 100; ++n) {
        OrbitRecord<BigInt> r = t1.iterate(n, 5000, BigInt(1) << 40);
        REQUIRE(r.status == OrbitStatus::cycle);
        CHECK(std::set<BigInt>(r.cycle.begin(), r.cycle.end()) == std::set<BigInt>{1});
    }
}

TEST_CASE("numen of T_q") {
    HydraMapZ t3 = HydraMapZ::shortened_qx_plus_one(3);
    FSeriesSpec numen = t3.numen();
    CHECK(numen.a()[0] == ExactScalar(Rational(1, 2)));
    CHECK(numen.a()[1] == ExactScalar(Rational(3, 2)));
    CHECK(numen.b()[1] == ExactScalar(Rational(1, 2)));
    CHECK(numen.eval_at_nat(0) == ExactScalar(Rational(0)));
    CHECK(numen.eval_at_nat(1) == ExactScalar(Rational(1, 2)));
    // functional equation across a wide window
    for (long n = 0; n <= 10000; n += 97)
        for (long j = 0; j < 2; ++j)
            CHECK(numen.eval_at_nat(2 * n + j) ==
                  numen.a()[static_cast<std::size_t>(j)] * numen.eval_at_nat(n) +
                      numen.b()[static_cast<std::size_t>(j)]);
}

TEST_CASE("numen matches its geometric-tail series form") {
    // chi_q(m) = -1/(q-1) + (1/(2(q-1))) sum_n q^{#1([m]_{2^n})} / 2^n, with the
    // tail summed exactly once the truncation stabilizes
    ExactScalar q = ExactScalar::variable("q");
    FSeriesSpec sym = chi_q_symbolic();
    for (long m = 0; m <= 64; ++m) {
        long lambda = lambda_p(2, m);
        ExactScalar series{Rational(0)};
        for (long n = 0; n < lambda; ++n)
            series += q.pow(digit_count(2, BigInt(m) % checked_pow_long(2, n), 1)) *
                      ExactScalar(Rational(1, checked_pow_long(2, n)));
        series += q.pow(digit_count(2, BigInt(m), 1)) *
                  ExactScalar(Rational(2, checked_pow_long(2, lambda)));
        ExactScalar closed = ExactScalar(Rational(-1)) / (q - ExactScalar(Rational(1))) +
                             series / (ExactScalar(Rational(2)) * (q - ExactScalar(Rational(1))));
        CHECK(sym.eval_at_nat(m) == closed);
    }
}

TEST_CASE("correspondence at periodic points") {
    HydraMapZ t3 = HydraMapZ::shortened_qx_plus_one(3);
    CorrespondenceReport rep =
        correspondence_check(t3, PAdicInt::parse(2, "pre:;per:10"), ExactScalar(Rational(2)));
    CHECK(rep.integral);
    CHECK(rep.branch_relations_hold);
    CHECK(rep.orbit_cycle_matches);
    CorrespondenceReport zero =
        correspondence_check(t3, PAdicInt::parse(2, "pre:;per:0"), ExactScalar(Rational(0)));
    CHECK(zero.integral);
    CHECK(zero.branch_relations_hold);
    // T_5 at per:1: the value -1/3 is a rational periodic point, not an integer cycle
    HydraMapZ t5 = HydraMapZ::shortened_qx_plus_one(5);
    CorrespondenceReport r5 = correspondence_check(t5, PAdicInt::parse(2, "pre:;per:1"));
    CHECK(r5.value == ExactScalar(Rational(-1, 3)));
    CHECK_FALSE(r5.integral);
    CHECK(r5.branch_relations_hold);
}

TEST_CASE("parity vectors reconstruct integer cycles") {
    HydraMapZ t3 = HydraMapZ::shortened_qx_plus_one(3);
    FSeriesSpec numen = t3.numen();
    for (long start = 1; start <= 50; ++start) {
        OrbitRecord<BigInt> rec = t3.iterate(start, 100000, BigInt(1) << 60);
        REQUIRE(rec.status == OrbitStatus::cycle);
        long s = static_cast<long>(rec.cycle.size());
        // digits read the cycle residues backward
        std::vector<int> per;
        for (long i = 0; i < s; ++i)
            per.push_back(static_cast<int>(
                mpz_class(rec.cycle[static_cast<std::size_t>((s - 1 - i) % s)] % 2).get_si()));
        PAdicInt z(2, {}, per);
        ExactScalar v = numen.eval_at_periodic(z);
        bool found = false;
        for (const auto& member : rec.cycle)
            if (v == ExactScalar(Rational(member))) found = true;
        CHECK(found);
    }
}

TEST_CASE("quadratic hydra on Z[sqrt(7)]") {
    QuadHydra h = QuadHydra::sqrt7();
    // applicability follows the congruence analysis
    CHECK(h.apply(QuadElement{2, 2}) == QuadElement{1, 1});
    CHECK(h.apply(QuadElement{2, 1}) == QuadElement{4, 1});
    CHECK_FALSE(h.apply(QuadElement{1, 0}).has_value());
    OrbitRecord<QuadElement> rec = h.iterate(QuadElement{2, 1}, 100, BigInt(1000000));
    REQUIRE(rec.status == OrbitStatus::cycle);
    std::set<QuadElement> cyc(rec.cycle.begin(), rec.cycle.end());
    std::set<QuadElement> expect{{2, 1}, {4, 1}, {4, 2}};
    CHECK(cyc == expect);
    // odd rational part gets stuck
    OrbitRecord<QuadElement> stuck = h.iterate(QuadElement{6, 1}, 100, BigInt(1000000));
    CHECK((stuck.status == OrbitStatus::stuck || stuck.status == OrbitStatus::cycle));
}

TEST_CASE("pole report") {
    PoleReport r3 = pole_report(ExactScalar(Rational(3)));
    CHECK(r3.classification == "breakdown");
    PoleReport r5 = pole_report(ExactScalar(Rational(5)));
    CHECK(r5.classification == "regular");
    PoleReport r1 = pole_report(ExactScalar(Rational(1)));
    CHECK(r1.classification == "pole-at-1");
    // X_hat(0) = -1/(q-3): at q = 5 this is -1/2
    FSeriesSpec at5 = apply_evaluation(chi_q_symbolic(), Evaluation{{"q", ExactScalar(Rational(5))}});
    CHECK(closed_transform(at5)->at(DualElement::zero(2)) == ExactScalar(Rational(-1, 2)));
    // the generic denominator carries both factors
    ExactScalar q = ExactScalar::variable("q");
    ExactScalar den = parse_scalar(r5.denominator_generic);
    CHECK(den == (q - ExactScalar(Rational(1))) * (q - ExactScalar(Rational(3))));
}
