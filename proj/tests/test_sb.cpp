#include <catch2/catch_amalgamated.hpp>

#include "fseries/sb.hpp"
#include "fseries/verify.hpp"

using namespace fseries;

TEST_CASE("forward transform basics") {
    auto phi = SBFunction::indicator(2, 1, 1);
    auto t = forward(phi);
    CHECK(t.at(DualElement::zero(2)) == ExactScalar(Rational(1, 2)));
    CHECK(t.at(DualElement(2, 1, 1)) == ExactScalar(Rational(-1, 2)));

    auto one = forward(SBFunction::constant(3, ExactScalar(Rational(1))));
    CHECK(one.at(DualElement::zero(3)) == ExactScalar(Rational(1)));

    // indicator transform is p^{-n} e^{-2 pi i t k} on its support
    for (long p : {2L, 3L}) {
        long n = 2;
        BigInt k = p + 1;
        auto table = forward(SBFunction::indicator(p, n, k));
        for (const auto& t2 : dual_ball(p, n)) {
            ExactScalar expect =
                ExactScalar(t2.negated().character_at_int(k)) * ExactScalar(Rational(1, p * p));
            CHECK(table.at(t2) == expect);
        }
    }
}

TEST_CASE("exact inversion, three scalar tiers, p in {2,3,6}") {
    Sampler smp(1);
    for (long p : {2L, 3L, 6L}) {
        for (int tier = 0; tier < 3; ++tier) {
            long level = p == 6 ? 1 : 2;
            SBFunction f = smp.sb_function(p, level, tier);
            CHECK(inverse(forward(f)) == f);
        }
    }
    // single entry at t = 1/2 inverts to the sign character
    FourierTable t(2, 1);
    t.set(DualElement(2, 1, 1), ExactScalar(Rational(1)));
    SBFunction f = inverse(t);
    CHECK(f.at_index(0) == ExactScalar(Rational(1)));
    CHECK(f.at_index(1) == ExactScalar(Rational(-1)));
}

TEST_CASE("pointwise product and convolution agree") {
    Sampler smp(2);
    for (long p : {2L, 3L}) {
        SBFunction a = smp.sb_function(p, 2, 0), b = smp.sb_function(p, 2, 0);
        CHECK(convolve(forward(a), forward(b)) == forward(a * b));
        CHECK(a * SBFunction::constant(p, ExactScalar(Rational(1))) == a);
    }
    auto ind = SBFunction::indicator(2, 1, 0);
    CHECK(ind * ind == ind);
}

TEST_CASE("haar integral") {
    CHECK(haar_integral(SBFunction::constant(5, ExactScalar(Rational(1)))) == ExactScalar(Rational(1)));
    CHECK(haar_integral(SBFunction::indicator(3, 2, 4)) == ExactScalar(Rational(1, 9)));
    FourierTable sign(2, 1);
    sign.set(DualElement(2, 1, 1), ExactScalar(Rational(1)));
    CHECK(haar_integral(inverse(sign)) == ExactScalar(Rational(0)));
    // translation invariance over a full residue system
    Sampler smp(3);
    SBFunction f = smp.sb_function(3, 2, 1);
    for (long a = 0; a < 9; ++a) CHECK(haar_integral(f.translated(a)) == haar_integral(f));
}

TEST_CASE("parseval pairing") {
    Sampler smp(4);
    for (int rep = 0; rep < 6; ++rep) {
        long p = rep % 2 ? 3 : 2;
        SBFunction phi = smp.sb_function(p, 2, 0), psi = smp.sb_function(p, 2, rep % 3);
        auto mu = distribution_from_table(forward(phi));
        CHECK(pair(mu, psi) == haar_integral(phi * psi));
        // Haar pairs to the integral
        CHECK(pair(haar_distribution(p), psi) == haar_integral(psi));
        // linearity
        SBFunction psi2 = smp.sb_function(p, 2, 0);
        CHECK(pair(mu, psi + psi2) == pair(mu, psi) + pair(mu, psi2));
    }
    // point mass at 0: mu_hat(t) = 1 on the truncated dual
    FourierTable point(2, 1);
    for (const auto& t : dual_ball(2, 1)) point.set(t, ExactScalar(Rational(1)));
    CHECK(pair(distribution_from_table(point), SBFunction::indicator(2, 1, 0)) ==
          ExactScalar(Rational(1)));
}

TEST_CASE("dirichlet kernel and the two partial-sum routes") {
    // D_1 transform is the all-ones table on |t| <= p
    auto d1 = forward(dirichlet_kernel(3, 1));
    for (const auto& t : dual_ball(3, 1)) CHECK(d1.at(t) == ExactScalar(Rational(1)));
    Sampler smp(5);
    for (int rep = 0; rep < 4; ++rep) {
        long p = rep % 2 ? 3 : 2;
        auto mu = distribution_from_table(forward(smp.sb_function(p, 2, 0)));
        PAdicInt z = smp.point(p);
        for (long n = 0; n <= 4; ++n) {
            CHECK(partial_sum(*mu, n, z) == partial_sum_via_dirichlet(*mu, n, z));
        }
        CHECK(partial_sum(*haar_distribution(p), 3, z) == ExactScalar(Rational(1)));
    }
}

TEST_CASE("adjoint resummation") {
    Sampler smp(6);
    FourierTable f = forward(smp.sb_function(2, 3, 0));
    FourierTable ones(2, 0);
    ones.set(DualElement::zero(2), ExactScalar(Rational(1)));
    CHECK(adjoint_resum(f, ones, 1, 3).exact_equal);
    CHECK(adjoint_resum(ones, f, 1, 3).exact_equal);
    for (long p : {2L, 3L})
        for (long r = 1; r <= 2; ++r) {
            FourierTable a = forward(smp.sb_function(p, 3, 0));
            FourierTable b = forward(smp.sb_function(p, 3, 1));
            CHECK(adjoint_resum(a, b, r, 3).exact_equal);
        }
}

TEST_CASE("shifted transform identity") {
    Sampler smp(7);
    // n = 0 degenerates to the plain partial sum
    auto chi = distribution_from_table(forward(smp.sb_function(2, 2, 0)));
    PAdicInt z = smp.point(2);
    std::vector<ExactScalar> q{ExactScalar(smp.rational()), ExactScalar(smp.rational())};
    CHECK(shift_transform_check(*chi, q, 0, 3, z).exact_equal);
    // q all one against the Haar rule gives 1 = 1
    std::vector<ExactScalar> ones{ExactScalar(Rational(1)), ExactScalar(Rational(1))};
    CHECK(shift_transform_check(*haar_distribution(2), ones, 1, 2, z).exact_equal);
    for (long p : {2L, 3L}) {
        auto rule = distribution_from_table(forward(smp.sb_function(p, 2, 1)));
        std::vector<ExactScalar> qs;
        for (long j = 0; j < p; ++j) qs.push_back(ExactScalar(smp.rational()));
        for (long n = 1; n <= 2; ++n)
            CHECK(shift_transform_check(*rule, qs, n, 3, smp.point(p)).exact_equal);
    }
}

TEST_CASE("level cap guards construction") {
    long old = sb_max_points();
    sb_max_points() = 16;
    CHECK_THROWS_AS(SBFunction::indicator(2, 5, 0), arithmetic_error);
    sb_max_points() = old;
}
