#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "qprior/bayes.hpp"

using namespace qprior;
using Catch::Approx;

TEST_CASE("measurement spec parsing and formatting", "[bayes]") {
    MeasurementSpec s = MeasurementSpec::parse("x:1,1 y:1,1 z:1,1 pow:1");
    CHECK(s.up[0] == 1);
    CHECK(s.down[2] == 1);
    CHECK(s.power == 1.0);
    MeasurementSpec t = MeasurementSpec::parse("z:2,0 pow:0.5");
    CHECK(t.up[2] == 2);
    CHECK(t.down[2] == 0);
    CHECK(t.up[0] == 0);
    CHECK(t.power == 0.5);
    CHECK(MeasurementSpec::parse(t.format()).format() == t.format());
    CHECK_THROWS_AS(MeasurementSpec::parse("w:1,1"), std::invalid_argument);
    CHECK_THROWS_AS(MeasurementSpec::parse("z:1 pow:1"), std::invalid_argument);
    CHECK_THROWS_AS(MeasurementSpec::parse("z:1,1 pow:0"), std::domain_error);
}

TEST_CASE("three-pair likelihood values", "[bayes]") {
    LikelihoodField L = likelihood(MeasurementSpec::three_pairs());
    const double origin[3] = {0.0, 1.0, 1.0};
    CHECK(L.value(std::span<const double>(origin, 3)) == Approx(1.0 / 64.0).epsilon(1e-12));
    // pure state with z=1
    const double pure[3] = {1.0, std::numbers::pi / 2.0, std::numbers::pi / 2.0};
    CHECK(L.value(std::span<const double>(pure, 3)) == Approx(0.0).margin(1e-15));
    // power 1/2 is the pointwise square root
    LikelihoodField Lh = likelihood(MeasurementSpec::three_pairs(0.5));
    const double pt[3] = {0.6, 1.1, 2.2};
    CHECK(Lh.value(std::span<const double>(pt, 3)) ==
          Approx(std::sqrt(L.value(std::span<const double>(pt, 3)))).epsilon(1e-12));
}

TEST_CASE("escort likelihood reduces to the standard one at q=1", "[bayes]") {
    LikelihoodField Lq = likelihood_q(MeasurementSpec::z_pair());
    // q=1: (1-z^2)/4
    for (double r : {0.2, 0.7}) {
        for (double t1 : {0.5, 1.3}) {
            const double x[4] = {1.0, r, t1, 2.0};
            const double z = r * std::sin(t1) * std::sin(2.0);
            CHECK(Lq.value(std::span<const double>(x, 4)) == Approx((1.0 - z * z) / 4.0).epsilon(1e-12));
        }
    }
    // worked point: q=2, r=0.5, z=0.5 -> field (1-(1.6*0.5)^2)/4 = 0.09
    {
        const double t1 = std::numbers::pi / 2.0, t2 = std::numbers::pi / 2.0;  // z = r
        const double x[4] = {2.0, 0.5, t1, t2};
        CHECK(Lq.value(std::span<const double>(x, 4)) == Approx(0.09).epsilon(1e-12));
    }
    // r -> 0: finite, no division hazard
    const double x0[4] = {3.0, 0.0, 1.0, 1.0};
    CHECK(Lq.value(std::span<const double>(x0, 4)) == Approx(0.25).epsilon(1e-12));
}

TEST_CASE("posterior normalizes and is invariant under likelihood scaling", "[bayes]") {
    PriorDensity pb = build_prior("p_B");
    LikelihoodField L = likelihood(MeasurementSpec::three_pairs());
    PriorDensity post = posterior(pb, L);
    auto res = integrate(post.density, domain_spec(post, 1e-8));
    CHECK(res.value == Approx(1.0).margin(1e-6));

    // prior x constant likelihood leaves the density unchanged
    LikelihoodField c;
    c.dim = 3;
    c.spec = MeasurementSpec::three_pairs();
    c.value = [](std::span<const double>) { return 0.37; };
    PriorDensity same = posterior(pb, c);
    const double x[3] = {0.5, 1.0, 2.0};
    CHECK(same.density(std::span<const double>(x, 3)) ==
          Approx(pb.density(std::span<const double>(x, 3))).epsilon(1e-10));
    CHECK(same.normalization == Approx(0.37).epsilon(1e-9));

    // scaling the likelihood rescales the evidence, not the posterior
    LikelihoodField L2 = L;
    auto base = L.value;
    L2.value = [base](std::span<const double> y) { return 10.0 * base(y); };
    PriorDensity post2 = posterior(pb, L2);
    CHECK(post2.density(std::span<const double>(x, 3)) ==
          Approx(post.density(std::span<const double>(x, 3))).epsilon(1e-9));
}

TEST_CASE("unextended information gains reproduce the closed forms", "[bayes]") {
    PriorDensity pb = build_prior("p_B");

    // one up + one down along z: 7/6 - log 3
    GainResult zpair = info_gain(pb, likelihood(MeasurementSpec::z_pair()), 1e-9);
    CHECK(zpair.nats == Approx(7.0 / 6.0 - std::log(3.0)).epsilon(1e-4));

    // single z-up: hypergeometric/Catalan value 0.140186
    GainResult single = info_gain(pb, likelihood(MeasurementSpec::z_up(1)), 1e-9);
    CHECK(single.nats == Approx(0.140186).epsilon(1e-4));

    // two z-up: 59/30 - log 5
    GainResult twice = info_gain(pb, likelihood(MeasurementSpec::z_up(2)), 1e-9);
    CHECK(twice.nats == Approx(59.0 / 30.0 - std::log(5.0)).epsilon(1e-4));
}

TEST_CASE("gain is zero for a constant likelihood and nonnegative always", "[bayes][properties]") {
    PriorDensity pb = build_prior("p_Btrunc");
    LikelihoodField c;
    c.dim = 3;
    c.spec = MeasurementSpec::three_pairs();
    c.value = [](std::span<const double>) { return 0.5; };
    CHECK(info_gain(pb, c).nats == Approx(0.0).margin(1e-9));
    for (int ups = 1; ups <= 3; ++ups) {
        GainResult g = info_gain(pb, likelihood(MeasurementSpec::z_up(ups)));
        CHECK(g.nats >= 0.0);
    }
}

TEST_CASE("q-extended gains against the printed values", "[bayes][slow]") {
    PriorDensity p4 = build_prior("p_Bqext4D");

    GainResult zpair = info_gain_qext(p4, MeasurementSpec::z_pair(), 2e-6);
    CHECK(zpair.nats == Approx(0.0597923).epsilon(0.02));

    GainResult single = info_gain_qext(p4, MeasurementSpec::z_up(1), 2e-6);
    CHECK(single.nats == Approx(0.134651).epsilon(0.02));

    GainResult twice = info_gain_qext(p4, MeasurementSpec::z_up(2), 2e-6);
    CHECK(twice.nats == Approx(0.349601).epsilon(0.02));

    // each unextended value slightly exceeds its extended counterpart
    PriorDensity pb = build_prior("p_B");
    CHECK(info_gain(pb, likelihood(MeasurementSpec::z_pair())).nats > zpair.nats);
    CHECK(info_gain(pb, likelihood(MeasurementSpec::z_up(1))).nats > single.nats);
    CHECK(info_gain(pb, likelihood(MeasurementSpec::z_up(2))).nats > twice.nats);
}
