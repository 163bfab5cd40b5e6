#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qprior/ffunctions.hpp"

using namespace qprior;
using Catch::Approx;

TEST_CASE("f_B is the Bures function with f_B(1) = 1", "[ffunctions]") {
    CHECK(f_eval(FFunctionId::f_B, 1.0) == Approx(1.0).margin(1e-15));
    CHECK(f_eval(FFunctionId::f_B, 0.4) == Approx(0.7).margin(1e-15));
    CHECK_THROWS_AS(f_eval(FFunctionId::f_B, 0.0), std::domain_error);
    CHECK_THROWS_AS(f_eval(FFunctionId::f_B, -0.5), std::domain_error);
}

TEST_CASE("f_F approaches 3 at t -> 1 and matches the direct formula away from 1", "[ffunctions]") {
    CHECK(f_eval(FFunctionId::f_F, 1.0) == Approx(3.0).margin(1e-12));
    CHECK(f_eval(FFunctionId::f_F, 1.0 - 1e-6) == Approx(3.0).margin(1e-5));
    for (double t : {0.05, 0.2, 0.5, 0.9}) {
        const double direct = std::pow(t - 1.0, 3) / (t * t - 2.0 * t * std::log(t) - 1.0);
        CHECK(f_eval(FFunctionId::f_F, t) == Approx(direct).epsilon(1e-9));
    }
}

TEST_CASE("f_F_q limits to f_F at q -> 1", "[ffunctions][properties]") {
    for (double t : {0.2, 0.5, 0.9}) {
        const double ff = f_eval(FFunctionId::f_F, t);
        CHECK(f_eval(FFunctionId::f_F_q, t, 1.0 + 1e-6) == Approx(ff).epsilon(1e-4));
        CHECK(f_eval(FFunctionId::f_F_q, t, 1.0 - 1e-6) == Approx(ff).epsilon(1e-4));
        CHECK(f_eval(FFunctionId::f_F_q, t, 1.0) == Approx(ff).epsilon(1e-12));
    }
    // f_F_q(1) = 3/q^2
    for (double q : {0.5, 2.0, 7.0}) CHECK(f_eval(FFunctionId::f_F_q, 1.0, q) == Approx(3.0 / (q * q)).epsilon(1e-12));
}

TEST_CASE("f_F_q matches the printed rational form where it is well conditioned", "[ffunctions]") {
    for (double q : {0.5, 0.75, 1.5, 2.0, 5.0}) {
        for (double t : {0.05, 0.3, 0.6, 0.9}) {
            const double num = (q - 1.0) * (t - 1.0) * (t - 1.0) * (std::pow(t, 1.0 + q) - 1.0);
            const double den = q * (1.0 + t) *
                               (1.0 - q + t + q * t - std::pow(t, q) - q * std::pow(t, q) -
                                std::pow(t, 1.0 + q) + q * std::pow(t, 1.0 + q));
            CHECK(f_eval(FFunctionId::f_F_q, t, q) == Approx(num / den).epsilon(1e-7));
        }
    }
}

TEST_CASE("f_bures_q is strictly increasing in t for fixed q", "[ffunctions][properties]") {
    for (double q : {0.5, 1.5, 2.0, 5.0}) {
        double prev = f_eval(FFunctionId::f_bures_q, 1e-3, q);
        for (int i = 1; i <= 1000; ++i) {
            const double t = 1e-3 + (0.999 - 1e-3) * static_cast<double>(i) / 1000.0;
            const double v = f_eval(FFunctionId::f_bures_q, t, q);
            CHECK(v > prev);
            prev = v;
        }
    }
}

TEST_CASE("f_bures_q at q=1 equals 2(1+t)^3/(1-t)^2", "[ffunctions]") {
    for (double t : {0.1, 0.4, 0.8}) {
        const double expected = 2.0 * std::pow(1.0 + t, 3) / ((1.0 - t) * (1.0 - t));
        CHECK(f_eval(FFunctionId::f_bures_q, t, 1.0) == Approx(expected).epsilon(1e-12));
    }
}
