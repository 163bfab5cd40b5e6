#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "qprior/quadrature.hpp"

using namespace qprior;
using Catch::Approx;

TEST_CASE("1D polynomial is exact", "[quadrature]") {
    auto spec = make_spec({Axis{0.0, 1.0, AxisTransform::none}}, 1e-12);
    auto res = integrate([](std::span<const double> x) { return x[0] * x[0]; }, spec);
    CHECK(res.converged);
    CHECK(res.value == Approx(1.0 / 3.0).margin(1e-12));
}

TEST_CASE("sqrt_upper transform handles the 1/sqrt(1-r^2) endpoint", "[quadrature]") {
    auto spec = make_spec({Axis{0.0, 1.0, AxisTransform::sqrt_upper}}, 1e-11);
    auto res = integrate(
        [](std::span<const double> x) {
            const double r = x[0];
            return r * r / std::sqrt((1.0 - r) * (1.0 + r));
        },
        spec);
    CHECK(res.converged);
    CHECK(res.value == Approx(std::numbers::pi / 4.0).margin(1e-10));
}

TEST_CASE("log_scale transform integrates 1/q over three decades", "[quadrature]") {
    auto spec = make_spec({Axis{0.5, 500.0, AxisTransform::log_scale}}, 1e-11);
    auto res = integrate([](std::span<const double> x) { return 1.0 / x[0]; }, spec);
    CHECK(res.converged);
    CHECK(res.value == Approx(std::log(1000.0)).epsilon(1e-10));
}

TEST_CASE("3D product integral", "[quadrature]") {
    auto spec = make_spec({Axis{0.0, 1.0, AxisTransform::none}, Axis{0.0, 2.0, AxisTransform::none},
                           Axis{0.0, std::numbers::pi, AxisTransform::none}},
                          1e-10);
    auto res = integrate(
        [](std::span<const double> x) { return x[0] * x[1] * std::sin(x[2]); }, spec);
    CHECK(res.converged);
    CHECK(res.value == Approx(2.0).epsilon(1e-9));
}

TEST_CASE("adaptive refinement localizes a peak", "[quadrature]") {
    auto spec = make_spec({Axis{0.0, 1.0, AxisTransform::none}, Axis{0.0, 1.0, AxisTransform::none}}, 1e-9);
    // sharp but smooth bump at (0.3, 0.7)
    auto res = integrate(
        [](std::span<const double> x) {
            const double dx = x[0] - 0.3, dy = x[1] - 0.7;
            return std::exp(-((dx * dx) + (dy * dy)) * 400.0);
        },
        spec);
    CHECK(res.converged);
    CHECK(res.value == Approx(std::numbers::pi / 400.0).epsilon(1e-6));  // erf factors ~ 1 to 1e-13
}

TEST_CASE("non-finite integrand reports the offending point", "[quadrature]") {
    auto spec = make_spec({Axis{0.0, 1.0, AxisTransform::none}}, 1e-8);
    CHECK_THROWS_AS(integrate([](std::span<const double> x) { return 1.0 / (x[0] - x[0]); }, spec),
                    std::domain_error);
}

TEST_CASE("determinism: identical runs produce bit-identical results", "[quadrature][properties]") {
    auto spec = make_spec({Axis{0.0, 1.0, AxisTransform::sqrt_upper}, Axis{0.0, 3.0, AxisTransform::none}}, 1e-10);
    auto f = [](std::span<const double> x) {
        return std::log(2.0 - x[0]) * std::cos(x[1]) + x[0] / std::sqrt(1.0001 - x[0]);
    };
    auto a = integrate(f, spec);
    auto b = integrate(f, spec);
    CHECK(a.value == b.value);
    CHECK(a.error_estimate == b.error_estimate);
    CHECK(a.evals == b.evals);
}

TEST_CASE("max_evals yields converged=false with diagnostics", "[quadrature]") {
    auto spec = make_spec({Axis{0.0, 1.0, AxisTransform::none}}, 1e-15, 1e-30, 100);
    auto res = integrate([](std::span<const double> x) { return std::sqrt(std::abs(x[0] - 0.37)); }, spec);
    CHECK_FALSE(res.converged);
    CHECK(!res.note.empty());
}

TEST_CASE("mc_check: constant on the unit box is exact, seeded and reproducible", "[quadrature]") {
    auto spec = make_spec({Axis{0.0, 1.0, AxisTransform::none}, Axis{0.0, 1.0, AxisTransform::none}}, 1e-8);
    auto res = mc_check([](std::span<const double>) { return 1.0; }, spec, 99, 5000);
    CHECK(res.value == Approx(1.0).margin(1e-12));
    auto res2 = mc_check([](std::span<const double>) { return 1.0; }, spec, 99, 5000);
    CHECK(res.value == res2.value);
}

TEST_CASE("mc_check agrees with adaptive result within 3 standard errors", "[quadrature][properties]") {
    auto spec = make_spec({Axis{0.0, 1.0, AxisTransform::sqrt_upper}}, 1e-10);
    auto f = [](std::span<const double> x) {
        const double r = x[0];
        return r * r / std::sqrt((1.0 - r) * (1.0 + r));
    };
    auto ad = integrate(f, spec);
    auto mc = mc_check(f, spec, 2024, 200000);
    CHECK(std::abs(mc.value - ad.value) < 3.0 * mc.error_estimate);
}

TEST_CASE("spec validation", "[quadrature]") {
    CHECK_THROWS_AS(make_spec({Axis{1.0, 1.0, AxisTransform::none}}, 1e-8), std::invalid_argument);
    CHECK_THROWS_AS(make_spec({Axis{0.0, 1.0, AxisTransform::log_scale}}, 1e-8), std::invalid_argument);
    CHECK_THROWS_AS(make_spec({Axis{0.0, 1.0, AxisTransform::none}}, -1.0), std::invalid_argument);
}
