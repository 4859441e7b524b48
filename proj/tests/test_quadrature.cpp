#include <doctest.h>

#include "loglap/quadrature.hpp"

#include <cmath>
#include <numbers>

using namespace loglap;

TEST_CASE("gauss-legendre rules integrate polynomials exactly") {
    for (int n : {4, 6, 8, 12}) {
        const GaussRule& rule = gauss_legendre(n);
        double wsum = 0.0;
        for (double w : rule.weights) {
            CHECK(w > 0.0);
            wsum += w;
        }
        CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
        // degree 2n-1 monomial
        const int degree = 2 * n - 1;
        double quad = 0.0;
        for (size_t i = 0; i < rule.nodes.size(); ++i)
            quad += rule.weights[i] * std::pow(rule.nodes[i], degree);
        CHECK(std::abs(quad) < 1e-13); // odd power integrates to zero
        double quad_even = 0.0;
        for (size_t i = 0; i < rule.nodes.size(); ++i)
            quad_even += rule.weights[i] * std::pow(rule.nodes[i], degree - 1);
        CHECK(quad_even == doctest::Approx(2.0 / degree).epsilon(1e-13));
    }
}

TEST_CASE("panel integrator on a smooth integral") {
    auto f = [](double t) { return std::exp(t); };
    auto res = integrate_panels<double>(f, {{0.0, 1.0}}, 12, 10, 1e-12);
    CHECK(res.value == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
    CHECK(res.error_estimate < 1e-12);
}

TEST_CASE("quadrature scheme invariants") {
    QuadratureScheme scheme;
    CHECK_NOTHROW(scheme.validate());
    CHECK(scheme.truncation >= 30.0);
    for (double w : scheme.inner_weights()) CHECK(w > 0.0);
    for (double w : scheme.outer_weights()) CHECK(w > 0.0);
    CHECK(scheme.tail_bound() == doctest::Approx(std::exp(-40.0) / 40.0));

    QuadratureScheme bad = scheme;
    bad.truncation = 20.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("scalar log identity hits analytic values") {
    QuadratureScheme scheme;
    CHECK(log_scalar_via_quadrature(1.0, scheme) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(std::abs(log_scalar_via_quadrature(std::exp(1.0), scheme) - 1.0) < 1e-8);
    CHECK(std::abs(log_scalar_via_quadrature(10.0, scheme) - std::log(10.0)) < 1e-8);
    // large lambda exercises the head expansion
    CHECK(std::abs(log_scalar_via_quadrature(1000.0, scheme) - std::log(1000.0)) < 1e-6);
}

TEST_CASE("scalar fractional power identity") {
    QuadratureScheme scheme;
    CHECK(std::abs(frac_power_scalar_via_quadrature(4.0, 0.5, scheme) - 2.0) < 1e-7);
    CHECK(std::abs(frac_power_scalar_via_quadrature(2.0, 0.3, scheme) - std::pow(2.0, 0.3)) <
          1e-7);
    CHECK(std::abs(frac_power_scalar_via_quadrature(9.0, 0.5, scheme) - 3.0) < 1e-7);
    CHECK(frac_power_scalar_via_quadrature(0.0, 0.5, scheme) == 0.0);
    CHECK_THROWS_AS(frac_power_scalar_via_quadrature(2.0, 1.5, scheme), std::invalid_argument);
}

TEST_CASE("gamma reflection convention") {
    CHECK(gamma_negative(0.5) == doctest::Approx(-2.0 * std::sqrt(std::numbers::pi)).epsilon(1e-13));
    CHECK(gamma_negative(0.3) == doctest::Approx(std::tgamma(0.7) / (-0.3)).epsilon(1e-13));
}

TEST_CASE("estimated error bounds the actual error") {
    QuadratureScheme scheme;
    for (double lambda : {0.5, 3.0, 42.0}) {
        const double computed = log_scalar_via_quadrature(lambda, scheme);
        CHECK(std::abs(computed - std::log(lambda)) < 10.0 * scheme.error_budget);
    }
}

TEST_CASE("impossible error budgets are reported as failures") {
    QuadratureScheme strict;
    strict.error_budget = 1e-15;
    strict.points = 4;
    strict.max_bisections = 0;
    CHECK_THROWS_AS(log_scalar_via_quadrature(977.0, strict), std::runtime_error);
}
