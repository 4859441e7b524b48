#include <doctest.h>

#include "loglap/heat.hpp"
#include "loglap/util.hpp"

#include <cmath>
#include <numbers>

using namespace loglap;

namespace {
double rel_distance(const Field& a, const Field& b) {
    return mass_norm(Field(a.values - b.values, a.manifold)) / std::max(mass_norm(b), 1e-300);
}
} // namespace

TEST_CASE("heat kernel structure") {
    auto mf = build_circle(64, 1.0);
    const double m = 2.0;

    SUBCASE("symmetry") {
        const Eigen::MatrixXd k = heat_kernel(*mf, m, 0.3);
        CHECK((k - k.transpose()).cwiseAbs().maxCoeff() < 1e-10);
    }
    SUBCASE("eigenvector decay") {
        const double t = 0.4;
        const Field phi1(mf->eigenfunctions().col(1), mf);
        const Field evolved = semigroup_apply_via_kernel(heat_kernel(*mf, m, t), phi1);
        CHECK(rel_distance(evolved, Field(std::exp(-3.0 * t) * phi1.values, mf)) < 1e-12);
    }
    SUBCASE("row sums act on constants") {
        const double t = 0.1;
        const Eigen::MatrixXd k = heat_kernel(*mf, m, t);
        const Eigen::VectorXd row_sums = k * mf->mass();
        for (int x = 0; x < 64; ++x)
            CHECK(row_sums[x] == doctest::Approx(std::exp(-m * t)).epsilon(1e-12));
    }
    SUBCASE("ground-mode limit at large t") {
        const double t = 30.0;
        const Eigen::MatrixXd k = heat_kernel(*mf, m, t);
        const Eigen::VectorXd phi0 = mf->eigenfunctions().col(0);
        const Eigen::MatrixXd limit = phi0 * phi0.transpose();
        CHECK((std::exp(m * t) * k - limit).cwiseAbs().maxCoeff() < 1e-10);
    }
    SUBCASE("semigroup property") {
        const Eigen::MatrixXd k1 = heat_kernel(*mf, m, 0.3);
        const Eigen::MatrixXd k2 = heat_kernel(*mf, m, 0.7);
        const Eigen::MatrixXd k12 = heat_kernel(*mf, m, 1.0);
        const Eigen::MatrixXd composed = k1 * mf->mass().asDiagonal() * k2;
        CHECK((composed - k12).cwiseAbs().maxCoeff() < 1e-8);
    }
    SUBCASE("invalid time") {
        CHECK_THROWS_AS(heat_kernel(*mf, m, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(heat_kernel(*mf, m, -1.0), std::invalid_argument);
    }
}

TEST_CASE("semigroup action routes agree") {
    auto mf = build_circle(48, 1.0);
    const double m = 2.0;
    DeterministicRng rng(23);
    const Field v = random_field(mf, rng);

    CHECK(semigroup_apply(m, 0.0, v).values == v.values);

    const Field phi0(mf->eigenfunctions().col(0), mf);
    const Field ground = semigroup_apply(m, 0.5, phi0);
    CHECK(rel_distance(ground, Field(std::exp(-1.0) * phi0.values, mf)) < 1e-13);

    for (double t : {0.05, 0.8, 3.0}) {
        const Field via_spec = apply(OperatorSpec::heat_exp(m, t), v);
        const Field via_eigen = semigroup_apply(m, t, v);
        const Field via_kernel = semigroup_apply_via_kernel(heat_kernel(*mf, m, t), v);
        CHECK(rel_distance(via_eigen, via_spec) < 1e-10);
        CHECK(mass_norm(Field(via_kernel.values - via_eigen.values, mf)) /
                  std::max(mass_norm(v), 1e-300) <
              1e-10);
    }
}

TEST_CASE("uniform decay bound for the semigroup") {
    auto mf = build_circle(48, 1.0);
    const double m = 2.0;
    DeterministicRng rng(29);
    const Field v = random_field(mf, rng);
    const double vnorm = mass_norm(v);

    double fitted = 0.0;
    std::vector<double> grid;
    for (int i = 0; i <= 30; ++i) grid.push_back(0.05 + i * 0.25);
    for (double t : grid) {
        const Field ev = semigroup_apply(m, t, v);
        fitted = std::max(fitted, ev.values.cwiseAbs().maxCoeff() / (std::exp(-t) * vnorm));
    }
    CHECK(fitted > 0.0);
    CHECK(std::isfinite(fitted));
    for (double t : grid) {
        const Field ev = semigroup_apply(m, t, v);
        CHECK(ev.values.cwiseAbs().maxCoeff() <=
              fitted * std::exp(-t) * vnorm * (1.0 + 1e-12));
    }
}

TEST_CASE("log via quadrature") {
    auto mf = build_circle(64, 1.0);
    const double m = 2.0;
    QuadratureScheme scheme;

    SUBCASE("ground mode") {
        const Field phi0(mf->eigenfunctions().col(0), mf);
        const FieldQuadResult res = log_via_quadrature(m, phi0, scheme);
        CHECK(rel_distance(res.value, Field(std::log(2.0) * phi0.values, mf)) < 1e-8);
        CHECK(res.error_estimate > 0.0);
    }
    SUBCASE("random field matches the spectral route") {
        DeterministicRng rng(31);
        const Field v = random_field(mf, rng);
        const FieldQuadResult res = log_via_quadrature(m, v, scheme);
        const Field spectral = apply(OperatorSpec::log(m), v);
        CHECK(rel_distance(res.value, spectral) < 1e-6);
    }
    SUBCASE("composition with the shift gives the full operator") {
        DeterministicRng rng(37);
        const Field v = random_field(mf, rng);
        const Field av = apply(OperatorSpec::shift(m), v);
        const FieldQuadResult res = log_via_quadrature(m, av, scheme);
        const Field full = apply(OperatorSpec::log_laplacian(m), v);
        CHECK(rel_distance(res.value, full) < 1e-5);
    }
}

TEST_CASE("fractional power via quadrature") {
    auto mf = build_circle(64, 1.0);
    const double m = 2.0;
    QuadratureScheme scheme;

    const Field phi0(mf->eigenfunctions().col(0), mf);
    const FieldQuadResult half = frac_power_via_quadrature(m, 0.5, phi0, scheme);
    CHECK(rel_distance(half.value, Field(std::sqrt(2.0) * phi0.values, mf)) < 1e-8);

    DeterministicRng rng(41);
    const Field v = random_field(mf, rng);
    const FieldQuadResult res = frac_power_via_quadrature(m, 0.3, v, scheme);
    const Field spectral = apply(OperatorSpec::frac_power(m, 0.3), v);
    CHECK(rel_distance(res.value, spectral) < 1e-6);

    CHECK_THROWS_AS(frac_power_via_quadrature(m, 0.0, v, scheme), std::invalid_argument);
}

TEST_CASE("log via the derivative of fractional powers") {
    const double m = 2.0;

    SUBCASE("ground mode on the circle") {
        auto mf = build_circle(32, 1.0);
        const Field phi0(mf->eigenfunctions().col(0), mf);
        const DerivativeLogResult res = log_via_derivative(m, phi0, {0.02, 0.01, 0.005, 0.0025});
        CHECK(rel_distance(res.value, Field(std::log(2.0) * phi0.values, mf)) < 1e-9);
    }
    SUBCASE("eigenvalue placed at e") {
        // Two-node graph with lambda_1 = e - m, so the shifted eigenvalue is e.
        const double w = 0.5 * (std::exp(1.0) - 2.0);
        Eigen::MatrixXd adj(2, 2);
        adj << 0, w, w, 0;
        auto mf = build_weighted_graph(adj, Eigen::VectorXd::Ones(2), {}, 1);
        const Field phi1(mf->eigenfunctions().col(1), mf);
        const DerivativeLogResult res = log_via_derivative(m, phi1, {0.02, 0.01, 0.005, 0.0025});
        // (e^s - 1)/s -> 1 as s -> 0
        CHECK(rel_distance(res.value, phi1) < 1e-9);
    }
    SUBCASE("first-order error with the predicted leading constant") {
        auto mf = build_circle(32, 1.0);
        DeterministicRng rng(43);
        const Field v = random_field(mf, rng);
        const Field log_v = apply(OperatorSpec::log(m), v);
        const Field log2_v = apply(OperatorSpec::log(m), log_v);

        auto raw_error = [&](double s) {
            const Field pow_v = apply(OperatorSpec::frac_power(m, s), v);
            const Field diff(((pow_v.values - v.values) / s) - log_v.values, mf);
            return mass_norm(diff);
        };
        const double e1 = raw_error(0.02);
        const double e2 = raw_error(0.01);
        CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.10));
        CHECK(e2 == doctest::Approx(0.005 * mass_norm(log2_v)).epsilon(0.15));
    }
    SUBCASE("observed order is first order") {
        auto mf = build_circle(32, 1.0);
        DeterministicRng rng(47);
        const Field v = random_field(mf, rng);
        const DerivativeLogResult res = log_via_derivative(m, v, {0.02, 0.01, 0.005, 0.0025});
        CHECK(res.observed_order == doctest::Approx(1.0).epsilon(0.3));
    }
    SUBCASE("step validation") {
        auto mf = build_circle(8, 1.0);
        const Field phi0(mf->eigenfunctions().col(0), mf);
        CHECK_THROWS_AS(log_via_derivative(m, phi0, {0.01, 0.02}), std::invalid_argument);
        CHECK_THROWS_AS(log_via_derivative(m, phi0, {0.6, 0.3}), std::invalid_argument);
        CHECK_THROWS_AS(log_via_derivative(m, phi0, {0.01}), std::invalid_argument);
    }
}

TEST_CASE("three-way agreement of the logarithm constructions") {
    auto mf = build_circle(32, 1.0);
    const double m = 2.0;
    QuadratureScheme scheme;
    DeterministicRng rng(53);
    for (int trial = 0; trial < 5; ++trial) {
        const Field v = random_field(mf, rng);
        const Field spectral = apply(OperatorSpec::log(m), v);
        const double denom = mass_norm(spectral);
        const FieldQuadResult quad = log_via_quadrature(m, v, scheme);
        const DerivativeLogResult deriv = log_via_derivative(m, v, {0.02, 0.01, 0.005, 0.0025});
        CHECK(mass_norm(Field(quad.value.values - spectral.values, mf)) / denom < 1e-5);
        CHECK(mass_norm(Field(deriv.value.values - spectral.values, mf)) / denom < 1e-5);
    }
}

TEST_CASE("log norm bound is controlled by the shift norm") {
    const double m = 2.0;
    // sup over modes of ln(mu)/(1+mu) is attained at lambda = 1 on the circle,
    // so the maximized ratio is N-independent.
    double ratios[2];
    int idx = 0;
    for (int n : {32, 64}) {
        auto mf = build_circle(n, 1.0);
        double best = 0.0;
        for (int k = 0; k < n; ++k) {
            const Field phi(mf->eigenfunctions().col(k), mf);
            const Field log_phi = apply(OperatorSpec::log(m), phi);
            const Field shift_phi = apply(OperatorSpec::shift(m), phi);
            best = std::max(best, mass_norm(log_phi) / (mass_norm(phi) + mass_norm(shift_phi)));
        }
        DeterministicRng rng(59);
        for (int trial = 0; trial < 30; ++trial) {
            const Field v = random_field(mf, rng);
            const Field log_v = apply(OperatorSpec::log(m), v);
            const Field shift_v = apply(OperatorSpec::shift(m), v);
            const double r = mass_norm(log_v) / (mass_norm(v) + mass_norm(shift_v));
            CHECK(r <= best + 1e-12);
        }
        ratios[idx++] = best;
    }
    CHECK(ratios[0] == doctest::Approx(ratios[1]).epsilon(1e-12));
    CHECK(ratios[0] < 0.3);
}

TEST_CASE("semigroup time derivatives converge at second order") {
    auto mf = build_circle(32, 1.0);
    const double m = 2.0;
    DeterministicRng rng(61);
    const Field u = random_field(mf, rng);
    const double t = 0.5;

    for (int j : {1, 2}) {
        const Field aju = bootstrap_apply(m, u, j);
        const Field target = semigroup_apply(m, t, aju); // (-1)^j d_t^j e^{-tA} u
        auto fd_error = [&](double h) {
            Eigen::VectorXd fd;
            if (j == 1) {
                fd = (semigroup_apply(m, t + h, u).values -
                      semigroup_apply(m, t - h, u).values) /
                     (2.0 * h);
                fd = -fd; // (-1)^1
            } else {
                fd = (semigroup_apply(m, t + h, u).values -
                      2.0 * semigroup_apply(m, t, u).values +
                      semigroup_apply(m, t - h, u).values) /
                     (h * h);
            }
            return mass_norm(Field(fd - target.values, mf));
        };
        const double e1 = fd_error(0.05);
        const double e2 = fd_error(0.025);
        const double order = std::log2(e1 / e2);
        CHECK(order == doctest::Approx(2.0).epsilon(0.15));
    }
}

TEST_CASE("gaussian bound fit and stability") {
    const double m = 2.0;
    std::vector<double> grid;
    for (int i = 0; i < 12; ++i) grid.push_back(0.05 * std::pow(10.0 / 0.05, i / 11.0));

    auto mf64 = build_circle(64, 1.0);
    const GaussianBoundReport fit = check_gaussian_bound(*mf64, m, grid, {});
    CHECK(fit.fitted);
    CHECK(fit.C > 0.0);
    CHECK(std::isfinite(fit.C));
    CHECK(fit.violations == 0);
    CHECK(fit.c == doctest::Approx(0.125));

    // diagonal reduction: at x = y the envelope is C t^{-n/2} e^{-mt}
    const Eigen::MatrixXd k = heat_kernel(*mf64, m, 0.5);
    for (int x = 0; x < 64; x += 16)
        CHECK(std::abs(k(x, x)) <=
              fit.C * std::pow(0.5, -0.5) * std::exp(-m * 0.5) * (1.0 + 1e-9));

    auto mf128 = build_circle(128, 1.0);
    const GaussianBoundReport refit = check_gaussian_bound(*mf128, m, grid, {});
    CHECK(std::abs(refit.C / fit.C - 1.0) < 0.10);

    // check mode with a supplied, slightly inflated constant
    const GaussianBoundReport given =
        check_gaussian_bound(*mf64, m, grid, std::pair{fit.C * 1.01, 0.125});
    CHECK_FALSE(given.fitted);
    CHECK(given.violations == 0);
    const GaussianBoundReport too_small =
        check_gaussian_bound(*mf64, m, grid, std::pair{fit.C * 0.5, 0.125});
    CHECK(too_small.violations > 0);
}

TEST_CASE("gaussian bound on the torus") {
    const double m = 2.0;
    std::vector<double> grid;
    for (int i = 0; i < 10; ++i) grid.push_back(0.25 * std::pow(10.0 / 0.25, i / 9.0));
    auto torus = build_flat_torus(8, 8, 2.0 * std::numbers::pi, 2.0 * std::numbers::pi);
    const GaussianBoundReport fit = check_gaussian_bound(*torus, m, grid, {});
    CHECK(fit.violations == 0);
    CHECK(fit.C > 0.0);
}
