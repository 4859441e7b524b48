#include "loglap/quadrature.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numbers>

namespace loglap {

namespace {

GaussRule compute_gauss_legendre(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Newton iteration from the Chebyshev-based initial guess.
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double dz = -p1 / pp;
            z += dz;
            if (std::abs(dz) < 1e-15) break;
        }
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = rule.weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
    return rule;
}

std::vector<Panel> geometric_panels(double a, double b) {
    std::vector<Panel> panels;
    double left = a;
    while (left < b) {
        double right = std::min(2.0 * left, b);
        if (b - right < 1e-14 * b) right = b;
        panels.push_back({left, right});
        left = right;
    }
    return panels;
}

} // namespace

const GaussRule& gauss_legendre(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
    return it->second;
}

void QuadratureScheme::validate() const {
    if (!(head_cut > 0.0 && head_cut <= 1e-3))
        throw std::invalid_argument("head_cut must lie in (0, 1e-3]");
    if (!(inner_start > 0.0 && inner_start < split_point))
        throw std::invalid_argument("inner_start must lie in (0, split_point)");
    if (!(truncation >= 30.0)) throw std::invalid_argument("truncation T must be >= 30");
    if (!(split_point > 0.0 && split_point < truncation))
        throw std::invalid_argument("split_point must lie in (0, T)");
    if (points < 4) throw std::invalid_argument("at least 4 quadrature points per panel");
    if (!(error_budget > 0.0)) throw std::invalid_argument("error budget must be positive");
}

std::vector<Panel> QuadratureScheme::inner_panels() const {
    return geometric_panels(inner_start, split_point);
}

std::vector<Panel> QuadratureScheme::outer_panels() const {
    return geometric_panels(split_point, truncation);
}

namespace {
std::vector<double> flatten(const std::vector<Panel>& panels, int points, bool weights) {
    const GaussRule& rule = gauss_legendre(points);
    std::vector<double> out;
    for (const auto& p : panels) {
        const double mid = 0.5 * (p.a + p.b);
        const double half = 0.5 * (p.b - p.a);
        for (size_t i = 0; i < rule.nodes.size(); ++i)
            out.push_back(weights ? half * rule.weights[i] : mid + half * rule.nodes[i]);
    }
    return out;
}
} // namespace

std::vector<double> QuadratureScheme::inner_nodes() const { return flatten(inner_panels(), points, false); }
std::vector<double> QuadratureScheme::inner_weights() const { return flatten(inner_panels(), points, true); }
std::vector<double> QuadratureScheme::outer_nodes() const { return flatten(outer_panels(), points, false); }
std::vector<double> QuadratureScheme::outer_weights() const { return flatten(outer_panels(), points, true); }

double gamma_negative(double s) {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("s must lie in (0,1)");
    return std::tgamma(1.0 - s) / (-s);
}

double log_scalar_via_quadrature(double lambda, const QuadratureScheme& scheme) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    scheme.validate();

    // Head on [0, eps]: (e^{-t}-e^{-t*lambda})/t = (lambda-1) - t(lambda^2-1)/2! ...
    // integrated term by term; remainder is O((eps*lambda)^4).
    const double eps = scheme.head_cut;
    const double l2 = lambda * lambda, l3 = l2 * lambda;
    double head = (lambda - 1.0) * eps - (l2 - 1.0) * eps * eps / 4.0 +
                  (l3 - 1.0) * eps * eps * eps / 18.0;
    const double head_err = std::pow(eps * std::max(lambda, 1.0), 4.0) / 96.0;

    auto integrand = [lambda](double t) {
        return (std::expm1(-t) - std::expm1(-t * lambda)) / t;
    };
    std::vector<Panel> panels = scheme.inner_panels();
    for (const auto& p : scheme.outer_panels()) panels.push_back(p);

    const double scale = std::max(1.0, std::abs(std::log(lambda)));
    auto res = integrate_panels<double>(integrand, std::move(panels), scheme.points,
                                        scheme.max_bisections, scheme.error_budget * scale);
    const double tail = std::abs(integrand(scheme.truncation)) + scheme.tail_bound();
    const double total_err = res.error_estimate + head_err + tail;
    if (total_err > scheme.error_budget * scale)
        throw std::runtime_error("quadrature error estimate exceeds the configured budget");
    return head + res.value;
}

double frac_power_scalar_via_quadrature(double lambda, double s, const QuadratureScheme& scheme) {
    if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("s must lie in (0,1)");
    scheme.validate();
    if (lambda == 0.0) return 0.0;

    // Head: (e^{-t*lambda}-1)/t^{1+s} = -lambda t^{-s} + lambda^2 t^{1-s}/2 - ...
    const double eps = scheme.head_cut;
    const double head = -lambda * std::pow(eps, 1.0 - s) / (1.0 - s) +
                        lambda * lambda * std::pow(eps, 2.0 - s) / (2.0 * (2.0 - s)) -
                        lambda * lambda * lambda * std::pow(eps, 3.0 - s) / (6.0 * (3.0 - s));
    const double head_err =
        std::pow(lambda, 4.0) * std::pow(eps, 4.0 - s) / (24.0 * (4.0 - s));

    auto integrand = [lambda, s](double t) {
        return std::expm1(-t * lambda) / std::pow(t, 1.0 + s);
    };
    std::vector<Panel> panels = scheme.inner_panels();
    for (const auto& p : scheme.outer_panels()) panels.push_back(p);

    const double scale = std::max(1.0, std::pow(lambda, s));
    const double gamma = std::abs(gamma_negative(s));
    auto res = integrate_panels<double>(integrand, std::move(panels), scheme.points,
                                        scheme.max_bisections, scheme.error_budget * scale * gamma);
    // The -1 part of the integrand has an algebraic tail with a closed form;
    // the e^{-t lambda} remainder beyond T is exponentially small.
    const double T = scheme.truncation;
    const double tail_value = -std::pow(T, -s) / s;
    const double tail_err = std::exp(-T * lambda) * std::pow(T, -s) / s + scheme.tail_bound();
    const double total_err = (res.error_estimate + head_err + tail_err) / gamma;
    if (total_err > scheme.error_budget * scale)
        throw std::runtime_error("quadrature error estimate exceeds the configured budget");
    return (head + res.value + tail_value) / gamma_negative(s);
}

} // namespace loglap
