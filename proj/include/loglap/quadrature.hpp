#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace loglap {

struct GaussRule {
    std::vector<double> nodes;   // on [-1, 1]
    std::vector<double> weights; // positive, sum to 2
};

/// n-point Gauss-Legendre rule, exact for polynomials of degree 2n-1.
const GaussRule& gauss_legendre(int n);

struct Panel {
    double a, b;
    int depth = 0;
};

/// Node/weight data for the split improper integrals: the singular end is
/// covered by a series head on [0, head_cut], Gauss-Legendre panels run
/// geometrically over (head_cut, 1] and [1, T], and the tail beyond T is
/// bounded by exp(-T)/T.
struct QuadratureScheme {
    double head_cut = 1e-6;    // integrand below this is evaluated by its limit expansion
    double inner_start = 1e-6; // first panel edge (= head_cut, or t_min for truncated integrals)
    double split_point = 1.0;
    double truncation = 40.0; // T >= 30
    int points = 12;          // Gauss-Legendre points per panel
    int max_bisections = 40;  // refinement budget for adaptive bisection
    double error_budget = 1e-8; // relative to the integrand scale; exceeding it is an error

    QuadratureScheme() = default;

    void validate() const;
    double tail_bound() const { return std::exp(-truncation) / truncation; }

    /// Geometric panels (ratio 2) from inner_start up to split_point.
    std::vector<Panel> inner_panels() const;
    /// Geometric panels (ratio 2) from split_point up to truncation.
    std::vector<Panel> outer_panels() const;

    std::vector<double> inner_nodes() const;
    std::vector<double> inner_weights() const;
    std::vector<double> outer_nodes() const;
    std::vector<double> outer_weights() const;
};

namespace detail {
inline double vec_norm(double x) { return std::abs(x); }
inline double vec_norm(const Eigen::VectorXd& x) { return x.size() ? x.cwiseAbs().maxCoeff() : 0.0; }
inline void vec_zero(double& x) { x = 0.0; }
inline void vec_zero(Eigen::VectorXd& x) { x.setZero(); }
} // namespace detail

template <typename T>
struct QuadResult {
    T value;
    double error_estimate = 0.0;
    int evaluations = 0;
};

/// Integrates f over the given panels with per-panel embedded error control:
/// each panel is evaluated with the scheme's rule and its half-order rule,
/// and the worst panels are bisected until the summed discrepancy falls
/// below abs_tol or the bisection budget is spent.
template <typename T, typename F>
QuadResult<T> integrate_panels(F&& f, std::vector<Panel> panels, int points, int max_bisections,
                               double abs_tol) {
    if (points < 4) points = 4;
    const GaussRule& fine = gauss_legendre(points);
    const GaussRule& coarse = gauss_legendre(points / 2);

    struct Entry {
        Panel panel;
        T fine_value;
        double err;
    };

    auto eval_rule = [&](const GaussRule& rule, const Panel& p) -> T {
        const double mid = 0.5 * (p.a + p.b);
        const double half = 0.5 * (p.b - p.a);
        T out = f(mid + half * rule.nodes[0]);
        out *= half * rule.weights[0];
        for (size_t i = 1; i < rule.nodes.size(); ++i) {
            T v = f(mid + half * rule.nodes[i]);
            v *= half * rule.weights[i];
            out += v;
        }
        return out;
    };

    int evals = 0;
    auto make_entry = [&](const Panel& p) {
        Entry e;
        e.panel = p;
        e.fine_value = eval_rule(fine, p);
        T coarse_value = eval_rule(coarse, p);
        evals += points + points / 2;
        coarse_value -= e.fine_value;
        e.err = detail::vec_norm(coarse_value);
        return e;
    };

    std::vector<Entry> entries;
    entries.reserve(panels.size());
    for (const auto& p : panels) entries.push_back(make_entry(p));

    int splits = 0;
    while (splits < max_bisections) {
        double total_err = 0.0;
        size_t worst = 0;
        for (size_t i = 0; i < entries.size(); ++i) {
            total_err += entries[i].err;
            if (entries[i].err > entries[worst].err) worst = i;
        }
        if (total_err <= 0.5 * abs_tol || entries[worst].err == 0.0) break;
        const Panel p = entries[worst].panel;
        if (p.depth >= 28) break;
        const double mid = 0.5 * (p.a + p.b);
        entries[worst] = make_entry({p.a, mid, p.depth + 1});
        entries.push_back(make_entry({mid, p.b, p.depth + 1}));
        ++splits;
    }

    QuadResult<T> result;
    result.value = entries.front().fine_value;
    result.error_estimate = entries.front().err;
    for (size_t i = 1; i < entries.size(); ++i) {
        result.value += entries[i].fine_value;
        result.error_estimate += entries[i].err;
    }
    result.evaluations = evals;
    return result;
}

/// Full-interval scalar quadrature of ln(lambda) = int_0^inf (e^{-t}-e^{-t lambda})/t dt.
double log_scalar_via_quadrature(double lambda, const QuadratureScheme& scheme);

/// Scalar quadrature of lambda^s = (1/Gamma(-s)) int_0^inf (e^{-t lambda}-1)/t^{1+s} dt,
/// with Gamma(-s) = Gamma(1-s)/(-s).
double frac_power_scalar_via_quadrature(double lambda, double s, const QuadratureScheme& scheme);

double gamma_negative(double s); // Gamma(-s) for s in (0,1)

} // namespace loglap
