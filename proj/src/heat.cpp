#include "loglap/heat.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace loglap {

Eigen::MatrixXd heat_kernel(const SpectralManifold& mf, double m, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("heat kernel requires t > 0");
    if (m < 0.0) throw std::invalid_argument("mass shift must be nonnegative");
    const int n = mf.node_count();
    Eigen::VectorXd decay(n);
    for (int k = 0; k < n; ++k) decay[k] = std::exp(-t * (mf.eigenvalues()[k] + m));
    return mf.eigenfunctions() * decay.asDiagonal() * mf.eigenfunctions().transpose();
}

HeatKernelSet compute_heat_kernels(const ManifoldPtr& mf, double m, std::vector<double> times) {
    HeatKernelSet set;
    set.manifold = mf;
    set.times = std::move(times);
    set.kernels.reserve(set.times.size());
    for (double t : set.times) set.kernels.push_back(heat_kernel(*mf, m, t));
    return set;
}

Field semigroup_apply(double m, double t, const Field& v) {
    if (t < 0.0) throw std::invalid_argument("semigroup time must be nonnegative");
    if (t == 0.0) return v;
    const auto& mf = *v.manifold;
    Eigen::VectorXd coeff =
        mf.eigenfunctions().transpose() * (mf.mass().asDiagonal() * v.values);
    for (int k = 0; k < coeff.size(); ++k)
        coeff[k] *= std::exp(-t * (mf.eigenvalues()[k] + m));
    return Field(mf.eigenfunctions() * coeff, v.manifold);
}

Field semigroup_apply_via_kernel(const Eigen::MatrixXd& kernel, const Field& v) {
    return Field(kernel * (v.manifold->mass().asDiagonal() * v.values), v.manifold);
}

namespace {

// Shared skeleton for the split improper integrals over fields: head series
// on [0, head_cut], adaptive Gauss-Legendre panels up to T, tail bounded by
// the e^{-t} envelope at T.
struct SplitOutcome {
    Eigen::VectorXd value;
    double error_estimate;
};

// extra_value and extra_err carry the caller's head expansion and tail
// correction; the tail behavior differs per integral and is not generic.
template <typename Integrand>
SplitOutcome integrate_split_field(Integrand&& f, const QuadratureScheme& scheme,
                                   Eigen::VectorXd extra_value, double extra_err, double scale) {
    std::vector<Panel> panels = scheme.inner_panels();
    for (const auto& p : scheme.outer_panels()) panels.push_back(p);
    auto res = integrate_panels<Eigen::VectorXd>(f, std::move(panels), scheme.points,
                                                 scheme.max_bisections,
                                                 scheme.error_budget * scale);
    SplitOutcome out;
    out.value = extra_value + res.value;
    out.error_estimate = res.error_estimate + extra_err;
    if (out.error_estimate > scheme.error_budget * scale)
        throw std::runtime_error("quadrature error estimate exceeds the configured budget");
    return out;
}

} // namespace

FieldQuadResult log_via_quadrature(double m, const Field& v, const QuadratureScheme& scheme) {
    scheme.validate();
    const OperatorSpec shift = OperatorSpec::shift(m);
    const auto& mf = *v.manifold;
    const double mu_max = mf.eigenvalues()[mf.node_count() - 1] + m;
    const double scale = std::max(1.0, detail::vec_norm(v.values));

    // Head: integrand = (A-I)v - t (A^2-I)v/2 + t^2 (A^3-I)v/6 - ...
    const Field av = apply(shift, v);
    const Field a2v = apply(shift, av);
    const Field a3v = apply(shift, a2v);
    const double eps = scheme.head_cut;
    Eigen::VectorXd head = eps * (av.values - v.values) -
                           (eps * eps / 4.0) * (a2v.values - v.values) +
                           (eps * eps * eps / 18.0) * (a3v.values - v.values);
    const double head_err = std::pow(eps * mu_max, 4.0) / 96.0 * scale;

    auto integrand = [&](double t) -> Eigen::VectorXd {
        const Field st = semigroup_apply(m, t, v);
        return (std::exp(-t) * v.values - st.values) / t;
    };
    const double tail_err =
        detail::vec_norm(integrand(scheme.truncation)) + scheme.tail_bound() * scale;
    auto out =
        integrate_split_field(integrand, scheme, std::move(head), head_err + tail_err, scale);
    return {Field(std::move(out.value), v.manifold), out.error_estimate};
}

FieldQuadResult frac_power_via_quadrature(double m, double s, const Field& v,
                                          const QuadratureScheme& scheme) {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("s must lie in (0,1)");
    scheme.validate();
    const OperatorSpec shift = OperatorSpec::shift(m);
    const auto& mf = *v.manifold;
    const double mu_max = mf.eigenvalues()[mf.node_count() - 1] + m;
    const double scale = std::max(1.0, detail::vec_norm(v.values)) * std::pow(mu_max, s);

    const Field av = apply(shift, v);
    const Field a2v = apply(shift, av);
    const Field a3v = apply(shift, a2v);
    const double eps = scheme.head_cut;
    Eigen::VectorXd head = -std::pow(eps, 1.0 - s) / (1.0 - s) * av.values +
                           std::pow(eps, 2.0 - s) / (2.0 * (2.0 - s)) * a2v.values -
                           std::pow(eps, 3.0 - s) / (6.0 * (3.0 - s)) * a3v.values;
    const double head_err = std::pow(mu_max, 4.0) * std::pow(eps, 4.0 - s) / (24.0 * (4.0 - s)) *
                            std::max(1.0, detail::vec_norm(v.values));

    auto integrand = [&](double t) -> Eigen::VectorXd {
        const Field st = semigroup_apply(m, t, v);
        return (st.values - v.values) / std::pow(t, 1.0 + s);
    };
    // The -v part of the integrand has an algebraic tail with a closed form;
    // the semigroup remainder beyond T decays like e^{-mT}.
    const double T = scheme.truncation;
    const Eigen::VectorXd tail_value = -std::pow(T, -s) / s * v.values;
    const double tail_err = std::exp(-T * m) * std::pow(T, -s) / s *
                                std::max(1.0, detail::vec_norm(v.values)) +
                            scheme.tail_bound();
    const double gamma = gamma_negative(s);
    auto out = integrate_split_field(integrand, scheme, head + tail_value,
                                     head_err + tail_err, scale * std::abs(gamma));
    out.value /= gamma;
    out.error_estimate /= std::abs(gamma);
    return {Field(std::move(out.value), v.manifold), out.error_estimate};
}

DerivativeLogResult log_via_derivative(double m, const Field& v, std::vector<double> s_steps) {
    if (s_steps.size() < 2) throw std::invalid_argument("need at least two exponent steps");
    for (size_t i = 0; i < s_steps.size(); ++i) {
        if (!(s_steps[i] > 0.0 && s_steps[i] < 0.5))
            throw std::invalid_argument("exponent steps must lie in (0, 1/2)");
        if (i > 0 && !(s_steps[i] < s_steps[i - 1]))
            throw std::invalid_argument("exponent steps must decrease toward 0");
    }

    const auto& mf = *v.manifold;
    Eigen::VectorXd coeff =
        mf.eigenfunctions().transpose() * (mf.mass().asDiagonal() * v.values);

    // (A^s v - v)/s per mode, expm1 keeps the small-s cancellation exact.
    const int n_steps = static_cast<int>(s_steps.size());
    std::vector<Eigen::VectorXd> samples(n_steps);
    for (int i = 0; i < n_steps; ++i) {
        const double s = s_steps[i];
        Eigen::VectorXd c = coeff;
        for (int k = 0; k < c.size(); ++k)
            c[k] *= std::expm1(s * std::log(mf.eigenvalues()[k] + m)) / s;
        samples[i] = std::move(c);
    }

    // Neville polynomial extrapolation to s = 0.
    std::vector<Eigen::VectorXd> table = samples;
    for (int level = 1; level < n_steps; ++level)
        for (int i = n_steps - 1; i >= level; --i) {
            const double si = s_steps[i], sj = s_steps[i - level];
            table[i] = (sj * table[i] - si * table[i - 1]) / (sj - si);
        }
    Eigen::VectorXd limit_coeff = table[n_steps - 1];

    DerivativeLogResult result;
    result.value = Field(mf.eigenfunctions() * limit_coeff, v.manifold);

    const double limit_norm = std::max(limit_coeff.norm(), 1e-300);
    result.step_errors.resize(n_steps);
    for (int i = 0; i < n_steps; ++i)
        result.step_errors[i] = (samples[i] - limit_coeff).norm() / limit_norm;

    double order_sum = 0.0;
    int order_count = 0;
    for (int i = 0; i + 1 < n_steps; ++i) {
        if (result.step_errors[i + 1] <= 0.0 || result.step_errors[i] <= 0.0) continue;
        order_sum += std::log(result.step_errors[i] / result.step_errors[i + 1]) /
                     std::log(s_steps[i] / s_steps[i + 1]);
        ++order_count;
    }
    result.observed_order = order_count ? order_sum / order_count : 0.0;
    return result;
}

GaussianBoundReport check_gaussian_bound(const SpectralManifold& mf, double m,
                                         const std::vector<double>& t_grid,
                                         std::optional<std::pair<double, double>> given) {
    if (t_grid.empty()) throw std::invalid_argument("empty t grid");
    GaussianBoundReport report;
    report.fitted = !given.has_value();
    report.c = given ? given->second : 0.125;
    const double n_half = 0.5 * mf.dimension();

    double max_log_ratio = -std::numeric_limits<double>::infinity();
    for (double t : t_grid) {
        const Eigen::MatrixXd kernel = heat_kernel(mf, m, t);
        for (int x = 0; x < mf.node_count(); ++x)
            for (int y = 0; y < mf.node_count(); ++y) {
                const double k = std::abs(kernel(x, y));
                if (k == 0.0) continue;
                const double d = mf.distances()(x, y);
                const double log_ratio =
                    std::log(k) + n_half * std::log(t) + m * t + report.c * d * d / t;
                if (log_ratio > max_log_ratio) {
                    max_log_ratio = log_ratio;
                    report.t_at_max = t;
                    report.x_at_max = x;
                    report.y_at_max = y;
                }
            }
    }
    report.max_ratio = std::exp(max_log_ratio);
    report.C = given ? given->first : report.max_ratio;

    const double log_C = std::log(report.C) + 1e-12; // ulp slack at the fit argmax
    for (double t : t_grid) {
        const Eigen::MatrixXd kernel = heat_kernel(mf, m, t);
        for (int x = 0; x < mf.node_count(); ++x)
            for (int y = 0; y < mf.node_count(); ++y) {
                const double k = std::abs(kernel(x, y));
                if (k == 0.0) continue;
                const double d = mf.distances()(x, y);
                if (std::log(k) + n_half * std::log(t) + m * t + report.c * d * d / t > log_C)
                    ++report.violations;
            }
    }
    return report;
}

} // namespace loglap
