#pragma once

#include "loglap/manifold.hpp"
#include "loglap/operators.hpp"
#include "loglap/quadrature.hpp"

#include <optional>

namespace loglap {

/// Heat kernel K(t,x,y) = sum_k e^{-t(lambda_k+m)} phi_k(x) phi_k(y).
/// m = 0 gives the kernel of the bare Laplace-Beltrami operator.
Eigen::MatrixXd heat_kernel(const SpectralManifold& mf, double m, double t);

struct HeatKernelSet {
    ManifoldPtr manifold;
    std::vector<double> times;
    std::vector<Eigen::MatrixXd> kernels;
};

HeatKernelSet compute_heat_kernels(const ManifoldPtr& mf, double m, std::vector<double> times);

/// Semigroup action e^{-tA} v through the eigenbasis; t = 0 is the identity.
Field semigroup_apply(double m, double t, const Field& v);

/// Kernel-integrated action sum_y mass(y) K(t,x,y) v(y); agrees with
/// semigroup_apply and is kept as the independent route for tests.
Field semigroup_apply_via_kernel(const Eigen::MatrixXd& kernel, const Field& v);

struct FieldQuadResult {
    Field value;
    double error_estimate = 0.0;
};

/// ln(A) v = int_0^inf (e^{-t} v - e^{-tA} v)/t dt by split quadrature; the
/// removable singularity at t = 0 is covered by the Taylor head of the
/// integrand. Throws if the estimated error exceeds the scheme's budget.
FieldQuadResult log_via_quadrature(double m, const Field& v, const QuadratureScheme& scheme);

/// A^s v = (1/Gamma(-s)) int_0^inf (e^{-tA} - I) v / t^{1+s} dt.
FieldQuadResult frac_power_via_quadrature(double m, double s, const Field& v,
                                          const QuadratureScheme& scheme);

struct DerivativeLogResult {
    Field value;               // extrapolated limit of (A^s v - v)/s as s -> 0
    double observed_order;     // expected ~1 (first order in s)
    std::vector<double> step_errors;
};

/// ln(A) v as the s -> 0 derivative of the fractional powers, extrapolated
/// over a decreasing list of exponents.
DerivativeLogResult log_via_derivative(double m, const Field& v, std::vector<double> s_steps);

struct GaussianBoundReport {
    double C = 0.0;
    double c = 0.125;
    bool fitted = false;
    long violations = 0;
    double max_ratio = 0.0; // max |K| / envelope over the grid
    double t_at_max = 0.0;
    int x_at_max = 0;
    int y_at_max = 0;
};

/// Pointwise bound |K(t,x,y)| <= C t^{-n/2} e^{-mt} e^{-c d^2(x,y)/t} on the
/// (t,x,y) grid. Without given constants, fits the smallest C at c = 1/8.
GaussianBoundReport check_gaussian_bound(const SpectralManifold& mf, double m,
                                         const std::vector<double>& t_grid,
                                         std::optional<std::pair<double, double>> given = {});

} // namespace loglap
