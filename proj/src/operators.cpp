#include "loglap/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace loglap {

OperatorSpec::OperatorSpec(OpKind k, double mass_shift, double param) : kind(k), m(mass_shift) {
    if (!(m > 1.0)) throw std::invalid_argument("operator spec requires m > 1");
    switch (kind) {
        case OpKind::FracPower:
            s = param;
            if (!(s > 0.0 && s < 1.0))
                throw std::invalid_argument("fractional power exponent must lie in (0,1)");
            break;
        case OpKind::HeatExp:
            t = param;
            if (!(t > 0.0)) throw std::invalid_argument("heat time must be positive");
            break;
        default:
            break;
    }
}

double spectral_multiplier(const OperatorSpec& spec, double lambda) {
    if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
    const double mu = lambda + spec.m;
    switch (spec.kind) {
        case OpKind::Shift: return mu;
        case OpKind::Log: return std::log(mu);
        case OpKind::LogLaplacian: return mu * std::log(mu);
        case OpKind::FracPower: return std::pow(mu, spec.s);
        case OpKind::HeatExp: return std::exp(-spec.t * mu);
        case OpKind::InvLogLaplacian: return 1.0 / (mu * std::log(mu));
        case OpKind::InvShift: return 1.0 / mu;
    }
    throw std::logic_error("unknown operator kind");
}

Field project(const Field& u, int group) {
    const auto& mf = *u.manifold;
    const auto& groups = mf.eigen_groups();
    if (group < 0 || group >= static_cast<int>(groups.size()))
        throw std::invalid_argument("eigenvalue group index out of range");
    const auto [begin, end] = groups[group];
    const auto phi = mf.eigenfunctions().middleCols(begin, end - begin);
    const Eigen::VectorXd coeff = phi.transpose() * (mf.mass().asDiagonal() * u.values);
    return Field(phi * coeff, u.manifold);
}

Field apply(const OperatorSpec& spec, const Field& u) {
    const auto& mf = *u.manifold;
    Eigen::VectorXd coeff =
        mf.eigenfunctions().transpose() * (mf.mass().asDiagonal() * u.values);
    for (int k = 0; k < coeff.size(); ++k)
        coeff[k] *= spectral_multiplier(spec, mf.eigenvalues()[k]);
    return Field(mf.eigenfunctions() * coeff, u.manifold);
}

Eigen::MatrixXd assemble(const OperatorSpec& spec, const SpectralManifold& mf) {
    const int n = mf.node_count();
    if (n > 512) throw std::invalid_argument("dense assembly limited to N <= 512");
    Eigen::VectorXd mult(n);
    for (int k = 0; k < n; ++k) mult[k] = spectral_multiplier(spec, mf.eigenvalues()[k]);
    return mf.eigenfunctions() * mult.asDiagonal() * mf.eigenfunctions().transpose() *
           mf.mass().asDiagonal();
}

Field solve_direct(double m, const Field& f, const ObservationSet& support) {
    if (f.manifold != support.manifold)
        throw std::invalid_argument("source and observation set live on different manifolds");
    for (int i = 0; i < f.size(); ++i)
        if (f.values[i] != 0.0 && !support.contains(i))
            throw std::invalid_argument("source not supported in the observation set");

    const double fnorm = mass_norm(f);
    if (fnorm == 0.0) return zero_field(f.manifold);

    Field u = apply(OperatorSpec::inv_log_laplacian(m), f);
    const Field residual_field(apply(OperatorSpec::log_laplacian(m), u).values - f.values,
                               f.manifold);
    const double residual = mass_norm(residual_field) / fnorm;
    if (residual > 1e-10)
        throw std::runtime_error("direct solve residual exceeds 1e-10");
    return u;
}

Field bootstrap_apply(double m, const Field& u, int k) {
    if (k < 0) throw std::invalid_argument("bootstrap order must be nonnegative");
    Field out = u;
    const OperatorSpec shift = OperatorSpec::shift(m);
    for (int i = 0; i < k; ++i) out = apply(shift, out);
    return out;
}

} // namespace loglap
