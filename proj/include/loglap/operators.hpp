#pragma once

#include "loglap/manifold.hpp"

namespace loglap {

enum class OpKind {
    Shift,            // A = -Laplacian + m*I
    Log,              // ln A
    LogLaplacian,     // A ln A
    FracPower,        // A^s, s in (0,1)
    HeatExp,          // exp(-t A)
    InvLogLaplacian,  // (A ln A)^{-1}
    InvShift,         // A^{-1}
};

/// Scalar spectral multiplier selecting which function of A to apply.
/// m > 1 keeps (lambda+m) ln(lambda+m) strictly positive for all lambda >= 0,
/// which is what makes every inverse below well defined.
struct OperatorSpec {
    OpKind kind;
    double m;
    double s = 0.0; // FracPower exponent
    double t = 0.0; // HeatExp time

    OperatorSpec(OpKind k, double mass_shift, double param = 0.0);

    static OperatorSpec shift(double m) { return {OpKind::Shift, m}; }
    static OperatorSpec log(double m) { return {OpKind::Log, m}; }
    static OperatorSpec log_laplacian(double m) { return {OpKind::LogLaplacian, m}; }
    static OperatorSpec frac_power(double m, double s) { return {OpKind::FracPower, m, s}; }
    static OperatorSpec heat_exp(double m, double t) { return {OpKind::HeatExp, m, t}; }
    static OperatorSpec inv_log_laplacian(double m) { return {OpKind::InvLogLaplacian, m}; }
    static OperatorSpec inv_shift(double m) { return {OpKind::InvShift, m}; }
};

double spectral_multiplier(const OperatorSpec& spec, double lambda);

/// Mass-orthogonal projection onto the eigenspace with group index k.
Field project(const Field& u, int group);

/// sum_k multiplier(lambda_k) pi_k(u), computed through the eigenbasis.
Field apply(const OperatorSpec& spec, const Field& u);

/// Dense matrix of the operator acting on nodal values (Phi D Phi^T M).
/// Only assembled at desk scale; larger manifolds stay matrix-free.
Eigen::MatrixXd assemble(const OperatorSpec& spec, const SpectralManifold& mf);

/// Solves (A ln A) u = f for f supported in O; the spectral inverse makes the
/// solution unique. Throws if the relative residual exceeds 1e-10.
Field solve_direct(double m, const Field& f, const ObservationSet& support);

/// A^k u via repeated shift application.
Field bootstrap_apply(double m, const Field& u, int k);

} // namespace loglap
