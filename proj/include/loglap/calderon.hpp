#pragma once

#include "loglap/heat.hpp"
#include "loglap/manifold.hpp"
#include "loglap/operators.hpp"
#include "loglap/quadrature.hpp"

#include <vector>

namespace loglap {

/// Two manifolds with a declared positional bijection between their
/// observation nodes. The correspondence is always given explicitly,
/// never inferred.
struct PairCorrespondence {
    ManifoldPtr first;
    ManifoldPtr second;
    std::vector<int> first_nodes;
    std::vector<int> second_nodes;
    double m = 2.0;

    PairCorrespondence(ManifoldPtr a, ManifoldPtr b, std::vector<int> nodes_a,
                       std::vector<int> nodes_b, double mass_shift);
    int size() const { return static_cast<int>(first_nodes.size()); }
};

/// The pair (u|_O, L u|_O) together with the bootstrap traces (A^{k-1} u)|_O.
struct CauchyData {
    Field source;
    Field solution;
    Eigen::VectorXd trace_u;
    Eigen::VectorXd trace_lu;
    Eigen::MatrixXd extended_traces; // row k-1 holds (A^{k-1} u)|_O
};

CauchyData make_cauchy_data(double m, const Field& f, const ObservationSet& obs, int k_max);

/// phi(t, .)|_O = (e^{-tA_1} u_1 - e^{-tA_2} u_2) read through the correspondence.
Eigen::VectorXd difference_trajectory(const PairCorrespondence& pair, const Field& u1,
                                      const Field& u2, double t);

struct MomentOptions {
    int k_max = 4;
    double t_min = 0.05;
    double truncation = 40.0;
    int points = 12;
    int max_bisections = 24;
    double fd_step = 0.02;       // base step for the finite-difference form
    bool declared_equal = true;  // enables the vanishing-order diagnostic
};

struct MomentEntry {
    int k = 0;
    int position = 0;
    double direct = 0.0;          // int phi / t^{1+k}
    double semigroup_form = 0.0;  // (-1)^k/k! int (e^{-tA_1}A_1^k u_1 - e^{-tA_2}A_2^k u_2)/t
    double derivative_form = 0.0; // (1/k!) int d_t^k phi / t  via finite differences
    double err_direct = 0.0;
    double err_semigroup = 0.0;
    double err_derivative = 0.0;
    bool forms_agree = true;
};

struct MomentReport {
    std::vector<MomentEntry> entries;         // (k, position) rows, k-major
    std::vector<bool> vanishing_order_ok;     // per k, index k-1
    std::vector<double> endpoint_low;         // per k: max_x |phi(t_min,x)| / t_min^{1+k}
    std::vector<double> endpoint_high;        // per k: max_x |phi(T,x)| / T^{1+k}
    double phi_sup = 0.0;
    double noise_floor = 0.0;

    double max_abs_direct(int k) const;
};

/// All three moment forms over [t_min, T] on the shared panel set, with
/// estimated errors that include the double-precision floor of the t^{-1-k}
/// weight. The three forms are normalized to the direct convention so they
/// can be compared entrywise.
MomentReport moment_integrals(const PairCorrespondence& pair, const CauchyData& data1,
                              const CauchyData& data2, const MomentOptions& opt);

struct HardyResult {
    double lhs = 0.0;   // int |phi/t|^2
    double rhs = 0.0;   // 4 int |phi'|^2
    double ratio = 0.0; // lhs / rhs
};

/// Evaluates both sides of the Hardy inequality from uniform samples.
/// Requires phi to vanish at 0; throws if step-halving moves either side
/// by more than 10%.
HardyResult hardy_check(const std::vector<double>& t, const std::vector<double>& phi);

struct MomentDecayReport {
    double psi_l2 = 0.0;               // ||phi(1/t)||_{L2} = sqrt(int |phi/t|^2)
    std::vector<double> moments;       // M_1..M_kmax from the samples
    std::vector<bool> cutoff_limited;  // integrand still growing at the grid start
    double series_bound = 0.0;         // sum_k |M_k| / (k-1)!  (power series at r = 1)
    double phi_sup = 0.0;
};

MomentDecayReport moment_decay_report(const std::vector<double>& t,
                                      const std::vector<double>& phi, int k_max);

struct KernelRecoveryRow {
    double t = 0.0;
    double pair_difference = 0.0;      // max |K1 - K2| over O x O, reconstructed
    double recon_error_first = 0.0;    // reconstruction vs spectral kernel
    double recon_error_second = 0.0;
    double composition_sup = 0.0;      // split-integral combination, max over O
    double composition_residual = 0.0; // quadrature vs spectral cross-check
};

struct KernelRecoveryReport {
    std::vector<KernelRecoveryRow> rows;
    double shift_factorization_error = 0.0; // max rel. |K_A - e^{-mt} K_Delta|
};

/// Reconstructs the kernels on O x O from semigroup actions on a spanning
/// source basis, checks the split-integral composition identity at each t,
/// and verifies the e^{-mt} factorization against the bare Laplacian kernel.
/// Throws if the basis does not span the fields on O.
KernelRecoveryReport recover_heat_kernel_equality(const PairCorrespondence& pair,
                                                  const std::vector<Eigen::VectorXd>& basis_on_obs,
                                                  const std::vector<double>& t_grid,
                                                  const QuadratureScheme& scheme);

/// Mass-normalized indicator basis (one delta per observation node).
std::vector<Eigen::VectorXd> indicator_basis(int obs_size);

} // namespace loglap
