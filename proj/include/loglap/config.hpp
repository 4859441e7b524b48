#pragma once

#include "loglap/calderon.hpp"
#include "loglap/manifold.hpp"
#include "loglap/quadrature.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace loglap {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ExperimentKind {
    CalculusEquivalence,
    GaussianBound,
    Moments,
    KernelRecovery,
    Distinguishability,
};

std::string kind_name(ExperimentKind kind);
ExperimentKind kind_from_name(const std::string& name);

/// Builds a manifold from its structured description:
///   {"kind":"circle","nodes":N,"radius":r}
///   {"kind":"torus","nodes1":N1,"nodes2":N2,"length1":L1,"length2":L2}
///   {"kind":"graph","adjacency":[[..]],"mass":[..],"distances":[[..]]?,"dimension":n}
///   {"kind":"permuted","base":{..},"permutation":[..] | "rotation":k}
ManifoldPtr manifold_from_json(const nlohmann::json& spec);

struct SourceSpec {
    std::string type = "bump"; // "bump" | "coefficients"
    int node_position = 0;     // bump center, as an index into the observation set
    double width = 1.0;        // bump width in geodesic distance
    std::vector<double> coefficients; // nodal values on the observation positions
};

struct PairSpec {
    ManifoldPtr first;
    ManifoldPtr second;
    std::vector<int> observation_first;
    std::vector<int> observation_second;
    bool declared_equal = true;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::CalculusEquivalence;
    double m = 2.0;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string output_dir = ".";
    double tolerance_scale = 1.0;

    ManifoldPtr manifold;                 // single-manifold experiments
    ManifoldPtr refined_manifold;         // gaussian-bound stability companion
    std::optional<PairSpec> pair;         // pair experiments
    std::vector<int> observation;         // shared node set for family experiments
    SourceSpec source;
    QuadratureScheme scheme;
    MomentOptions moments;
    std::vector<double> t_grid;
    std::vector<double> derivative_steps = {0.02, 0.01, 0.005, 0.0025};
    int field_count = 20;
    double hardy_dt = 0.01;
    double hardy_span = 20.0;
    std::vector<double> family_ratios;    // distinguishability
    double stability_tol = 0.15;          // gaussian-bound N-doubling band

    nlohmann::json echo; // the raw document, replayed into every summary
};

/// Parses and validates; throws ParseError for malformed documents and
/// ValidationError for well-formed ones that violate the contract
/// (e.g. "m > 1 required").
ExperimentConfig load_config(const std::string& path);
ExperimentConfig config_from_json(const nlohmann::json& doc);

/// Resolves the source description into a concrete field supported on the
/// observation nodes. Bump profiles use geodesic distances of the profile
/// manifold so paired sources match positionally.
Eigen::VectorXd source_values_on_observation(const SourceSpec& source,
                                             const SpectralManifold& profile_manifold,
                                             const std::vector<int>& observation_nodes);

Field lift_to_field(const ManifoldPtr& mf, const std::vector<int>& nodes,
                    const Eigen::VectorXd& values_on_obs);

} // namespace loglap
