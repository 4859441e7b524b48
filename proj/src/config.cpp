#include "loglap/config.hpp"

#include <cmath>
#include <fstream>

namespace loglap {

std::string kind_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::CalculusEquivalence: return "calculus-equivalence";
        case ExperimentKind::GaussianBound: return "gaussian-bound";
        case ExperimentKind::Moments: return "moments";
        case ExperimentKind::KernelRecovery: return "kernel-recovery";
        case ExperimentKind::Distinguishability: return "distinguishability";
    }
    throw std::logic_error("unknown experiment kind");
}

ExperimentKind kind_from_name(const std::string& name) {
    if (name == "calculus-equivalence") return ExperimentKind::CalculusEquivalence;
    if (name == "gaussian-bound") return ExperimentKind::GaussianBound;
    if (name == "moments") return ExperimentKind::Moments;
    if (name == "kernel-recovery") return ExperimentKind::KernelRecovery;
    if (name == "distinguishability") return ExperimentKind::Distinguishability;
    throw ValidationError("unrecognized experiment kind: " + name);
}

namespace {

template <typename T>
T require(const nlohmann::json& node, const std::string& key) {
    if (!node.contains(key)) throw ValidationError("missing config key: " + key);
    try {
        return node.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ValidationError("config key has wrong type: " + key);
    }
}

template <typename T>
T optional_or(const nlohmann::json& node, const std::string& key, T fallback) {
    if (!node.contains(key)) return fallback;
    try {
        return node.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ValidationError("config key has wrong type: " + key);
    }
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& node) {
    if (!node.is_array() || node.empty()) throw ValidationError("expected a matrix");
    const int rows = static_cast<int>(node.size());
    const int cols = static_cast<int>(node.at(0).size());
    Eigen::MatrixXd mat(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(node.at(i).size()) != cols)
            throw ValidationError("ragged matrix rows");
        for (int j = 0; j < cols; ++j) mat(i, j) = node.at(i).at(j).get<double>();
    }
    return mat;
}

} // namespace

namespace {
ManifoldPtr manifold_from_json_impl(const nlohmann::json& spec);
}

ManifoldPtr manifold_from_json(const nlohmann::json& spec) {
    try {
        return manifold_from_json_impl(spec);
    } catch (const ValidationError&) {
        throw;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("manifold description: ") + e.what());
    } catch (const std::exception& e) {
        throw ValidationError(std::string("manifold: ") + e.what());
    }
}

namespace {
ManifoldPtr manifold_from_json_impl(const nlohmann::json& spec) {
    const std::string kind = require<std::string>(spec, "kind");
    const std::string label = optional_or<std::string>(spec, "label", "");
    if (kind == "circle") {
        return build_circle(require<int>(spec, "nodes"), require<double>(spec, "radius"), label);
    }
    if (kind == "torus") {
        return build_flat_torus(require<int>(spec, "nodes1"), require<int>(spec, "nodes2"),
                                require<double>(spec, "length1"), require<double>(spec, "length2"),
                                label);
    }
    if (kind == "graph") {
        Eigen::MatrixXd adjacency = matrix_from_json(spec.at("adjacency"));
        std::vector<double> mass_vec = require<std::vector<double>>(spec, "mass");
        Eigen::VectorXd mass = Eigen::Map<Eigen::VectorXd>(mass_vec.data(), mass_vec.size());
        std::optional<Eigen::MatrixXd> distances;
        if (spec.contains("distances")) distances = matrix_from_json(spec.at("distances"));
        return build_weighted_graph(adjacency, mass, std::move(distances),
                                    optional_or<int>(spec, "dimension", 1), label);
    }
    if (kind == "permuted") {
        ManifoldPtr base = manifold_from_json_impl(spec.at("base"));
        std::vector<int> perm;
        if (spec.contains("permutation")) {
            perm = require<std::vector<int>>(spec, "permutation");
        } else if (spec.contains("rotation")) {
            const int shift = require<int>(spec, "rotation");
            const int n = base->node_count();
            perm.resize(n);
            for (int i = 0; i < n; ++i) perm[i] = ((i + shift) % n + n) % n;
        } else {
            throw ValidationError("permuted manifold needs a permutation or rotation");
        }
        return permuted_copy(base, perm, label);
    }
    throw ValidationError("unrecognized manifold kind: " + kind);
}
} // namespace

ExperimentConfig config_from_json(const nlohmann::json& doc) {
    ExperimentConfig cfg;
    cfg.echo = doc;
    cfg.kind = kind_from_name(require<std::string>(doc, "kind"));
    cfg.m = require<double>(doc, "m");
    if (!(cfg.m > 1.0)) throw ValidationError("m > 1 required");
    cfg.seed = optional_or<std::uint64_t>(doc, "seed", 1);
    cfg.threads = optional_or<int>(doc, "threads", 1);
    if (cfg.threads < 1) throw ValidationError("threads must be >= 1");
    cfg.output_dir = optional_or<std::string>(doc, "output_dir", ".");
    cfg.tolerance_scale = optional_or<double>(doc, "tolerance_scale", 1.0);
    if (!(cfg.tolerance_scale > 0.0)) throw ValidationError("tolerance_scale must be positive");

    if (doc.contains("quadrature")) {
        const auto& q = doc.at("quadrature");
        cfg.scheme.head_cut = optional_or<double>(q, "head_cut", cfg.scheme.head_cut);
        cfg.scheme.inner_start = cfg.scheme.head_cut;
        cfg.scheme.truncation = optional_or<double>(q, "truncation", cfg.scheme.truncation);
        cfg.scheme.points = optional_or<int>(q, "points", cfg.scheme.points);
        cfg.scheme.max_bisections =
            optional_or<int>(q, "max_bisections", cfg.scheme.max_bisections);
        cfg.scheme.error_budget = optional_or<double>(q, "error_budget", cfg.scheme.error_budget);
    }
    cfg.scheme.inner_start = cfg.scheme.head_cut;
    try {
        cfg.scheme.validate();
    } catch (const std::exception& e) {
        throw ValidationError(std::string("quadrature scheme: ") + e.what());
    }

    if (doc.contains("moments")) {
        const auto& mo = doc.at("moments");
        cfg.moments.k_max = optional_or<int>(mo, "k_max", cfg.moments.k_max);
        cfg.moments.t_min = optional_or<double>(mo, "t_min", cfg.moments.t_min);
        cfg.moments.truncation = optional_or<double>(mo, "truncation", cfg.moments.truncation);
        cfg.moments.points = optional_or<int>(mo, "points", cfg.moments.points);
        cfg.moments.fd_step = optional_or<double>(mo, "fd_step", cfg.moments.fd_step);
        if (cfg.moments.k_max < 1 || cfg.moments.k_max > 12)
            throw ValidationError("moments.k_max must lie in [1, 12]");
        if (!(cfg.moments.t_min > 0.0 && cfg.moments.t_min < cfg.moments.truncation))
            throw ValidationError("moments.t_min must lie in (0, truncation)");
    }

    if (doc.contains("manifold")) cfg.manifold = manifold_from_json(doc.at("manifold"));
    if (doc.contains("refined_manifold"))
        cfg.refined_manifold = manifold_from_json(doc.at("refined_manifold"));

    if (doc.contains("pair")) {
        const auto& p = doc.at("pair");
        PairSpec pair;
        pair.first = manifold_from_json(p.at("first"));
        pair.second = manifold_from_json(p.at("second"));
        pair.observation_first = require<std::vector<int>>(p, "observation_first");
        pair.observation_second = require<std::vector<int>>(p, "observation_second");
        pair.declared_equal = optional_or<bool>(p, "declared_equal", true);
        if (pair.observation_first.size() != pair.observation_second.size())
            throw ValidationError("observation correspondence size mismatch");
        cfg.pair = std::move(pair);
        cfg.moments.declared_equal = cfg.pair->declared_equal;
    }

    if (doc.contains("source")) {
        const auto& s = doc.at("source");
        cfg.source.type = optional_or<std::string>(s, "type", "bump");
        if (cfg.source.type == "bump") {
            cfg.source.node_position = optional_or<int>(s, "node_position", 0);
            cfg.source.width = optional_or<double>(s, "width", 1.0);
            if (!(cfg.source.width > 0.0)) throw ValidationError("source width must be positive");
        } else if (cfg.source.type == "coefficients") {
            cfg.source.coefficients = require<std::vector<double>>(s, "values");
        } else {
            throw ValidationError("unrecognized source type: " + cfg.source.type);
        }
    }

    if (doc.contains("t_grid")) {
        const auto& g = doc.at("t_grid");
        if (g.is_array()) {
            cfg.t_grid = g.get<std::vector<double>>();
        } else {
            const double lo = require<double>(g, "min");
            const double hi = require<double>(g, "max");
            const int count = require<int>(g, "count");
            const std::string spacing = optional_or<std::string>(g, "spacing", "log");
            if (count < 1 || !(lo > 0.0) || !(hi > lo))
                throw ValidationError("t_grid needs 0 < min < max and count >= 1");
            for (int i = 0; i < count; ++i) {
                const double frac = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
                cfg.t_grid.push_back(spacing == "log" ? lo * std::pow(hi / lo, frac)
                                                      : lo + frac * (hi - lo));
            }
        }
        for (double t : cfg.t_grid)
            if (!(t > 0.0)) throw ValidationError("t_grid values must be positive");
    }

    if (doc.contains("derivative_steps")) {
        cfg.derivative_steps = require<std::vector<double>>(doc, "derivative_steps");
        if (cfg.derivative_steps.size() < 2)
            throw ValidationError("derivative_steps needs at least two entries");
    }
    cfg.field_count = optional_or<int>(doc, "fields", cfg.field_count);
    if (cfg.field_count < 1) throw ValidationError("fields must be >= 1");
    cfg.hardy_dt = optional_or<double>(doc, "hardy_dt", cfg.hardy_dt);
    cfg.hardy_span = optional_or<double>(doc, "hardy_span", cfg.hardy_span);
    if (doc.contains("observation"))
        cfg.observation = require<std::vector<int>>(doc, "observation");
    if (doc.contains("family")) {
        cfg.family_ratios = require<std::vector<double>>(doc.at("family"), "ratios");
        if (cfg.family_ratios.empty()) throw ValidationError("family.ratios must be nonempty");
    }
    cfg.stability_tol = optional_or<double>(doc, "stability_tol", cfg.stability_tol);

    // Per-kind required pieces.
    switch (cfg.kind) {
        case ExperimentKind::CalculusEquivalence:
        case ExperimentKind::GaussianBound:
            if (!cfg.manifold) throw ValidationError("experiment needs a manifold");
            break;
        case ExperimentKind::Moments:
        case ExperimentKind::KernelRecovery:
            if (!cfg.pair) throw ValidationError("experiment needs a manifold pair");
            break;
        case ExperimentKind::Distinguishability:
            if (cfg.family_ratios.empty())
                throw ValidationError("distinguishability needs family.ratios");
            if (!cfg.manifold) throw ValidationError("distinguishability needs a base manifold");
            if (cfg.observation.empty())
                throw ValidationError("distinguishability needs an observation node list");
            break;
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("config parse error: ") + e.what());
    }
    return config_from_json(doc);
}

Eigen::VectorXd source_values_on_observation(const SourceSpec& source,
                                             const SpectralManifold& profile_manifold,
                                             const std::vector<int>& observation_nodes) {
    const int p = static_cast<int>(observation_nodes.size());
    Eigen::VectorXd values(p);
    if (source.type == "coefficients") {
        if (static_cast<int>(source.coefficients.size()) != p)
            throw ValidationError("source coefficient list length must match the observation set");
        for (int i = 0; i < p; ++i) values[i] = source.coefficients[i];
        return values;
    }
    if (source.node_position < 0 || source.node_position >= p)
        throw ValidationError("bump center position outside the observation set");
    const int center = observation_nodes[source.node_position];
    for (int i = 0; i < p; ++i) {
        const double d = profile_manifold.distances()(observation_nodes[i], center);
        values[i] = std::exp(-(d / source.width) * (d / source.width));
    }
    return values;
}

Field lift_to_field(const ManifoldPtr& mf, const std::vector<int>& nodes,
                    const Eigen::VectorXd& values_on_obs) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(mf->node_count());
    for (size_t i = 0; i < nodes.size(); ++i) v[nodes[i]] = values_on_obs[static_cast<int>(i)];
    return Field(std::move(v), mf);
}

} // namespace loglap
