#include "loglap/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <set>
#include <stdexcept>

namespace loglap {

namespace {

constexpr double kGroupTol = 1e-8;
constexpr double kConnectivityTol = 1e-12;

std::vector<std::pair<int, int>> group_eigenvalues(const Eigen::VectorXd& lambda) {
    std::vector<std::pair<int, int>> groups;
    const int n = static_cast<int>(lambda.size());
    int begin = 0;
    for (int i = 1; i <= n; ++i) {
        if (i == n || lambda[i] - lambda[begin] > kGroupTol * (1.0 + lambda[i])) {
            groups.emplace_back(begin, i);
            begin = i;
        }
    }
    return groups;
}

} // namespace

SpectralManifold::SpectralManifold(int dimension,
                                   Eigen::VectorXd mass,
                                   Eigen::MatrixXd distances,
                                   Eigen::VectorXd eigenvalues,
                                   Eigen::MatrixXd eigenfunctions,
                                   std::string label)
    : dimension_(dimension),
      mass_(std::move(mass)),
      distances_(std::move(distances)),
      eigenvalues_(std::move(eigenvalues)),
      eigenfunctions_(std::move(eigenfunctions)),
      label_(std::move(label)) {
    const int n = static_cast<int>(mass_.size());
    if (n < 2) throw std::invalid_argument("manifold needs at least 2 nodes");
    if (dimension_ < 1) throw std::invalid_argument("dimension must be >= 1");
    if ((mass_.array() <= 0.0).any()) throw std::invalid_argument("mass weights must be positive");
    if (distances_.rows() != n || distances_.cols() != n)
        throw std::invalid_argument("distance matrix shape mismatch");
    if (eigenvalues_.size() != n || eigenfunctions_.rows() != n || eigenfunctions_.cols() != n)
        throw std::invalid_argument("eigensystem shape mismatch");
    if (std::abs(eigenvalues_[0]) > 1e-12)
        throw std::invalid_argument("lambda_0 must be 0 (connected closed manifold)");
    eigenvalues_[0] = 0.0;
    for (int i = 0; i + 1 < n; ++i)
        if (eigenvalues_[i] > eigenvalues_[i + 1] + 1e-12)
            throw std::invalid_argument("eigenvalues must be ascending");
    groups_ = group_eigenvalues(eigenvalues_);
}

Field::Field(Eigen::VectorXd v, ManifoldPtr mf) : values(std::move(v)), manifold(std::move(mf)) {
    if (!manifold) throw std::invalid_argument("field needs a manifold");
    if (values.size() != manifold->node_count())
        throw std::invalid_argument("field length does not match manifold node count");
}

ObservationSet::ObservationSet(ManifoldPtr mf, std::vector<int> node_indices)
    : manifold(std::move(mf)), nodes(std::move(node_indices)) {
    if (!manifold) throw std::invalid_argument("observation set needs a manifold");
    if (nodes.empty()) throw std::invalid_argument("observation set must be nonempty");
    std::set<int> seen;
    for (int v : nodes) {
        if (v < 0 || v >= manifold->node_count())
            throw std::invalid_argument("observation node out of range");
        if (!seen.insert(v).second) throw std::invalid_argument("duplicate observation node");
    }
    if (static_cast<int>(nodes.size()) >= manifold->node_count())
        throw std::invalid_argument("observation set must be a proper subset");
}

bool ObservationSet::contains(int node) const {
    return std::find(nodes.begin(), nodes.end(), node) != nodes.end();
}

ManifoldPtr build_circle(int nodes, double radius, std::string label) {
    if (nodes < 4) throw std::invalid_argument("circle needs at least 4 nodes");
    if (radius <= 0.0) throw std::invalid_argument("circle radius must be positive");
    const int n = nodes;
    const double two_pi = 2.0 * std::numbers::pi;
    const double cell = two_pi * radius / n;

    Eigen::VectorXd mass = Eigen::VectorXd::Constant(n, cell);

    Eigen::MatrixXd dist(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double dtheta = std::abs(i - j) * (two_pi / n);
            dtheta = std::min(dtheta, two_pi - dtheta);
            dist(i, j) = radius * dtheta;
        }

    // Sampled trigonometric modes: frequency 0, pairs (cos,sin) for
    // 0 < k < n/2, and the alternating Nyquist mode for even n.
    Eigen::VectorXd lambda(n);
    Eigen::MatrixXd phi(n, n);
    const double c0 = 1.0 / std::sqrt(two_pi * radius);
    const double ck = 1.0 / std::sqrt(std::numbers::pi * radius);
    int col = 0;
    lambda[col] = 0.0;
    phi.col(col) = Eigen::VectorXd::Constant(n, c0);
    ++col;
    for (int k = 1; 2 * k < n; ++k) {
        const double lam = static_cast<double>(k) * k / (radius * radius);
        for (int trig = 0; trig < 2; ++trig) {
            lambda[col] = lam;
            for (int j = 0; j < n; ++j) {
                const double theta = two_pi * j * k / n;
                phi(j, col) = ck * (trig == 0 ? std::cos(theta) : std::sin(theta));
            }
            ++col;
        }
    }
    if (n % 2 == 0) {
        const int k = n / 2;
        lambda[col] = static_cast<double>(k) * k / (radius * radius);
        for (int j = 0; j < n; ++j) phi(j, col) = c0 * (j % 2 == 0 ? 1.0 : -1.0);
        ++col;
    }

    if (label.empty()) label = "circle-" + std::to_string(n);
    return std::make_shared<SpectralManifold>(1, std::move(mass), std::move(dist),
                                              std::move(lambda), std::move(phi), std::move(label));
}

ManifoldPtr build_flat_torus(int nodes1, int nodes2, double length1, double length2,
                             std::string label) {
    if (nodes1 < 4 || nodes2 < 4) throw std::invalid_argument("torus needs at least 4x4 nodes");
    if (length1 <= 0.0 || length2 <= 0.0)
        throw std::invalid_argument("torus side lengths must be positive");
    const int n = nodes1 * nodes2;
    const double two_pi = 2.0 * std::numbers::pi;
    const double cell = (length1 / nodes1) * (length2 / nodes2);

    Eigen::VectorXd mass = Eigen::VectorXd::Constant(n, cell);

    auto wrap = [](double d, double L) {
        d = std::abs(d);
        return std::min(d, L - d);
    };
    Eigen::MatrixXd dist(n, n);
    for (int a = 0; a < n; ++a) {
        const int a1 = a / nodes2, a2 = a % nodes2;
        for (int b = 0; b < n; ++b) {
            const int b1 = b / nodes2, b2 = b % nodes2;
            const double dx = wrap((a1 - b1) * length1 / nodes1, length1);
            const double dy = wrap((a2 - b2) * length2 / nodes2, length2);
            dist(a, b) = std::hypot(dx, dy);
        }
    }

    // Per-axis sampled trig modes, then products. mode = (frequency, kind)
    // with kind 0=cos, 1=sin; each axis mode carries its own normalization.
    struct AxisMode {
        double lambda;
        Eigen::VectorXd values;
    };
    auto axis_modes = [two_pi](int nn, double L) {
        std::vector<AxisMode> modes;
        const double c0 = 1.0 / std::sqrt(L);
        const double ck = std::sqrt(2.0 / L);
        Eigen::VectorXd v(nn);
        v.setConstant(c0);
        modes.push_back({0.0, v});
        for (int k = 1; 2 * k < nn; ++k) {
            const double lam = (two_pi * k / L) * (two_pi * k / L);
            for (int trig = 0; trig < 2; ++trig) {
                for (int j = 0; j < nn; ++j) {
                    const double theta = two_pi * j * k / nn;
                    v[j] = ck * (trig == 0 ? std::cos(theta) : std::sin(theta));
                }
                modes.push_back({lam, v});
            }
        }
        if (nn % 2 == 0) {
            const int k = nn / 2;
            const double lam = (two_pi * k / L) * (two_pi * k / L);
            for (int j = 0; j < nn; ++j) v[j] = c0 * (j % 2 == 0 ? 1.0 : -1.0);
            modes.push_back({lam, v});
        }
        return modes;
    };

    const auto m1 = axis_modes(nodes1, length1);
    const auto m2 = axis_modes(nodes2, length2);

    std::vector<std::pair<double, std::pair<int, int>>> order;
    order.reserve(n);
    for (int i = 0; i < nodes1; ++i)
        for (int j = 0; j < nodes2; ++j)
            order.push_back({m1[i].lambda + m2[j].lambda, {i, j}});
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    // Uniform cell masses make per-axis continuum normalizations exactly
    // mass-orthonormal for the sampled products.
    Eigen::VectorXd lambda(n);
    Eigen::MatrixXd phi(n, n);
    for (int col = 0; col < n; ++col) {
        lambda[col] = order[col].first;
        const auto& u = m1[order[col].second.first].values;
        const auto& w = m2[order[col].second.second].values;
        for (int a1 = 0; a1 < nodes1; ++a1)
            for (int a2 = 0; a2 < nodes2; ++a2)
                phi(a1 * nodes2 + a2, col) = u[a1] * w[a2];
    }

    if (label.empty())
        label = "torus-" + std::to_string(nodes1) + "x" + std::to_string(nodes2);
    return std::make_shared<SpectralManifold>(2, std::move(mass), std::move(dist),
                                              std::move(lambda), std::move(phi), std::move(label));
}

ManifoldPtr build_weighted_graph(const Eigen::MatrixXd& adjacency,
                                 const Eigen::VectorXd& mass,
                                 std::optional<Eigen::MatrixXd> distances,
                                 int dimension,
                                 std::string label) {
    const int n = static_cast<int>(adjacency.rows());
    if (n < 2 || adjacency.cols() != n) throw std::invalid_argument("adjacency must be square, n >= 2");
    if (mass.size() != n) throw std::invalid_argument("mass length mismatch");
    if ((mass.array() <= 0.0).any()) throw std::invalid_argument("mass weights must be positive");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (adjacency(i, j) < 0.0) throw std::invalid_argument("adjacency weights must be nonnegative");
            if (std::abs(adjacency(i, j) - adjacency(j, i)) > 1e-12 * (1.0 + std::abs(adjacency(i, j))))
                throw std::invalid_argument("adjacency must be symmetric");
        }

    Eigen::MatrixXd lap = -adjacency;
    for (int i = 0; i < n; ++i) {
        lap(i, i) = 0.0;
        double deg = 0.0;
        for (int j = 0; j < n; ++j)
            if (j != i) deg += adjacency(i, j);
        lap(i, i) = deg;
    }
    lap = 0.5 * (lap + lap.transpose());

    Eigen::MatrixXd mass_mat = mass.asDiagonal();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap, mass_mat);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("generalized eigensolve failed");
    Eigen::VectorXd lambda = solver.eigenvalues();
    Eigen::MatrixXd phi = solver.eigenvectors(); // mass-orthonormal

    if (std::abs(lambda[0]) > 1e-10)
        throw std::runtime_error("graph Laplacian lambda_0 not near 0");
    lambda[0] = 0.0;
    for (int i = 1; i < n; ++i) lambda[i] = std::max(lambda[i], 0.0);
    if (n > 1 && lambda[1] <= kConnectivityTol)
        throw std::invalid_argument("graph is disconnected (lambda_1 below connectivity tolerance)");

    Eigen::MatrixXd dist;
    if (distances) {
        dist = std::move(*distances);
        if (dist.rows() != n || dist.cols() != n)
            throw std::invalid_argument("distance matrix shape mismatch");
    } else {
        // Shortest weighted paths; an edge of weight w has length 1/sqrt(w).
        dist = Eigen::MatrixXd::Constant(n, n, std::numeric_limits<double>::infinity());
        for (int src = 0; src < n; ++src) {
            std::priority_queue<std::pair<double, int>, std::vector<std::pair<double, int>>,
                                std::greater<>> pq;
            dist(src, src) = 0.0;
            pq.push({0.0, src});
            while (!pq.empty()) {
                auto [d, u] = pq.top();
                pq.pop();
                if (d > dist(src, u)) continue;
                for (int v = 0; v < n; ++v) {
                    if (v == u || adjacency(u, v) <= 0.0) continue;
                    const double nd = d + 1.0 / std::sqrt(adjacency(u, v));
                    if (nd < dist(src, v)) {
                        dist(src, v) = nd;
                        pq.push({nd, v});
                    }
                }
            }
        }
        dist = 0.5 * (dist + dist.transpose().eval());
    }

    if (label.empty()) label = "graph-" + std::to_string(n);
    return std::make_shared<SpectralManifold>(dimension, mass, std::move(dist),
                                              std::move(lambda), std::move(phi), std::move(label));
}

ManifoldPtr permuted_copy(const ManifoldPtr& base, const std::vector<int>& permutation,
                          std::string label) {
    if (!base) throw std::invalid_argument("null manifold");
    const int n = base->node_count();
    if (static_cast<int>(permutation.size()) != n)
        throw std::invalid_argument("permutation length mismatch");
    std::vector<char> seen(n, 0);
    for (int p : permutation) {
        if (p < 0 || p >= n || seen[p]) throw std::invalid_argument("not a permutation");
        seen[p] = 1;
    }

    Eigen::VectorXd mass(n);
    Eigen::MatrixXd phi(n, n), dist(n, n);
    for (int i = 0; i < n; ++i) {
        mass[i] = base->mass()[permutation[i]];
        phi.row(i) = base->eigenfunctions().row(permutation[i]);
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dist(i, j) = base->distances()(permutation[i], permutation[j]);

    if (label.empty()) label = base->label() + "-permuted";
    return std::make_shared<SpectralManifold>(base->dimension(), std::move(mass), std::move(dist),
                                              base->eigenvalues(), std::move(phi), std::move(label));
}

double inner_product(const Field& u, const Field& v) {
    if (u.manifold != v.manifold) throw std::invalid_argument("fields live on different manifolds");
    return (u.manifold->mass().array() * u.values.array() * v.values.array()).sum();
}

double mass_norm(const Field& u) {
    return std::sqrt((u.manifold->mass().array() * u.values.array().square()).sum());
}

Field make_field(const ManifoldPtr& mf, Eigen::VectorXd values) {
    return Field(std::move(values), mf);
}

Field zero_field(const ManifoldPtr& mf) {
    return Field(Eigen::VectorXd::Zero(mf->node_count()), mf);
}

} // namespace loglap
