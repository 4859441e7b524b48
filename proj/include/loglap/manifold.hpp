#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace loglap {

/// Discretized closed manifold: mass weights defining the L2 inner product,
/// pairwise geodesic distances, and a full mass-orthonormal eigensystem of
/// the discrete Laplace-Beltrami operator (ascending, lambda_0 = 0).
class SpectralManifold {
public:
    SpectralManifold(int dimension,
                     Eigen::VectorXd mass,
                     Eigen::MatrixXd distances,
                     Eigen::VectorXd eigenvalues,
                     Eigen::MatrixXd eigenfunctions,
                     std::string label);

    int node_count() const { return static_cast<int>(mass_.size()); }
    int dimension() const { return dimension_; }
    const Eigen::VectorXd& mass() const { return mass_; }
    const Eigen::MatrixXd& distances() const { return distances_; }
    const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
    /// Columns are the eigenfunctions phi_k, orthonormal in the mass inner product.
    const Eigen::MatrixXd& eigenfunctions() const { return eigenfunctions_; }
    const std::string& label() const { return label_; }

    /// Maximal runs [begin, end) of equal eigenvalues; eigenvalues within
    /// 1e-8*(1+lambda) of the run head belong to the same eigenspace.
    const std::vector<std::pair<int, int>>& eigen_groups() const { return groups_; }

    double mass_total() const { return mass_.sum(); }

private:
    int dimension_;
    Eigen::VectorXd mass_;
    Eigen::MatrixXd distances_;
    Eigen::VectorXd eigenvalues_;
    Eigen::MatrixXd eigenfunctions_;
    std::string label_;
    std::vector<std::pair<int, int>> groups_;
};

using ManifoldPtr = std::shared_ptr<const SpectralManifold>;

/// Real-valued function on manifold nodes.
struct Field {
    Eigen::VectorXd values;
    ManifoldPtr manifold;

    Field() = default;
    Field(Eigen::VectorXd v, ManifoldPtr mf);

    int size() const { return static_cast<int>(values.size()); }
};

/// Nonempty proper subset of nodes where sources live and data are read.
struct ObservationSet {
    ManifoldPtr manifold;
    std::vector<int> nodes;

    ObservationSet(ManifoldPtr mf, std::vector<int> node_indices);
    int size() const { return static_cast<int>(nodes.size()); }
    bool contains(int node) const;
};

// Builders. Circle and torus carry the exact analytic eigenpairs of the
// continuum operator sampled at the nodes; graphs go through a generalized
// symmetric eigensolve against the mass matrix.
ManifoldPtr build_circle(int nodes, double radius, std::string label = "");
ManifoldPtr build_flat_torus(int nodes1, int nodes2, double length1, double length2,
                             std::string label = "");
ManifoldPtr build_weighted_graph(const Eigen::MatrixXd& adjacency,
                                 const Eigen::VectorXd& mass,
                                 std::optional<Eigen::MatrixXd> distances,
                                 int dimension,
                                 std::string label = "");

/// Isometric relabeling: node i of the copy is node permutation[i] of the
/// original. Eigenvalues are unchanged; eigenfunction rows, mass and
/// distances are permuted.
ManifoldPtr permuted_copy(const ManifoldPtr& base, const std::vector<int>& permutation,
                          std::string label = "");

/// Mass-weighted L2 pairing sum_x mass(x) u(x) v(x).
double inner_product(const Field& u, const Field& v);
double mass_norm(const Field& u);

Field make_field(const ManifoldPtr& mf, Eigen::VectorXd values);
Field zero_field(const ManifoldPtr& mf);

} // namespace loglap
