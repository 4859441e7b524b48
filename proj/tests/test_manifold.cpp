#include <doctest.h>

#include "loglap/manifold.hpp"
#include "loglap/util.hpp"

#include <cmath>
#include <numbers>

using namespace loglap;

namespace {
constexpr double kPi = std::numbers::pi;

double ortho_residual(const SpectralManifold& mf) {
    const Eigen::MatrixXd gram = mf.eigenfunctions().transpose() *
                                 mf.mass().asDiagonal() * mf.eigenfunctions();
    return (gram - Eigen::MatrixXd::Identity(mf.node_count(), mf.node_count()))
        .cwiseAbs()
        .maxCoeff();
}
} // namespace

TEST_CASE("circle spectrum matches the analytic frequencies") {
    auto mf = build_circle(8, 1.0);
    const double expected[] = {0, 1, 1, 4, 4, 9, 9, 16};
    for (int k = 0; k < 8; ++k) CHECK(mf->eigenvalues()[k] == doctest::Approx(expected[k]).epsilon(1e-14));
    CHECK(mf->eigenvalues()[0] == 0.0);

    auto scaled = build_circle(8, 2.0);
    CHECK(scaled->eigenvalues()[1] == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("circle ground mode is the normalized constant") {
    auto mf = build_circle(64, 1.0);
    const double expected = 1.0 / std::sqrt(2.0 * kPi);
    for (int i = 0; i < 64; ++i)
        CHECK(mf->eigenfunctions()(i, 0) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("circle rejects undersized or degenerate input") {
    CHECK_THROWS_AS(build_circle(3, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(build_circle(8, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(build_circle(8, -1.0), std::invalid_argument);
}

TEST_CASE("mass-orthonormality residual stays below 1e-10") {
    CHECK(ortho_residual(*build_circle(64, 1.0)) < 1e-10);
    CHECK(ortho_residual(*build_flat_torus(8, 8, 2.0 * kPi, 2.0 * kPi)) < 1e-10);
}

TEST_CASE("circle distances are arc lengths with triangle inequality") {
    auto mf = build_circle(16, 2.0);
    const auto& d = mf->distances();
    CHECK(d(0, 8) == doctest::Approx(2.0 * kPi).epsilon(1e-14)); // halfway around
    CHECK(d(0, 1) == doctest::Approx(2.0 * 2.0 * kPi / 16).epsilon(1e-14));
    DeterministicRng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const int a = static_cast<int>(rng.next_u64() % 16);
        const int b = static_cast<int>(rng.next_u64() % 16);
        const int c = static_cast<int>(rng.next_u64() % 16);
        CHECK(d(a, b) == doctest::Approx(d(b, a)));
        CHECK(d(a, c) <= d(a, b) + d(b, c) + 1e-12);
    }
}

TEST_CASE("torus lowest modes and multiplicities") {
    auto mf = build_flat_torus(8, 8, 2.0 * kPi, 2.0 * kPi);
    CHECK(mf->eigenvalues()[0] == 0.0);
    for (int k = 1; k <= 4; ++k) CHECK(mf->eigenvalues()[k] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mf->eigenvalues()[5] > 1.5);
    // lambda = 1 is a maximal run of four equal eigenvalues
    const auto& groups = mf->eigen_groups();
    CHECK(groups[1].second - groups[1].first == 4);

    auto stretched = build_flat_torus(8, 8, 2.0 * kPi, 4.0 * kPi);
    CHECK(stretched->eigenvalues()[1] == doctest::Approx(0.25).epsilon(1e-12));

    auto small = build_flat_torus(6, 6, 2.0 * kPi, 2.0 * kPi);
    CHECK(small->eigenvalues()[0] == 0.0);
    const double c = small->eigenfunctions()(0, 0);
    for (int i = 0; i < small->node_count(); ++i)
        CHECK(small->eigenfunctions()(i, 0) == doctest::Approx(c).epsilon(1e-13));

    CHECK_THROWS_AS(build_flat_torus(3, 8, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(build_flat_torus(8, 8, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("graph Laplacian spectra") {
    SUBCASE("complete graph K4") {
        Eigen::MatrixXd adj = Eigen::MatrixXd::Ones(4, 4);
        adj.diagonal().setZero();
        auto mf = build_weighted_graph(adj, Eigen::VectorXd::Ones(4), {}, 1);
        CHECK(mf->eigenvalues()[0] == 0.0);
        for (int k = 1; k < 4; ++k)
            CHECK(mf->eigenvalues()[k] == doctest::Approx(4.0).epsilon(1e-10));
    }
    SUBCASE("two nodes, weight w") {
        const double w = 0.7;
        Eigen::MatrixXd adj(2, 2);
        adj << 0, w, w, 0;
        auto mf = build_weighted_graph(adj, Eigen::VectorXd::Ones(2), {}, 1);
        CHECK(mf->eigenvalues()[1] == doctest::Approx(2.0 * w).epsilon(1e-12));
    }
    SUBCASE("eigenvalues are invariant under relabeling") {
        Eigen::MatrixXd path = Eigen::MatrixXd::Zero(5, 5);
        for (int i = 0; i + 1 < 5; ++i) path(i, i + 1) = path(i + 1, i) = 1.0 + 0.3 * i;
        Eigen::VectorXd mass(5);
        mass << 1.0, 0.5, 2.0, 1.5, 0.75;
        auto a = build_weighted_graph(path, mass, {}, 1);

        const std::vector<int> perm = {3, 0, 4, 1, 2};
        Eigen::MatrixXd padj(5, 5);
        Eigen::VectorXd pmass(5);
        for (int i = 0; i < 5; ++i) {
            pmass[i] = mass[perm[i]];
            for (int j = 0; j < 5; ++j) padj(i, j) = path(perm[i], perm[j]);
        }
        auto b = build_weighted_graph(padj, pmass, {}, 1);
        for (int k = 0; k < 5; ++k)
            CHECK(a->eigenvalues()[k] == doctest::Approx(b->eigenvalues()[k]).epsilon(1e-9));
    }
    SUBCASE("disconnected and asymmetric inputs are rejected") {
        Eigen::MatrixXd two_pairs = Eigen::MatrixXd::Zero(4, 4);
        two_pairs(0, 1) = two_pairs(1, 0) = 1.0;
        two_pairs(2, 3) = two_pairs(3, 2) = 1.0;
        CHECK_THROWS_AS(build_weighted_graph(two_pairs, Eigen::VectorXd::Ones(4), {}, 1),
                        std::invalid_argument);

        Eigen::MatrixXd asym = Eigen::MatrixXd::Zero(3, 3);
        asym(0, 1) = 1.0; // missing the mirror entry
        asym(1, 2) = asym(2, 1) = 1.0;
        CHECK_THROWS_AS(build_weighted_graph(asym, Eigen::VectorXd::Ones(3), {}, 1),
                        std::invalid_argument);
    }
}

TEST_CASE("mass inner product") {
    auto mf = build_circle(64, 1.5);
    const Field phi0(mf->eigenfunctions().col(0), mf);
    const Field phi1(mf->eigenfunctions().col(1), mf);
    CHECK(inner_product(phi0, phi0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(inner_product(phi0, phi1) == doctest::Approx(0.0).epsilon(1e-13));

    const Field ones(Eigen::VectorXd::Ones(64), mf);
    CHECK(inner_product(ones, ones) == doctest::Approx(2.0 * kPi * 1.5).epsilon(1e-13));

    auto other = build_circle(64, 1.5);
    const Field u(Eigen::VectorXd::Ones(64), other);
    CHECK_THROWS_AS(inner_product(phi0, u), std::invalid_argument);
    CHECK_THROWS_AS(Field(Eigen::VectorXd::Ones(8), mf), std::invalid_argument);
}

TEST_CASE("reconstructed Laplacian is symmetric in the mass inner product") {
    auto mf = build_flat_torus(6, 6, 2.0 * kPi, 3.0);
    Eigen::MatrixXd lap = mf->eigenfunctions() * mf->eigenvalues().asDiagonal() *
                          mf->eigenfunctions().transpose() * mf->mass().asDiagonal();
    const Eigen::MatrixXd weighted = mf->mass().asDiagonal() * lap;
    CHECK((weighted - weighted.transpose()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("permuted copy is an exact isometric relabeling") {
    auto base = build_circle(16, 1.0);
    std::vector<int> perm(16);
    for (int i = 0; i < 16; ++i) perm[i] = (i * 5 + 3) % 16;
    auto copy = permuted_copy(base, perm);

    CHECK(copy->eigenvalues() == base->eigenvalues());
    for (int i = 0; i < 16; ++i) {
        CHECK(copy->mass()[i] == base->mass()[perm[i]]);
        for (int k = 0; k < 16; ++k)
            CHECK(copy->eigenfunctions()(i, k) == base->eigenfunctions()(perm[i], k));
        for (int j = 0; j < 16; ++j)
            CHECK(copy->distances()(i, j) == base->distances()(perm[i], perm[j]));
    }

    std::vector<int> bad = {0, 0, 1, 2};
    CHECK_THROWS_AS(permuted_copy(build_circle(4, 1.0), bad), std::invalid_argument);
}

TEST_CASE("observation sets must be nonempty proper subsets") {
    auto mf = build_circle(8, 1.0);
    CHECK_NOTHROW(ObservationSet(mf, {0, 1, 2}));
    CHECK_THROWS_AS(ObservationSet(mf, {}), std::invalid_argument);
    CHECK_THROWS_AS(ObservationSet(mf, {0, 1, 2, 3, 4, 5, 6, 7}), std::invalid_argument);
    CHECK_THROWS_AS(ObservationSet(mf, {0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(ObservationSet(mf, {8}), std::invalid_argument);
}
