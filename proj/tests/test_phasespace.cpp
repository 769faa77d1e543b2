#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "expanse/cosmology.hpp"
#include "expanse/phasespace.hpp"
#include "oracles.hpp"

using namespace expanse;

TEST_CASE("symplectic form") {
    const SymplecticTransform omega1 = symplectic_form(1);
    CHECK(omega1.data()(0, 1) == 1.0);
    CHECK(omega1.data()(1, 0) == -1.0);
    CHECK(omega1.data()(0, 0) == 0.0);

    const SymplecticTransform omega2 = symplectic_form(2);
    const Eigen::MatrixXd square = omega2.data() * omega2.data();
    CHECK((square + Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);

    for (int n : {1, 2, 3, 5}) {
        const Eigen::MatrixXd w = omega_matrix(n);
        CHECK((w * w.transpose() - Eigen::MatrixXd::Identity(2 * n, 2 * n)).cwiseAbs().maxCoeff() ==
              0.0);
    }

    CHECK_THROWS_AS(symplectic_form(0), dimension_error);
}

TEST_CASE("symplectic eigenvalues of reference states") {
    CHECK(symplectic_eigenvalues(CovarianceMatrix::vacuum(2)) == std::vector<double>{1.0, 1.0});

    Eigen::MatrixXd thermal = 3.0 * Eigen::MatrixXd::Identity(2, 2);
    const std::vector<double> nu = symplectic_eigenvalues(CovarianceMatrix(thermal));
    REQUIRE(nu.size() == 1);
    CHECK(nu[0] == doctest::Approx(3.0).epsilon(1e-12));

    for (double s : {0.0, 0.5, 1.0, 2.0}) {
        const std::vector<double> pair = symplectic_eigenvalues(in_state(InitialState(s)));
        REQUIRE(pair.size() == 2);
        CHECK(std::abs(pair[0] - 1.0) < 1e-10);
        CHECK(std::abs(pair[1] - 1.0) < 1e-10);
    }

    Eigen::MatrixXd bad(2, 2);
    bad << 1.0, 0.0, 0.0, std::nan("");
    CHECK_THROWS_AS(symplectic_eigenvalues(bad), numeric_error);
}

TEST_CASE("symplectic eigenvalues agree with independent routes") {
    std::mt19937 rng(123);
    for (int t = 0; t < 50; ++t) {
        const CovarianceMatrix cm = oracles::random_two_mode_state(rng);
        const std::vector<double> lib = symplectic_eigenvalues(cm);
        const std::vector<double> inv = oracles::two_mode_nu_via_invariants(cm.data());
        const std::vector<double> svd = oracles::nu_via_sqrt_svd(cm.data());
        REQUIRE(lib.size() == 2);
        CHECK(lib[0] == doctest::Approx(inv[0]).epsilon(1e-9));
        CHECK(lib[1] == doctest::Approx(inv[1]).epsilon(1e-9));
        CHECK(lib[0] == doctest::Approx(svd[0]).epsilon(1e-9));
        CHECK(lib[1] == doctest::Approx(svd[1]).epsilon(1e-9));
    }
}

TEST_CASE("covariance matrix construction") {
    // Mild asymmetry is absorbed by symmetrization.
    Eigen::MatrixXd near_vacuum = Eigen::MatrixXd::Identity(2, 2);
    near_vacuum(0, 1) = 1e-13;
    const CovarianceMatrix cm(near_vacuum);
    CHECK(cm.data()(0, 1) == cm.data()(1, 0));

    // An unphysical matrix is rejected.
    CHECK_THROWS_AS(CovarianceMatrix(0.5 * Eigen::MatrixXd::Identity(2, 2)), physicality_error);
    CHECK_THROWS_AS(CovarianceMatrix(Eigen::MatrixXd::Identity(3, 3)), dimension_error);
    CHECK(CovarianceMatrix::vacuum(3).n_modes() == 3);
    CHECK(CovarianceMatrix::vacuum(1).is_pure());
}

TEST_CASE("apply") {
    const CovarianceMatrix tmsv = in_state(InitialState(1.0));
    const CovarianceMatrix same = apply(SymplecticTransform::identity(2), tmsv);
    CHECK((same.data() - tmsv.data()).cwiseAbs().maxCoeff() == 0.0);

    const CovarianceMatrix still = apply(squeeze_transform(0.0), tmsv);
    CHECK((still.data() - tmsv.data()).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(apply(SymplecticTransform::identity(1), tmsv), dimension_error);

    std::mt19937 rng(77);
    for (int t = 0; t < 25; ++t) {
        const CovarianceMatrix cm = oracles::random_two_mode_state(rng);
        const CovarianceMatrix moved =
            apply(SymplecticTransform(oracles::random_local_pair(rng)), cm);
        CHECK(moved.determinant() ==
              doctest::Approx(cm.determinant()).epsilon(1e-10));
        CHECK(renyi2_entropy(moved) == doctest::Approx(renyi2_entropy(cm)).epsilon(1e-10));
    }
}

TEST_CASE("direct sum") {
    const CovarianceMatrix i4 = direct_sum(CovarianceMatrix::vacuum(1), CovarianceMatrix::vacuum(1));
    CHECK((i4.data() - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);

    const CovarianceMatrix seeded = direct_sum(in_state(InitialState(1.0)), CovarianceMatrix::vacuum(2));
    CHECK(seeded.n_modes() == 4);
    CHECK(seeded.determinant() ==
          doctest::Approx(in_state(InitialState(1.0)).determinant()).epsilon(1e-12));

    std::mt19937 rng(5);
    const CovarianceMatrix a = oracles::random_two_mode_state(rng);
    const CovarianceMatrix b = oracles::random_two_mode_state(rng);
    CHECK(direct_sum(a, b).determinant() ==
          doctest::Approx(a.determinant() * b.determinant()).epsilon(1e-10));
}

TEST_CASE("partial trace") {
    std::mt19937 rng(9);
    const CovarianceMatrix cm = oracles::random_two_mode_state(rng);
    const CovarianceMatrix all = partial_trace(cm, {0, 1});
    CHECK((all.data() - cm.data()).cwiseAbs().maxCoeff() == 0.0);

    const CovarianceMatrix four = direct_sum(cm, cm);
    const CovarianceMatrix composed = partial_trace(partial_trace(four, {0, 2, 3}), {1, 2});
    const CovarianceMatrix direct = partial_trace(four, {2, 3});
    CHECK((composed.data() - direct.data()).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(partial_trace(cm, {}), std::invalid_argument);
    CHECK_THROWS_AS(partial_trace(cm, {0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(partial_trace(cm, {2}), std::invalid_argument);
}

TEST_CASE("partial transpose") {
    // A product of thermal states stays physical under partial transposition.
    Eigen::MatrixXd product = Eigen::MatrixXd::Identity(4, 4);
    product.diagonal() << 2.0, 2.0, 1.5, 1.5;
    const CovarianceMatrix separable{product};
    const std::vector<double> nu = symplectic_eigenvalues(partial_transpose(separable, {{1}}));
    CHECK(nu.back() >= 1.0 - 1e-12);

    // The squeezed input state flips one symplectic eigenvalue to e^{-2s}.
    for (double s : {0.5, 1.0, 2.0}) {
        const std::vector<double> pt =
            symplectic_eigenvalues(partial_transpose(in_state(InitialState(s)), {{1}}));
        CHECK(pt.back() == doctest::Approx(std::exp(-2.0 * s)).epsilon(1e-10));
        CHECK(pt.front() == doctest::Approx(std::exp(2.0 * s)).epsilon(1e-10));
    }

    // Transposing either party gives the same spectrum.
    std::mt19937 rng(31);
    for (int t = 0; t < 10; ++t) {
        const CovarianceMatrix cm = oracles::random_two_mode_state(rng);
        const std::vector<double> pt_a = symplectic_eigenvalues(partial_transpose(cm, {{0}}));
        const std::vector<double> pt_b = symplectic_eigenvalues(partial_transpose(cm, {{1}}));
        CHECK(pt_a[0] == doctest::Approx(pt_b[0]).epsilon(1e-10));
        CHECK(pt_a[1] == doctest::Approx(pt_b[1]).epsilon(1e-10));
    }

    const CovarianceMatrix cm = oracles::random_two_mode_state(rng);
    CHECK_THROWS_AS(partial_transpose(cm, {{0, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(partial_transpose(cm, {{}}), std::invalid_argument);
}

TEST_CASE("renyi2 entropy") {
    CHECK(renyi2_entropy(CovarianceMatrix::vacuum(1)) == 0.0);
    CHECK(renyi2_entropy(CovarianceMatrix::vacuum(4)) == 0.0);

    for (double nu : {1.5, 3.0, 10.0}) {
        const CovarianceMatrix thermal{nu * Eigen::MatrixXd::Identity(2, 2)};
        CHECK(renyi2_entropy(thermal) == doctest::Approx(std::log(nu)).epsilon(1e-12));
    }

    const CovarianceMatrix out =
        out_state(InitialState(1.0), bogoliubov_from_theta(0.25));
    CHECK(renyi2_entropy(out) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("mode permutation is symplectic and reorders blocks") {
    const SymplecticTransform perm = SymplecticTransform::mode_permutation({2, 0, 1});
    const CovarianceMatrix cm = direct_sum(
        direct_sum(CovarianceMatrix(1.5 * Eigen::MatrixXd::Identity(2, 2)),
                   CovarianceMatrix(2.5 * Eigen::MatrixXd::Identity(2, 2))),
        CovarianceMatrix(4.0 * Eigen::MatrixXd::Identity(2, 2)));
    const CovarianceMatrix moved = apply(perm, cm);
    CHECK(moved.data()(0, 0) == 4.0);
    CHECK(moved.data()(2, 2) == 1.5);
    CHECK(moved.data()(4, 4) == 2.5);

    CHECK_THROWS_AS(SymplecticTransform::mode_permutation({0, 0}), std::invalid_argument);
}
