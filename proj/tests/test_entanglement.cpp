#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "expanse/entanglement.hpp"
#include "oracles.hpp"

using namespace expanse;

namespace {

BogoliubovData ones_channel() {
    const ExpansionModel model(1.0, 1.0, 1.0);
    return bogoliubov(frequencies(1.0, model), model);
}

}  // namespace

TEST_CASE("pure bipartite entanglement") {
    for (double s : {0.0, 0.5, 1.0, 2.0}) {
        const double e = pure_bipartite_entanglement(in_state(InitialState(s)), {{0}});
        CHECK(e == doctest::Approx(std::log(std::cosh(2.0 * s))).epsilon(1e-12));
    }

    // Product pure states carry nothing.
    CHECK(pure_bipartite_entanglement(CovarianceMatrix::vacuum(2), {{0}}) == 0.0);

    const CovarianceMatrix out = out_state(InitialState(1.0), ones_channel());
    CHECK(pure_bipartite_entanglement(out, {{modes::a}}) ==
          doctest::Approx(oracles::kEaRestOnes).epsilon(1e-12));

    const CovarianceMatrix thermal{3.0 * Eigen::MatrixXd::Identity(4, 4)};
    CHECK_THROWS_AS(pure_bipartite_entanglement(thermal, {{0}}), std::invalid_argument);
    CHECK_THROWS_AS(pure_bipartite_entanglement(CovarianceMatrix::vacuum(2), {{0, 1}}),
                    std::invalid_argument);
}

TEST_CASE("closed form for the (A,B) reduction") {
    for (double s : {0.0, 0.5, 1.0, 2.0}) {
        CHECK(entanglement_ab_closed(s, 0.0) ==
              doctest::Approx(std::log(std::cosh(2.0 * s))).epsilon(1e-12));
    }

    // At s = 0 the reduction is a product of thermal states; the raw formula
    // is positive there and must be clamped.
    for (double theta : {0.2, 0.5, 0.8}) {
        const ClampedValue v = entanglement_ab_closed_checked(0.0, theta);
        CHECK(v.value == 0.0);
        CHECK(v.clamped);
        CHECK(is_ppt_separable(reduced_ab(0.0, theta)));
    }

    const BogoliubovData bog = ones_channel();
    CHECK(entanglement_ab_closed(1.0, bog.theta) ==
          doctest::Approx(oracles::kEabOnes).epsilon(1e-12));
    CHECK(entanglement_ab_closed(1.0, bog.theta) < oracles::kLnCosh2);

    CHECK_THROWS_AS(entanglement_ab_closed(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(entanglement_ab_closed(-0.5, 0.1), std::invalid_argument);
}

TEST_CASE("closed form for the (A,Abar) reduction") {
    CHECK(entanglement_a_abar_closed(0.0) == 0.0);

    const BogoliubovData bog = ones_channel();
    CHECK(entanglement_a_abar_closed(bog.theta) ==
          doctest::Approx(oracles::kEaAbarOnes).epsilon(1e-12));

    // At s = 0 the (A,Abar) reduction is pure, so the closed form must equal
    // the pure-state route.
    for (double theta : {0.05, 0.3, 0.6, 0.9}) {
        const double closed = entanglement_a_abar_closed(theta);
        const double pure = pure_bipartite_entanglement(reduced_a_abar(0.0, theta), {{0}});
        CHECK(closed == doctest::Approx(pure).epsilon(1e-12));
    }

    CHECK_THROWS_AS(entanglement_a_abar_closed(1.0), std::invalid_argument);
}

TEST_CASE("one-to-three entanglement") {
    for (double s : {0.0, 0.7, 1.5}) {
        const CovarianceMatrix out = out_state(InitialState(s), bogoliubov_from_theta(0.0));
        CHECK(one_to_three_entanglement(out, {{modes::a}}) ==
              doctest::Approx(std::log(std::cosh(2.0 * s))).epsilon(1e-12));
    }

    for (double theta : {0.1, 0.4, 0.7}) {
        const CovarianceMatrix out = out_state(InitialState(0.0), bogoliubov_from_theta(theta));
        CHECK(one_to_three_entanglement(out, {{modes::abar}}) ==
              doctest::Approx(entanglement_a_abar_closed(theta)).epsilon(1e-11));
    }

    const CovarianceMatrix out = out_state(InitialState(1.0), ones_channel());
    CHECK(one_to_three_entanglement(out, {{modes::abar}}) ==
          doctest::Approx(oracles::kEabarRestOnes).epsilon(1e-9));
    // Probing B instead of A sees the same value: the state is A<->B symmetric.
    CHECK(one_to_three_entanglement(out, {{modes::b}}) ==
          doctest::Approx(one_to_three_entanglement(out, {{modes::a}})).epsilon(1e-12));
    CHECK(one_to_three_entanglement(out, {{modes::bbar}}) ==
          doctest::Approx(one_to_three_entanglement(out, {{modes::abar}})).epsilon(1e-12));

    CHECK_THROWS_AS(one_to_three_entanglement(out, {{modes::a, modes::b}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(one_to_three_entanglement(CovarianceMatrix::vacuum(2), {{0}}),
                    dimension_error);
}

TEST_CASE("PPT separability witness") {
    CHECK(is_ppt_separable(CovarianceMatrix::vacuum(2)));

    for (double s : {0.3, 1.0, 2.0}) {
        CHECK_FALSE(is_ppt_separable(in_state(InitialState(s))));
    }

    for (double s : {0.0, 0.5, 1.0, 2.0}) {
        for (double theta : {0.05, 0.3, 0.6, 0.85}) {
            CHECK(is_ppt_separable(reduced_a_bbar(s, theta)));
            CHECK(is_ppt_separable(reduced_abar_bbar(s, theta)));
        }
    }

    CHECK_THROWS_AS(is_ppt_separable(CovarianceMatrix::vacuum(3)), dimension_error);
}

TEST_CASE("numeric minimizer saturates on pure states") {
    for (double s : {0.3, 1.0, 1.7}) {
        const EofResult result = gaussian_renyi2_eof_numeric(in_state(InitialState(s)));
        CHECK(result.converged);
        CHECK(std::abs(result.value - std::log(std::cosh(2.0 * s))) < 1e-6);
        CHECK(result.feasibility_violation <= 1e-9);
    }
}

TEST_CASE("numeric minimizer certifies the zero-entanglement reductions") {
    EofOptions no_shortcut;
    no_shortcut.ppt_shortcut = false;
    for (double s : {0.0, 1.0, 2.0}) {
        for (double theta : {0.2, 0.6}) {
            const EofResult direct =
                gaussian_renyi2_eof_numeric(reduced_abar_bbar(s, theta), no_shortcut);
            CHECK(direct.converged);
            CHECK(direct.value < 1e-6);

            const EofResult shortcut = gaussian_renyi2_eof_numeric(reduced_a_bbar(s, theta));
            CHECK(shortcut.via_ppt);
            CHECK(shortcut.value == 0.0);
        }
    }
}

TEST_CASE("numeric minimizer validates both closed forms") {
    std::mt19937 rng(424242);
    std::uniform_real_distribution<double> s_dist(0.0, 2.0);
    std::uniform_real_distribution<double> t2_dist(0.0, 0.5);
    for (int i = 0; i < 6; ++i) {
        const double s = s_dist(rng);
        const double theta = std::sqrt(t2_dist(rng));

        const EofResult ab = gaussian_renyi2_eof_numeric(reduced_ab(s, theta));
        CHECK(ab.converged);
        CHECK(std::abs(ab.value - entanglement_ab_closed(s, theta)) < 1e-4);

        const EofResult pair = gaussian_renyi2_eof_numeric(reduced_a_abar(s, theta));
        CHECK(pair.converged);
        CHECK(std::abs(pair.value - entanglement_a_abar_closed(theta)) < 1e-4);
    }
}

TEST_CASE("numeric minimizer is deterministic") {
    const CovarianceMatrix cm = reduced_ab(0.8, 0.4);
    const EofResult first = gaussian_renyi2_eof_numeric(cm);
    const EofResult second = gaussian_renyi2_eof_numeric(cm);
    CHECK(first.value == second.value);
    CHECK(first.evaluations == second.evaluations);
    CHECK(first.feasibility_violation == second.feasibility_violation);

    CHECK_THROWS_AS(gaussian_renyi2_eof_numeric(CovarianceMatrix::vacuum(3)), dimension_error);
}

TEST_CASE("residual entanglement") {
    CHECK(residual_entanglement(InitialState(1.0), bogoliubov_from_theta(0.0)) == 0.0);
    CHECK(residual_entanglement(InitialState(0.0), bogoliubov_from_theta(0.5)) ==
          doctest::Approx(0.0).epsilon(1e-12));

    CHECK(residual_entanglement(InitialState(1.0), ones_channel()) ==
          doctest::Approx(oracles::kResidualOnes).epsilon(1e-9));

    // Component identity: the Abar-probe slack equals the closed form.
    for (double s : {0.0, 0.5, 1.0, 2.0}) {
        for (double theta : {0.0, 0.1, 0.45, 0.8}) {
            const EntanglementReport report =
                full_report(InitialState(s), bogoliubov_from_theta(theta));
            const double t2 = theta * theta;
            const double closed = std::log1p(t2 * std::cosh(2.0 * s)) - std::log1p(t2);
            CHECK(std::abs((report.e_abar_rest - report.e_a_abar) - closed) <= 1e-10);
            CHECK(report.residual >= 0.0);
        }
    }
}

TEST_CASE("full report") {
    // No particle creation: the input entanglement is all there is.
    const EntanglementReport untouched = full_report(InitialState(1.0), bogoliubov_from_theta(0.0));
    CHECK(untouched.e_ab == doctest::Approx(std::log(std::cosh(2.0))).epsilon(1e-12));
    CHECK(untouched.e_a_abar == 0.0);
    CHECK(untouched.e_abar_rest == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(untouched.residual == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_FALSE(untouched.e_ab_clamped);

    // No input squeezing: only pair creation across the channel.
    const EntanglementReport created = full_report(InitialState(0.0), bogoliubov_from_theta(0.4));
    CHECK(created.e_ab == 0.0);
    CHECK(created.e_ab_clamped);
    CHECK(created.e_a_abar == doctest::Approx(entanglement_a_abar_closed(0.4)).epsilon(1e-12));
    CHECK(created.residual == doctest::Approx(0.0).epsilon(1e-11));

    const ExpansionModel model(1.0, 1.0, 1.0);
    const EntanglementReport ones = full_report(InitialState(1.0), 1.0, model);
    CHECK(ones.e_ab == doctest::Approx(oracles::kEabOnes).epsilon(1e-12));
    CHECK(ones.e_a_abar == doctest::Approx(oracles::kEaAbarOnes).epsilon(1e-12));
    CHECK(ones.e_a_rest == doctest::Approx(oracles::kEaRestOnes).epsilon(1e-12));
    CHECK(ones.e_abar_rest == doctest::Approx(oracles::kEabarRestOnes).epsilon(1e-9));
    CHECK(ones.residual == doctest::Approx(oracles::kResidualOnes).epsilon(1e-9));
    CHECK(ones.e_a_bbar == 0.0);
    CHECK(ones.e_abar_bbar == 0.0);
    CHECK(ones.k == 1.0);
    CHECK(ones.m == 1.0);
    CHECK(ones.epsilon == 1.0);
    CHECK(ones.sigma_rate == 1.0);
    CHECK(ones.s == 1.0);
    CHECK(ones.theta == doctest::Approx(oracles::kThetaOnes).epsilon(1e-13));

    const EntanglementReport bare = full_report(InitialState(1.0), bogoliubov_from_theta(0.2));
    CHECK(std::isnan(bare.k));
    CHECK(std::isnan(bare.m));
}

TEST_CASE("monotonic trends of the closed forms") {
    // e_ab falls with the expansion rate and rises with momentum.
    {
        double previous = 10.0;
        for (double sigma : {0.2, 0.5, 1.0, 2.0, 4.0}) {
            const ExpansionModel model(1.0, sigma, 1.0);
            const double e = full_report(InitialState(1.0), 1.0, model).e_ab;
            CHECK(e < previous);
            previous = e;
        }
        previous = -1.0;
        for (double k : {0.3, 0.6, 1.0, 2.0, 4.0}) {
            const ExpansionModel model(1.0, 1.0, 1.0);
            const double e = full_report(InitialState(1.0), k, model).e_ab;
            CHECK(e > previous);
            previous = e;
        }
    }
    // e_a_abar rises with both the expansion rate and the volume.
    {
        double previous = -1.0;
        for (double sigma : {0.2, 0.5, 1.0, 2.0, 4.0}) {
            const ExpansionModel model(1.0, sigma, 1.0);
            const double e = full_report(InitialState(1.0), 1.0, model).e_a_abar;
            CHECK(e > previous);
            previous = e;
        }
        previous = -1.0;
        for (double eps : {0.2, 0.5, 1.0, 2.0, 4.0}) {
            const ExpansionModel model(eps, 1.0, 1.0);
            const double e = full_report(InitialState(1.0), 1.0, model).e_a_abar;
            CHECK(e > previous);
            previous = e;
        }
    }
}

TEST_CASE("mass dependence has an interior minimum") {
    const double asymptote = std::log(std::cosh(2.0));
    auto e_ab_at_mass = [](double m) {
        const ExpansionModel model(1.0, 1.0, m);
        return full_report(InitialState(1.0), 1.0, model).e_ab;
    };
    const double low = e_ab_at_mass(1e-3);
    const double high = e_ab_at_mass(1e3);
    CHECK(std::abs(low - asymptote) < 1e-3);
    CHECK(std::abs(high - asymptote) < 1e-3);
    double interior = asymptote;
    for (double m : {0.3, 0.7, 1.0, 1.5, 3.0}) {
        interior = std::min(interior, e_ab_at_mass(m));
    }
    CHECK(interior < low);
    CHECK(interior < high);
}
