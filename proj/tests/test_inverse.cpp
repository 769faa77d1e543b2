#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "expanse/entanglement.hpp"
#include "expanse/inverse.hpp"
#include "oracles.hpp"

using namespace expanse;

namespace {

// Noiseless observations generated at (epsilon, sigma_rate) = (1.3, 0.8),
// m = s = 1, from 30-digit evaluations of the defining formulas.
const std::vector<Observation> kFrozenObservations = {
    {0.5, Quantity::e_a_abar, 2.8532090180861653e-4},
    {1.0, Quantity::e_a_abar, 2.6697625102571944e-5},
    {2.0, Quantity::e_a_abar, 3.5775417542086101e-8},
    {0.5, Quantity::e_ab, 1.3238495881547035},
    {1.0, Quantity::e_ab, 1.3248947967999906},
    {1.0, Quantity::residual, 3.6870860578240941e-5},
};

FitProblem frozen_problem() {
    FitProblem problem;
    problem.observations = kFrozenObservations;
    problem.known = {{"m", 1.0}, {"s", 1.0}};
    problem.unknowns = {{"epsilon", {0.2, 5.0}}, {"sigma_rate", {0.2, 5.0}}};
    return problem;
}

}  // namespace

TEST_CASE("quantity names") {
    CHECK(quantity_from_string("e_ab") == Quantity::e_ab);
    CHECK(quantity_from_string("e_a_abar") == Quantity::e_a_abar);
    CHECK(quantity_from_string("residual") == Quantity::residual);
    CHECK(to_string(Quantity::residual) == "residual");
    CHECK_THROWS_AS(quantity_from_string("negativity"), std::invalid_argument);
}

TEST_CASE("forward model matches the frozen reference values") {
    const ParameterPoint ones;
    CHECK(forward_model(Quantity::e_ab, ones) ==
          doctest::Approx(oracles::kEabOnes).epsilon(1e-12));
    CHECK(forward_model(Quantity::e_a_abar, ones) ==
          doctest::Approx(oracles::kEaAbarOnes).epsilon(1e-12));
    CHECK(forward_model(Quantity::residual, ones) ==
          doctest::Approx(oracles::kResidualOnes).epsilon(1e-9));

    for (const Observation& obs : kFrozenObservations) {
        ParameterPoint p;
        p.k = obs.k;
        p.epsilon = 1.3;
        p.sigma_rate = 0.8;
        CHECK(forward_model(obs.quantity, p) ==
              doctest::Approx(obs.value).epsilon(1e-11));
    }
}

TEST_CASE("fit recovers the frozen synthetic truth") {
    const FitResult result = fit_parameters(frozen_problem());
    CHECK(result.converged);
    CHECK_FALSE(result.degenerate);
    CHECK(std::abs(result.estimates.at("epsilon") - 1.3) <= 1e-3 * 1.3);
    CHECK(std::abs(result.estimates.at("sigma_rate") - 0.8) <= 1e-3 * 0.8);
    CHECK(result.rss < 1e-12);
}

TEST_CASE("fit round-trips random parameter points") {
    std::mt19937 rng(2718);
    std::uniform_real_distribution<double> param(0.2, 5.0);
    for (int i = 0; i < 3; ++i) {
        const double eps_true = param(rng);
        const double sigma_true = param(rng);
        ParameterPoint truth;
        truth.epsilon = eps_true;
        truth.sigma_rate = sigma_true;

        FitProblem problem;
        problem.known = {{"m", 1.0}, {"s", 1.0}};
        problem.unknowns = {{"epsilon", {0.2, 5.0}}, {"sigma_rate", {0.2, 5.0}}};
        for (double k : {0.5, 1.0, 2.0, 4.0}) {
            truth.k = k;
            problem.observations.push_back(
                {k, Quantity::e_a_abar, forward_model(Quantity::e_a_abar, truth)});
        }
        for (double k : {0.5, 1.0}) {
            truth.k = k;
            problem.observations.push_back(
                {k, Quantity::e_ab, forward_model(Quantity::e_ab, truth)});
        }

        const FitResult result = fit_parameters(problem);
        CHECK(result.converged);
        CHECK(std::abs(result.estimates.at("epsilon") - eps_true) <= 1e-3 * eps_true);
        CHECK(std::abs(result.estimates.at("sigma_rate") - sigma_true) <= 1e-3 * sigma_true);
    }
}

TEST_CASE("fit is deterministic") {
    const FitResult first = fit_parameters(frozen_problem());
    const FitResult second = fit_parameters(frozen_problem());
    CHECK(first.estimates.at("epsilon") == second.estimates.at("epsilon"));
    CHECK(first.estimates.at("sigma_rate") == second.estimates.at("sigma_rate"));
    CHECK(first.rss == second.rss);
    CHECK(first.evaluations == second.evaluations);
}

TEST_CASE("degenerate problems are flagged") {
    // Massless field: every generated quantity vanishes, so any (epsilon,
    // sigma_rate) point reproduces all-zero observations.
    FitProblem flat;
    flat.known = {{"m", 0.0}, {"s", 1.0}};
    flat.unknowns = {{"epsilon", {0.2, 5.0}}, {"sigma_rate", {0.2, 5.0}}};
    for (double k : {0.5, 1.0, 2.0}) {
        flat.observations.push_back({k, Quantity::e_a_abar, 0.0});
    }
    const FitResult result = fit_parameters(flat);
    CHECK(result.degenerate);
    CHECK(result.rss == doctest::Approx(0.0));

    // One observation cannot pin two unknowns.
    FitProblem thin = frozen_problem();
    thin.observations = {kFrozenObservations.front()};
    const FitResult under = fit_parameters(thin);
    CHECK(under.degenerate);
}

TEST_CASE("fit input validation") {
    FitProblem problem = frozen_problem();
    problem.observations.clear();
    CHECK_THROWS_AS(fit_parameters(problem), std::invalid_argument);

    problem = frozen_problem();
    problem.known.erase("m");
    CHECK_THROWS_AS(fit_parameters(problem), std::invalid_argument);

    problem = frozen_problem();
    problem.unknowns["epsilon"] = {-1.0, 5.0};
    CHECK_THROWS_AS(fit_parameters(problem), std::invalid_argument);

    problem = frozen_problem();
    problem.unknowns.clear();
    problem.known = {{"m", 1.0}, {"s", 1.0}, {"epsilon", 1.0}, {"sigma_rate", 1.0}};
    CHECK_THROWS_AS(fit_parameters(problem), std::invalid_argument);

    problem = frozen_problem();
    problem.observations.front().k = -1.0;
    CHECK_THROWS_AS(fit_parameters(problem), std::invalid_argument);
}

TEST_CASE("sensitivity derivatives match high-precision references") {
    // Reference partials at k = m = s = epsilon = sigma_rate = 1, computed
    // with 30-digit differentiation of the closed forms.
    const ParameterPoint ones;

    const Sensitivity a_abar = sensitivity(ones, Quantity::e_a_abar);
    CHECK(a_abar.richardson_ok);
    CHECK_FALSE(a_abar.boundary);
    CHECK(a_abar.d_epsilon == doctest::Approx(1.16089037e-4).epsilon(1e-5));
    CHECK(a_abar.d_sigma_rate == doctest::Approx(1.604012459e-3).epsilon(1e-5));
    CHECK(std::abs(a_abar.d_sigma_rate) > std::abs(a_abar.d_epsilon));

    const Sensitivity ab = sensitivity(ones, Quantity::e_ab);
    CHECK(ab.richardson_ok);
    CHECK(ab.d_epsilon == doctest::Approx(-4.691006809e-4).epsilon(1e-5));
    CHECK(ab.d_sigma_rate == doctest::Approx(-6.481605468e-3).epsilon(1e-5));

    const Sensitivity res = sensitivity(ones, Quantity::residual);
    CHECK(res.richardson_ok);
    CHECK(res.d_epsilon == doctest::Approx(1.602555926e-4).epsilon(1e-4));
    CHECK(res.d_sigma_rate == doctest::Approx(2.214265653e-3).epsilon(1e-4));
}

TEST_CASE("sensitivity of a massless field vanishes") {
    ParameterPoint p;
    p.m = 0.0;
    for (Quantity q : {Quantity::e_ab, Quantity::e_a_abar, Quantity::residual}) {
        const Sensitivity sens = sensitivity(p, q);
        CHECK(sens.d_epsilon == 0.0);
        CHECK(sens.d_sigma_rate == 0.0);
        CHECK(sens.richardson_ok);
    }
}

TEST_CASE("sensitivity falls back to one-sided differences at the clamp boundary") {
    // Bisect epsilon until the clamp boundary of the (A,B) closed form lies
    // within the finite-difference stencil, then check the flag.
    ParameterPoint p;
    p.s = 0.05;
    p.k = 0.1;
    p.m = 1.0;
    p.sigma_rate = 3.0;

    auto clamped_at = [&](double eps) {
        ParameterPoint q = p;
        q.epsilon = eps;
        const ExpansionModel model(q.epsilon, q.sigma_rate, q.m);
        const BogoliubovData bog = bogoliubov(frequencies(q.k, model), model);
        return entanglement_ab_closed_checked(q.s, bog.theta).clamped;
    };

    double lo = 0.5;
    double hi = 5.0;
    REQUIRE_FALSE(clamped_at(lo));
    REQUIRE(clamped_at(hi));
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (clamped_at(mid) ? hi : lo) = mid;
    }

    p.epsilon = lo;  // unclamped side, boundary within 1e-5 * epsilon
    const Sensitivity sens = sensitivity(p, Quantity::e_ab);
    CHECK(sens.boundary);
}
