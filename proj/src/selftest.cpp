#include "expanse/selftest.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "expanse/entanglement.hpp"
#include "expanse/figures.hpp"
#include "expanse/grid.hpp"
#include "expanse/inverse.hpp"
#include "expanse/nelder_mead.hpp"

namespace expanse {

namespace {

struct Checker {
    int failures = 0;
    std::ostringstream detail;

    void expect(bool ok, const std::string& message) {
        if (ok) {
            return;
        }
        ++failures;
        if (failures <= 4) {
            detail << (failures > 1 ? "; " : "") << message;
        }
    }

    template <typename T>
    void expect_near(T actual, T expected, T tol, const std::string& what) {
        if (std::abs(actual - expected) <= tol) {
            return;
        }
        std::ostringstream os;
        os << what << ": " << actual << " vs " << expected << " (tol " << tol << ")";
        expect(false, os.str());
    }
};

struct GridSpec {
    std::vector<double> k, m, epsilon, sigma, s;
};

GridSpec make_grid(bool quick) {
    const int n = quick ? 4 : 7;
    GridSpec grid;
    grid.k = logspace(1e-2, 1e2, n);
    grid.m = logspace(1e-2, 1e2, n);
    grid.epsilon = logspace(1e-2, 1e1, n);
    grid.sigma = logspace(1e-2, 1e1, n);
    grid.s = {0.0, 0.5, 1.0, 2.0};
    return grid;
}

Eigen::Matrix2d rotation2(double phi) {
    Eigen::Matrix2d r;
    r << std::cos(phi), std::sin(phi), -std::sin(phi), std::cos(phi);
    return r;
}

SymplecticTransform random_local_pair(std::mt19937& rng) {
    std::uniform_real_distribution<double> angle(-3.1, 3.1);
    std::uniform_real_distribution<double> squeeze(-0.8, 0.8);
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(4, 4);
    for (int block = 0; block < 2; ++block) {
        Eigen::Matrix2d z = Eigen::Matrix2d::Zero();
        const double zz = squeeze(rng);
        z(0, 0) = std::exp(zz);
        z(1, 1) = std::exp(-zz);
        local.block<2, 2>(2 * block, 2 * block) = rotation2(angle(rng)) * z * rotation2(angle(rng));
    }
    return SymplecticTransform(local);
}

CovarianceMatrix random_two_mode_state(std::mt19937& rng) {
    std::uniform_real_distribution<double> nu(1.0, 3.0);
    std::uniform_real_distribution<double> mix(0.0, 0.8);
    Eigen::MatrixXd thermal = Eigen::MatrixXd::Identity(4, 4);
    const double nu1 = nu(rng);
    const double nu2 = nu(rng);
    thermal.diagonal() << nu1, nu1, nu2, nu2;
    const CovarianceMatrix mixed =
        apply(squeeze_transform(mix(rng)), CovarianceMatrix(thermal));
    return apply(random_local_pair(rng), mixed);
}

SuiteResult run_suite(const std::string& name,
                      const std::function<void(Checker&)>& body) {
    SuiteResult result;
    result.name = name;
    Checker check;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(check);
    } catch (const std::exception& ex) {
        check.expect(false, std::string("exception: ") + ex.what());
    }
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.passed = check.failures == 0;
    result.detail = check.detail.str();
    if (check.failures > 4) {
        result.detail += " (+" + std::to_string(check.failures - 4) + " more)";
    }
    return result;
}

void suite_phasespace(Checker& check, bool quick) {
    const SymplecticTransform omega = symplectic_form(2);
    check.expect((omega.data() * omega.data() + Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-14,
                 "Omega^2 != -I");
    check.expect((omega.data() * omega.data().transpose() - Eigen::MatrixXd::Identity(4, 4)).norm() <
                     1e-14,
                 "Omega not orthogonal");

    for (double s : {0.0, 0.5, 1.0, 2.0}) {
        const std::vector<double> nu = symplectic_eigenvalues(in_state(InitialState(s)));
        check.expect_near(nu.front(), 1.0, 1e-10, "squeezed input nu_max");
        check.expect_near(nu.back(), 1.0, 1e-10, "squeezed input nu_min");
    }

    std::mt19937 rng(20240817);
    const int trials = quick ? 8 : 32;
    for (int t = 0; t < trials; ++t) {
        const CovarianceMatrix cm = random_two_mode_state(rng);
        const SymplecticTransform s = random_local_pair(rng);
        const CovarianceMatrix moved = apply(s, cm);
        check.expect_near(moved.determinant() / cm.determinant(), 1.0, 1e-10,
                          "det changed under symplectic congruence");
        check.expect_near(renyi2_entropy(moved), renyi2_entropy(cm), 1e-10,
                          "entropy changed under symplectic congruence");

        const CovarianceMatrix four = direct_sum(cm, cm);
        const CovarianceMatrix once = partial_trace(four, {1, 2});
        const CovarianceMatrix twice = partial_trace(partial_trace(four, {0, 1, 2}), {1, 2});
        check.expect((once.data() - twice.data()).cwiseAbs().maxCoeff() < 1e-14,
                     "partial traces fail to compose");
    }
}

void suite_bogoliubov(Checker& check, bool quick) {
    const GridSpec grid = make_grid(quick);
    for (double k : grid.k) {
        for (double m : grid.m) {
            for (double eps : grid.epsilon) {
                for (double sg : grid.sigma) {
                    const ExpansionModel model(eps, sg, m);
                    const ModeSpec mode = frequencies(k, model);
                    const BogoliubovData bog = bogoliubov(mode, model);
                    const BogoliubovModuli moduli = bogoliubov_moduli_via_gamma(mode, model);
                    check.expect(bog.theta >= 0.0 && bog.theta < 1.0, "theta out of range");
                    check.expect_near(moduli.alpha_sq - moduli.beta_sq, 1.0, 1e-12,
                                      "|alpha|^2-|beta|^2 (gamma route)");
                    const double alpha_sq = bog.alpha_mod * bog.alpha_mod;
                    check.expect(std::abs(moduli.alpha_sq - alpha_sq) <= 1e-10 * alpha_sq,
                                 "alpha^2 route disagreement");
                    const double beta_sq = bog.beta_mod * bog.beta_mod;
                    check.expect(std::abs(moduli.beta_sq - beta_sq) <=
                                     1e-10 * std::max(beta_sq, 1e-300),
                                 "beta^2 route disagreement");
                }
            }
        }
    }
    // theta rises with volume and falls with momentum. Strictness is only
    // resolvable in doubles while the small sinh argument stays modest; in
    // the asymptotic tail log(theta) -> -pi omega_in / sigma, which carries
    // no epsilon dependence at machine precision.
    for (double m : grid.m) {
        for (double sg : grid.sigma) {
            double previous = -1.0;
            bool previous_resolvable = true;
            for (double eps : grid.epsilon) {
                const ExpansionModel model(eps, sg, m);
                const ModeSpec mode = frequencies(1.0, model);
                const double theta = bogoliubov(mode, model).theta;
                const bool resolvable =
                    3.141592653589793 * mode.omega_minus / sg <= 3.0 && theta > 1e-280;
                if (previous_resolvable && resolvable) {
                    check.expect(theta > previous, "theta not increasing in epsilon");
                } else {
                    check.expect(theta >= previous * (1.0 - 1e-12),
                                 "theta decreasing in epsilon");
                }
                previous = theta;
                previous_resolvable = resolvable;
            }
            previous = 2.0;
            const ExpansionModel model(1.0, sg, m);
            for (double k : grid.k) {
                const double theta = bogoliubov(frequencies(k, model), model).theta;
                if (theta > 1e-280 && previous > 1e-280) {
                    check.expect(theta < previous, "theta not decreasing in k");
                } else {
                    check.expect(theta <= previous * (1.0 + 1e-12), "theta increasing in k");
                }
                previous = theta;
            }
        }
    }
}

void suite_out_state(Checker& check, bool quick) {
    const GridSpec grid = make_grid(quick);
    const size_t stride = quick ? 2 : 3;
    size_t counter = 0;
    for (double k : grid.k) {
        for (double m : grid.m) {
            for (double eps : grid.epsilon) {
                for (double sg : grid.sigma) {
                    if (counter++ % stride != 0) {
                        continue;
                    }
                    const double s = grid.s[counter % grid.s.size()];
                    const ExpansionModel model(eps, sg, m);
                    const BogoliubovData bog = bogoliubov(frequencies(k, model), model);
                    const CovarianceMatrix out = out_state(InitialState(s), bog);
                    check.expect_near(out.determinant(), 1.0, 1e-9, "out-state determinant");
                    check.expect_near(renyi2_entropy(out), 0.0, 1e-9, "out-state entropy");

                    const std::vector<std::vector<int>> reductions = {
                        {0, 2}, {1, 3}, {0, 3}, {0, 1}, {2, 3}};
                    for (const auto& keep : reductions) {
                        const CovarianceMatrix red = partial_trace(out, keep);
                        check.expect(symplectic_eigenvalues(red).back() >= 1.0 - 1e-9,
                                     "reduction unphysical");
                    }
                    const CovarianceMatrix a_abar = partial_trace(out, {modes::a, modes::abar});
                    const CovarianceMatrix builder = reduced_a_abar(s, bog.theta);
                    check.expect((a_abar.data() - builder.data()).cwiseAbs().maxCoeff() <= 1e-12,
                                 "(A,Abar) reduction mismatch with closed form");
                    const CovarianceMatrix b_bbar = partial_trace(out, {modes::b, modes::bbar});
                    check.expect((a_abar.data() - b_bbar.data()).cwiseAbs().maxCoeff() <= 1e-12,
                                 "(B,Bbar) differs from (A,Abar)");
                }
            }
        }
    }
}

void suite_closed_forms(Checker& check, bool quick, bool inject_fault) {
    const std::vector<double> thetas = quick ? std::vector<double>{0.0, 0.3, 0.6}
                                             : std::vector<double>{0.0, 0.1, 0.3, 0.5, 0.7};
    const std::vector<double> squeezings = {0.0, 0.5, 1.0, 2.0};
    const double fault_sign = inject_fault ? -1.0 : 1.0;

    for (double theta : thetas) {
        // At s = 0 the (A,Abar) reduction is pure, so both routes must agree.
        const double closed = fault_sign * entanglement_a_abar_closed(theta);
        const double pure = pure_bipartite_entanglement(reduced_a_abar(0.0, theta),
                                                        ModePartition{{0}});
        check.expect_near(closed, pure, 1e-12, "(A,Abar) closed form vs pure route at s=0");

        for (double s : squeezings) {
            const ClampedValue ab = entanglement_ab_closed_checked(s, theta);
            check.expect(ab.value >= 0.0, "clamped value negative");
            if (s == 0.0) {
                check.expect(ab.value == 0.0, "s=0 state must carry no entanglement");
                check.expect(theta == 0.0 || ab.clamped, "s=0 clamp flag missing");
            }
            if (theta == 0.0) {
                check.expect_near(ab.value, std::log(std::cosh(2.0 * s)), 1e-12,
                                  "theta=0 limit of the (A,B) closed form");
            }
        }
    }

    for (double theta : thetas) {
        for (double s : squeezings) {
            const EntanglementReport report =
                full_report(InitialState(s), bogoliubov_from_theta(theta));
            const double t2 = theta * theta;
            const double closed_residual =
                std::log1p(t2 * std::cosh(2.0 * s)) - std::log1p(t2);
            check.expect_near(report.e_abar_rest - report.e_a_abar, closed_residual, 1e-10,
                              "Abar-probe slack identity");
            check.expect(report.residual >= 0.0, "negative residual");
        }
    }
}

void suite_minimizer(Checker& check, bool quick) {
    std::mt19937 rng(7041);
    std::uniform_real_distribution<double> s_dist(0.0, 2.0);
    std::uniform_real_distribution<double> t2_dist(0.0, 0.5);
    const int points = quick ? 3 : 10;

    EofOptions opts;
    for (int i = 0; i < points; ++i) {
        const double s = s_dist(rng);
        const double t2 = t2_dist(rng);
        const double theta = std::sqrt(t2);

        const EofResult ab = gaussian_renyi2_eof_numeric(reduced_ab(s, theta), opts);
        check.expect(ab.converged, "minimizer failed to converge on (A,B)");
        check.expect_near(ab.value, entanglement_ab_closed(s, theta), 1e-4,
                          "minimizer vs (A,B) closed form");

        const EofResult a_abar = gaussian_renyi2_eof_numeric(reduced_a_abar(s, theta), opts);
        check.expect(a_abar.converged, "minimizer failed to converge on (A,Abar)");
        check.expect_near(a_abar.value, entanglement_a_abar_closed(theta), 1e-4,
                          "minimizer vs (A,Abar) closed form");
    }

    EofOptions no_shortcut;
    no_shortcut.ppt_shortcut = false;
    for (int i = 0; i < (quick ? 2 : 4); ++i) {
        const double s = s_dist(rng);
        const double theta = std::sqrt(t2_dist(rng));
        const EofResult separable =
            gaussian_renyi2_eof_numeric(reduced_a_bbar(s, theta), no_shortcut);
        check.expect(separable.converged && separable.value < 1e-6,
                     "minimizer unable to witness separability");
    }
}

void suite_monogamy(Checker& check, bool quick) {
    const GridSpec grid = make_grid(quick);
    size_t counter = 0;
    for (double k : grid.k) {
        for (double m : grid.m) {
            for (double eps : grid.epsilon) {
                for (double sg : grid.sigma) {
                    const double s = grid.s[counter++ % grid.s.size()];
                    const ExpansionModel model(eps, sg, m);
                    // full_report performs the monogamy bookkeeping and throws
                    // on any negative slack beyond tolerance.
                    const EntanglementReport report = full_report(InitialState(s), k, model);
                    check.expect(report.residual >= 0.0, "negative residual");
                    check.expect(report.e_a_rest + 1e-9 >=
                                     report.e_ab + report.e_a_abar + report.e_a_bbar,
                                 "A-probe monogamy violated");
                }
            }
        }
    }
}

void suite_figures(Checker& check, bool quick) {
    const int points = quick ? 24 : 60;

    const Table fig1a = figure_table("fig1a", {}, points);
    for (size_t c = 1; c < fig1a.header.size(); ++c) {
        for (size_t r = 1; r < fig1a.rows.size(); ++r) {
            check.expect(fig1a.rows[r][c] <= fig1a.rows[r - 1][c] + 1e-12,
                         "fig1a not decreasing in sigma");
        }
    }
    for (const auto& row : fig1a.rows) {
        for (size_t c = 2; c < row.size(); ++c) {
            check.expect(row[c] >= row[c - 1] - 1e-12, "fig1a curves not ordered in k");
        }
    }

    const Table fig2a = figure_table("fig2a", {}, points);
    for (size_t c = 1; c < fig2a.header.size(); ++c) {
        for (size_t r = 1; r < fig2a.rows.size(); ++r) {
            check.expect(fig2a.rows[r][c] >= fig2a.rows[r - 1][c] - 1e-12,
                         "fig2a not increasing in sigma");
        }
    }

    const Table fig1b = figure_table("fig1b", {}, quick ? 41 : 121);
    const double asymptote = std::log(std::cosh(2.0));
    for (size_t c = 1; c < fig1b.header.size(); ++c) {
        double minimum = asymptote;
        for (const auto& row : fig1b.rows) {
            minimum = std::min(minimum, row[c]);
        }
        check.expect_near(fig1b.rows.front()[c], asymptote, 1e-3, "fig1b small-mass tail");
        check.expect_near(fig1b.rows.back()[c], asymptote, 1e-3, "fig1b large-mass tail");
        check.expect(minimum < std::min(fig1b.rows.front()[c], fig1b.rows.back()[c]),
                     "fig1b missing interior minimum");
    }

    for (const char* name : {"fig3a", "fig3d"}) {
        const Table t = figure_table(name, {}, points);
        for (size_t c = 1; c < t.header.size(); ++c) {
            for (size_t r = 1; r < t.rows.size(); ++r) {
                check.expect(t.rows[r][c] >= t.rows[r - 1][c] - 1e-12,
                             std::string(name) + " not increasing in sigma");
            }
        }
    }
    for (const char* name : {"fig3b", "fig3e"}) {
        const Table t = figure_table(name, {}, points);
        for (size_t c = 1; c < t.header.size(); ++c) {
            for (size_t r = 1; r < t.rows.size(); ++r) {
                check.expect(t.rows[r][c] >= t.rows[r - 1][c] - 1e-12,
                             std::string(name) + " not increasing in epsilon");
            }
        }
    }
    for (const char* name : {"fig4a", "fig4b"}) {
        const Table t = figure_table(name, {}, points);
        for (const auto& row : t.rows) {
            for (size_t c = 1; c < row.size(); ++c) {
                check.expect(row[c] >= 0.0, std::string(name) + " negative residual sample");
            }
        }
    }
}

void suite_inverse(Checker& check, bool quick) {
    std::mt19937 rng(99251);
    std::uniform_real_distribution<double> param(0.2, 5.0);
    const int instances = quick ? 1 : 2;
    for (int i = 0; i < instances; ++i) {
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
        FitOptions opts;
        opts.grid_per_axis = quick ? 16 : 32;
        const FitResult fit = fit_parameters(problem, opts);
        check.expect(fit.converged && !fit.degenerate, "fit flagged degenerate");
        check.expect(std::abs(fit.estimates.at("epsilon") - eps_true) <= 1e-3 * eps_true,
                     "epsilon recovery off");
        check.expect(std::abs(fit.estimates.at("sigma_rate") - sigma_true) <= 1e-3 * sigma_true,
                     "sigma_rate recovery off");
    }

    const ParameterPoint ones;
    const Sensitivity ab = sensitivity(ones, Quantity::e_ab);
    check.expect(ab.richardson_ok, "e_ab sensitivity failed the step-halving check");
    check.expect(ab.d_epsilon < 0.0 && ab.d_sigma_rate < 0.0, "e_ab sensitivity signs wrong");
    const Sensitivity a_abar = sensitivity(ones, Quantity::e_a_abar);
    check.expect(a_abar.d_epsilon > 0.0 && a_abar.d_sigma_rate > 0.0,
                 "e_a_abar sensitivity signs wrong");
    check.expect(std::abs(a_abar.d_sigma_rate) > std::abs(a_abar.d_epsilon),
                 "rate/volume sensitivity ordering wrong");
}

}  // namespace

std::vector<SuiteResult> run_selftest(bool quick, bool inject_fault) {
    std::vector<SuiteResult> results;
    results.push_back(run_suite("phasespace-algebra",
                                [&](Checker& c) { suite_phasespace(c, quick); }));
    results.push_back(run_suite("bogoliubov-consistency",
                                [&](Checker& c) { suite_bogoliubov(c, quick); }));
    results.push_back(run_suite("out-state-geometry",
                                [&](Checker& c) { suite_out_state(c, quick); }));
    results.push_back(run_suite("closed-forms", [&](Checker& c) {
        suite_closed_forms(c, quick, inject_fault);
    }));
    results.push_back(run_suite("minimizer-oracle",
                                [&](Checker& c) { suite_minimizer(c, quick); }));
    results.push_back(run_suite("monogamy", [&](Checker& c) { suite_monogamy(c, quick); }));
    results.push_back(run_suite("figure-shapes", [&](Checker& c) { suite_figures(c, quick); }));
    results.push_back(run_suite("inverse-roundtrip",
                                [&](Checker& c) { suite_inverse(c, quick); }));
    return results;
}

}  // namespace expanse
