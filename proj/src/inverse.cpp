#include "expanse/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "expanse/entanglement.hpp"
#include "expanse/nelder_mead.hpp"

namespace expanse {

namespace {

const std::vector<std::string>& parameter_names() {
    static const std::vector<std::string> names = {"epsilon", "m", "s", "sigma_rate"};
    return names;
}

struct GridCell {
    std::vector<int> index;
    double rss;
};

double cell_distance(const std::vector<int>& a, const std::vector<int>& b) {
    int d = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        d = std::max(d, std::abs(a[i] - b[i]));
    }
    return d;
}

}  // namespace

Quantity quantity_from_string(std::string_view name) {
    if (name == "e_ab") return Quantity::e_ab;
    if (name == "e_a_abar") return Quantity::e_a_abar;
    if (name == "residual") return Quantity::residual;
    throw std::invalid_argument("unknown quantity '" + std::string(name) +
                                "' (expected e_ab, e_a_abar, or residual)");
}

std::string_view to_string(Quantity q) {
    switch (q) {
        case Quantity::e_ab: return "e_ab";
        case Quantity::e_a_abar: return "e_a_abar";
        case Quantity::residual: return "residual";
    }
    return "?";
}

double forward_model(Quantity q, const ParameterPoint& p) {
    const ExpansionModel model(p.epsilon, p.sigma_rate, p.m);
    const BogoliubovData bog = bogoliubov(frequencies(p.k, model), model);
    switch (q) {
        case Quantity::e_ab: return entanglement_ab_closed(p.s, bog.theta);
        case Quantity::e_a_abar: return entanglement_a_abar_closed(bog.theta);
        case Quantity::residual: return residual_entanglement(InitialState(p.s), bog);
    }
    throw std::invalid_argument("forward_model: unknown quantity");
}

FitResult fit_parameters(const FitProblem& problem, const FitOptions& opts) {
    if (problem.unknowns.empty()) {
        throw std::invalid_argument("fit_parameters: at least one unknown required");
    }
    if (problem.observations.empty()) {
        throw std::invalid_argument("fit_parameters: empty observation list");
    }
    // Fewer observations than unknowns is allowed but can only ever produce a
    // degenerate result; see below.
    const bool underdetermined = problem.observations.size() < problem.unknowns.size();
    for (const auto& name : parameter_names()) {
        const bool in_known = problem.known.count(name) > 0;
        const bool in_unknown = problem.unknowns.count(name) > 0;
        if (in_known == in_unknown) {
            throw std::invalid_argument("fit_parameters: parameter '" + name +
                                        "' must appear in exactly one of known/unknown");
        }
    }
    for (const auto& [name, bounds] : problem.unknowns) {
        if (!(bounds.lo > 0.0) || !(bounds.hi > bounds.lo) || !std::isfinite(bounds.hi)) {
            throw std::invalid_argument("fit_parameters: bounds for '" + name +
                                        "' must be positive, finite, and ordered");
        }
    }
    for (const Observation& obs : problem.observations) {
        if (!(obs.k > 0.0) || !(obs.value >= 0.0) || !(obs.weight >= 0.0)) {
            throw std::invalid_argument("fit_parameters: observation needs k > 0, value >= 0, weight >= 0");
        }
    }

    std::vector<std::string> unknown_names;
    std::vector<Bounds> log_bounds;
    for (const auto& [name, bounds] : problem.unknowns) {
        unknown_names.push_back(name);
        log_bounds.push_back({std::log(bounds.lo), std::log(bounds.hi)});
    }
    const int dim = static_cast<int>(unknown_names.size());

    long evaluations = 0;
    auto rss_at = [&](const Eigen::VectorXd& log_params) {
        ParameterPoint p;
        p.k = 1.0;
        auto value_of = [&](const std::string& name) {
            auto known_it = problem.known.find(name);
            if (known_it != problem.known.end()) {
                return known_it->second;
            }
            for (int i = 0; i < dim; ++i) {
                if (unknown_names[static_cast<size_t>(i)] == name) {
                    return std::exp(log_params[i]);
                }
            }
            throw std::logic_error("fit_parameters: unreachable parameter lookup");
        };
        p.m = value_of("m");
        p.s = value_of("s");
        p.epsilon = value_of("epsilon");
        p.sigma_rate = value_of("sigma_rate");

        double rss = 0.0;
        for (const Observation& obs : problem.observations) {
            p.k = obs.k;
            double modeled;
            try {
                modeled = forward_model(obs.quantity, p);
            } catch (const std::exception&) {
                modeled = std::numeric_limits<double>::quiet_NaN();
            }
            ++evaluations;
            if (!std::isfinite(modeled)) {
                // Undefined forward point: skip with a penalty dominating any
                // genuine residual.
                rss += 1e6;
                continue;
            }
            const double r = modeled - obs.value;
            rss += obs.weight * r * r;
        }
        return rss;
    };

    // Coarse log-grid scan; every cell value is kept for minimum detection.
    const int n = std::max(2, opts.grid_per_axis);
    long total_cells = 1;
    for (int i = 0; i < dim; ++i) {
        total_cells *= n;
    }
    auto index_of = [&](long flat) {
        std::vector<int> idx(static_cast<size_t>(dim));
        for (int i = 0; i < dim; ++i) {
            idx[static_cast<size_t>(i)] = static_cast<int>(flat % n);
            flat /= n;
        }
        return idx;
    };
    auto point_of = [&](const std::vector<int>& idx) {
        Eigen::VectorXd point(dim);
        for (int i = 0; i < dim; ++i) {
            const Bounds& lb = log_bounds[static_cast<size_t>(i)];
            point[i] = lb.lo + (lb.hi - lb.lo) * idx[static_cast<size_t>(i)] / (n - 1);
        }
        return point;
    };

    std::vector<double> cell_rss(static_cast<size_t>(total_cells));
    long best_flat = 0;
    for (long flat = 0; flat < total_cells; ++flat) {
        cell_rss[static_cast<size_t>(flat)] = rss_at(point_of(index_of(flat)));
        if (cell_rss[static_cast<size_t>(flat)] < cell_rss[static_cast<size_t>(best_flat)]) {
            best_flat = flat;
        }
    }
    const double best_cell_rss = cell_rss[static_cast<size_t>(best_flat)];
    const std::vector<int> best_index = index_of(best_flat);

    // Degeneracy: another cell matches the best RSS but sits far away.
    bool degenerate = underdetermined;
    for (long flat = 0; flat < total_cells && !degenerate; ++flat) {
        degenerate = cell_rss[static_cast<size_t>(flat)] <= best_cell_rss + 1e-12 &&
                     cell_distance(index_of(flat), best_index) > 1;
    }

    // Refinement candidates: the best cell plus every strict grid-local
    // minimum. Narrow spurious dips can out-bid the true basin on a coarse
    // grid, so a single-cell start is not enough.
    auto flat_of = [&](const std::vector<int>& idx) {
        long flat = 0;
        for (int i = dim - 1; i >= 0; --i) {
            flat = flat * n + idx[static_cast<size_t>(i)];
        }
        return flat;
    };
    std::vector<long> candidates = {best_flat};
    std::vector<int> offset(static_cast<size_t>(dim), -1);
    for (long flat = 0; flat < total_cells; ++flat) {
        if (flat == best_flat) {
            continue;
        }
        const std::vector<int> idx = index_of(flat);
        bool local_min = true;
        std::fill(offset.begin(), offset.end(), -1);
        while (local_min) {
            std::vector<int> neighbor = idx;
            bool in_range = true;
            bool all_zero = true;
            for (int i = 0; i < dim; ++i) {
                neighbor[static_cast<size_t>(i)] += offset[static_cast<size_t>(i)];
                in_range = in_range && neighbor[static_cast<size_t>(i)] >= 0 &&
                           neighbor[static_cast<size_t>(i)] < n;
                all_zero = all_zero && offset[static_cast<size_t>(i)] == 0;
            }
            if (in_range && !all_zero) {
                local_min = cell_rss[static_cast<size_t>(flat_of(neighbor))] >
                            cell_rss[static_cast<size_t>(flat)];
            }
            int axis = 0;
            while (axis < dim) {
                if (++offset[static_cast<size_t>(axis)] <= 1) {
                    break;
                }
                offset[static_cast<size_t>(axis)] = -1;
                ++axis;
            }
            if (axis == dim) {
                break;
            }
        }
        if (local_min) {
            candidates.push_back(flat);
        }
    }
    std::sort(candidates.begin() + 1, candidates.end(), [&](long a, long b) {
        return cell_rss[static_cast<size_t>(a)] < cell_rss[static_cast<size_t>(b)];
    });
    if (candidates.size() > 8) {
        candidates.resize(8);
    }

    auto boxed_rss = [&](const Eigen::VectorXd& x) {
        double wall = 0.0;
        Eigen::VectorXd clipped = x;
        for (int i = 0; i < dim; ++i) {
            const Bounds& lb = log_bounds[static_cast<size_t>(i)];
            if (x[i] < lb.lo) {
                wall += (lb.lo - x[i]) * (lb.lo - x[i]);
                clipped[i] = lb.lo;
            } else if (x[i] > lb.hi) {
                wall += (x[i] - lb.hi) * (x[i] - lb.hi);
                clipped[i] = lb.hi;
            }
        }
        return rss_at(clipped) + 1e3 * wall;
    };

    const double cell_step = 0.5 * (log_bounds[0].hi - log_bounds[0].lo) / (n - 1);
    Eigen::VectorXd solution = point_of(best_index);
    double solution_rss = best_cell_rss;
    for (long flat : candidates) {
        Eigen::VectorXd x = point_of(index_of(flat));
        double fx = cell_rss[static_cast<size_t>(flat)];
        double step = cell_step;
        // Restarted simplex rounds: a fresh simplex escapes the collapsed
        // shape NM develops inside long curved valleys.
        for (int round = 0; round < 8; ++round) {
            NelderMeadOptions nm;
            nm.max_iterations = opts.refine_iterations;
            nm.initial_step = step;
            nm.x_tol = 1e-14;
            nm.f_tol = 0.0;
            const NelderMeadResult res = nelder_mead(boxed_rss, x, nm);
            const bool improved = res.fx < fx * (1.0 - 1e-6);
            if (res.fx < fx) {
                x = res.x;
                fx = res.fx;
            }
            step *= 0.25;
            if (fx < 1e-26 || (!improved && round >= 2)) {
                break;
            }
        }
        if (fx < solution_rss) {
            solution = x;
            solution_rss = fx;
        }
    }

    for (int i = 0; i < dim; ++i) {
        const Bounds& lb = log_bounds[static_cast<size_t>(i)];
        solution[i] = std::clamp(solution[i], lb.lo, lb.hi);
    }

    FitResult result;
    for (int i = 0; i < dim; ++i) {
        result.estimates[unknown_names[static_cast<size_t>(i)]] = std::exp(solution[i]);
    }
    result.rss = rss_at(solution);
    result.converged = true;
    result.degenerate = degenerate;
    result.evaluations = evaluations;
    return result;
}

Sensitivity sensitivity(const ParameterPoint& p, Quantity q) {
    Sensitivity out;
    out.richardson_ok = true;

    auto clamp_state = [&](const ParameterPoint& at) {
        if (q != Quantity::e_ab) {
            return false;
        }
        const ExpansionModel model(at.epsilon, at.sigma_rate, at.m);
        const BogoliubovData bog = bogoliubov(frequencies(at.k, model), model);
        return entanglement_ab_closed_checked(at.s, bog.theta).clamped;
    };

    auto derivative = [&](auto setter, double x0, bool& boundary) {
        const double h = 1e-5 * std::max(std::abs(x0), 1e-8);
        auto f = [&](double x) {
            ParameterPoint at = p;
            setter(at, x);
            return forward_model(q, at);
        };
        auto clamped_at = [&](double x) {
            ParameterPoint at = p;
            setter(at, x);
            return clamp_state(at);
        };

        const bool c_center = clamped_at(x0);
        const bool c_minus = clamped_at(x0 - h);
        const bool c_plus = clamped_at(x0 + h);
        if (c_minus != c_center || c_plus != c_center) {
            boundary = true;
            // One-sided difference on the side matching the center.
            if (c_plus == c_center) {
                return (f(x0 + h) - f(x0)) / h;
            }
            return (f(x0) - f(x0 - h)) / h;
        }

        const double d_full = (f(x0 + h) - f(x0 - h)) / (2.0 * h);
        const double d_half = (f(x0 + 0.5 * h) - f(x0 - 0.5 * h)) / h;
        if (std::abs(d_full - d_half) > 1e-4 * std::max(std::abs(d_half), 1e-10)) {
            out.richardson_ok = false;
        }
        return d_half;
    };

    out.d_epsilon = derivative([](ParameterPoint& at, double x) { at.epsilon = x; }, p.epsilon,
                               out.boundary);
    out.d_sigma_rate = derivative([](ParameterPoint& at, double x) { at.sigma_rate = x; },
                                  p.sigma_rate, out.boundary);
    return out;
}

}  // namespace expanse
