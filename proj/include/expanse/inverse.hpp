#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

// Inversion of entanglement observations back to cosmological parameters:
// a coarse log-grid scan over the unknowns followed by derivative-free local
// refinement, plus finite-difference sensitivities. Deterministic throughout.

namespace expanse {

enum class Quantity { e_ab, e_a_abar, residual };

Quantity quantity_from_string(std::string_view name);
std::string_view to_string(Quantity q);

/// A full forward-model evaluation point.
struct ParameterPoint {
    double k = 1.0;
    double m = 1.0;
    double s = 1.0;
    double epsilon = 1.0;
    double sigma_rate = 1.0;
};

double forward_model(Quantity q, const ParameterPoint& p);

struct Observation {
    double k;
    Quantity quantity;
    double value;
    double weight = 1.0;
};

struct Bounds {
    double lo;
    double hi;
};

/// Model parameters are {"m", "s", "epsilon", "sigma_rate"}; each must appear
/// in exactly one of `known` / `unknowns`.
struct FitProblem {
    std::vector<Observation> observations;
    std::map<std::string, double> known;
    std::map<std::string, Bounds> unknowns;
};

struct FitOptions {
    int grid_per_axis = 32;
    int refine_iterations = 400;
};

struct FitResult {
    std::map<std::string, double> estimates;
    double rss = 0.0;
    bool converged = false;
    bool degenerate = false;  ///< multiple well-separated grid optima
    long evaluations = 0;
};

/// Weighted least squares over the box, log-parameterized: 32^d grid scan,
/// then simplex refinement from the best cell.
FitResult fit_parameters(const FitProblem& problem, const FitOptions& opts = {});

struct Sensitivity {
    double d_epsilon = 0.0;
    double d_sigma_rate = 0.0;
    bool boundary = false;       ///< a clamp boundary fell inside the stencil
    bool richardson_ok = false;  ///< h and h/2 estimates agreed to 1e-4
};

/// Central finite differences of a quantity w.r.t. epsilon and sigma_rate,
/// step 1e-5 x parameter, checked against the half-step estimate. Falls back
/// to one-sided differences across a clamp boundary.
Sensitivity sensitivity(const ParameterPoint& p, Quantity q);

}  // namespace expanse
