#pragma once

#include <Eigen/Dense>
#include <functional>

// Derivative-free simplex minimizer. Deterministic: the result depends only
// on f, the start point, and the options.

namespace expanse {

struct NelderMeadOptions {
    int max_iterations = 1500;
    double x_tol = 1e-12;       ///< stop when the simplex collapses below this
    double f_tol = 1e-14;       ///< and the value spread falls below this
    double initial_step = 0.2;  ///< per-coordinate offset building the simplex
};

struct NelderMeadResult {
    Eigen::VectorXd x;
    double fx = 0.0;
    int iterations = 0;
    long evaluations = 0;
};

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& start, const NelderMeadOptions& opts = {});

}  // namespace expanse
