#pragma once

#include <iosfwd>
#include <string>

#include "expanse/inverse.hpp"

// Flat key = value config for the `fit` command:
//
//   known.m = 1
//   known.s = 1
//   unknown.epsilon = 0.2 5
//   unknown.sigma_rate = 0.2 5
//   obs = 0.5 e_a_abar 2.8532090180861653e-4   # k quantity value [weight]
//   grid = 32
//
// '#' starts a comment; `obs` repeats, everything else appears at most once.

namespace expanse {

struct FitConfig {
    FitProblem problem;
    FitOptions options;
};

FitConfig parse_fit_config(std::istream& is);
FitConfig load_fit_config(const std::string& path);

}  // namespace expanse
