#pragma once

#include <string>
#include <vector>

namespace expanse {

std::vector<double> linspace(double lo, double hi, int count);
std::vector<double> logspace(double lo, double hi, int count);  ///< log-spaced, lo/hi > 0

/// Shortest decimal round-trip representation (bit-stable across runs).
std::string format_double(double value);

}  // namespace expanse
