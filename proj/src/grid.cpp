#include "expanse/grid.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace expanse {

std::vector<double> linspace(double lo, double hi, int count) {
    if (count < 2 || !(lo < hi)) {
        throw std::invalid_argument("linspace: need count >= 2 and lo < hi");
    }
    std::vector<double> out(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        out[static_cast<size_t>(i)] = lo + (hi - lo) * i / (count - 1);
    }
    out.back() = hi;
    return out;
}

std::vector<double> logspace(double lo, double hi, int count) {
    if (!(lo > 0.0)) {
        throw std::invalid_argument("logspace: lo must be > 0");
    }
    std::vector<double> out = linspace(std::log(lo), std::log(hi), count);
    for (double& x : out) {
        x = std::exp(x);
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

std::string format_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

}  // namespace expanse
