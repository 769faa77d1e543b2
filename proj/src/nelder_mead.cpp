#include "expanse/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace expanse {

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& start, const NelderMeadOptions& opts) {
    const int n = static_cast<int>(start.size());
    long evals = 0;
    auto eval = [&](const Eigen::VectorXd& x) {
        ++evals;
        const double v = f(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::max();
    };

    std::vector<Eigen::VectorXd> pts(static_cast<size_t>(n) + 1, start);
    std::vector<double> vals(static_cast<size_t>(n) + 1);
    for (int i = 0; i < n; ++i) {
        pts[static_cast<size_t>(i) + 1][i] += opts.initial_step;
    }
    for (size_t i = 0; i < pts.size(); ++i) {
        vals[i] = eval(pts[i]);
    }

    std::vector<size_t> order(pts.size());
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](size_t a, size_t b) { return vals[a] < vals[b]; });
    };

    int iter = 0;
    for (; iter < opts.max_iterations; ++iter) {
        sort_simplex();
        const size_t best = order.front();
        const size_t worst = order.back();
        const size_t second_worst = order[order.size() - 2];

        double diameter = 0.0;
        for (size_t i = 1; i < order.size(); ++i) {
            diameter = std::max(diameter, (pts[order[i]] - pts[best]).cwiseAbs().maxCoeff());
        }
        if (diameter < opts.x_tol && vals[worst] - vals[best] < opts.f_tol) {
            break;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (size_t i = 0; i + 1 < order.size(); ++i) {
            centroid += pts[order[i]];
        }
        centroid /= static_cast<double>(n);

        const Eigen::VectorXd reflected = centroid + (centroid - pts[worst]);
        const double fr = eval(reflected);
        if (fr < vals[best]) {
            const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - pts[worst]);
            const double fe = eval(expanded);
            if (fe < fr) {
                pts[worst] = expanded;
                vals[worst] = fe;
            } else {
                pts[worst] = reflected;
                vals[worst] = fr;
            }
            continue;
        }
        if (fr < vals[second_worst]) {
            pts[worst] = reflected;
            vals[worst] = fr;
            continue;
        }
        const bool outside = fr < vals[worst];
        const Eigen::VectorXd contracted =
            outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                    : Eigen::VectorXd(centroid - 0.5 * (centroid - pts[worst]));
        const double fc = eval(contracted);
        if (fc < std::min(fr, vals[worst])) {
            pts[worst] = contracted;
            vals[worst] = fc;
            continue;
        }
        // Shrink toward the best vertex.
        for (size_t i = 1; i < order.size(); ++i) {
            pts[order[i]] = pts[best] + 0.5 * (pts[order[i]] - pts[best]);
            vals[order[i]] = eval(pts[order[i]]);
        }
    }

    sort_simplex();
    NelderMeadResult result;
    result.x = pts[order.front()];
    result.fx = vals[order.front()];
    result.iterations = iter;
    result.evaluations = evals;
    return result;
}

}  // namespace expanse
