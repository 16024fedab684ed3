#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace vclod {

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Plain downhill simplex (reflection 1, expansion 2, contraction 0.5,
// shrink 0.5). Stops when every vertex sits within `tolerance` of the
// best one in the infinity norm.
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                    std::vector<double> start, const std::vector<double>& steps,
                                    double tolerance, int max_iterations) {
    const std::size_t n = start.size();
    std::vector<std::vector<double>> simplex(n + 1, start);
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += steps[i];
    std::vector<double> values(n + 1);
    for (std::size_t i = 0; i <= n; ++i) values[i] = f(simplex[i]);

    NelderMeadResult result;
    const auto order = [&] {
        std::vector<std::size_t> idx(n + 1);
        for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return values[a] < values[b] || (values[a] == values[b] && a < b);
        });
        std::vector<std::vector<double>> s2(n + 1);
        std::vector<double> v2(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            s2[i] = simplex[idx[i]];
            v2[i] = values[idx[i]];
        }
        simplex.swap(s2);
        values.swap(v2);
    };

    for (result.iterations = 0; result.iterations < max_iterations; ++result.iterations) {
        order();

        double spread = 0.0;
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                spread = std::fmax(spread, std::fabs(simplex[i][k] - simplex[0][k]));
        if (spread < tolerance) {
            result.converged = true;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / static_cast<double>(n);

        const auto blend = [&](double factor) {
            std::vector<double> x(n);
            for (std::size_t k = 0; k < n; ++k)
                x[k] = centroid[k] + factor * (simplex[n][k] - centroid[k]);
            return x;
        };

        const std::vector<double> reflected = blend(-1.0);
        const double fr = f(reflected);
        if (fr < values[0]) {
            const std::vector<double> expanded = blend(-2.0);
            const double fe = f(expanded);
            if (fe < fr) {
                simplex[n] = expanded;
                values[n] = fe;
            } else {
                simplex[n] = reflected;
                values[n] = fr;
            }
        } else if (fr < values[n - 1]) {
            simplex[n] = reflected;
            values[n] = fr;
        } else {
            const std::vector<double> contracted = blend(fr < values[n] ? -0.5 : 0.5);
            const double fc = f(contracted);
            if (fc < std::fmin(fr, values[n])) {
                simplex[n] = contracted;
                values[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t k = 0; k < n; ++k)
                        simplex[i][k] = simplex[0][k] + 0.5 * (simplex[i][k] - simplex[0][k]);
                    values[i] = f(simplex[i]);
                }
            }
        }
    }

    order();
    result.x = simplex[0];
    result.value = values[0];
    return result;
}

} // namespace vclod
