#pragma once

// Rectangular linear assignment with a cost cutoff, solved as a square
// problem padded with dummy rows/columns (shortest augmenting path with
// potentials, O(n^3)).

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "groundflow/core.hpp"

namespace groundflow {

struct Assignment {
    std::vector<std::pair<int, int>> pairs;  // (row, col), sorted by row
    double cost = 0.0;                       // sum over matched pairs
};

/// Minimum-cost matching on the admissible pairs (finite cost <= cutoff).
/// Leaving a row or a column unmatched costs cutoff / 2, so a pair is used
/// exactly when it is cheaper than the cutoff. With an infinite cutoff the
/// matching has maximum cardinality. Deterministic: rows are inserted in
/// order and the lowest column index wins ties.
inline Assignment solve_assignment(const std::vector<double>& cost, int rows, int cols,
                                   double cutoff = std::numeric_limits<double>::infinity()) {
    if (rows < 0 || cols < 0 || cost.size() != static_cast<std::size_t>(rows) * cols)
        throw DimensionError("solve_assignment: cost matrix size mismatch");
    Assignment result;
    if (rows == 0 || cols == 0) return result;

    auto admissible = [&](int i, int j) {
        const double c = cost[static_cast<std::size_t>(i) * cols + j];
        return std::isfinite(c) && c <= cutoff;
    };
    double max_abs = 0.0;
    bool any = false;
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            if (admissible(i, j)) {
                max_abs = std::max(max_abs, std::abs(cost[static_cast<std::size_t>(i) * cols + j]));
                any = true;
            }
    if (!any) return result;

    const double unmatched = std::isfinite(cutoff) ? 0.5 * cutoff
                                                   : (std::min(rows, cols) + 1.0) * (max_abs + 1.0);
    const double forbidden = 4.0 * (std::abs(unmatched) + max_abs + 1.0) * (rows + cols);

    const int n = rows + cols;
    auto c_at = [&](int i, int j) -> double {
        const bool real_row = i < rows, real_col = j < cols;
        if (real_row && real_col)
            return admissible(i, j) ? cost[static_cast<std::size_t>(i) * cols + j] : forbidden;
        if (real_row || real_col) return unmatched;
        return 0.0;
    };

    // 1-based potentials formulation
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = c_at(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }

    for (int j = 1; j <= n; ++j) {
        const int i = p[j] - 1, col = j - 1;
        if (i < rows && col < cols && admissible(i, col)) {
            result.pairs.emplace_back(i, col);
            result.cost += cost[static_cast<std::size_t>(i) * cols + col];
        }
    }
    std::sort(result.pairs.begin(), result.pairs.end());
    return result;
}

}  // namespace groundflow
