#pragma once

// Independent reference implementations used to pin expected values in tests.
// These stay deliberately naive: enumeration and dense grids, no simplex.

#include "windh2/core.hpp"
#include "windh2/lp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace windh2::oracle {

struct VertexBest {
    bool feasible = false;
    double objective = -std::numeric_limits<double>::infinity();
    Vec x;
};

inline bool point_feasible(const LinearProgram& lp, const Vec& x, double tol = 1e-7) {
    for (const auto& c : lp.constraints) {
        const double v = c.coeffs.dot(x);
        if (c.rel == Relation::LessEq && v > c.rhs + tol) return false;
        if (c.rel == Relation::GreaterEq && v < c.rhs - tol) return false;
        if (c.rel == Relation::Equal && std::abs(v - c.rhs) > tol) return false;
    }
    for (int j = 0; j < lp.num_vars(); ++j) {
        if (x[j] < lp.lower[j] - tol || x[j] > lp.upper[j] + tol) return false;
    }
    return true;
}

/// Brute-force vertex enumeration for tiny LPs: every choice of n active
/// conditions (rows or bounds) gives a candidate vertex.
inline VertexBest enumerate_vertices(const LinearProgram& lp) {
    const int n = lp.num_vars();
    std::vector<std::pair<Eigen::RowVectorXd, double>> conds;
    for (const auto& c : lp.constraints) conds.emplace_back(c.coeffs.transpose(), c.rhs);
    for (int j = 0; j < n; ++j) {
        Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(n);
        e[j] = 1.0;
        if (std::isfinite(lp.lower[j])) conds.emplace_back(e, lp.lower[j]);
        if (std::isfinite(lp.upper[j])) conds.emplace_back(e, lp.upper[j]);
    }
    VertexBest best;
    const int k = static_cast<int>(conds.size());
    std::vector<int> pick(n);
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == n) {
            Mat M(n, n);
            Vec b(n);
            for (int i = 0; i < n; ++i) {
                M.row(i) = conds[pick[i]].first;
                b[i] = conds[pick[i]].second;
            }
            Eigen::FullPivLU<Mat> lu(M);
            lu.setThreshold(1e-9);
            if (!lu.isInvertible()) return;
            Vec x = lu.solve(b);
            if (!point_feasible(lp, x)) return;
            const double obj = lp.objective.dot(x);
            if (!best.feasible || obj > best.objective) {
                best.feasible = true;
                best.objective = obj;
                best.x = x;
            }
            return;
        }
        for (int i = start; i < k; ++i) {
            pick[depth] = i;
            rec(i + 1, depth + 1);
        }
    };
    if (k >= n) rec(0, 0);
    return best;
}

/// Exhaustive enumeration over {0,1} assignments of the integrality set,
/// each assignment solved as an LP with the binaries pinned by bounds.
inline LpSolution enumerate_binaries(const LinearProgram& lp) {
    std::vector<int> bins = lp.integrality;
    std::sort(bins.begin(), bins.end());
    bins.erase(std::unique(bins.begin(), bins.end()), bins.end());
    const int k = static_cast<int>(bins.size());
    LpSolution best;
    best.status = SolveStatus::Infeasible;
    bool any_unbounded = false;
    for (long mask = 0; mask < (1L << k); ++mask) {
        LinearProgram sub = lp;
        sub.integrality.clear();
        for (int i = 0; i < k; ++i) {
            const double v = (mask >> i) & 1 ? 1.0 : 0.0;
            sub.lower[bins[i]] = v;
            sub.upper[bins[i]] = v;
        }
        LpSolution s = solve_lp(sub);
        if (s.status == SolveStatus::Unbounded) any_unbounded = true;
        if (s.status != SolveStatus::Optimal) continue;
        if (best.status != SolveStatus::Optimal || s.objective_value > best.objective_value)
            best = s;
    }
    if (best.status != SolveStatus::Optimal && any_unbounded) best.status = SolveStatus::Unbounded;
    return best;
}

/// Profit of one delivery hour given commitments and realized data.
inline double hour_profit(double p_da, double p_h, double wind, double lambda_da,
                          double lambda_up, double lambda_dw, double h2_value) {
    const double imb = wind - p_da - p_h;
    const double o = std::max(imb, 0.0);
    const double u = std::max(-imb, 0.0);
    return lambda_da * p_da + h2_value * p_h + lambda_up * o - lambda_dw * u;
}

/// Dense-grid maximization of hour_profit over the commitment box.
inline double grid_best_hour_profit(const PlantParams& p, double wind, double lambda_da,
                                    double lambda_up, double lambda_dw, double step = 0.01) {
    const double hv = hydrogen_value(p);
    double best = -std::numeric_limits<double>::infinity();
    const long nda = std::lround((p.wind_capacity + p.electrolyzer_capacity) / step);
    const long nh = std::lround(p.electrolyzer_capacity / step);
    for (long i = 0; i <= nda; ++i) {
        const double p_da = -p.electrolyzer_capacity + static_cast<double>(i) * step;
        for (long j = 0; j <= nh; ++j) {
            const double p_h = static_cast<double>(j) * step;
            best = std::max(best, hour_profit(p_da, p_h, wind, lambda_da, lambda_up, lambda_dw, hv));
        }
    }
    return best;
}

}  // namespace windh2::oracle
