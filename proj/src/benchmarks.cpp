#include "windh2/benchmarks.hpp"

#include "windh2/lp.hpp"

#include <cmath>
#include <stdexcept>

namespace windh2 {

std::string benchmark_name(BenchmarkTag tag) {
    switch (tag) {
        case BenchmarkTag::Det: return "Det";
        case BenchmarkTag::Hindsight: return "Hindsight";
        case BenchmarkTag::OptAdjust: return "OptAdjust";
    }
    return "?";
}

void BenchmarkResult::validate() const {
    double sum = 0.0;
    for (const auto& o : outcomes) sum += o.profit();
    if (std::abs(sum - total_profit) > 1e-4)
        throw std::logic_error("benchmark total diverges from its hourly outcomes");
}

DaySchedule deterministic_day(const Vec& price_forecast, const Vec& wind_forecast,
                              const PlantParams& params) {
    if (price_forecast.size() != kHoursPerDay || wind_forecast.size() != kHoursPerDay)
        throw std::invalid_argument("deterministic_day needs 24 price and wind forecasts");
    if (!price_forecast.allFinite() || !wind_forecast.allFinite())
        throw std::invalid_argument("forecasts must be finite");

    const int T = kHoursPerDay;
    const double h2v = hydrogen_value(params);
    // layout: p_da[T], p_h[T]
    LinearProgram lp;
    lp.objective = Vec::Zero(2 * T);
    lp.lower = Vec::Zero(2 * T);
    lp.upper = Vec::Zero(2 * T);
    for (int t = 0; t < T; ++t) {
        lp.objective[t] = price_forecast[t];
        lp.objective[T + t] = h2v;
        lp.lower[t] = -params.electrolyzer_capacity;
        lp.upper[t] = params.wind_capacity;
        lp.lower[T + t] = 0.0;
        lp.upper[T + t] = params.electrolyzer_capacity;
        Constraint balance;
        balance.coeffs = Vec::Zero(2 * T);
        balance.coeffs[t] = 1.0;
        balance.coeffs[T + t] = 1.0;
        balance.rel = Relation::Equal;
        balance.rhs = wind_forecast[t];
        lp.constraints.push_back(std::move(balance));
    }
    Constraint quota;
    quota.coeffs = Vec::Zero(2 * T);
    for (int t = 0; t < T; ++t) quota.coeffs[T + t] = params.efficiency;
    quota.rel = Relation::GreaterEq;
    quota.rhs = params.daily_quota;
    lp.constraints.push_back(std::move(quota));

    LpSolution s = solve_lp(lp);
    if (s.status != SolveStatus::Optimal)
        throw std::runtime_error("deterministic day plan did not solve (status " +
                                 std::to_string(static_cast<int>(s.status)) + ")");
    DaySchedule sched;
    sched.p_da = s.x.head(T);
    sched.p_h = s.x.segment(T, T);
    sched.validate(params);
    return sched;
}

namespace {

void require_dual_pricing(const std::vector<MarketHour>& hours) {
    for (const auto& h : hours)
        if (!(h.lambda_up <= h.lambda_da && h.lambda_da <= h.lambda_dw))
            throw std::invalid_argument("dual pricing violated at hour " + std::to_string(h.t));
}

}  // namespace

HindsightDay hindsight_day(const std::vector<MarketHour>& realized, const PlantParams& params) {
    if (realized.size() != kHoursPerDay)
        throw std::invalid_argument("hindsight_day needs 24 realized hours");
    require_dual_pricing(realized);
    const int T = kHoursPerDay;
    const double h2v = hydrogen_value(params);
    const double big_m = params.wind_capacity + params.electrolyzer_capacity;
    // layout: p_da[T], p_h[T], o[T], u[T]
    LinearProgram lp;
    lp.objective = Vec::Zero(4 * T);
    lp.lower = Vec::Zero(4 * T);
    lp.upper = Vec::Zero(4 * T);
    for (int t = 0; t < T; ++t) {
        const MarketHour& h = realized[t];
        lp.objective[t] = h.lambda_da;
        lp.objective[T + t] = h2v;
        lp.objective[2 * T + t] = h.lambda_up;
        lp.objective[3 * T + t] = -h.lambda_dw;
        lp.lower[t] = -params.electrolyzer_capacity;
        lp.upper[t] = params.wind_capacity;
        lp.lower[T + t] = 0.0;
        lp.upper[T + t] = params.electrolyzer_capacity;
        lp.lower[2 * T + t] = 0.0;
        lp.upper[2 * T + t] = big_m;
        lp.lower[3 * T + t] = 0.0;
        lp.upper[3 * T + t] = big_m;
        Constraint balance;
        balance.coeffs = Vec::Zero(4 * T);
        balance.coeffs[t] = 1.0;
        balance.coeffs[T + t] = 1.0;
        balance.coeffs[2 * T + t] = 1.0;
        balance.coeffs[3 * T + t] = -1.0;
        balance.rel = Relation::Equal;
        balance.rhs = h.wind_actual;
        lp.constraints.push_back(std::move(balance));
    }
    Constraint quota;
    quota.coeffs = Vec::Zero(4 * T);
    for (int t = 0; t < T; ++t) quota.coeffs[T + t] = params.efficiency;
    quota.rel = Relation::GreaterEq;
    quota.rhs = params.daily_quota;
    lp.constraints.push_back(std::move(quota));

    LpSolution s = solve_lp(lp);
    if (s.status != SolveStatus::Optimal)
        throw std::runtime_error("hindsight day problem did not solve");
    HindsightDay out;
    out.schedule.p_da = s.x.head(T);
    out.schedule.p_h = s.x.segment(T, T);
    out.profit = s.objective_value;
    return out;
}

Vec optimal_adjustment_day(const DaySchedule& cleared, const std::vector<MarketHour>& realized,
                           const PlantParams& params) {
    cleared.validate(params);
    if (realized.size() != kHoursPerDay)
        throw std::invalid_argument("optimal_adjustment_day needs 24 realized hours");
    require_dual_pricing(realized);
    const int T = kHoursPerDay;
    const double h2v = hydrogen_value(params);
    const double big_m = params.wind_capacity + 2.0 * params.electrolyzer_capacity;
    // layout: p_adj[T], o[T], u[T]
    LinearProgram lp;
    lp.objective = Vec::Zero(3 * T);
    lp.lower = Vec::Zero(3 * T);
    lp.upper = Vec::Zero(3 * T);
    for (int t = 0; t < T; ++t) {
        const MarketHour& h = realized[t];
        lp.objective[t] = h2v;
        lp.objective[T + t] = h.lambda_up;
        lp.objective[2 * T + t] = -h.lambda_dw;
        lp.lower[t] = 0.0;
        lp.upper[t] = params.electrolyzer_capacity;
        lp.lower[T + t] = 0.0;
        lp.upper[T + t] = big_m;
        lp.lower[2 * T + t] = 0.0;
        lp.upper[2 * T + t] = big_m;
        Constraint balance;
        balance.coeffs = Vec::Zero(3 * T);
        balance.coeffs[t] = 1.0;
        balance.coeffs[T + t] = 1.0;
        balance.coeffs[2 * T + t] = -1.0;
        balance.rel = Relation::Equal;
        balance.rhs = h.wind_actual - cleared.p_da[t];
        lp.constraints.push_back(std::move(balance));
    }
    Constraint quota;
    quota.coeffs = Vec::Zero(3 * T);
    for (int t = 0; t < T; ++t) quota.coeffs[t] = params.efficiency;
    quota.rel = Relation::GreaterEq;
    quota.rhs = params.daily_quota;
    lp.constraints.push_back(std::move(quota));

    LpSolution s = solve_lp(lp);
    if (s.status != SolveStatus::Optimal)
        throw std::runtime_error("optimal adjustment problem did not solve");
    return s.x.head(T);
}

}  // namespace windh2
