#include "windh2/realtime.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace windh2 {

void DaySchedule::validate(const PlantParams& params) const {
    if (p_da.size() != kHoursPerDay || p_h.size() != kHoursPerDay)
        throw std::invalid_argument("day schedule must cover 24 hours");
    const double tol = 1e-9 * std::max(1.0, params.wind_capacity);
    for (int h = 0; h < kHoursPerDay; ++h) {
        require_finite(p_da[h], "scheduled p_da");
        require_finite(p_h[h], "scheduled p_h");
        if (p_h[h] < -tol || p_h[h] > params.electrolyzer_capacity + tol)
            throw std::invalid_argument("scheduled consumption outside [0, capacity]");
        if (p_da[h] < -params.electrolyzer_capacity - tol || p_da[h] > params.wind_capacity + tol)
            throw std::invalid_argument("scheduled trade outside its box");
    }
}

double alpha_h(double delta, const PlantParams& params) {
    require_finite(delta, "delta");
    if (delta < 0.0) return 0.0;
    if (delta > params.electrolyzer_capacity) return params.electrolyzer_capacity;
    return delta;
}

double pi_rule(double delta, const PlantParams& params, double lambda_up, double lambda_dw) {
    require_finite(lambda_up, "lambda_up");
    require_finite(lambda_dw, "lambda_dw");
    if (lambda_up > lambda_dw)
        throw std::invalid_argument("pi_rule requires lambda_up <= lambda_dw");
    const double h2v = hydrogen_value(params);
    if (lambda_up > h2v) return 0.0;
    if (lambda_dw < h2v) return params.electrolyzer_capacity;
    return alpha_h(delta, params);
}

double quota_floor(const DayLedger& ledger, const PlantParams& params) {
    const double need_mwh = ledger.quota_kg / params.efficiency;
    return std::max(0.0, need_mwh - ledger.realized_mwh - ledger.remaining_scheduled_mwh);
}

HourOutcome settle_hour(double p_da, double p_h_adjusted, const MarketHour& hour,
                        const PlantParams& params) {
    require_finite(p_da, "p_da");
    const double tol = 1e-9 * std::max(1.0, params.electrolyzer_capacity);
    if (!(p_h_adjusted >= -tol && p_h_adjusted <= params.electrolyzer_capacity + tol))
        throw std::invalid_argument("settle_hour: consumption outside [0, capacity]");
    HourOutcome out;
    out.t = hour.t;
    out.p_da = p_da;
    out.p_h_scheduled = p_h_adjusted;
    out.p_h_adjusted = p_h_adjusted;
    out.delta = hour.wind_actual - p_da;
    const double imbalance = hour.wind_actual - p_da - p_h_adjusted;
    out.over = std::max(imbalance, 0.0);
    out.under = std::max(-imbalance, 0.0);
    out.da_revenue = hour.lambda_da * p_da;
    out.hydrogen_revenue = hydrogen_value(params) * p_h_adjusted;
    out.up_settlement = hour.lambda_up * out.over;
    out.down_settlement = hour.lambda_dw * out.under;
    return out;
}

std::vector<HourOutcome> adjust_day(const DaySchedule& schedule,
                                    const std::vector<MarketHour>& realized,
                                    const std::vector<BalancingEstimate>& estimates,
                                    const PlantParams& params, bool strict_guard) {
    schedule.validate(params);
    if (realized.size() != kHoursPerDay || estimates.size() != kHoursPerDay)
        throw std::invalid_argument("adjust_day needs 24 realized hours and 24 estimates");

    DayLedger ledger;
    ledger.quota_kg = params.daily_quota;
    ledger.remaining_scheduled_mwh = schedule.p_h.sum();

    std::vector<HourOutcome> out;
    out.reserve(kHoursPerDay);
    for (int h = 0; h < kHoursPerDay; ++h) {
        ledger.remaining_scheduled_mwh -= schedule.p_h[h];
        const double delta = realized[h].wind_actual - schedule.p_da[h];
        const double target =
            pi_rule(delta, params, estimates[h].lambda_up, estimates[h].lambda_dw);
        const double floor = quota_floor(ledger, params);
        double adjusted;
        if (strict_guard) {
            adjusted = std::min(params.electrolyzer_capacity, std::max(target, floor));
        } else if (target > schedule.p_h[h]) {
            adjusted = target;
        } else {
            // capacity caps the floor when the schedule alone cannot reach the quota
            adjusted = std::min(params.electrolyzer_capacity, std::max(target, floor));
        }
        HourOutcome o = settle_hour(schedule.p_da[h], adjusted, realized[h], params);
        o.p_h_scheduled = schedule.p_h[h];
        out.push_back(o);
        ledger.realized_mwh += adjusted;
    }
    return out;
}

}  // namespace windh2
