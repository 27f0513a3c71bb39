#pragma once

#include "windh2/core.hpp"

#include <vector>

namespace windh2 {

/// Delivery-hour result: commitments, the adjusted consumption, the settled
/// imbalance split and the profit components.
struct HourOutcome {
    std::int64_t t = 0;
    double p_da = 0.0;
    double p_h_scheduled = 0.0;
    double p_h_adjusted = 0.0;
    double delta = 0.0;  // wind_actual - p_da
    double over = 0.0;
    double under = 0.0;
    double da_revenue = 0.0;
    double hydrogen_revenue = 0.0;
    double up_settlement = 0.0;    // revenue for over-production
    double down_settlement = 0.0;  // cost of under-production

    double profit() const {
        return da_revenue + hydrogen_revenue + up_settlement - down_settlement;
    }
};

/// Intra-day bookkeeping for the quota: consumption delivered so far and the
/// consumption still scheduled for the rest of the day, both MWh.
struct DayLedger {
    double realized_mwh = 0.0;
    double remaining_scheduled_mwh = 0.0;
    double quota_kg = 0.0;
};

struct DaySchedule {
    Vec p_da;  // 24 entries
    Vec p_h;

    void validate(const PlantParams& params) const;
};

struct BalancingEstimate {
    double lambda_up = 0.0;
    double lambda_dw = 0.0;
};

/// Clamp of the wind surplus onto the electrolyzer's feasible range.
double alpha_h(double delta, const PlantParams& params);

/// Single-hour adjustment rule: release everything when even the up price
/// beats hydrogen, fill the electrolyzer when even the down price loses to
/// it, otherwise absorb the deviation. Ties fall through to the clamp.
double pi_rule(double delta, const PlantParams& params, double lambda_up, double lambda_dw);

/// Minimum consumption this hour that keeps the daily quota reachable if the
/// remaining schedule executes as planned.
double quota_floor(const DayLedger& ledger, const PlantParams& params);

/// Hourly adjustment loop over one day. Decisions use the balancing price
/// estimates; settlement always uses the realized prices. With strict_guard
/// the quota floor applies in both branches (capped at capacity), which
/// delivers the quota even when the cleared schedule alone falls short.
std::vector<HourOutcome> adjust_day(const DaySchedule& schedule,
                                    const std::vector<MarketHour>& realized,
                                    const std::vector<BalancingEstimate>& estimates,
                                    const PlantParams& params, bool strict_guard);

/// Imbalance split and profit of one hour under dual pricing.
HourOutcome settle_hour(double p_da, double p_h_adjusted, const MarketHour& hour,
                        const PlantParams& params);

}  // namespace windh2
