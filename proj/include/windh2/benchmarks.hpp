#pragma once

#include "windh2/core.hpp"
#include "windh2/realtime.hpp"

#include <string>
#include <vector>

namespace windh2 {

enum class BenchmarkTag { Det, Hindsight, OptAdjust };

std::string benchmark_name(BenchmarkTag tag);

/// Aggregated result of one comparison model over an evaluation period.
struct BenchmarkResult {
    BenchmarkTag tag = BenchmarkTag::Det;
    std::vector<DaySchedule> schedules;   // one per day
    std::vector<HourOutcome> outcomes;    // one per hour
    double total_profit = 0.0;

    void validate() const;  // total equals the sum of hourly profits within 1e-4
};

/// Point-forecast plan: commitments balance the forecast exactly (no planned
/// imbalance), the quota holds on the plan, and the bids are quantity-only.
DaySchedule deterministic_day(const Vec& price_forecast, const Vec& wind_forecast,
                              const PlantParams& params);

struct HindsightDay {
    DaySchedule schedule;
    double profit = 0.0;
};

/// Profit-maximal schedule with the realized prices and wind known upfront.
HindsightDay hindsight_day(const std::vector<MarketHour>& realized, const PlantParams& params);

/// Best possible consumption adjustments for a fixed cleared schedule, with
/// perfect foresight of the day's balancing prices; the day-ahead revenue is
/// fixed and not part of the optimization.
Vec optimal_adjustment_day(const DaySchedule& cleared, const std::vector<MarketHour>& realized,
                           const PlantParams& params);

}  // namespace windh2
