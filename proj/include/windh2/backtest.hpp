#pragma once

#include "windh2/benchmarks.hpp"
#include "windh2/bidding.hpp"
#include "windh2/core.hpp"
#include "windh2/data_io.hpp"
#include "windh2/features.hpp"
#include "windh2/realtime.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace windh2 {

enum class EstimateMode { Perfect, Persistence };

EstimateMode parse_estimate_mode(const std::string& name);

/// Turns dataset rows into policy contexts for the chosen schema; for the FM
/// schema this wraps the auxiliary forecast model fitted on history.
struct FeaturePipeline {
    SchemaVariant variant = SchemaVariant::RF;
    ForecastModel fm;

    Vec af_context(const DatasetRow& r) const;
    Vec context(const DatasetRow& r, const PlantParams& params) const;

    /// Fits the FM model (when needed) on the first history_days of the dataset.
    static FeaturePipeline fit(SchemaVariant variant, const Dataset& ds, int history_days);
};

struct BacktestConfig {
    int window_days = 180;
    int retrain_days = 7;
    bool hourly = false;
    bool price_domains = false;
    SchemaVariant schema = SchemaVariant::RF;
    GridConfig grid;
    bool strict_guard = true;
    EstimateMode estimates = EstimateMode::Perfect;
    std::uint64_t seed = 0;

    void validate() const;
    std::string model_name() const;  // e.g. "HA+PD/RF"
};

struct DailyProfit {
    std::int64_t day = 0;  // epoch day index
    double policy_unadjusted = 0.0;
    double policy_adjusted = 0.0;
    double policy_optadjust = 0.0;
    double det_unadjusted = 0.0;
    double det_adjusted = 0.0;
    double hindsight = 0.0;
};

struct BacktestReport {
    std::vector<DailyProfit> days;
    double policy_unadjusted = 0.0;
    double policy_adjusted = 0.0;
    double policy_optadjust = 0.0;
    double det_unadjusted = 0.0;
    double det_adjusted = 0.0;
    double hindsight = 0.0;
    // decomposition of the adjusted policy model
    double da_revenue = 0.0;
    double hydrogen_revenue = 0.0;
    double up_settlement = 0.0;
    double down_settlement = 0.0;
    long clip_events = 0;           // repair clipped a step while building curves
    long clamp_events = 0;          // realized price fell outside the bid axis
    long quota_violation_days = 0;  // delivered hydrogen below quota (policy model)
    int retrain_count = 0;
    std::vector<HourOutcome> audit;     // hourly outcomes of the adjusted policy model
    std::vector<BidCurve> bid_curves;   // one per evaluated hour

    void validate() const;
};

/// Sliding-window backtest: retrain on the trailing window every
/// retrain_days, bid each test day with forecast features, clear at the
/// realized day-ahead price, adjust in real time and settle. Benchmarks run
/// on the identical evaluation days.
BacktestReport run_backtest(const Dataset& ds, const BacktestConfig& config,
                            const PlantParams& params);

struct ComparisonRow {
    std::string model;
    double unadjusted = 0.0;
    double adjusted = 0.0;
    double optadjust = 0.0;
    double da_revenue = 0.0;
    double hydrogen_revenue = 0.0;
    double up_settlement = 0.0;
    double down_settlement = 0.0;
};

struct ComparisonTable {
    std::vector<ComparisonRow> rows;  // one per model plus Det and Hindsight
};

/// Runs each configuration over the shared evaluation period (identical
/// window length required) and tabulates totals next to the benchmarks.
ComparisonTable compare_models(const Dataset& ds,
                               const std::vector<std::pair<std::string, BacktestConfig>>& models,
                               const PlantParams& params);

void write_summary_csv(const BacktestReport& report, std::ostream& os);
void write_daily_csv(const BacktestReport& report, std::ostream& os);
void write_audit_csv(const BacktestReport& report, std::ostream& os);
void write_comparison_csv(const ComparisonTable& table, std::ostream& os);

}  // namespace windh2
