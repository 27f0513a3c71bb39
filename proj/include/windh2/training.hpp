#pragma once

#include "windh2/core.hpp"
#include "windh2/features.hpp"
#include "windh2/lp.hpp"
#include "windh2/policy.hpp"

#include <utility>
#include <vector>

namespace windh2 {

/// Contiguous whole days of historical market data plus the context features
/// the policies saw at bid time.
struct TrainingWindow {
    std::vector<MarketHour> hours;
    Mat contexts;  // hours x context_dim, row i for hours[i]

    int hour_count() const { return static_cast<int>(hours.size()); }
    int day_count() const { return hour_count() / kHoursPerDay; }
    void validate(const PlantParams& params, int context_dim) const;
};

struct TrainingReport {
    SolveStatus status = SolveStatus::Infeasible;
    double objective = 0.0;
    double da_revenue = 0.0;
    double hydrogen_revenue = 0.0;
    double up_settlement = 0.0;    // revenue from settled over-production
    double down_settlement = 0.0;  // cost of settled under-production
    bool relaxed_binaries = false;
    Vec over;   // per-hour o_t after complementarity post-processing
    Vec under;  // per-hour u_t
};

/// The training problem over the window: decision variables are the
/// q-vectors followed by per-hour over-/under-production and the binary
/// exclusivity indicators; the objective is total historical profit.
LinearProgram build_training_problem(const TrainingWindow& window, const Architecture& arch,
                                     const FeatureSchema& schema, const PlantParams& params);

/// Learns the q-policies on the window. Under strictly separated balancing
/// prices the binaries are provably redundant and the continuous relaxation
/// (built without them) is solved; otherwise the full problem goes through
/// branch and bound. Over-/under-production is post-processed to the
/// complementary representation either way.
std::pair<PolicySet, TrainingReport> train(const TrainingWindow& window, const Architecture& arch,
                                           const FeatureSchema& schema, const PlantParams& params);

}  // namespace windh2
