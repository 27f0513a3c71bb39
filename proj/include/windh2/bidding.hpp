#pragma once

#include "windh2/core.hpp"
#include "windh2/policy.hpp"

#include <iosfwd>
#include <vector>

namespace windh2 {

struct GridConfig {
    int steps_per_domain = 10;
    double price_floor = -500.0;
    double price_ceil = 3000.0;
    bool monotonic_projection = true;

    void validate() const;
};

struct BidStep {
    double price_lo = 0.0;
    double price_hi = 0.0;
    double p_da = 0.0;  // MW sold (negative: bought)
    double p_h = 0.0;   // MW consumed by the electrolyzer
};

/// Stepwise price-quantity bids of one delivery hour. Steps partition
/// [price_floor, price_ceil] left-closed/right-open, the last step closed.
struct BidCurve {
    std::int64_t t = 0;
    int steps_per_domain = 0;
    double price_floor = 0.0;
    double price_ceil = 0.0;
    bool any_clipped = false;  // repair clipped at least one step quantity
    std::vector<BidStep> steps;

    void validate(const PlantParams& params) const;
};

/// Samples the repaired policy at each step's price midpoint; the price axis
/// is split at the domain boundaries and each segment into equal steps.
/// When projection is on, sale quantities are made non-decreasing and
/// consumption non-increasing in price (least-squares isotonic fit).
BidCurve discretize(const PolicySet& ps, std::int64_t t, const Vec& context,
                    const PlantParams& params, const GridConfig& grid);

struct ClearedQuantities {
    double p_da = 0.0;
    double p_h = 0.0;
    bool clamped = false;  // realized price fell outside the curve's axis
};

ClearedQuantities clear(const BidCurve& curve, double realized_price);

/// Least-squares isotonic regression (pool adjacent violators).
Vec isotonic_non_decreasing(const Vec& values);
Vec isotonic_non_increasing(const Vec& values);

/// Market submission format: hour,price_lo,price_hi,p_da,p_h per step.
void export_bid_curves(const std::vector<BidCurve>& curves, std::ostream& os);

}  // namespace windh2
