#include "windh2/benchmarks.hpp"

#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "synthetic.hpp"

using namespace windh2;
using testutil::reference_plant;
using testutil::uniform;

namespace {

PlantParams no_quota_plant() {
    PlantParams p = reference_plant();
    p.daily_quota = 0.0;
    return p;
}

std::vector<MarketHour> uniform_day(double da, double up, double dw, double wind) {
    std::vector<MarketHour> day(kHoursPerDay);
    for (int h = 0; h < kHoursPerDay; ++h) day[h] = MarketHour{h, da, up, dw, wind};
    return day;
}

std::vector<BalancingEstimate> perfect_estimates(const std::vector<MarketHour>& hours) {
    std::vector<BalancingEstimate> est;
    for (const auto& h : hours) est.push_back({h.lambda_up, h.lambda_dw});
    return est;
}

double settled_profit(const DaySchedule& sched, const std::vector<MarketHour>& day,
                      const PlantParams& p) {
    double total = 0.0;
    for (int h = 0; h < kHoursPerDay; ++h)
        total += settle_hour(sched.p_da[h], sched.p_h[h], day[h], p).profit();
    return total;
}

/// Plan-stage objective of the deterministic model for one hour, maximized
/// on a dense grid of consumption levels with the trade balancing the
/// forecast.
double det_hour_grid(const PlantParams& p, double price, double wind_forecast) {
    const double hv = hydrogen_value(p);
    double best = -1e300;
    for (long k = 0; k <= std::lround(p.electrolyzer_capacity / 0.01); ++k) {
        const double ph = 0.01 * k;
        best = std::max(best, price * (wind_forecast - ph) + hv * ph);
    }
    return best;
}

}  // namespace

TEST_SUITE("benchmarks") {

TEST_CASE("deterministic plan: sell when the price beats hydrogen") {
    const PlantParams p = no_quota_plant();
    DaySchedule s = deterministic_day(Vec::Constant(24, 50.0), Vec::Constant(24, 4.0), p);
    for (int h = 0; h < 24; ++h) {
        CHECK(s.p_da[h] == doctest::Approx(4.0));
        CHECK(s.p_h[h] == doctest::Approx(0.0));
    }
    const double plan_obj = 24.0 * (50.0 * 4.0);
    CHECK(24.0 * det_hour_grid(p, 50.0, 4.0) == doctest::Approx(plan_obj));
}

TEST_CASE("deterministic plan: buy the gap when hydrogen wins") {
    const PlantParams p = no_quota_plant();
    DaySchedule s = deterministic_day(Vec::Constant(24, 30.0), Vec::Constant(24, 4.0), p);
    for (int h = 0; h < 24; ++h) {
        CHECK(s.p_h[h] == doctest::Approx(5.0));
        CHECK(s.p_da[h] == doctest::Approx(-1.0));
    }
    CHECK(det_hour_grid(p, 30.0, 4.0) == doctest::Approx(30.0 * (-1.0) + 40.0 * 5.0));
}

TEST_CASE("deterministic plan honors the quota at minimum cost") {
    PlantParams p = reference_plant();  // 400 kg = 20 MWh per day
    DaySchedule s = deterministic_day(Vec::Constant(24, 100.0), Vec::Constant(24, 4.0), p);
    CHECK(s.p_h.sum() == doctest::Approx(20.0));
    // uniform prices: objective is price*wind - (price - hydrogen value)*quota
    double obj = 0.0;
    for (int h = 0; h < 24; ++h) obj += 100.0 * s.p_da[h] + 40.0 * s.p_h[h];
    CHECK(obj == doctest::Approx(24.0 * 100.0 * 4.0 - (100.0 - 40.0) * 20.0));
}

TEST_CASE("hindsight: grid-oracle values on uniform days") {
    const PlantParams p = no_quota_plant();
    HindsightDay high = hindsight_day(uniform_day(50.0, 45.0, 55.0, 4.0), p);
    CHECK(high.profit / 24.0 == doctest::Approx(oracle::grid_best_hour_profit(p, 4.0, 50.0, 45.0, 55.0))
              .epsilon(1e-6));
    CHECK(high.profit / 24.0 == doctest::Approx(200.0));

    HindsightDay low = hindsight_day(uniform_day(30.0, 25.0, 35.0, 4.0), p);
    CHECK(low.profit / 24.0 == doctest::Approx(170.0));
}

TEST_CASE("hindsight schedules no imbalance under strict dual pricing") {
    const PlantParams p = reference_plant();
    std::mt19937_64 rng(8);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<MarketHour> day(kHoursPerDay);
        for (int h = 0; h < kHoursPerDay; ++h) {
            MarketHour& mh = day[h];
            mh.t = h;
            mh.lambda_da = uniform(rng, -30.0, 130.0);
            mh.lambda_up = mh.lambda_da - uniform(rng, 0.5, 30.0);
            mh.lambda_dw = mh.lambda_da + uniform(rng, 0.5, 30.0);
            mh.wind_actual = uniform(rng, 0.0, p.wind_capacity);
        }
        HindsightDay hd = hindsight_day(day, p);
        for (int h = 0; h < kHoursPerDay; ++h)
            CHECK(hd.schedule.p_da[h] + hd.schedule.p_h[h] ==
                  doctest::Approx(day[h].wind_actual).epsilon(1e-7).scale(1.0));
    }
}

TEST_CASE("hindsight dominates any settled schedule") {
    const PlantParams p = no_quota_plant();
    std::mt19937_64 rng(9);
    for (int rep = 0; rep < 30; ++rep) {
        std::vector<MarketHour> day(kHoursPerDay);
        DaySchedule sched;
        sched.p_da = Vec::Zero(kHoursPerDay);
        sched.p_h = Vec::Zero(kHoursPerDay);
        for (int h = 0; h < kHoursPerDay; ++h) {
            MarketHour& mh = day[h];
            mh.t = h;
            mh.lambda_da = uniform(rng, -30.0, 130.0);
            mh.lambda_up = mh.lambda_da - uniform(rng, 0.0, 30.0);
            mh.lambda_dw = mh.lambda_da + uniform(rng, 0.0, 30.0);
            mh.wind_actual = uniform(rng, 0.0, p.wind_capacity);
            sched.p_da[h] = uniform(rng, -p.electrolyzer_capacity, p.wind_capacity);
            sched.p_h[h] = uniform(rng, 0.0, p.electrolyzer_capacity);
        }
        CHECK(hindsight_day(day, p).profit >= settled_profit(sched, day, p) - 1e-6);
    }
}

TEST_CASE("optimal adjustment: cheap under-production invites buying") {
    const PlantParams p = no_quota_plant();
    // down price below the hydrogen value: every consumed MWh nets 40 - 35
    std::vector<MarketHour> day = uniform_day(33.0, 30.0, 35.0, 4.0);
    DaySchedule cleared;
    cleared.p_da = Vec::Constant(kHoursPerDay, 6.0);
    cleared.p_h = Vec::Zero(kHoursPerDay);
    Vec adj = optimal_adjustment_day(cleared, day, p);
    for (int h = 0; h < kHoursPerDay; ++h) CHECK(adj[h] == doctest::Approx(5.0));

    // grid check of the per-hour contribution (DA revenue excluded)
    double best = -1e300;
    double at5 = 0.0;
    for (long k = 0; k <= 500; ++k) {
        const double ph = 0.01 * k;
        const double imb = 4.0 - 6.0 - ph;
        const double v = 40.0 * ph + 30.0 * std::max(imb, 0.0) - 35.0 * std::max(-imb, 0.0);
        best = std::max(best, v);
        if (k == 500) at5 = v;
    }
    CHECK(best == doctest::Approx(-45.0));
    CHECK(at5 == doctest::Approx(best));
    // unadjusted the hour contributes -70: the adjustment recovers 25
    const double unadjusted = -35.0 * 2.0;
    CHECK(unadjusted == doctest::Approx(-70.0));
    double adjusted_total = 0.0;
    for (int h = 0; h < kHoursPerDay; ++h)
        adjusted_total += settle_hour(cleared.p_da[h], adj[h], day[h], p).profit();
    CHECK(adjusted_total - settled_profit(cleared, day, p) == doctest::Approx(24.0 * 25.0));

    // inverted balancing prices are rejected, not arbitraged
    std::vector<MarketHour> inverted = uniform_day(50.0, 45.0, 35.0, 4.0);
    inverted[0].lambda_dw = 35.0;
    CHECK_THROWS_AS(optimal_adjustment_day(cleared, inverted, p), std::invalid_argument);
}

TEST_CASE("optimal adjustment: high up price releases everything") {
    const PlantParams p = no_quota_plant();
    std::vector<MarketHour> day = uniform_day(50.0, 45.0, 55.0, 4.0);
    DaySchedule cleared;
    cleared.p_da = Vec::Constant(kHoursPerDay, 2.0);  // over-producing hours
    cleared.p_h = Vec::Constant(kHoursPerDay, 3.0);
    Vec adj = optimal_adjustment_day(cleared, day, p);
    for (int h = 0; h < kHoursPerDay; ++h) CHECK(adj[h] == doctest::Approx(0.0));
}

TEST_CASE("optimal adjustment: binding quota sits at the floor when marginal value is negative") {
    PlantParams p = reference_plant();
    p.daily_quota = 12.0 * p.efficiency;  // 12 MWh across the day
    std::vector<MarketHour> day = uniform_day(50.0, 45.0, 55.0, 4.0);
    DaySchedule cleared;
    cleared.p_da = Vec::Zero(kHoursPerDay);
    cleared.p_h = Vec::Constant(kHoursPerDay, 0.5);
    Vec adj = optimal_adjustment_day(cleared, day, p);
    CHECK(adj.sum() == doctest::Approx(12.0));
    // every consumed MWh displaces over-production paid 45 > 40
    double expected = 40.0 * 12.0 + 45.0 * (24.0 * 4.0 - 12.0);
    double got = 0.0;
    for (int h = 0; h < kHoursPerDay; ++h) {
        const double imb = 4.0 - adj[h];
        got += 40.0 * adj[h] + 45.0 * std::max(imb, 0.0) - 55.0 * std::max(-imb, 0.0);
    }
    CHECK(got == doctest::Approx(expected));
}

TEST_CASE("per-day dominance chain") {
    const PlantParams base = reference_plant();
    std::mt19937_64 rng(1234);
    for (int rep = 0; rep < 25; ++rep) {
        PlantParams p = base;
        p.daily_quota = uniform(rng, 0.0, 0.5 * 24.0 * p.efficiency * p.electrolyzer_capacity);
        std::vector<MarketHour> day(kHoursPerDay);
        DaySchedule cleared;
        cleared.p_da = Vec::Zero(kHoursPerDay);
        cleared.p_h = Vec::Zero(kHoursPerDay);
        double planned_kg = 0.0;
        for (int h = 0; h < kHoursPerDay; ++h) {
            MarketHour& mh = day[h];
            mh.t = h;
            mh.lambda_da = uniform(rng, -20.0, 120.0);
            mh.lambda_up = mh.lambda_da - uniform(rng, 0.5, 30.0);
            mh.lambda_dw = mh.lambda_da + uniform(rng, 0.5, 30.0);
            mh.wind_actual = uniform(rng, 0.0, p.wind_capacity);
            cleared.p_da[h] = uniform(rng, -p.electrolyzer_capacity, p.wind_capacity);
            cleared.p_h[h] = uniform(rng, 0.0, p.electrolyzer_capacity);
            planned_kg += p.efficiency * cleared.p_h[h];
        }
        if (planned_kg < p.daily_quota) {
            // scale the consumption schedule up so the plan meets the quota
            const double scale = p.daily_quota / planned_kg;
            for (int h = 0; h < kHoursPerDay; ++h)
                cleared.p_h[h] = std::min(p.electrolyzer_capacity, cleared.p_h[h] * scale);
        }

        const double hindsight = hindsight_day(day, p).profit;

        Vec adj = optimal_adjustment_day(cleared, day, p);
        double opt_total = 0.0;
        for (int h = 0; h < kHoursPerDay; ++h)
            opt_total += settle_hour(cleared.p_da[h], adj[h], day[h], p).profit();

        auto rule = adjust_day(cleared, day, perfect_estimates(day), p, true);
        double rule_total = 0.0;
        for (const auto& o : rule) rule_total += o.profit();

        const double unadjusted = settled_profit(cleared, day, p);

        CHECK(hindsight >= opt_total - 1e-6);
        CHECK(opt_total >= rule_total - 1e-6);
        CHECK(rule_total >= unadjusted - 1e-6);
    }
}

TEST_CASE("deterministic with perfect forecasts equals hindsight") {
    const PlantParams p = reference_plant();
    std::mt19937_64 rng(555);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<MarketHour> day(kHoursPerDay);
        Vec lam(kHoursPerDay), wind(kHoursPerDay);
        for (int h = 0; h < kHoursPerDay; ++h) {
            MarketHour& mh = day[h];
            mh.t = h;
            mh.lambda_da = uniform(rng, -20.0, 120.0);
            mh.lambda_up = mh.lambda_da - uniform(rng, 0.5, 30.0);
            mh.lambda_dw = mh.lambda_da + uniform(rng, 0.5, 30.0);
            mh.wind_actual = uniform(rng, 0.0, p.wind_capacity);
            lam[h] = mh.lambda_da;
            wind[h] = mh.wind_actual;
        }
        DaySchedule det = deterministic_day(lam, wind, p);
        CHECK(settled_profit(det, day, p) ==
              doctest::Approx(hindsight_day(day, p).profit).epsilon(1e-7));
    }
}

TEST_CASE("benchmark result audits its totals") {
    BenchmarkResult r;
    r.tag = BenchmarkTag::Hindsight;
    HourOutcome o;
    o.da_revenue = 100.0;
    r.outcomes.push_back(o);
    r.total_profit = 100.0;
    CHECK_NOTHROW(r.validate());
    r.total_profit = 101.0;
    CHECK_THROWS_AS(r.validate(), std::logic_error);
    CHECK(benchmark_name(r.tag) == "Hindsight");
}

}  // TEST_SUITE
