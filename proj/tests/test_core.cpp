#include "windh2/core.hpp"

#include <doctest.h>

#include <limits>

using namespace windh2;

namespace {

PlantParams reference_plant() {
    PlantParams p;
    p.wind_capacity = 10.0;
    p.electrolyzer_capacity = 5.0;
    p.efficiency = 20.0;
    p.hydrogen_price = 2.0;
    p.daily_quota = 400.0;
    return p;
}

}  // namespace

TEST_SUITE("core") {

TEST_CASE("hour_of_day") {
    CHECK(hour_of_day(25) == 1);
    CHECK(hour_of_day(0) == 0);
    CHECK(hour_of_day(47) == 23);
    CHECK_THROWS_AS(hour_of_day(-1), std::invalid_argument);
}

TEST_CASE("day_of") {
    CHECK(day_of(0) == 0);
    CHECK(day_of(23) == 0);
    CHECK(day_of(24) == 1);
}

TEST_CASE("day/hour decomposition is consistent") {
    for (std::int64_t t : {0L, 1L, 23L, 24L, 25L, 8759L, 100000L})
        CHECK(t == 24 * day_of(t) + hour_of_day(t));
}

TEST_CASE("hydrogen_value") {
    PlantParams p = reference_plant();
    CHECK(hydrogen_value(p) == doctest::Approx(40.0));
    p.hydrogen_price = 0.0;
    CHECK(hydrogen_value(p) == 0.0);
    p.efficiency = 18.0;
    p.hydrogen_price = 2.5;
    CHECK(hydrogen_value(p) == doctest::Approx(45.0));
}

TEST_CASE("plant params invariants") {
    PlantParams p = reference_plant();
    CHECK_NOTHROW(p.validate());

    PlantParams bad = p;
    bad.wind_capacity = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = p;
    bad.daily_quota = 24.0 * 20.0 * 5.0 + 1.0;  // one kg beyond what 24h of full output makes
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = p;
    bad.efficiency = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("market hour invariants") {
    const PlantParams p = reference_plant();
    MarketHour h;
    h.t = 5;
    h.lambda_da = 50.0;
    h.lambda_up = 45.0;
    h.lambda_dw = 55.0;
    h.wind_actual = 4.0;
    CHECK_NOTHROW(h.validate(p));

    MarketHour bad = h;
    bad.lambda_up = 51.0;  // above the day-ahead price
    CHECK_THROWS_AS(bad.validate(p), std::invalid_argument);

    bad = h;
    bad.wind_actual = 10.5;
    CHECK_THROWS_AS(bad.validate(p), std::invalid_argument);

    bad = h;
    bad.lambda_dw = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(bad.validate(p), std::invalid_argument);

    // negative prices are allowed as long as the ordering holds
    MarketHour neg = h;
    neg.lambda_up = -60.0;
    neg.lambda_da = -50.0;
    neg.lambda_dw = -40.0;
    CHECK_NOTHROW(neg.validate(p));
}

}  // TEST_SUITE
