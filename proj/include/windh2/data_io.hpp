#pragma once

#include "windh2/core.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace windh2 {

/// One CSV row. The hour index equals hours since 1970-01-01T00:00, so
/// t % 24 is the civil (UTC) hour of day.
struct DatasetRow {
    std::int64_t epoch_hour = 0;
    double lambda_da = 0.0;
    double lambda_up = 0.0;
    double lambda_dw = 0.0;
    double wind_actual = 0.0;
    double wind_forecast = 0.0;
    double da_price_forecast = 0.0;
    double on_dk1 = 0.0;  // AF columns, meaningful when has_af is set on the dataset
    double on_dk2 = 0.0;
    double off_dk1 = 0.0;
    double off_dk2 = 0.0;
};

struct Dataset {
    std::vector<DatasetRow> rows;
    bool has_af = false;

    int hour_count() const { return static_cast<int>(rows.size()); }
    bool day_aligned() const {
        return !rows.empty() && rows.front().epoch_hour % kHoursPerDay == 0 &&
               hour_count() % kHoursPerDay == 0;
    }
    int day_count() const { return hour_count() / kHoursPerDay; }

    MarketHour market_hour(int i) const {
        const DatasetRow& r = rows[i];
        return MarketHour{r.epoch_hour, r.lambda_da, r.lambda_up, r.lambda_dw, r.wind_actual};
    }
};

std::string format_timestamp(std::int64_t epoch_hour);

/// Parses and validates the CSV: exact header, strictly consecutive hourly
/// timestamps, dual pricing and wind ranges per row. Violations raise with
/// the offending line number; the first gap rejects the whole file.
Dataset load_dataset(std::istream& is, const PlantParams& params,
                     const std::string& source = "<stream>");
Dataset load_dataset(const std::string& path, const PlantParams& params);

void save_dataset(const Dataset& ds, std::ostream& os);
void save_dataset(const Dataset& ds, const std::string& path);

enum class ErrorModelMode { Bootstrap, Gaussian };
enum class ForecastKind { Wind, Price };

/// Forecast-error model fitted on an overlap of forecasts and realizations;
/// errors are taken as actual minus forecast.
struct ErrorModel {
    ErrorModelMode mode = ErrorModelMode::Bootstrap;
    std::vector<double> residual_pool;
    double mu = 0.0;
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

ErrorModel fit_error_model(const std::vector<std::pair<double, double>>& forecast_actual,
                           ErrorModelMode mode, std::uint64_t seed);

/// Draws one error per hour and subtracts it from the realization; wind
/// forecasts are clipped to [0, wind capacity], price forecasts are not.
std::vector<double> generate_forecasts(const std::vector<double>& actuals,
                                       const ErrorModel& model, const PlantParams& params,
                                       ForecastKind kind);

}  // namespace windh2
