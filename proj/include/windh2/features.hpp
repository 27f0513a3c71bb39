#pragma once

#include "windh2/core.hpp"

#include <string>
#include <vector>

namespace windh2 {

enum class SchemaVariant { RF, AF, FM };

/// Ordered context features of one of the three fixed variants. The full
/// feature vector for an hour is [context, lambda, 1]: the day-ahead price
/// occupies the second-to-last slot and the intercept the last.
struct FeatureSchema {
    SchemaVariant variant = SchemaVariant::RF;
    std::vector<std::string> context_names;

    static FeatureSchema make(SchemaVariant v);
    static FeatureSchema parse(const std::string& name);  // "rf" | "af" | "fm"

    int context_dim() const { return static_cast<int>(context_names.size()); }
    int total_dim() const { return context_dim() + 2; }
    std::string name() const;

    bool operator==(const FeatureSchema& other) const = default;
};

/// Context features of one hour; the price slot stays symbolic until a price
/// is supplied.
struct FeatureVector {
    Vec context;

    /// [context, lambda, 1]
    Vec instantiate(double lambda) const;
};

/// Partition of the price axis into M left-closed/right-open intervals given
/// by M-1 finite interior boundaries (the outer boundaries are -inf/+inf).
struct PriceDomains {
    std::vector<double> interior;

    int count() const { return static_cast<int>(interior.size()) + 1; }
    void validate() const;
};

int domain_index(const PriceDomains& domains, double price);

/// Three domains split at the hydrogen value and the nearest-rank 90th
/// percentile of the training prices; collapses to two when the percentile
/// does not exceed the hydrogen value.
PriceDomains default_domains(const PlantParams& params, const std::vector<double>& training_prices);

/// Linear model mapping [AF context, 1] to a single improved wind forecast.
struct ForecastModel {
    Vec coeffs;
};

/// Least squares of realized wind on [context, 1]; falls back to a small
/// ridge penalty when the design matrix is rank deficient.
ForecastModel fit_forecast_model(const Mat& contexts, const Vec& realized_wind);

/// Model output clipped to the physical range [0, wind_capacity].
double apply_forecast_model(const ForecastModel& model, const Vec& context,
                            const PlantParams& params);

}  // namespace windh2
