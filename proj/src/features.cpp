#include "windh2/features.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace windh2 {

FeatureSchema FeatureSchema::make(SchemaVariant v) {
    FeatureSchema s;
    s.variant = v;
    switch (v) {
        case SchemaVariant::RF: s.context_names = {"wind_forecast"}; break;
        case SchemaVariant::AF:
            s.context_names = {"wind_forecast", "on_dk1", "on_dk2", "off_dk1", "off_dk2"};
            break;
        case SchemaVariant::FM: s.context_names = {"fm_forecast"}; break;
    }
    return s;
}

FeatureSchema FeatureSchema::parse(const std::string& name) {
    if (name == "rf" || name == "RF") return make(SchemaVariant::RF);
    if (name == "af" || name == "AF") return make(SchemaVariant::AF);
    if (name == "fm" || name == "FM") return make(SchemaVariant::FM);
    throw std::invalid_argument("unknown feature schema '" + name + "' (expected rf, af or fm)");
}

std::string FeatureSchema::name() const {
    switch (variant) {
        case SchemaVariant::RF: return "RF";
        case SchemaVariant::AF: return "AF";
        case SchemaVariant::FM: return "FM";
    }
    return "?";
}

Vec FeatureVector::instantiate(double lambda) const {
    require_finite(lambda, "lambda");
    if (!context.allFinite()) throw std::invalid_argument("feature context must be finite");
    Vec x(context.size() + 2);
    x.head(context.size()) = context;
    x[context.size()] = lambda;
    x[context.size() + 1] = 1.0;
    return x;
}

void PriceDomains::validate() const {
    for (std::size_t i = 0; i < interior.size(); ++i) {
        if (!std::isfinite(interior[i]))
            throw std::invalid_argument("price domain boundaries must be finite");
        if (i > 0 && interior[i - 1] >= interior[i])
            throw std::invalid_argument("price domain boundaries must be strictly increasing");
    }
}

int domain_index(const PriceDomains& domains, double price) {
    require_finite(price, "price");
    // intervals are left-closed/right-open, so a boundary price belongs to the
    // domain on its right
    const auto it = std::upper_bound(domains.interior.begin(), domains.interior.end(), price);
    return static_cast<int>(it - domains.interior.begin());
}

namespace {

double nearest_rank_percentile(std::vector<double> values, double pct) {
    std::sort(values.begin(), values.end());
    const auto n = values.size();
    std::size_t rank = static_cast<std::size_t>(std::ceil(pct * static_cast<double>(n)));
    rank = std::max<std::size_t>(rank, 1);
    return values[rank - 1];
}

}  // namespace

PriceDomains default_domains(const PlantParams& params, const std::vector<double>& training_prices) {
    if (training_prices.empty())
        throw std::invalid_argument("default_domains: no training prices");
    const double hv = hydrogen_value(params);
    const double p90 = nearest_rank_percentile(training_prices, 0.90);
    PriceDomains d;
    if (p90 <= hv) {
        std::cerr << "warning: 90th percentile price (" << p90
                  << ") does not exceed the hydrogen value (" << hv
                  << "); collapsing to two price domains\n";
        d.interior = {hv};
    } else {
        d.interior = {hv, p90};
    }
    d.validate();
    return d;
}

ForecastModel fit_forecast_model(const Mat& contexts, const Vec& realized_wind) {
    const auto rows = contexts.rows();
    const auto p = contexts.cols() + 1;
    if (realized_wind.size() != rows)
        throw std::invalid_argument("fit_forecast_model: row count mismatch");
    if (rows < p + 1)
        throw std::invalid_argument("fit_forecast_model: need at least " + std::to_string(p + 1) +
                                    " rows");
    Mat design(rows, p);
    design.leftCols(p - 1) = contexts;
    design.col(p - 1).setOnes();

    Eigen::JacobiSVD<Mat> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vec& sv = svd.singularValues();
    ForecastModel model;
    if (sv[sv.size() - 1] > 1e-9 * sv[0]) {
        model.coeffs = svd.solve(realized_wind);
    } else {
        const Mat gram = design.transpose() * design;
        const double ridge = 1e-6 * gram.trace() / static_cast<double>(p);
        Mat reg = gram + ridge * Mat::Identity(p, p);
        model.coeffs = reg.ldlt().solve(design.transpose() * realized_wind);
    }
    return model;
}

double apply_forecast_model(const ForecastModel& model, const Vec& context,
                            const PlantParams& params) {
    if (context.size() + 1 != model.coeffs.size())
        throw std::invalid_argument("apply_forecast_model: context dimension mismatch");
    const double raw =
        model.coeffs.head(context.size()).dot(context) + model.coeffs[context.size()];
    return std::clamp(raw, 0.0, params.wind_capacity);
}

}  // namespace windh2
