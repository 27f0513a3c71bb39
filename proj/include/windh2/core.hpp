#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace windh2 {

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vec = Vector<double>;
using Mat = Matrix<double>;

inline constexpr int kHoursPerDay = 24;

/// A referenced file is missing or unreadable (maps to a dedicated CLI exit code).
struct FileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require_finite(double v, const char* what) {
    if (!std::isfinite(v))
        throw std::invalid_argument(std::string(what) + " must be finite");
}

/// Physical and contractual constants of the wind + electrolyzer plant.
struct PlantParams {
    double wind_capacity = 0.0;          // MW
    double electrolyzer_capacity = 0.0;  // MW
    double efficiency = 0.0;             // kg/MWh
    double hydrogen_price = 0.0;         // EUR/kg
    double daily_quota = 0.0;            // kg per day

    void validate() const {
        require_finite(wind_capacity, "wind_capacity");
        require_finite(electrolyzer_capacity, "electrolyzer_capacity");
        require_finite(efficiency, "efficiency");
        require_finite(hydrogen_price, "hydrogen_price");
        require_finite(daily_quota, "daily_quota");
        if (wind_capacity <= 0.0)
            throw std::invalid_argument("wind_capacity must be > 0");
        if (electrolyzer_capacity <= 0.0)
            throw std::invalid_argument("electrolyzer_capacity must be > 0");
        if (efficiency <= 0.0)
            throw std::invalid_argument("efficiency must be > 0");
        if (hydrogen_price < 0.0)
            throw std::invalid_argument("hydrogen_price must be >= 0");
        if (daily_quota < 0.0)
            throw std::invalid_argument("daily_quota must be >= 0");
        // A quota above what the electrolyzer can make in 24 hours can never be met.
        const double max_daily = kHoursPerDay * efficiency * electrolyzer_capacity;
        if (daily_quota > max_daily + 1e-9)
            throw std::invalid_argument("daily_quota exceeds 24h electrolyzer output (" +
                                        std::to_string(max_daily) + " kg)");
    }
};

/// One hour of realized market data. Prices follow the dual-pricing order
/// lambda_up <= lambda_da <= lambda_dw; rows violating it are rejected at ingestion.
struct MarketHour {
    std::int64_t t = 0;     // hour index, 0-based
    double lambda_da = 0.0; // EUR/MWh
    double lambda_up = 0.0; // EUR/MWh
    double lambda_dw = 0.0; // EUR/MWh
    double wind_actual = 0.0; // MW

    void validate(const PlantParams& plant) const {
        if (t < 0) throw std::invalid_argument("hour index must be >= 0");
        require_finite(lambda_da, "lambda_da");
        require_finite(lambda_up, "lambda_up");
        require_finite(lambda_dw, "lambda_dw");
        require_finite(wind_actual, "wind_actual");
        if (!(lambda_up <= lambda_da && lambda_da <= lambda_dw))
            throw std::invalid_argument("dual pricing violated: need lambda_up <= lambda_da <= lambda_dw");
        if (wind_actual < 0.0 || wind_actual > plant.wind_capacity + 1e-9)
            throw std::invalid_argument("wind_actual outside [0, wind_capacity]");
    }
};

/// Energy over one hour, MWh. At hourly resolution MWh-per-hour and average MW coincide,
/// so the same number is used for both; this type exists to keep that convention explicit.
struct HourlyEnergy {
    double mwh = 0.0;

    HourlyEnergy() = default;
    explicit HourlyEnergy(double v) : mwh(v) { require_finite(v, "HourlyEnergy"); }
};

inline int hour_of_day(std::int64_t t) {
    if (t < 0) throw std::invalid_argument("hour index must be >= 0");
    return static_cast<int>(t % kHoursPerDay);
}

inline std::int64_t day_of(std::int64_t t) {
    if (t < 0) throw std::invalid_argument("hour index must be >= 0");
    return t / kHoursPerDay;
}

/// Electricity-equivalent worth of hydrogen output, EUR/MWh.
inline double hydrogen_value(const PlantParams& p) {
    return p.efficiency * p.hydrogen_price;
}

}  // namespace windh2
