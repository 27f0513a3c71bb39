#include "windh2/data_io.hpp"

#include "windh2/text.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>

namespace windh2 {

namespace {

constexpr const char* kBaseHeader =
    "timestamp,lambda_da,lambda_up,lambda_dw,wind_actual,wind_forecast,da_price_forecast";
constexpr const char* kAfHeader = ",on_dk1,on_dk2,off_dk1,off_dk2";

std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what) {
    throw std::invalid_argument(source + ":" + std::to_string(line) + ": " + what);
}

std::int64_t parse_timestamp(std::string_view s, const std::string& source, std::size_t line) {
    // strict hourly ISO-8601: YYYY-MM-DDTHH:00:00
    if (s.size() != 19 || s[4] != '-' || s[7] != '-' || s[10] != 'T' || s[13] != ':' ||
        s.substr(13) != ":00:00")
        fail(source, line, "bad timestamp '" + std::string(s) + "' (want YYYY-MM-DDTHH:00:00)");
    auto num = [&](std::size_t pos, std::size_t len) {
        int v = 0;
        for (std::size_t i = pos; i < pos + len; ++i) {
            if (s[i] < '0' || s[i] > '9')
                fail(source, line, "bad timestamp '" + std::string(s) + "'");
            v = v * 10 + (s[i] - '0');
        }
        return v;
    };
    const int y = num(0, 4), mo = num(5, 2), d = num(8, 2), h = num(11, 2);
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23)
        fail(source, line, "timestamp out of range '" + std::string(s) + "'");
    return days_from_civil(y, mo, d) * kHoursPerDay + h;
}

}  // namespace

std::string format_timestamp(std::int64_t epoch_hour) {
    int y, m, d;
    std::int64_t days = epoch_hour / kHoursPerDay;
    int hour = static_cast<int>(epoch_hour % kHoursPerDay);
    if (hour < 0) {
        hour += kHoursPerDay;
        --days;
    }
    civil_from_days(days, y, m, d);
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:00:00", y, m, d, hour);
    return buf;
}

Dataset load_dataset(std::istream& is, const PlantParams& params, const std::string& source) {
    params.validate();
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument(source + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    Dataset ds;
    const std::string base(kBaseHeader);
    if (line == base) ds.has_af = false;
    else if (line == base + kAfHeader) ds.has_af = true;
    else fail(source, 1, "header does not match the dataset schema");

    const std::size_t ncols = ds.has_af ? 11 : 7;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != ncols)
            fail(source, lineno, "expected " + std::to_string(ncols) + " columns, got " +
                                     std::to_string(fields.size()));
        DatasetRow r;
        r.epoch_hour = parse_timestamp(trim(fields[0]), source, lineno);
        auto value = [&](std::size_t i, const char* name) {
            double v;
            try {
                v = parse_double(trim(fields[i]), name);
            } catch (const std::exception& e) {
                fail(source, lineno, e.what());
            }
            if (!std::isfinite(v)) fail(source, lineno, std::string(name) + " is not finite");
            return v;
        };
        r.lambda_da = value(1, "lambda_da");
        r.lambda_up = value(2, "lambda_up");
        r.lambda_dw = value(3, "lambda_dw");
        r.wind_actual = value(4, "wind_actual");
        r.wind_forecast = value(5, "wind_forecast");
        r.da_price_forecast = value(6, "da_price_forecast");
        if (ds.has_af) {
            r.on_dk1 = value(7, "on_dk1");
            r.on_dk2 = value(8, "on_dk2");
            r.off_dk1 = value(9, "off_dk1");
            r.off_dk2 = value(10, "off_dk2");
        }

        if (!(r.lambda_up <= r.lambda_da && r.lambda_da <= r.lambda_dw))
            fail(source, lineno, "dual pricing violated (lambda_up <= lambda_da <= lambda_dw)");
        if (r.wind_actual < 0.0 || r.wind_actual > params.wind_capacity + 1e-9)
            fail(source, lineno, "wind_actual outside [0, wind_capacity]");
        if (r.wind_forecast < 0.0 || r.wind_forecast > params.wind_capacity + 1e-9)
            fail(source, lineno, "wind_forecast outside [0, wind_capacity]");
        if (!ds.rows.empty()) {
            const std::int64_t expect = ds.rows.back().epoch_hour + 1;
            if (r.epoch_hour != expect)
                fail(source, lineno,
                     r.epoch_hour <= ds.rows.back().epoch_hour
                         ? "timestamps must be strictly increasing"
                         : "gap in hourly timestamps: missing " + format_timestamp(expect));
        }
        ds.rows.push_back(r);
    }
    if (ds.rows.empty()) throw std::invalid_argument(source + ": no data rows");
    return ds;
}

Dataset load_dataset(const std::string& path, const PlantParams& params) {
    std::ifstream is(path);
    if (!is) throw FileError("cannot open dataset '" + path + "'");
    return load_dataset(is, params, path);
}

void save_dataset(const Dataset& ds, std::ostream& os) {
    os << kBaseHeader;
    if (ds.has_af) os << kAfHeader;
    os << '\n';
    for (const DatasetRow& r : ds.rows) {
        os << format_timestamp(r.epoch_hour) << ',' << format_double(r.lambda_da) << ','
           << format_double(r.lambda_up) << ',' << format_double(r.lambda_dw) << ','
           << format_double(r.wind_actual) << ',' << format_double(r.wind_forecast) << ','
           << format_double(r.da_price_forecast);
        if (ds.has_af)
            os << ',' << format_double(r.on_dk1) << ',' << format_double(r.on_dk2) << ','
               << format_double(r.off_dk1) << ',' << format_double(r.off_dk2);
        os << '\n';
    }
}

void save_dataset(const Dataset& ds, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw FileError("cannot open '" + path + "' for writing");
    save_dataset(ds, os);
}

ErrorModel fit_error_model(const std::vector<std::pair<double, double>>& forecast_actual,
                           ErrorModelMode mode, std::uint64_t seed) {
    if (forecast_actual.size() < 24)
        throw std::invalid_argument("fit_error_model: need at least 24 forecast/actual pairs");
    ErrorModel m;
    m.mode = mode;
    m.seed = seed;
    m.residual_pool.reserve(forecast_actual.size());
    for (const auto& [forecast, actual] : forecast_actual) {
        require_finite(forecast, "forecast");
        require_finite(actual, "actual");
        m.residual_pool.push_back(actual - forecast);
    }
    const double n = static_cast<double>(m.residual_pool.size());
    m.mu = std::accumulate(m.residual_pool.begin(), m.residual_pool.end(), 0.0) / n;
    double ss = 0.0;
    for (double r : m.residual_pool) ss += (r - m.mu) * (r - m.mu);
    m.sigma = std::sqrt(ss / n);  // population maximum likelihood
    if (mode == ErrorModelMode::Gaussian) m.residual_pool.clear();
    return m;
}

namespace {

double unit_interval(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double gaussian_draw(std::mt19937_64& rng, double mu, double sigma) {
    const double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
    const double u2 = unit_interval(rng);
    return mu + sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace

std::vector<double> generate_forecasts(const std::vector<double>& actuals,
                                       const ErrorModel& model, const PlantParams& params,
                                       ForecastKind kind) {
    if (model.mode == ErrorModelMode::Bootstrap && model.residual_pool.empty())
        throw std::invalid_argument("generate_forecasts: bootstrap pool is empty");
    std::mt19937_64 rng(model.seed);
    std::vector<double> out;
    out.reserve(actuals.size());
    for (double actual : actuals) {
        require_finite(actual, "actual");
        const double err = model.mode == ErrorModelMode::Bootstrap
                               ? model.residual_pool[rng() % model.residual_pool.size()]
                               : gaussian_draw(rng, model.mu, model.sigma);
        double forecast = actual - err;
        if (kind == ForecastKind::Wind)
            forecast = std::clamp(forecast, 0.0, params.wind_capacity);
        out.push_back(forecast);
    }
    return out;
}

}  // namespace windh2
