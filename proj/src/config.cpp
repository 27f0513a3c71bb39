#include "windh2/config.hpp"

#include "windh2/text.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace windh2 {

namespace {

bool parse_bool(std::string_view v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw std::invalid_argument("config: bad boolean for " + key + ": '" + std::string(v) + "'");
}

}  // namespace

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw FileError("cannot open config file '" + path + "'");

    RunConfig cfg;
    std::string architecture = "ga";
    std::string features = "rf";
    std::string estimates = "perfect";

    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        std::string_view sv = trim(line);
        if (sv.empty()) continue;
        if (sv.front() == '[') {
            if (sv.back() != ']')
                throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                            ": unterminated section header");
            section = std::string(trim(sv.substr(1, sv.size() - 2)));
            continue;
        }
        const auto eq = sv.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = std::string(trim(sv.substr(0, eq)));
        const std::string value = std::string(trim(sv.substr(eq + 1)));
        const std::string qual = section + "." + key;

        try {
            if (qual == "plant.wind_capacity") cfg.plant.wind_capacity = parse_double(value, key.c_str());
            else if (qual == "plant.electrolyzer_capacity")
                cfg.plant.electrolyzer_capacity = parse_double(value, key.c_str());
            else if (qual == "plant.efficiency") cfg.plant.efficiency = parse_double(value, key.c_str());
            else if (qual == "plant.hydrogen_price")
                cfg.plant.hydrogen_price = parse_double(value, key.c_str());
            else if (qual == "plant.daily_quota") cfg.plant.daily_quota = parse_double(value, key.c_str());
            else if (qual == "model.architecture") architecture = value;
            else if (qual == "model.features") features = value;
            else if (qual == "bidding.steps_per_domain")
                cfg.backtest.grid.steps_per_domain = static_cast<int>(parse_double(value, key.c_str()));
            else if (qual == "bidding.price_floor")
                cfg.backtest.grid.price_floor = parse_double(value, key.c_str());
            else if (qual == "bidding.price_ceil")
                cfg.backtest.grid.price_ceil = parse_double(value, key.c_str());
            else if (qual == "bidding.monotonic")
                cfg.backtest.grid.monotonic_projection = parse_bool(value, qual);
            else if (qual == "backtest.window_days")
                cfg.backtest.window_days = static_cast<int>(parse_double(value, key.c_str()));
            else if (qual == "backtest.retrain_days")
                cfg.backtest.retrain_days = static_cast<int>(parse_double(value, key.c_str()));
            else if (qual == "backtest.estimates") estimates = value;
            else if (qual == "backtest.strict_guard")
                cfg.backtest.strict_guard = parse_bool(value, qual);
            else if (qual == "backtest.seed")
                cfg.backtest.seed = static_cast<std::uint64_t>(parse_double(value, key.c_str()));
            else if (qual == "synth.overlap_days")
                cfg.synth_overlap_days = static_cast<int>(parse_double(value, key.c_str()));
            else if (qual == "paths.data") cfg.data_path = value;
            else if (qual == "paths.out_dir") cfg.out_dir = value;
            else
                throw std::invalid_argument("unknown key '" + qual + "'");
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }

    if (architecture == "ga") { cfg.backtest.hourly = false; cfg.backtest.price_domains = false; }
    else if (architecture == "ha") { cfg.backtest.hourly = true; cfg.backtest.price_domains = false; }
    else if (architecture == "ga+pd") { cfg.backtest.hourly = false; cfg.backtest.price_domains = true; }
    else if (architecture == "ha+pd") { cfg.backtest.hourly = true; cfg.backtest.price_domains = true; }
    else throw std::invalid_argument(path + ": unknown architecture '" + architecture + "'");
    cfg.backtest.schema = FeatureSchema::parse(features).variant;
    cfg.backtest.estimates = parse_estimate_mode(estimates);

    cfg.plant.validate();
    cfg.backtest.validate();
    if (cfg.synth_overlap_days < 1)
        throw std::invalid_argument(path + ": synth overlap_days must be >= 1");
    if (!cfg.data_path.empty() && !std::filesystem::exists(cfg.data_path))
        throw FileError(path + ": data file '" + cfg.data_path + "' does not exist");
    return cfg;
}

}  // namespace windh2
