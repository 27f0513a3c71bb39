#include <CLI11.hpp>

#include "windh2/backtest.hpp"
#include "windh2/config.hpp"
#include "windh2/data_io.hpp"
#include "windh2/policy.hpp"
#include "windh2/text.hpp"
#include "windh2/training.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace windh2;

namespace {

struct GlobalOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    bool faithful = false;
};

RunConfig load_run_config(const GlobalOpts& g) {
    RunConfig cfg = RunConfig::load(g.config_path);
    if (g.seed) cfg.backtest.seed = *g.seed;
    if (g.out_dir) cfg.out_dir = *g.out_dir;
    if (g.faithful) cfg.apply_faithful();
    return cfg;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.out_dir);
    return (fs::path(cfg.out_dir) / name).string();
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& fn) {
    std::ofstream os(path);
    if (!os) throw FileError("cannot open '" + path + "' for writing");
    fn(os);
}

Architecture resolve_architecture(const BacktestConfig& bt, const std::vector<MarketHour>& hours,
                                  const PlantParams& plant) {
    Architecture arch;
    arch.hourly = bt.hourly;
    if (bt.price_domains) {
        std::vector<double> prices;
        prices.reserve(hours.size());
        for (const auto& h : hours) prices.push_back(h.lambda_da);
        arch.domains = default_domains(plant, prices);
    }
    return arch;
}

int cmd_train(const GlobalOpts& g, const std::string& policy_out) {
    RunConfig cfg = load_run_config(g);
    if (cfg.data_path.empty()) throw std::invalid_argument("config has no paths.data entry");
    Dataset ds = load_dataset(cfg.data_path, cfg.plant);
    if (!ds.day_aligned())
        throw std::invalid_argument("training data must span whole days starting at midnight");
    const int W = cfg.backtest.window_days;
    if (ds.day_count() < W)
        throw std::invalid_argument("dataset has " + std::to_string(ds.day_count()) +
                                    " days, the configured window needs " + std::to_string(W));

    const FeatureSchema schema = FeatureSchema::make(cfg.backtest.schema);
    const FeaturePipeline features =
        FeaturePipeline::fit(cfg.backtest.schema, ds, ds.day_count());

    TrainingWindow w;
    const int first_row = (ds.day_count() - W) * kHoursPerDay;
    const int rows = W * kHoursPerDay;
    w.contexts.resize(rows, schema.context_dim());
    for (int i = 0; i < rows; ++i) {
        w.hours.push_back(ds.market_hour(first_row + i));
        w.contexts.row(i) = features.context(ds.rows[first_row + i], cfg.plant).transpose();
    }
    const Architecture arch = resolve_architecture(cfg.backtest, w.hours, cfg.plant);

    auto [ps, rep] = train(w, arch, schema, cfg.plant);
    const std::string path = policy_out.empty() ? out_path(cfg, "policy.json") : policy_out;
    save_policy_set(ps, path);

    std::printf("model: %s/%s\n", arch.name().c_str(), schema.name().c_str());
    std::printf("window: %d days ending %s\n", W,
                format_timestamp(w.hours.back().t).substr(0, 10).c_str());
    std::printf("objective: %.2f EUR\n", rep.objective);
    std::printf("  day-ahead revenue: %.2f\n", rep.da_revenue);
    std::printf("  hydrogen revenue:  %.2f\n", rep.hydrogen_revenue);
    std::printf("  up settlement:     %.2f\n", rep.up_settlement);
    std::printf("  down settlement:   %.2f\n", rep.down_settlement);
    std::printf("binaries relaxed: %s\n", rep.relaxed_binaries ? "yes" : "no");
    std::printf("policy written to %s\n", path.c_str());
    return 0;
}

int cmd_bid(const GlobalOpts& g, const std::string& policy_path, const std::string& features_path,
            const std::string& bids_out) {
    RunConfig cfg = load_run_config(g);
    PolicySet ps = load_policy_set(policy_path);

    std::ifstream is(features_path);
    if (!is) throw FileError("cannot open features file '" + features_path + "'");
    std::string expected_header = "hour";
    for (const auto& name : ps.schema().context_names) expected_header += "," + name;
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument(features_path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != expected_header)
        throw std::invalid_argument(features_path + ": header does not match the policy schema " +
                                    ps.schema().name() + " (expected '" + expected_header + "')");

    Mat contexts(kHoursPerDay, ps.schema().context_dim());
    int next_hour = 0;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (static_cast<int>(fields.size()) != ps.schema().context_dim() + 1)
            throw std::invalid_argument(features_path + ":" + std::to_string(lineno) +
                                        ": wrong column count");
        if (next_hour >= kHoursPerDay)
            throw std::invalid_argument(features_path + ": more than 24 hours");
        const double hour = parse_double(trim(fields[0]), "hour");
        if (hour != next_hour)
            throw std::invalid_argument(features_path + ":" + std::to_string(lineno) +
                                        ": expected hour " + std::to_string(next_hour));
        for (int c = 0; c < ps.schema().context_dim(); ++c)
            contexts(next_hour, c) = parse_double(trim(fields[c + 1]), "feature");
        ++next_hour;
    }
    if (next_hour != kHoursPerDay)
        throw std::invalid_argument(features_path + ": expected 24 hourly rows, got " +
                                    std::to_string(next_hour));

    std::vector<BidCurve> curves;
    curves.reserve(kHoursPerDay);
    for (int h = 0; h < kHoursPerDay; ++h)
        curves.push_back(discretize(ps, h, contexts.row(h).transpose(), cfg.plant,
                                    cfg.backtest.grid));
    const std::string path = bids_out.empty() ? out_path(cfg, "bids.csv") : bids_out;
    write_file(path, [&](std::ostream& os) { export_bid_curves(curves, os); });
    std::size_t steps = 0;
    for (const auto& c : curves) steps += c.steps.size();
    std::printf("wrote %zu bid steps across 24 hours to %s\n", steps, path.c_str());
    return 0;
}

int cmd_backtest(const GlobalOpts& g) {
    RunConfig cfg = load_run_config(g);
    if (cfg.data_path.empty()) throw std::invalid_argument("config has no paths.data entry");
    Dataset ds = load_dataset(cfg.data_path, cfg.plant);
    BacktestReport rep = run_backtest(ds, cfg.backtest, cfg.plant);

    write_file(out_path(cfg, "summary.csv"), [&](std::ostream& os) { write_summary_csv(rep, os); });
    write_file(out_path(cfg, "daily.csv"), [&](std::ostream& os) { write_daily_csv(rep, os); });
    write_file(out_path(cfg, "audit.csv"), [&](std::ostream& os) { write_audit_csv(rep, os); });

    std::printf("evaluated %zu days (%s, estimates: %s)\n", rep.days.size(),
                cfg.backtest.model_name().c_str(),
                cfg.backtest.estimates == EstimateMode::Perfect ? "perfect" : "persistence");
    std::printf("retrainings: %d\n", rep.retrain_count);
    std::printf("total profit (EUR)\n");
    std::printf("  policy unadjusted: %14.2f\n", rep.policy_unadjusted);
    std::printf("  policy adjusted:   %14.2f\n", rep.policy_adjusted);
    std::printf("  policy optadjust:  %14.2f\n", rep.policy_optadjust);
    std::printf("  det unadjusted:    %14.2f\n", rep.det_unadjusted);
    std::printf("  det adjusted:      %14.2f\n", rep.det_adjusted);
    std::printf("  hindsight:         %14.2f\n", rep.hindsight);
    std::printf("clip events: %ld, clamp events: %ld\n", rep.clip_events, rep.clamp_events);
    std::printf("quota violations: %ld\n", rep.quota_violation_days);
    std::printf("reports written to %s\n", cfg.out_dir.c_str());
    return 0;
}

int cmd_compare(const GlobalOpts& g, const std::string& models_arg) {
    RunConfig cfg = load_run_config(g);
    if (cfg.data_path.empty()) throw std::invalid_argument("config has no paths.data entry");
    Dataset ds = load_dataset(cfg.data_path, cfg.plant);

    std::vector<std::pair<std::string, BacktestConfig>> models;
    std::string token;
    std::istringstream tokens(models_arg);
    while (std::getline(tokens, token, ',')) {
        BacktestConfig bt = cfg.backtest;
        if (token == "ga") { bt.hourly = false; bt.price_domains = false; }
        else if (token == "ha") { bt.hourly = true; bt.price_domains = false; }
        else if (token == "ga+pd") { bt.hourly = false; bt.price_domains = true; }
        else if (token == "ha+pd") { bt.hourly = true; bt.price_domains = true; }
        else throw std::invalid_argument("unknown model '" + token + "' in --models");
        models.emplace_back(bt.model_name(), bt);
    }
    if (models.empty()) throw std::invalid_argument("--models selected nothing");

    ComparisonTable table = compare_models(ds, models, cfg.plant);
    write_file(out_path(cfg, "comparison.csv"),
               [&](std::ostream& os) { write_comparison_csv(table, os); });
    std::printf("%-12s %14s %14s %14s\n", "model", "unadjusted", "adjusted", "optadjust");
    for (const auto& r : table.rows)
        std::printf("%-12s %14.2f %14.2f %14.2f\n", r.model.c_str(), r.unadjusted, r.adjusted,
                    r.optadjust);
    std::printf("comparison written to %s\n", out_path(cfg, "comparison.csv").c_str());
    return 0;
}

int cmd_synth(const GlobalOpts& g, int overlap_override, const std::string& mode_name,
              const std::string& synth_out) {
    RunConfig cfg = load_run_config(g);
    if (cfg.data_path.empty()) throw std::invalid_argument("config has no paths.data entry");
    Dataset ds = load_dataset(cfg.data_path, cfg.plant);
    const int overlap_days = overlap_override > 0 ? overlap_override : cfg.synth_overlap_days;
    if (overlap_days * kHoursPerDay > ds.hour_count())
        throw std::invalid_argument("overlap (" + std::to_string(overlap_days) +
                                    " days) exceeds the dataset");
    const ErrorModelMode mode = mode_name == "gaussian" ? ErrorModelMode::Gaussian
                              : mode_name == "bootstrap"
                                  ? ErrorModelMode::Bootstrap
                                  : throw std::invalid_argument("unknown error model mode '" +
                                                                mode_name + "'");

    std::vector<std::pair<double, double>> wind_pairs, price_pairs;
    for (int i = 0; i < overlap_days * kHoursPerDay; ++i) {
        wind_pairs.emplace_back(ds.rows[i].wind_forecast, ds.rows[i].wind_actual);
        price_pairs.emplace_back(ds.rows[i].da_price_forecast, ds.rows[i].lambda_da);
    }
    const ErrorModel wind_model = fit_error_model(wind_pairs, mode, cfg.backtest.seed);
    const ErrorModel price_model = fit_error_model(price_pairs, mode, cfg.backtest.seed + 1);

    std::vector<double> wind_actuals, price_actuals;
    for (const auto& r : ds.rows) {
        wind_actuals.push_back(r.wind_actual);
        price_actuals.push_back(r.lambda_da);
    }
    const std::vector<double> wind_fc =
        generate_forecasts(wind_actuals, wind_model, cfg.plant, ForecastKind::Wind);
    const std::vector<double> price_fc =
        generate_forecasts(price_actuals, price_model, cfg.plant, ForecastKind::Price);
    for (int i = 0; i < ds.hour_count(); ++i) {
        ds.rows[i].wind_forecast = wind_fc[i];
        ds.rows[i].da_price_forecast = price_fc[i];
    }

    const std::string path = synth_out.empty() ? out_path(cfg, "synthetic.csv") : synth_out;
    save_dataset(ds, path);
    std::printf("fitted on %d overlap days (%s)\n", overlap_days,
                mode == ErrorModelMode::Gaussian ? "gaussian" : "bootstrap");
    std::printf("  wind error:  mu=%.6f sigma=%.6f\n", wind_model.mu, wind_model.sigma);
    std::printf("  price error: mu=%.6f sigma=%.6f\n", price_model.mu, price_model.sigma);
    std::printf("synthetic forecasts written to %s\n", path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Feature-driven day-ahead bidding and real-time hydrogen adjustment "
                 "for a wind + electrolyzer plant"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--config", g.config_path, "run configuration file")->required();
    std::uint64_t seed_val = 0;
    auto* seed_opt = app.add_option("--seed", seed_val, "override the configured seed");
    std::string out_dir_val;
    auto* out_opt = app.add_option("--out-dir", out_dir_val, "override the output directory")
                        ->envname("WINDH2_OUT_DIR");
    app.add_flag("--faithful", g.faithful,
                 "plain rule formulas: no quota guard, no monotonic bid projection");

    auto* train_cmd = app.add_subcommand("train", "learn policies on the trailing window");
    std::string policy_out;
    train_cmd->add_option("--out", policy_out, "policy file to write (default <out-dir>/policy.json)");

    auto* bid_cmd = app.add_subcommand("bid", "turn a policy and a day of features into bid curves");
    std::string policy_path, features_path, bids_out;
    bid_cmd->add_option("--policy", policy_path, "policy file")->required();
    bid_cmd->add_option("--features", features_path, "features-for-day CSV")->required();
    bid_cmd->add_option("--out", bids_out, "bid CSV to write (default <out-dir>/bids.csv)");

    auto* backtest_cmd = app.add_subcommand("backtest", "sliding-window backtest with benchmarks");

    auto* compare_cmd = app.add_subcommand("compare", "run several architectures side by side");
    std::string models_arg = "ga,ha,ga+pd,ha+pd";
    compare_cmd->add_option("--models", models_arg, "comma list from: ga, ha, ga+pd, ha+pd");

    auto* synth_cmd = app.add_subcommand("synth", "generate synthetic forecast columns");
    int overlap_override = 0;
    std::string mode_name = "bootstrap";
    std::string synth_out;
    synth_cmd->add_option("--overlap-days", overlap_override, "override the configured overlap");
    synth_cmd->add_option("--mode", mode_name, "error model: bootstrap or gaussian");
    synth_cmd->add_option("--out", synth_out, "augmented CSV to write (default <out-dir>/synthetic.csv)");

    CLI11_PARSE(app, argc, argv);
    if (*seed_opt) g.seed = seed_val;
    if (*out_opt) g.out_dir = out_dir_val;

    try {
        if (*train_cmd) return cmd_train(g, policy_out);
        if (*bid_cmd) return cmd_bid(g, policy_path, features_path, bids_out);
        if (*backtest_cmd) return cmd_backtest(g);
        if (*compare_cmd) return cmd_compare(g, models_arg);
        if (*synth_cmd) return cmd_synth(g, overlap_override, mode_name, synth_out);
    } catch (const FileError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
