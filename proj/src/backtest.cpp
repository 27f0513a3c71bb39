#include "windh2/backtest.hpp"

#include "windh2/text.hpp"
#include "windh2/training.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace windh2 {

EstimateMode parse_estimate_mode(const std::string& name) {
    if (name == "perfect") return EstimateMode::Perfect;
    if (name == "persistence") return EstimateMode::Persistence;
    throw std::invalid_argument("unknown estimate mode '" + name +
                                "' (expected perfect or persistence)");
}

void BacktestConfig::validate() const {
    if (window_days < 1) throw std::invalid_argument("window_days must be >= 1");
    if (retrain_days < 1) throw std::invalid_argument("retrain_days must be >= 1");
    grid.validate();
}

std::string BacktestConfig::model_name() const {
    std::string s = hourly ? "HA" : "GA";
    if (price_domains) s += "+PD";
    return s + "/" + FeatureSchema::make(schema).name();
}

void BacktestReport::validate() const {
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-3; };
    double pu = 0, pa = 0, po = 0, du = 0, da = 0, hs = 0;
    for (const auto& d : days) {
        pu += d.policy_unadjusted;
        pa += d.policy_adjusted;
        po += d.policy_optadjust;
        du += d.det_unadjusted;
        da += d.det_adjusted;
        hs += d.hindsight;
    }
    if (!close(pu, policy_unadjusted) || !close(pa, policy_adjusted) ||
        !close(po, policy_optadjust) || !close(du, det_unadjusted) ||
        !close(da, det_adjusted) || !close(hs, hindsight))
        throw std::logic_error("backtest totals diverge from their daily parts");
    double audited = 0.0;
    for (const auto& o : audit) audited += o.profit();
    if (!close(audited, policy_adjusted))
        throw std::logic_error("audit stream diverges from the adjusted total");
    const double recomposed = da_revenue + hydrogen_revenue + up_settlement - down_settlement;
    if (!close(recomposed, policy_adjusted))
        throw std::logic_error("profit decomposition diverges from the adjusted total");
}

Vec FeaturePipeline::af_context(const DatasetRow& r) const {
    Vec x(5);
    x << r.wind_forecast, r.on_dk1, r.on_dk2, r.off_dk1, r.off_dk2;
    return x;
}

Vec FeaturePipeline::context(const DatasetRow& r, const PlantParams& params) const {
    switch (variant) {
        case SchemaVariant::RF: {
            Vec x(1);
            x << r.wind_forecast;
            return x;
        }
        case SchemaVariant::AF: return af_context(r);
        case SchemaVariant::FM: {
            Vec x(1);
            x << apply_forecast_model(fm, af_context(r), params);
            return x;
        }
    }
    throw std::logic_error("unreachable");
}

FeaturePipeline FeaturePipeline::fit(SchemaVariant variant, const Dataset& ds, int history_days) {
    FeaturePipeline fp;
    fp.variant = variant;
    if (variant != SchemaVariant::FM) return fp;
    if (!ds.has_af)
        throw std::invalid_argument("the FM schema needs the zone forecast columns");
    const int rows = history_days * kHoursPerDay;
    if (rows > ds.hour_count())
        throw std::invalid_argument("FM history exceeds the dataset");
    Mat ctx(rows, 5);
    Vec target(rows);
    for (int i = 0; i < rows; ++i) {
        ctx.row(i) = fp.af_context(ds.rows[i]).transpose();
        target[i] = ds.rows[i].wind_actual;
    }
    fp.fm = fit_forecast_model(ctx, target);
    return fp;
}

BacktestReport run_backtest(const Dataset& ds, const BacktestConfig& config,
                            const PlantParams& params) {
    params.validate();
    config.validate();
    if (!ds.day_aligned())
        throw std::invalid_argument("backtest needs a dataset of whole days starting at midnight");
    const int D = ds.day_count();
    const int W = config.window_days;
    if (D < W + 1)
        throw std::invalid_argument("backtest needs at least window_days + 1 days of data (" +
                                    std::to_string(W + 1) + "), got " + std::to_string(D));
    if ((config.schema == SchemaVariant::AF || config.schema == SchemaVariant::FM) && !ds.has_af)
        throw std::invalid_argument("feature schema needs the zone forecast columns");

    const FeatureSchema schema = FeatureSchema::make(config.schema);
    // the auxiliary forecast model trains once, on everything before the
    // first test day
    const FeaturePipeline features = FeaturePipeline::fit(config.schema, ds, W);

    BacktestReport rep;
    PolicySet policy;
    bool have_policy = false;

    for (int d = W; d < D; ++d) {
        const int offset = d - W;
        if (offset % config.retrain_days == 0) {
            TrainingWindow w;
            const int first_row = (d - W) * kHoursPerDay;
            const int rows = W * kHoursPerDay;
            w.hours.reserve(rows);
            w.contexts.resize(rows, schema.context_dim());
            for (int i = 0; i < rows; ++i) {
                w.hours.push_back(ds.market_hour(first_row + i));
                w.contexts.row(i) =
                    features.context(ds.rows[first_row + i], params).transpose();
            }
            Architecture arch;
            arch.hourly = config.hourly;
            if (config.price_domains) {
                std::vector<double> prices(rows);
                for (int i = 0; i < rows; ++i) prices[i] = w.hours[i].lambda_da;
                arch.domains = default_domains(params, prices);
            }
            auto [ps, train_rep] = train(w, arch, schema, params);
            policy = std::move(ps);
            have_policy = true;
            ++rep.retrain_count;
        }
        if (!have_policy) throw std::logic_error("backtest loop reached a day without a policy");

        const int day_row = d * kHoursPerDay;
        std::vector<MarketHour> day(kHoursPerDay);
        std::vector<BalancingEstimate> estimates(kHoursPerDay);
        DaySchedule cleared;
        cleared.p_da = Vec::Zero(kHoursPerDay);
        cleared.p_h = Vec::Zero(kHoursPerDay);
        Vec price_fc(kHoursPerDay), wind_fc(kHoursPerDay);

        for (int h = 0; h < kHoursPerDay; ++h) {
            const DatasetRow& row = ds.rows[day_row + h];
            day[h] = ds.market_hour(day_row + h);
            price_fc[h] = row.da_price_forecast;
            wind_fc[h] = row.wind_forecast;

            BidCurve curve =
                discretize(policy, day[h].t, features.context(row, params), params, config.grid);
            rep.clip_events += curve.any_clipped ? 1 : 0;
            const ClearedQuantities q = clear(curve, row.lambda_da);
            rep.clamp_events += q.clamped ? 1 : 0;
            const RepairedQuantities box = repair(q.p_da, q.p_h, params);
            cleared.p_da[h] = box.p_da;
            cleared.p_h[h] = box.p_h;
            rep.bid_curves.push_back(std::move(curve));

            if (config.estimates == EstimateMode::Perfect) {
                estimates[h] = {row.lambda_up, row.lambda_dw};
            } else {
                const DatasetRow& prev = ds.rows[day_row + h - 1];
                estimates[h] = {prev.lambda_up, prev.lambda_dw};
            }
        }

        DailyProfit daily;
        daily.day = day[0].t / kHoursPerDay;

        for (int h = 0; h < kHoursPerDay; ++h)
            daily.policy_unadjusted +=
                settle_hour(cleared.p_da[h], cleared.p_h[h], day[h], params).profit();

        auto outcomes = adjust_day(cleared, day, estimates, params, config.strict_guard);
        double delivered_kg = 0.0;
        for (const auto& o : outcomes) {
            daily.policy_adjusted += o.profit();
            delivered_kg += params.efficiency * o.p_h_adjusted;
            rep.da_revenue += o.da_revenue;
            rep.hydrogen_revenue += o.hydrogen_revenue;
            rep.up_settlement += o.up_settlement;
            rep.down_settlement += o.down_settlement;
        }
        if (delivered_kg < params.daily_quota - 1e-9) ++rep.quota_violation_days;
        rep.audit.insert(rep.audit.end(), outcomes.begin(), outcomes.end());

        const Vec adj = optimal_adjustment_day(cleared, day, params);
        for (int h = 0; h < kHoursPerDay; ++h)
            daily.policy_optadjust += settle_hour(cleared.p_da[h], adj[h], day[h], params).profit();

        DaySchedule det = deterministic_day(price_fc, wind_fc, params);
        for (int h = 0; h < kHoursPerDay; ++h)
            daily.det_unadjusted += settle_hour(det.p_da[h], det.p_h[h], day[h], params).profit();
        auto det_outcomes = adjust_day(det, day, estimates, params, config.strict_guard);
        for (const auto& o : det_outcomes) daily.det_adjusted += o.profit();

        daily.hindsight = hindsight_day(day, params).profit;

        rep.policy_unadjusted += daily.policy_unadjusted;
        rep.policy_adjusted += daily.policy_adjusted;
        rep.policy_optadjust += daily.policy_optadjust;
        rep.det_unadjusted += daily.det_unadjusted;
        rep.det_adjusted += daily.det_adjusted;
        rep.hindsight += daily.hindsight;
        rep.days.push_back(daily);
    }
    rep.validate();
    return rep;
}

ComparisonTable compare_models(const Dataset& ds,
                               const std::vector<std::pair<std::string, BacktestConfig>>& models,
                               const PlantParams& params) {
    if (models.empty()) throw std::invalid_argument("compare_models: no models given");
    for (const auto& [name, cfg] : models)
        if (cfg.window_days != models.front().second.window_days)
            throw std::invalid_argument(
                "compare_models: window lengths differ, evaluation periods would not match");

    ComparisonTable table;
    ComparisonRow det, hs;
    for (const auto& [name, cfg] : models) {
        BacktestReport rep = run_backtest(ds, cfg, params);
        ComparisonRow row;
        row.model = name;
        row.unadjusted = rep.policy_unadjusted;
        row.adjusted = rep.policy_adjusted;
        row.optadjust = rep.policy_optadjust;
        row.da_revenue = rep.da_revenue;
        row.hydrogen_revenue = rep.hydrogen_revenue;
        row.up_settlement = rep.up_settlement;
        row.down_settlement = rep.down_settlement;
        table.rows.push_back(row);
        det.model = "Det";
        det.unadjusted = rep.det_unadjusted;
        det.adjusted = rep.det_adjusted;
        hs.model = "Hindsight";
        hs.unadjusted = rep.hindsight;
        hs.adjusted = rep.hindsight;
    }
    table.rows.push_back(det);
    table.rows.push_back(hs);
    return table;
}

void write_summary_csv(const BacktestReport& report, std::ostream& os) {
    os << "model,total_profit\n";
    os << "policy_unadjusted," << format_double(report.policy_unadjusted) << '\n';
    os << "policy_adjusted," << format_double(report.policy_adjusted) << '\n';
    os << "policy_optadjust," << format_double(report.policy_optadjust) << '\n';
    os << "det_unadjusted," << format_double(report.det_unadjusted) << '\n';
    os << "det_adjusted," << format_double(report.det_adjusted) << '\n';
    os << "hindsight," << format_double(report.hindsight) << '\n';
}

void write_daily_csv(const BacktestReport& report, std::ostream& os) {
    os << "date,policy_unadjusted,policy_adjusted,policy_optadjust,"
          "det_unadjusted,det_adjusted,hindsight\n";
    for (const auto& d : report.days) {
        os << format_timestamp(d.day * kHoursPerDay).substr(0, 10) << ','
           << format_double(d.policy_unadjusted) << ',' << format_double(d.policy_adjusted) << ','
           << format_double(d.policy_optadjust) << ',' << format_double(d.det_unadjusted) << ','
           << format_double(d.det_adjusted) << ',' << format_double(d.hindsight) << '\n';
    }
}

void write_audit_csv(const BacktestReport& report, std::ostream& os) {
    os << "timestamp,p_da,p_h_scheduled,p_h_adjusted,delta,over,under,"
          "da_revenue,hydrogen_revenue,up_settlement,down_settlement,profit\n";
    for (const auto& o : report.audit) {
        os << format_timestamp(o.t) << ',' << format_double(o.p_da) << ','
           << format_double(o.p_h_scheduled) << ',' << format_double(o.p_h_adjusted) << ','
           << format_double(o.delta) << ',' << format_double(o.over) << ','
           << format_double(o.under) << ',' << format_double(o.da_revenue) << ','
           << format_double(o.hydrogen_revenue) << ',' << format_double(o.up_settlement) << ','
           << format_double(o.down_settlement) << ',' << format_double(o.profit()) << '\n';
    }
}

void write_comparison_csv(const ComparisonTable& table, std::ostream& os) {
    os << "model,unadjusted,adjusted,optadjust,da_revenue,hydrogen_revenue,"
          "up_settlement,down_settlement\n";
    for (const auto& r : table.rows) {
        os << r.model << ',' << format_double(r.unadjusted) << ',' << format_double(r.adjusted)
           << ',' << format_double(r.optadjust) << ',' << format_double(r.da_revenue) << ','
           << format_double(r.hydrogen_revenue) << ',' << format_double(r.up_settlement) << ','
           << format_double(r.down_settlement) << '\n';
    }
}

}  // namespace windh2
