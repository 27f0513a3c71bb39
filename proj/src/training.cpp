#include "windh2/training.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace windh2 {

void TrainingWindow::validate(const PlantParams& params, int context_dim) const {
    if (hours.empty()) throw std::invalid_argument("training window is empty");
    if (hour_count() % kHoursPerDay != 0)
        throw std::invalid_argument("training window must span whole days");
    if (hours.front().t % kHoursPerDay != 0)
        throw std::invalid_argument("training window must start at a day boundary");
    for (int i = 0; i < hour_count(); ++i) {
        hours[i].validate(params);
        if (i > 0 && hours[i].t != hours[i - 1].t + 1)
            throw std::invalid_argument("training window hours must be contiguous");
    }
    if (contexts.rows() != hour_count() || contexts.cols() != context_dim)
        throw std::invalid_argument("training window context matrix has wrong shape");
    if (!contexts.allFinite())
        throw std::invalid_argument("training window contexts must be finite");
}

namespace {

struct ProblemLayout {
    int num_keys = 0;
    int dim = 0;   // q-vector length
    int hours = 0;
    bool binaries = false;

    int q_col(int key, int coeff) const { return key * dim + coeff; }
    int o_col(int t) const { return num_keys * dim + t; }
    int u_col(int t) const { return num_keys * dim + hours + t; }
    int b_col(int t) const { return num_keys * dim + 2 * hours + t; }
    int num_vars() const { return num_keys * dim + (binaries ? 3 : 2) * hours; }
};

LinearProgram assemble(const TrainingWindow& window, const Architecture& arch,
                       const FeatureSchema& schema, const PlantParams& params, bool binaries) {
    window.validate(params, schema.context_dim());

    ProblemLayout lay;
    lay.num_keys = policy_key_count(arch);
    lay.dim = schema.total_dim();
    lay.hours = window.hour_count();
    lay.binaries = binaries;

    const int T = lay.hours;
    const int D = window.day_count();
    const int nv = lay.num_vars();
    const double big_m = params.wind_capacity + params.electrolyzer_capacity;
    const double h2v = hydrogen_value(params);
    const double inf = std::numeric_limits<double>::infinity();

    LinearProgram lp;
    lp.objective = Vec::Zero(nv);
    lp.lower = Vec::Constant(nv, -inf);
    lp.upper = Vec::Constant(nv, inf);
    for (int t = 0; t < T; ++t) {
        lp.lower[lay.o_col(t)] = 0.0;
        lp.lower[lay.u_col(t)] = 0.0;
        if (binaries) {
            lp.lower[lay.b_col(t)] = 0.0;
            lp.upper[lay.b_col(t)] = 1.0;
            lp.integrality.push_back(lay.b_col(t));
        } else {
            // without the exclusivity rows, cap o/u at the big-M level they
            // could never exceed in a complementary optimum
            lp.upper[lay.o_col(t)] = big_m;
            lp.upper[lay.u_col(t)] = big_m;
        }
    }

    // per-hour instantiated features and selected keys
    std::vector<Vec> x_t(T);
    std::vector<int> key_da(T), key_h(T);
    for (int t = 0; t < T; ++t) {
        FeatureVector f;
        f.context = window.contexts.row(t).transpose();
        x_t[t] = f.instantiate(window.hours[t].lambda_da);
        key_da[t] = policy_key_index_for(arch, Product::DA, window.hours[t].t,
                                         window.hours[t].lambda_da);
        key_h[t] = policy_key_index_for(arch, Product::H, window.hours[t].t,
                                        window.hours[t].lambda_da);
    }

    for (int t = 0; t < T; ++t) {
        const auto& h = window.hours[t];
        for (int c = 0; c < lay.dim; ++c) {
            lp.objective[lay.q_col(key_da[t], c)] += h.lambda_da * x_t[t][c];
            lp.objective[lay.q_col(key_h[t], c)] += h2v * x_t[t][c];
        }
        lp.objective[lay.o_col(t)] = h.lambda_up;
        lp.objective[lay.u_col(t)] = -h.lambda_dw;
    }

    auto policy_row = [&](int key, int t) {
        Vec row = Vec::Zero(nv);
        for (int c = 0; c < lay.dim; ++c) row[lay.q_col(key, c)] = x_t[t][c];
        return row;
    };

    // imbalance definition: q_da.x + q_h.x + o - u = realized wind
    for (int t = 0; t < T; ++t) {
        Constraint c;
        c.coeffs = policy_row(key_da[t], t) + policy_row(key_h[t], t);
        c.coeffs[lay.o_col(t)] = 1.0;
        c.coeffs[lay.u_col(t)] = -1.0;
        c.rel = Relation::Equal;
        c.rhs = window.hours[t].wind_actual;
        lp.constraints.push_back(std::move(c));
    }
    if (binaries) {
        // o <= M (1-b)  and  u <= M b
        for (int t = 0; t < T; ++t) {
            Constraint c;
            c.coeffs = Vec::Zero(nv);
            c.coeffs[lay.o_col(t)] = 1.0;
            c.coeffs[lay.b_col(t)] = big_m;
            c.rel = Relation::LessEq;
            c.rhs = big_m;
            lp.constraints.push_back(std::move(c));
        }
        for (int t = 0; t < T; ++t) {
            Constraint c;
            c.coeffs = Vec::Zero(nv);
            c.coeffs[lay.u_col(t)] = 1.0;
            c.coeffs[lay.b_col(t)] = -big_m;
            c.rel = Relation::LessEq;
            c.rhs = 0.0;
            lp.constraints.push_back(std::move(c));
        }
    }
    // electrolyzer box: 0 <= q_h.x <= capacity
    for (int t = 0; t < T; ++t) {
        Constraint c;
        c.coeffs = policy_row(key_h[t], t);
        c.rel = Relation::GreaterEq;
        c.rhs = 0.0;
        lp.constraints.push_back(std::move(c));
    }
    for (int t = 0; t < T; ++t) {
        Constraint c;
        c.coeffs = policy_row(key_h[t], t);
        c.rel = Relation::LessEq;
        c.rhs = params.electrolyzer_capacity;
        lp.constraints.push_back(std::move(c));
    }
    // trade box: -electrolyzer capacity <= q_da.x <= wind capacity
    for (int t = 0; t < T; ++t) {
        Constraint c;
        c.coeffs = policy_row(key_da[t], t);
        c.rel = Relation::GreaterEq;
        c.rhs = -params.electrolyzer_capacity;
        lp.constraints.push_back(std::move(c));
    }
    for (int t = 0; t < T; ++t) {
        Constraint c;
        c.coeffs = policy_row(key_da[t], t);
        c.rel = Relation::LessEq;
        c.rhs = params.wind_capacity;
        lp.constraints.push_back(std::move(c));
    }
    // daily quota on the scheduled consumption
    for (int d = 0; d < D; ++d) {
        Constraint c;
        c.coeffs = Vec::Zero(nv);
        for (int t = d * kHoursPerDay; t < (d + 1) * kHoursPerDay; ++t)
            for (int coeff = 0; coeff < lay.dim; ++coeff)
                c.coeffs[lay.q_col(key_h[t], coeff)] += params.efficiency * x_t[t][coeff];
        c.rel = Relation::GreaterEq;
        c.rhs = params.daily_quota;
        lp.constraints.push_back(std::move(c));
    }
    return lp;
}

}  // namespace

LinearProgram build_training_problem(const TrainingWindow& window, const Architecture& arch,
                                     const FeatureSchema& schema, const PlantParams& params) {
    return assemble(window, arch, schema, params, true);
}

std::pair<PolicySet, TrainingReport> train(const TrainingWindow& window, const Architecture& arch,
                                           const FeatureSchema& schema, const PlantParams& params) {
    params.validate();
    window.validate(params, schema.context_dim());

    bool strict = true;
    for (const auto& h : window.hours)
        if (!(h.lambda_up < h.lambda_dw)) { strict = false; break; }

    const LinearProgram lp = assemble(window, arch, schema, params, !strict);
    const LpSolution sol = strict ? solve_lp(lp) : solve_milp(lp);
    if (sol.status == SolveStatus::Infeasible)
        throw std::logic_error("training problem infeasible despite a satisfiable quota");
    if (sol.status == SolveStatus::Unbounded)
        throw std::runtime_error("training problem unbounded");

    ProblemLayout lay;
    lay.num_keys = policy_key_count(arch);
    lay.dim = schema.total_dim();
    lay.hours = window.hour_count();
    lay.binaries = !strict;

    Mat q(lay.num_keys, lay.dim);
    for (int k = 0; k < lay.num_keys; ++k)
        for (int c = 0; c < lay.dim; ++c) q(k, c) = sol.x[lay.q_col(k, c)];

    TrainingReport rep;
    rep.status = sol.status;
    rep.objective = sol.objective_value;
    rep.relaxed_binaries = strict;
    const int T = lay.hours;
    rep.over = Vec::Zero(T);
    rep.under = Vec::Zero(T);
    const double h2v = hydrogen_value(params);
    for (int t = 0; t < T; ++t) {
        const double net = sol.x[lay.o_col(t)] - sol.x[lay.u_col(t)];
        rep.over[t] = std::max(net, 0.0);
        rep.under[t] = std::max(-net, 0.0);
        const auto& h = window.hours[t];
        FeatureVector f;
        f.context = window.contexts.row(t).transpose();
        const Vec x = f.instantiate(h.lambda_da);
        const double p_da =
            q.row(policy_key_index_for(arch, Product::DA, h.t, h.lambda_da)).dot(x);
        const double p_h = q.row(policy_key_index_for(arch, Product::H, h.t, h.lambda_da)).dot(x);
        rep.da_revenue += h.lambda_da * p_da;
        rep.hydrogen_revenue += h2v * p_h;
        rep.up_settlement += h.lambda_up * rep.over[t];
        rep.down_settlement += h.lambda_dw * rep.under[t];
    }

    PolicyMeta meta;
    meta.window_days = window.day_count();
    meta.objective = rep.objective;
    meta.relaxed_binaries = rep.relaxed_binaries;
    PolicySet ps(schema, arch, std::move(q), meta);
    return {std::move(ps), std::move(rep)};
}

}  // namespace windh2
