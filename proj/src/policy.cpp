#include "windh2/policy.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace windh2 {

std::string Architecture::name() const {
    std::string base = hourly ? "HA" : "GA";
    if (num_domains() > 1) base += "+PD";
    return base;
}

Architecture Architecture::parse(const std::string& name, PriceDomains pd_domains) {
    Architecture a;
    std::string s;
    for (char c : name) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (s == "ga") a.hourly = false;
    else if (s == "ha") a.hourly = true;
    else if (s == "ga+pd") { a.hourly = false; a.domains = std::move(pd_domains); }
    else if (s == "ha+pd") { a.hourly = true; a.domains = std::move(pd_domains); }
    else throw std::invalid_argument("unknown architecture '" + name +
                                     "' (expected ga, ha, ga+pd or ha+pd)");
    a.domains.validate();
    if (s == "ga+pd" || s == "ha+pd") {
        if (a.num_domains() < 2)
            throw std::invalid_argument("price-domain architecture needs at least 2 domains");
    }
    return a;
}

int policy_key_count(const Architecture& arch) {
    return 2 * arch.hour_slots() * arch.num_domains();
}

int policy_key_index(const Architecture& arch, Product product, int hour_slot, int domain) {
    const int hs = arch.hour_slots();
    const int m = arch.num_domains();
    if (hour_slot < 0 || hour_slot >= hs) throw std::out_of_range("hour slot out of range");
    if (domain < 0 || domain >= m) throw std::out_of_range("domain index out of range");
    const int p = product == Product::DA ? 0 : 1;
    return (p * hs + hour_slot) * m + domain;
}

int policy_key_index_for(const Architecture& arch, Product product, std::int64_t t, double lambda) {
    const int hour_slot = arch.hourly ? hour_of_day(t) : 0;
    const int dom = arch.num_domains() > 1 ? domain_index(arch.domains, lambda) : 0;
    return policy_key_index(arch, product, hour_slot, dom);
}

PolicySet::PolicySet(FeatureSchema schema, Architecture arch, Mat coeffs, PolicyMeta meta)
    : schema_(std::move(schema)), arch_(std::move(arch)), q_(std::move(coeffs)), meta_(meta) {
    arch_.domains.validate();
    if (q_.rows() != key_count())
        throw std::invalid_argument("policy set incomplete: expected " +
                                    std::to_string(key_count()) + " q-vectors, got " +
                                    std::to_string(q_.rows()));
    if (q_.cols() != schema_.total_dim())
        throw std::invalid_argument("q-vector dimension disagrees with the feature schema");
    if (!q_.allFinite()) throw std::invalid_argument("q-vectors must be finite");
}

int PolicySet::key_index(Product product, int hour_slot, int domain) const {
    return policy_key_index(arch_, product, hour_slot, domain);
}

int PolicySet::key_index_for(Product product, std::int64_t t, double realized_lambda) const {
    return policy_key_index_for(arch_, product, t, realized_lambda);
}

PolicyKey PolicySet::key_at(int index) const {
    const int hs = arch_.hour_slots();
    const int m = arch_.num_domains();
    if (index < 0 || index >= key_count()) throw std::out_of_range("key index out of range");
    PolicyKey k;
    k.product = (index / (hs * m) == 0) ? Product::DA : Product::H;
    if (arch_.hourly) k.hour_of_day = (index / m) % hs;
    if (m > 1) k.domain_index = index % m;
    return k;
}

RawQuantities PolicySet::evaluate_raw(std::int64_t t, double lambda, const Vec& context) const {
    if (context.size() != schema_.context_dim())
        throw std::invalid_argument("context dimension does not match schema " + schema_.name());
    FeatureVector f;
    f.context = context;
    const Vec x = f.instantiate(lambda);
    RawQuantities out;
    out.p_da = q_.row(key_index_for(Product::DA, t, lambda)).dot(x);
    out.p_h = q_.row(key_index_for(Product::H, t, lambda)).dot(x);
    return out;
}

RepairedQuantities repair(double p_da_raw, double p_h_raw, const PlantParams& params) {
    require_finite(p_da_raw, "p_da");
    require_finite(p_h_raw, "p_h");
    RepairedQuantities r;
    r.p_h = std::clamp(p_h_raw, 0.0, params.electrolyzer_capacity);
    r.p_da = std::clamp(p_da_raw, -params.electrolyzer_capacity, params.wind_capacity);
    r.clipped_h = r.p_h != p_h_raw;
    r.clipped_da = r.p_da != p_da_raw;
    return r;
}

void save_policy_set(const PolicySet& ps, std::ostream& os) {
    nlohmann::json j;
    j["schema"] = ps.schema().name();
    j["hourly"] = ps.architecture().hourly;
    j["domain_boundaries"] = ps.architecture().domains.interior;
    j["metadata"] = {{"window_days", ps.meta().window_days},
                     {"objective", ps.meta().objective},
                     {"relaxed_binaries", ps.meta().relaxed_binaries}};
    nlohmann::json policies = nlohmann::json::array();
    for (int i = 0; i < ps.key_count(); ++i) {
        const PolicyKey k = ps.key_at(i);
        nlohmann::json entry;
        entry["product"] = k.product == Product::DA ? "DA" : "H";
        if (k.hour_of_day) entry["hour"] = *k.hour_of_day;
        if (k.domain_index) entry["domain"] = *k.domain_index;
        const auto q = ps.q_vector(i);
        entry["q"] = std::vector<double>(q.data(), q.data() + q.size());
        policies.push_back(std::move(entry));
    }
    j["policies"] = std::move(policies);
    os << j.dump(2) << "\n";
}

void save_policy_set(const PolicySet& ps, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw FileError("cannot open '" + path + "' for writing");
    save_policy_set(ps, os);
}

PolicySet load_policy_set(std::istream& is) {
    nlohmann::json j = nlohmann::json::parse(is);
    FeatureSchema schema = FeatureSchema::parse(j.at("schema").get<std::string>());
    Architecture arch;
    arch.hourly = j.at("hourly").get<bool>();
    arch.domains.interior = j.at("domain_boundaries").get<std::vector<double>>();
    arch.domains.validate();

    PolicyMeta meta;
    if (j.contains("metadata")) {
        const auto& m = j["metadata"];
        meta.window_days = m.value("window_days", 0);
        meta.objective = m.value("objective", 0.0);
        meta.relaxed_binaries = m.value("relaxed_binaries", false);
    }

    const int key_count = 2 * (arch.hourly ? kHoursPerDay : 1) * arch.num_domains();
    const int dim = schema.total_dim();
    Mat q(key_count, dim);
    std::vector<bool> seen(key_count, false);
    for (const auto& entry : j.at("policies")) {
        const std::string product = entry.at("product").get<std::string>();
        if (product != "DA" && product != "H")
            throw std::invalid_argument("policy file: bad product '" + product + "'");
        const int p = product == "DA" ? 0 : 1;
        const int hs = arch.hourly ? kHoursPerDay : 1;
        int hour = 0, dom = 0;
        if (arch.hourly) hour = entry.at("hour").get<int>();
        if (arch.num_domains() > 1) dom = entry.at("domain").get<int>();
        if (hour < 0 || hour >= hs || dom < 0 || dom >= arch.num_domains())
            throw std::invalid_argument("policy file: key out of range");
        const int idx = (p * hs + hour) * arch.num_domains() + dom;
        if (seen[idx]) throw std::invalid_argument("policy file: duplicate key");
        seen[idx] = true;
        const auto vec = entry.at("q").get<std::vector<double>>();
        if (static_cast<int>(vec.size()) != dim)
            throw std::invalid_argument("policy file: q-vector has wrong dimension");
        for (int c = 0; c < dim; ++c) q(idx, c) = vec[c];
    }
    if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
        throw std::invalid_argument("policy file: missing keys for the declared architecture");
    return PolicySet(std::move(schema), std::move(arch), std::move(q), meta);
}

PolicySet load_policy_set(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw FileError("cannot open policy file '" + path + "'");
    return load_policy_set(is);
}

}  // namespace windh2
