#pragma once

#include "windh2/core.hpp"
#include "windh2/features.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace windh2 {

/// Policy keying scheme: per hour-of-day when hourly, per price domain when
/// the domain count exceeds one.
struct Architecture {
    bool hourly = false;
    PriceDomains domains;  // count() == 1 means no price splitting

    int num_domains() const { return domains.count(); }
    int hour_slots() const { return hourly ? kHoursPerDay : 1; }
    std::string name() const;

    static Architecture parse(const std::string& name, PriceDomains pd_domains);
};

enum class Product { DA, H };

struct PolicyKey {
    Product product = Product::DA;
    std::optional<int> hour_of_day;
    std::optional<int> domain_index;
};

int policy_key_count(const Architecture& arch);
int policy_key_index(const Architecture& arch, Product product, int hour_slot, int domain);
/// Key selected by an hour index and a realized day-ahead price.
int policy_key_index_for(const Architecture& arch, Product product, std::int64_t t, double lambda);

struct RawQuantities {
    double p_da = 0.0;
    double p_h = 0.0;
};

struct RepairedQuantities {
    double p_da = 0.0;
    double p_h = 0.0;
    bool clipped_da = false;
    bool clipped_h = false;
};

struct PolicyMeta {
    int window_days = 0;
    double objective = 0.0;
    bool relaxed_binaries = false;
};

/// Complete set of learned q-vectors for one architecture and schema.
/// Rows of the coefficient matrix follow the canonical key order
/// (product, hour slot, domain), each row laid out as [context, lambda, 1].
class PolicySet {
public:
    PolicySet() = default;
    PolicySet(FeatureSchema schema, Architecture arch, Mat coeffs, PolicyMeta meta = {});

    const FeatureSchema& schema() const { return schema_; }
    const Architecture& architecture() const { return arch_; }
    const PolicyMeta& meta() const { return meta_; }
    const Mat& coefficients() const { return q_; }

    int key_count() const { return 2 * arch_.hour_slots() * arch_.num_domains(); }
    int key_index(Product product, int hour_slot, int domain) const;
    int key_index_for(Product product, std::int64_t t, double realized_lambda) const;
    PolicyKey key_at(int index) const;
    Eigen::Ref<const Vec> q_vector(int key_index) const { return q_.row(key_index).transpose(); }

    /// Dot products of the selected q-vectors with [context, lambda, 1]; no clipping.
    RawQuantities evaluate_raw(std::int64_t t, double lambda, const Vec& context) const;

private:
    FeatureSchema schema_;
    Architecture arch_;
    Mat q_;  // key_count x schema.total_dim()
    PolicyMeta meta_;
};

/// Clip raw outputs to the per-hour feasible boxes: consumption to
/// [0, electrolyzer capacity], day-ahead trade to [-electrolyzer capacity,
/// wind capacity].
RepairedQuantities repair(double p_da_raw, double p_h_raw, const PlantParams& params);

void save_policy_set(const PolicySet& ps, std::ostream& os);
void save_policy_set(const PolicySet& ps, const std::string& path);
PolicySet load_policy_set(std::istream& is);
PolicySet load_policy_set(const std::string& path);

}  // namespace windh2
