#include "windh2/bidding.hpp"

#include "windh2/text.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace windh2 {

void GridConfig::validate() const {
    if (steps_per_domain < 1) throw std::invalid_argument("steps_per_domain must be >= 1");
    require_finite(price_floor, "price_floor");
    require_finite(price_ceil, "price_ceil");
    if (price_floor >= price_ceil)
        throw std::invalid_argument("price_floor must be below price_ceil");
}

void BidCurve::validate(const PlantParams& params) const {
    if (steps.empty()) throw std::invalid_argument("bid curve has no steps");
    const double tol = 1e-9 * std::max(1.0, std::abs(price_ceil));
    if (std::abs(steps.front().price_lo - price_floor) > tol ||
        std::abs(steps.back().price_hi - price_ceil) > tol)
        throw std::invalid_argument("bid curve does not span the price axis");
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const BidStep& s = steps[i];
        if (!(s.price_lo < s.price_hi)) throw std::invalid_argument("empty bid step");
        if (i > 0 && steps[i - 1].price_hi != s.price_lo)
            throw std::invalid_argument("bid steps must tile without gaps");
        if (s.p_h < -1e-9 || s.p_h > params.electrolyzer_capacity + 1e-9)
            throw std::invalid_argument("bid step consumption outside [0, capacity]");
        if (s.p_da < -params.electrolyzer_capacity - 1e-9 ||
            s.p_da > params.wind_capacity + 1e-9)
            throw std::invalid_argument("bid step trade outside its box");
    }
}

Vec isotonic_non_decreasing(const Vec& values) {
    const int n = static_cast<int>(values.size());
    std::vector<double> mean;
    std::vector<int> count;
    mean.reserve(n);
    count.reserve(n);
    for (int i = 0; i < n; ++i) {
        double m = values[i];
        int c = 1;
        while (!mean.empty() && mean.back() > m) {
            m = (m * c + mean.back() * count.back()) / (c + count.back());
            c += count.back();
            mean.pop_back();
            count.pop_back();
        }
        mean.push_back(m);
        count.push_back(c);
    }
    Vec out(n);
    int pos = 0;
    for (std::size_t b = 0; b < mean.size(); ++b)
        for (int k = 0; k < count[b]; ++k) out[pos++] = mean[b];
    return out;
}

Vec isotonic_non_increasing(const Vec& values) {
    return -isotonic_non_decreasing(-values);
}

BidCurve discretize(const PolicySet& ps, std::int64_t t, const Vec& context,
                    const PlantParams& params, const GridConfig& grid) {
    grid.validate();
    const PriceDomains& domains = ps.architecture().domains;

    std::vector<double> edges;
    edges.push_back(grid.price_floor);
    for (double b : domains.interior)
        if (b > grid.price_floor && b < grid.price_ceil) edges.push_back(b);
    edges.push_back(grid.price_ceil);

    BidCurve curve;
    curve.t = t;
    curve.steps_per_domain = grid.steps_per_domain;
    curve.price_floor = grid.price_floor;
    curve.price_ceil = grid.price_ceil;

    for (std::size_t seg = 0; seg + 1 < edges.size(); ++seg) {
        const double lo = edges[seg], hi = edges[seg + 1];
        const double width = (hi - lo) / grid.steps_per_domain;
        for (int b = 0; b < grid.steps_per_domain; ++b) {
            BidStep step;
            step.price_lo = lo + b * width;
            step.price_hi = (b + 1 == grid.steps_per_domain) ? hi : lo + (b + 1) * width;
            const double mid = 0.5 * (step.price_lo + step.price_hi);
            const RawQuantities raw = ps.evaluate_raw(t, mid, context);
            const RepairedQuantities rep = repair(raw.p_da, raw.p_h, params);
            step.p_da = rep.p_da;
            step.p_h = rep.p_h;
            curve.any_clipped = curve.any_clipped || rep.clipped_da || rep.clipped_h;
            curve.steps.push_back(step);
        }
    }

    if (grid.monotonic_projection) {
        const int n = static_cast<int>(curve.steps.size());
        Vec da(n), h(n);
        for (int i = 0; i < n; ++i) {
            da[i] = curve.steps[i].p_da;
            h[i] = curve.steps[i].p_h;
        }
        da = isotonic_non_decreasing(da);
        h = isotonic_non_increasing(h);
        for (int i = 0; i < n; ++i) {
            curve.steps[i].p_da = da[i];
            curve.steps[i].p_h = h[i];
        }
    }
    curve.validate(params);
    return curve;
}

ClearedQuantities clear(const BidCurve& curve, double realized_price) {
    require_finite(realized_price, "realized_price");
    if (curve.steps.empty()) throw std::invalid_argument("bid curve has no steps");
    ClearedQuantities out;
    double price = realized_price;
    if (price < curve.price_floor) {
        price = curve.price_floor;
        out.clamped = true;
    } else if (price > curve.price_ceil) {
        price = curve.price_ceil;
        out.clamped = true;
    }
    // steps are left-closed/right-open; the top of the axis belongs to the last step
    auto it = std::upper_bound(curve.steps.begin(), curve.steps.end(), price,
                               [](double p, const BidStep& s) { return p < s.price_hi; });
    if (it == curve.steps.end()) it = std::prev(curve.steps.end());
    out.p_da = it->p_da;
    out.p_h = it->p_h;
    return out;
}

void export_bid_curves(const std::vector<BidCurve>& curves, std::ostream& os) {
    os << "hour,price_lo,price_hi,p_da,p_h\n";
    for (const BidCurve& c : curves)
        for (const BidStep& s : c.steps)
            os << c.t << ',' << format_double(s.price_lo) << ',' << format_double(s.price_hi)
               << ',' << format_double(s.p_da) << ',' << format_double(s.p_h) << '\n';
}

}  // namespace windh2
