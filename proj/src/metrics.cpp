#include "faht/metrics.hpp"

#include <cmath>
#include <string>

namespace faht {

namespace {

// Branch/parent totals estimated from Gaussian tails carry rounding noise;
// exact nominal counters compare equal well below this.
bool totals_consistent(double branch_sum, double parent_total) {
    double tol = 1e-6 * std::max(1.0, parent_total);
    return std::abs(branch_sum - parent_total) <= tol;
}

}  // namespace

double statistical_parity(const FairnessCounts& c) {
    double favored_rate = (c.fg + c.fr) > 0 ? c.fg / (c.fg + c.fr) : 0.0;
    double deprived_rate = (c.dg + c.dr) > 0 ? c.dg / (c.dg + c.dr) : 0.0;
    return favored_rate - deprived_rate;
}

double entropy(const ClassDistribution& d) {
    double total = d.total();
    if (total <= 0) return 0.0;
    double h = 0.0;
    for (double c : d.counts) {
        if (c <= 0) continue;
        double p = c / total;
        h -= p * std::log2(p);
    }
    return h;
}

double information_gain(const ClassDistribution& parent, const PartitionStats& parts) {
    double parent_total = parent.total();
    double branch_sum = parts.total_weight();
    if (!totals_consistent(branch_sum, parent_total)) {
        throw InvariantError("information_gain: branch totals (" + std::to_string(branch_sum) +
                             ") do not sum to parent total (" + std::to_string(parent_total) + ")");
    }
    if (parent_total <= 0) return 0.0;
    double weighted = 0.0;
    for (const auto& b : parts.branches) {
        double w = b.weight();
        if (w <= 0) continue;
        weighted += (w / parent_total) * entropy(b.classes);
    }
    return entropy(parent) - weighted;
}

double fairness_gain(const FairnessCounts& parent, const PartitionStats& parts) {
    double parent_total = parent.total();
    double branch_sum = parts.total_weight();
    if (!totals_consistent(branch_sum, parent_total)) {
        throw InvariantError("fairness_gain: branch weights (" + std::to_string(branch_sum) +
                             ") do not sum to parent total (" + std::to_string(parent_total) + ")");
    }
    if (parent_total <= 0) return 0.0;
    double weighted = 0.0;
    for (const auto& b : parts.branches) {
        double w = b.weight();
        if (w <= 0) continue;
        weighted += (w / parent_total) * std::abs(statistical_parity(b.fairness));
    }
    return std::abs(statistical_parity(parent)) - weighted;
}

double fair_information_gain(double ig, double fg) {
    if (std::abs(fg) < kFairnessGainZeroTolerance) return ig;
    return ig * fg;
}

double kamiran_merit(double ig_class, double ig_sensitive, KamiranVariant variant) {
    switch (variant) {
        case KamiranVariant::Subtract: return ig_class - ig_sensitive;
        case KamiranVariant::Divide: return ig_sensitive == 0.0 ? ig_class : ig_class / ig_sensitive;
        case KamiranVariant::Add: return ig_class + ig_sensitive;
    }
    return ig_class;
}

double hoeffding_bound(double range, double delta, double n) {
    if (n < 1) throw std::invalid_argument("hoeffding_bound: n must be >= 1");
    if (!(range > 0)) throw std::invalid_argument("hoeffding_bound: range must be > 0");
    if (!(delta > 0 && delta < 1)) throw std::invalid_argument("hoeffding_bound: delta must be in (0, 1)");
    return std::sqrt(range * range * std::log(1.0 / delta) / (2.0 * n));
}

}  // namespace faht
