#ifndef FAHT_METRICS_HPP_
#define FAHT_METRICS_HPP_

#include <vector>

#include "faht/core.hpp"

namespace faht {

// Tallies of the four communities. Counts are doubles so that the same type
// carries exact integer counters and Gaussian-estimated fractional masses.
struct FairnessCounts {
    double dr = 0, dg = 0, fr = 0, fg = 0;

    double total() const { return dr + dg + fr + fg; }
    double deprived() const { return dr + dg; }
    double favored() const { return fr + fg; }

    void add(Community c, double weight = 1.0) {
        switch (c) {
            case Community::DeprivedRejected: dr += weight; break;
            case Community::DeprivedGranted: dg += weight; break;
            case Community::FavoredRejected: fr += weight; break;
            case Community::FavoredGranted: fg += weight; break;
        }
    }

    FairnessCounts& operator+=(const FairnessCounts& o) {
        dr += o.dr; dg += o.dg; fr += o.fr; fg += o.fg;
        return *this;
    }
    bool operator==(const FairnessCounts&) const = default;
};

// Per-class instance counts at a node or partition branch.
struct ClassDistribution {
    std::vector<double> counts;

    ClassDistribution() = default;
    explicit ClassDistribution(size_t classes) : counts(classes, 0.0) {}
    ClassDistribution(std::initializer_list<double> c) : counts(c) {}

    double total() const {
        double t = 0;
        for (double c : counts) t += c;
        return t;
    }
    void add(int cls, double weight = 1.0) { counts[static_cast<size_t>(cls)] += weight; }
    double operator[](size_t i) const { return i < counts.size() ? counts[i] : 0.0; }
    size_t size() const { return counts.size(); }
    bool is_pure() const {
        int nonzero = 0;
        for (double c : counts) nonzero += c > 0 ? 1 : 0;
        return nonzero <= 1;
    }

    ClassDistribution& operator+=(const ClassDistribution& o) {
        if (counts.size() < o.counts.size()) counts.resize(o.counts.size(), 0.0);
        for (size_t i = 0; i < o.counts.size(); ++i) counts[i] += o.counts[i];
        return *this;
    }
    bool operator==(const ClassDistribution&) const = default;
};

// One branch of a candidate partition. The branch weight |D_v| is by
// definition the total of its class distribution.
struct BranchStats {
    ClassDistribution classes;
    FairnessCounts fairness;

    double weight() const { return classes.total(); }
};

// The partitions D_v induced by a candidate split.
struct PartitionStats {
    std::vector<BranchStats> branches;

    double total_weight() const {
        double t = 0;
        for (const auto& b : branches) t += b.weight();
        return t;
    }
    ClassDistribution merged_classes() const {
        ClassDistribution d;
        for (const auto& b : branches) d += b.classes;
        return d;
    }
    FairnessCounts merged_fairness() const {
        FairnessCounts f;
        for (const auto& b : branches) f += b.fairness;
        return f;
    }
};

// Below this magnitude a fairness gain is treated as exactly zero, selecting
// the FIG(D,A) = IG(D,A) branch. The gain is discontinuous at zero and
// floating-point values rarely land exactly on it.
inline constexpr double kFairnessGainZeroTolerance = 1e-12;

// Statistical parity Disc(D) = FG/(FG+FR) - DG/(DG+DR). A group with zero
// members contributes 0 for its ratio term, keeping the function total; early
// stream branches routinely hold a single community.
double statistical_parity(const FairnessCounts& c);

// Shannon entropy, base 2, with 0*log 0 = 0. Zero for empty or pure
// distributions, at most log2(#classes).
double entropy(const ClassDistribution& d);

// Information gain of a partition: H(parent) - sum_v |D_v|/|D| H(D_v).
// Throws InvariantError when branch totals do not sum to the parent total.
double information_gain(const ClassDistribution& parent, const PartitionStats& parts);

// Fairness gain of a partition: |Disc(D)| - sum_v |D_v|/|D| |Disc(D_v)|.
// Positive values mean the split reduces weighted absolute discrimination.
// Throws InvariantError when branch weights do not sum to the parent total.
double fairness_gain(const FairnessCounts& parent, const PartitionStats& parts);

// Joint merit: ig when |fg| < kFairnessGainZeroTolerance, else ig * fg.
double fair_information_gain(double ig, double fg);

// Baseline merit combining class gain with the gain w.r.t. the sensitive
// attribute. `divide` returns ig_class when ig_sensitive is zero.
double kamiran_merit(double ig_class, double ig_sensitive, KamiranVariant variant);

// epsilon = sqrt(R^2 ln(1/delta) / (2n)). Requires n >= 1 and R > 0.
double hoeffding_bound(double range, double delta, double n);

}  // namespace faht

#endif  // FAHT_METRICS_HPP_
