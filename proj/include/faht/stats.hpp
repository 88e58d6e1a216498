#ifndef FAHT_STATS_HPP_
#define FAHT_STATS_HPP_

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "faht/core.hpp"
#include "faht/metrics.hpp"

namespace faht {

// Single-pass mean/variance with observed bounds (Welford's update).
class GaussianEstimator {
  public:
    void add(double x) {
        n_ += 1.0;
        double delta = x - mean_;
        mean_ += delta / n_;
        m2_ += delta * (x - mean_);
        if (x < min_) min_ = x;
        if (x > max_) max_ = x;
    }

    double count() const { return n_; }
    double mean() const { return mean_; }
    double m2() const { return m2_; }
    double variance() const { return n_ >= 2 ? m2_ / (n_ - 1.0) : 0.0; }
    double std_dev() const { return std::sqrt(variance()); }
    double min() const { return min_; }
    double max() const { return max_; }

    // P(X <= x) under the fitted normal; a degenerate estimator (fewer than
    // two points or zero variance) is a step at the mean.
    double cdf(double x) const {
        double sd = std_dev();
        if (sd <= 0.0) return x >= mean_ ? 1.0 : 0.0;
        return 0.5 * std::erfc((mean_ - x) / (sd * std::sqrt(2.0)));
    }

    double mass_below(double x) const { return n_ * cdf(x); }

  private:
    double n_ = 0.0;
    double mean_ = 0.0;
    double m2_ = 0.0;
    double min_ = std::numeric_limits<double>::infinity();
    double max_ = -std::numeric_limits<double>::infinity();
};

// Counters for one nominal value: class labels crossed with communities.
struct ValueCell {
    ClassDistribution classes;
    FairnessCounts fairness;
};

// Exact per-value tables for one nominal attribute.
class NominalAttributeStats {
  public:
    NominalAttributeStats() = default;
    NominalAttributeStats(int arity, int classes);

    void observe(int value, int label, Community community);

    const ValueCell& cell(int value) const { return cells_[static_cast<size_t>(value)]; }
    int arity() const { return static_cast<int>(cells_.size()); }
    int observed_value_count() const;
    double observed_total() const;

  private:
    std::vector<ValueCell> cells_;
};

// Gaussian summaries for one numeric attribute: one per class label plus one
// per community, all fed by the same non-missing values.
class NumericAttributeStats {
  public:
    NumericAttributeStats() = default;
    explicit NumericAttributeStats(int classes) : per_class_(static_cast<size_t>(classes)) {}

    void observe(double value, int label, Community community);

    const GaussianEstimator& class_estimator(int cls) const { return per_class_[static_cast<size_t>(cls)]; }
    const GaussianEstimator& community_estimator(Community c) const {
        return per_community_[static_cast<size_t>(c)];
    }
    int class_count() const { return static_cast<int>(per_class_.size()); }
    double observed_total() const;
    double observed_min() const;
    double observed_max() const;

  private:
    std::vector<GaussianEstimator> per_class_;
    std::array<GaussianEstimator, 4> per_community_;
};

// How an internal node routes instances.
struct SplitTest {
    enum class Kind { NominalMultiway, NumericBinary };

    int attribute = -1;
    Kind kind = Kind::NominalMultiway;
    double threshold = 0.0;          // numeric only; branch 0 is x <= threshold
    std::vector<int> branch_values;  // nominal only; value index per branch

    int branch_count() const {
        return kind == Kind::NumericBinary ? 2 : static_cast<int>(branch_values.size());
    }

    // Branch for an instance, -1 when the value has no branch of its own
    // (unseen nominal value); missing numerics go left, missing nominals
    // resolve to the reserved missing symbol's branch when one exists.
    int route(const Instance& x, const StreamSchema& schema) const;
};

struct SplitCandidate {
    SplitTest test;
    PartitionStats partition;
    double merit = std::numeric_limits<double>::quiet_NaN();
};

// All sufficient statistics held by one leaf: the leaf's own class and
// fairness tallies plus per-attribute tables/Gaussians. Single-writer.
class LeafStats {
  public:
    LeafStats() = default;
    explicit LeafStats(const StreamSchema& schema);

    // Routes one labeled instance into every per-attribute structure. Missing
    // values skip their attribute only. Throws SchemaError for out-of-domain
    // nominal values and std::invalid_argument via community_of.
    void observe(const Instance& x, const StreamSchema& schema);

    const ClassDistribution& class_counts() const { return class_counts_; }
    const FairnessCounts& fairness_counts() const { return fairness_; }
    double weight_seen() const { return class_counts_.total(); }

    const NominalAttributeStats& nominal(int attribute) const {
        return nominal_[static_cast<size_t>(attribute)];
    }
    const NumericAttributeStats& numeric(int attribute) const {
        return numeric_[static_cast<size_t>(attribute)];
    }

    // Structural footprint: allocated nominal value cells plus allocated
    // Gaussian estimators, for the O((d+2)vc) memory check.
    size_t allocated_nominal_cells() const;
    size_t allocated_gaussians() const;

  private:
    ClassDistribution class_counts_;
    FairnessCounts fairness_;
    std::vector<NominalAttributeStats> nominal_;  // indexed by attribute, empty for numerics
    std::vector<NumericAttributeStats> numeric_;  // indexed by attribute, empty for nominals
};

// Enumerates the allowed split tests at a leaf with their partition
// statistics; merits are left unfilled. Nominal attributes yield one multiway
// candidate when at least two values have been observed. Numeric attributes
// yield `numeric_bins` equal-width thresholds strictly inside the observed
// range, with branch masses taken from the Gaussian tails on each side.
std::vector<SplitCandidate> candidate_splits(const LeafStats& stats,
                                             const StreamSchema& schema,
                                             const LearnerConfig& config);

// Brute-force recomputation of all nominal sufficient statistics from a
// stored instance list. Deliberately independent of LeafStats::observe; used
// to confirm that the incremental fold matches a batch pass bit for bit.
struct BatchStats {
    ClassDistribution classes;
    FairnessCounts fairness;
    std::vector<std::vector<ValueCell>> nominal_tables;  // [attribute][value]
};

BatchStats batch_equivalence_oracle(const std::vector<Instance>& instances, const StreamSchema& schema);

}  // namespace faht

#endif  // FAHT_STATS_HPP_
