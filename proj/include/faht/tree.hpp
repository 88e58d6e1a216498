#ifndef FAHT_TREE_HPP_
#define FAHT_TREE_HPP_

#include <memory>
#include <vector>

#include "faht/core.hpp"
#include "faht/metrics.hpp"
#include "faht/stats.hpp"

#include "json.hpp"

namespace faht {

struct Prediction {
    int label = 0;
    double score = 0.5;  // positive-class probability estimate
};

struct ModelStats {
    long node_count = 0;
    long leaf_count = 0;
    long depth = 0;
};

struct SplitEvent {
    long instances_seen = 0;  // labeled instances trained before this split
    int attribute = -1;
    double threshold = std::numeric_limits<double>::quiet_NaN();  // NaN for nominal
};

// Fills in the merit of every candidate under the configured criterion.
// Candidate parents are the branch aggregates, so totals are consistent even
// when missing numeric values shrink an attribute's observed mass.
void evaluate_candidates(std::vector<SplitCandidate>& candidates,
                         const StreamSchema& schema,
                         const LearnerConfig& config);

// Merit of the no-split option. Zero under the vanilla convention; under
// entropy_times_disc it is the leaf's entropy scaled by its absolute
// discrimination (plain entropy when the leaf is discrimination-free).
double null_split_merit(const LeafStats& stats, const LearnerConfig& config);

struct SplitDecision {
    bool split = false;
    SplitCandidate chosen;  // valid when split is true
};

// Hoeffding test over the evaluated candidates: split on the best candidate
// iff best - max(second, null) exceeds the bound, or the bound has shrunk
// below the tie threshold and the best still beats the null merit. Leaves
// with fewer than two observed classes never split.
SplitDecision attempt_split(const LeafStats& stats,
                            const StreamSchema& schema,
                            const LearnerConfig& config);

// Incremental Hoeffding-tree classifier over a discriminated stream. The
// split criterion decides the flavor: InfoGain is the vanilla tree,
// FairInfoGain the fairness-aware variant, Kamiran the static baseline merit.
// Single writer; predictions may be taken between training calls.
class FahtTree {
  public:
    FahtTree(StreamSchema schema, LearnerConfig config);
    ~FahtTree();

    FahtTree(FahtTree&&) noexcept;
    FahtTree& operator=(FahtTree&&) noexcept;

    // Majority-class prediction of the routed leaf, ties toward the negative
    // class; score is the Laplace-smoothed positive fraction. Missing nominal
    // values route via the reserved symbol's branch when trained, otherwise
    // to the heaviest sibling; missing numerics take the <= branch.
    Prediction predict(const Instance& x) const;

    // Routes the labeled instance to its leaf, updates the sufficient
    // statistics, and re-evaluates the split decision every grace_period
    // labeled instances at that leaf.
    void train(const Instance& x);

    ModelStats model_stats() const;
    long node_count() const { return model_stats().node_count; }
    long instances_trained() const { return instances_trained_; }
    const std::vector<SplitEvent>& split_log() const { return split_log_; }

    const StreamSchema& schema() const { return schema_; }
    const LearnerConfig& config() const { return config_; }

    // Structural rendering: split tests at internal nodes, class counts and
    // fairness tallies at leaves. Deterministic key order.
    nlohmann::ordered_json to_json() const;

  private:
    struct Node;
    void split_leaf(Node& node, const SplitCandidate& chosen);

    StreamSchema schema_;
    LearnerConfig config_;
    std::unique_ptr<Node> root_;
    long instances_trained_ = 0;
    std::vector<SplitEvent> split_log_;
};

}  // namespace faht

#endif  // FAHT_TREE_HPP_
