#ifndef FAHT_EVAL_HPP_
#define FAHT_EVAL_HPP_

#include <concepts>
#include <iosfwd>
#include <span>
#include <vector>

#include "faht/core.hpp"
#include "faht/metrics.hpp"

#include "json.hpp"

namespace faht {

// One test-then-train outcome.
struct PrequentialRecord {
    long index = 0;
    int true_label = 0;
    int predicted_label = 0;
    Community community = Community::FavoredRejected;
};

// Cumulative (landmark) metrics at stream position n. Discrimination is the
// statistical parity of the predictions: predicted labels crossed with true
// group membership.
struct MetricSnapshot {
    long n = 0;
    double accuracy = 0.0;
    double discrimination = 0.0;
    long node_count = 0;
};

struct PrequentialResult {
    std::vector<MetricSnapshot> snapshots;  // every `snapshot_every` instances plus the final one
    std::vector<PrequentialRecord> records;

    const MetricSnapshot& final_snapshot() const { return snapshots.back(); }
};

template <typename L>
concept OnlineLearner = requires(L learner, const Instance& x) {
    { learner.predict(x) };
    { learner.train(x) };
    { learner.node_count() } -> std::convertible_to<long>;
};

// First-test-then-train pass over a labeled stream: each instance is
// predicted with the model state built from instances 0..t-1 only, recorded,
// and then used for training.
template <OnlineLearner L>
PrequentialResult prequential_run(L& learner, std::span<const Instance> stream,
                                  const StreamSchema& schema, long snapshot_every) {
    PrequentialResult out;
    out.records.reserve(stream.size());

    long correct = 0;
    FairnessCounts predicted_counts;  // predicted label x true group

    for (size_t t = 0; t < stream.size(); ++t) {
        const Instance& x = stream[t];
        if (!x.has_label()) throw std::invalid_argument("prequential_run: unlabeled instance in stream");
        Community community = community_of(x, schema);

        int predicted = learner.predict(x).label;
        learner.train(x);

        out.records.push_back(PrequentialRecord{static_cast<long>(t), *x.label, predicted, community});
        if (predicted == *x.label) ++correct;
        bool deprived = is_deprived(community);
        bool granted_pred = predicted == schema.positive_class_index();
        predicted_counts.add(deprived ? (granted_pred ? Community::DeprivedGranted : Community::DeprivedRejected)
                                      : (granted_pred ? Community::FavoredGranted : Community::FavoredRejected));

        long n = static_cast<long>(t) + 1;
        if ((snapshot_every > 0 && n % snapshot_every == 0) || t + 1 == stream.size()) {
            out.snapshots.push_back(MetricSnapshot{
                n,
                static_cast<double>(correct) / static_cast<double>(n),
                statistical_parity(predicted_counts),
                static_cast<long>(learner.node_count()),
            });
        }
    }
    if (stream.empty()) {
        out.snapshots.push_back(MetricSnapshot{0, 0.0, 0.0, static_cast<long>(learner.node_count())});
    }
    return out;
}

// Recomputes landmark metrics from a record log; must agree exactly with the
// streaming accumulator.
MetricSnapshot metrics_from_records(std::span<const PrequentialRecord> records,
                                    const StreamSchema& schema);

// Paired 2x2 prediction table of two classifiers over the same stream.
// Cell naming follows the usual layout: b and c are the discordant cells.
struct McNemarTable {
    long both_granted = 0;       // a
    long a_granted_b_rejected = 0;  // b
    long a_rejected_b_granted = 0;  // c
    long both_rejected = 0;      // d
};

enum class CommunityFilter { All, Deprived, Favored };

// Builds the paired table from two record logs over the same stream,
// optionally restricted to one group. Throws InvariantError when the logs
// differ in length or disagree on true labels.
McNemarTable paired_table(std::span<const PrequentialRecord> run_a,
                          std::span<const PrequentialRecord> run_b,
                          const StreamSchema& schema,
                          CommunityFilter filter);

// Continuity-corrected McNemar statistic (|b - c| - 1)^2 / (b + c), df = 1.
// Undefined (throws std::invalid_argument) when both discordant cells are 0.
double mcnemar(const McNemarTable& table);

// At df = 1, chi-squared above this value means p < 0.001.
inline constexpr double kChiSquared1DofP001 = 10.828;

// Sample Pearson correlation over pairwise-complete observations (pairs with
// a NaN on either side are dropped). Requires at least two complete pairs
// and nonzero variance on both sides.
double pearson(std::span<const double> x, std::span<const double> y);

// Accuracy/discrimination comparison of two prequential runs over the same
// stream, with relative percent changes of run B against baseline run A.
struct CompareReport {
    double accuracy_a = 0, accuracy_b = 0;
    double accuracy_delta = 0, accuracy_change_pct = 0;
    double discrimination_a = 0, discrimination_b = 0;
    double discrimination_delta = 0, discrimination_change_pct = 0;
};

CompareReport compare_report(const PrequentialResult& run_a, const PrequentialResult& run_b);

// Snapshot series as CSV: header "n,accuracy,discrimination,node_count", one
// row per snapshot, shortest round-trip double formatting (bit-stable).
void write_snapshot_csv(std::ostream& os, std::span<const MetricSnapshot> snapshots);

nlohmann::ordered_json snapshot_to_json(const MetricSnapshot& s);
nlohmann::ordered_json compare_report_to_json(const CompareReport& r);

}  // namespace faht

#endif  // FAHT_EVAL_HPP_
