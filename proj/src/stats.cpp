#include "faht/stats.hpp"

#include <algorithm>
#include <string>

namespace faht {

NominalAttributeStats::NominalAttributeStats(int arity, int classes)
    : cells_(static_cast<size_t>(arity)) {
    for (auto& c : cells_) c.classes = ClassDistribution(static_cast<size_t>(classes));
}

void NominalAttributeStats::observe(int value, int label, Community community) {
    ValueCell& cell = cells_[static_cast<size_t>(value)];
    cell.classes.add(label);
    cell.fairness.add(community);
}

int NominalAttributeStats::observed_value_count() const {
    int n = 0;
    for (const auto& c : cells_) n += c.classes.total() > 0 ? 1 : 0;
    return n;
}

double NominalAttributeStats::observed_total() const {
    double t = 0;
    for (const auto& c : cells_) t += c.classes.total();
    return t;
}

void NumericAttributeStats::observe(double value, int label, Community community) {
    per_class_[static_cast<size_t>(label)].add(value);
    per_community_[static_cast<size_t>(community)].add(value);
}

double NumericAttributeStats::observed_total() const {
    double t = 0;
    for (const auto& g : per_class_) t += g.count();
    return t;
}

double NumericAttributeStats::observed_min() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& g : per_class_) {
        if (g.count() > 0) m = std::min(m, g.min());
    }
    return m;
}

double NumericAttributeStats::observed_max() const {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& g : per_class_) {
        if (g.count() > 0) m = std::max(m, g.max());
    }
    return m;
}

int SplitTest::route(const Instance& x, const StreamSchema& schema) const {
    double v = x.values[static_cast<size_t>(attribute)];
    if (kind == Kind::NumericBinary) {
        if (is_missing(v)) return 0;
        return v <= threshold ? 0 : 1;
    }
    int value = -1;
    if (is_missing(v)) {
        value = schema.attribute(static_cast<size_t>(attribute)).value_index(kMissingSymbol);
        if (value < 0) return -1;
    } else {
        value = static_cast<int>(v);
    }
    for (size_t b = 0; b < branch_values.size(); ++b) {
        if (branch_values[b] == value) return static_cast<int>(b);
    }
    return -1;
}

LeafStats::LeafStats(const StreamSchema& schema)
    : class_counts_(static_cast<size_t>(schema.class_count())),
      nominal_(schema.attribute_count()),
      numeric_(schema.attribute_count()) {
    for (const AttributeSpec& a : schema.attributes()) {
        size_t i = static_cast<size_t>(a.index);
        if (a.is_nominal()) {
            nominal_[i] = NominalAttributeStats(a.arity(), schema.class_count());
        } else {
            numeric_[i] = NumericAttributeStats(schema.class_count());
        }
    }
}

void LeafStats::observe(const Instance& x, const StreamSchema& schema) {
    if (!x.has_label()) throw std::invalid_argument("LeafStats::observe: instance has no label");
    Community community = community_of(x, schema);
    int label = *x.label;

    class_counts_.add(label);
    fairness_.add(community);

    for (const AttributeSpec& a : schema.attributes()) {
        size_t i = static_cast<size_t>(a.index);
        double v = x.values[i];
        if (is_missing(v)) continue;  // missing skips this attribute only
        if (a.is_nominal()) {
            int idx = static_cast<int>(v);
            if (idx < 0 || idx >= a.arity()) {
                throw SchemaError("observe: value index " + std::to_string(idx) +
                                  " out of domain for nominal attribute '" + a.name + "'");
            }
            nominal_[i].observe(idx, label, community);
        } else {
            numeric_[i].observe(v, label, community);
        }
    }
}

size_t LeafStats::allocated_nominal_cells() const {
    size_t n = 0;
    for (const auto& t : nominal_) n += static_cast<size_t>(t.arity());
    return n;
}

size_t LeafStats::allocated_gaussians() const {
    size_t n = 0;
    for (size_t i = 0; i < numeric_.size(); ++i) {
        if (numeric_[i].class_count() > 0) n += static_cast<size_t>(numeric_[i].class_count()) + 4;
    }
    return n;
}

namespace {

SplitCandidate nominal_candidate(const NominalAttributeStats& stats, int attribute) {
    SplitCandidate cand;
    cand.test.attribute = attribute;
    cand.test.kind = SplitTest::Kind::NominalMultiway;
    for (int v = 0; v < stats.arity(); ++v) {
        const ValueCell& cell = stats.cell(v);
        if (cell.classes.total() <= 0) continue;
        cand.test.branch_values.push_back(v);
        cand.partition.branches.push_back(BranchStats{cell.classes, cell.fairness});
    }
    return cand;
}

// Splits the class and community Gaussians at `threshold` into CDF masses on
// each side.
PartitionStats numeric_partition(const NumericAttributeStats& stats, double threshold) {
    PartitionStats parts;
    parts.branches.resize(2);
    BranchStats& left = parts.branches[0];
    BranchStats& right = parts.branches[1];
    left.classes = ClassDistribution(static_cast<size_t>(stats.class_count()));
    right.classes = ClassDistribution(static_cast<size_t>(stats.class_count()));

    for (int c = 0; c < stats.class_count(); ++c) {
        const GaussianEstimator& g = stats.class_estimator(c);
        if (g.count() <= 0) continue;
        double below = g.mass_below(threshold);
        left.classes.add(c, below);
        right.classes.add(c, g.count() - below);
    }
    for (Community k : {Community::DeprivedRejected, Community::DeprivedGranted,
                        Community::FavoredRejected, Community::FavoredGranted}) {
        const GaussianEstimator& g = stats.community_estimator(k);
        if (g.count() <= 0) continue;
        double below = g.mass_below(threshold);
        left.fairness.add(k, below);
        right.fairness.add(k, g.count() - below);
    }
    return parts;
}

}  // namespace

std::vector<SplitCandidate> candidate_splits(const LeafStats& stats,
                                             const StreamSchema& schema,
                                             const LearnerConfig& config) {
    std::vector<SplitCandidate> out;
    if (stats.weight_seen() < 1) return out;

    for (const AttributeSpec& a : schema.attributes()) {
        if (a.is_nominal()) {
            const NominalAttributeStats& ns = stats.nominal(a.index);
            if (ns.observed_value_count() < 2) continue;
            out.push_back(nominal_candidate(ns, a.index));
        } else {
            const NumericAttributeStats& gs = stats.numeric(a.index);
            double lo = gs.observed_min();
            double hi = gs.observed_max();
            if (!(lo < hi)) continue;
            double step = (hi - lo) / (config.numeric_bins + 1.0);
            for (int i = 1; i <= config.numeric_bins; ++i) {
                double t = lo + step * i;
                if (!(t > lo && t < hi)) continue;
                SplitCandidate cand;
                cand.test.attribute = a.index;
                cand.test.kind = SplitTest::Kind::NumericBinary;
                cand.test.threshold = t;
                cand.partition = numeric_partition(gs, t);
                if (cand.partition.branches[0].weight() <= 0 || cand.partition.branches[1].weight() <= 0) {
                    continue;
                }
                out.push_back(std::move(cand));
            }
        }
    }
    return out;
}

BatchStats batch_equivalence_oracle(const std::vector<Instance>& instances, const StreamSchema& schema) {
    BatchStats out;
    out.classes = ClassDistribution(static_cast<size_t>(schema.class_count()));
    out.nominal_tables.resize(schema.attribute_count());
    for (const AttributeSpec& a : schema.attributes()) {
        if (!a.is_nominal()) continue;
        auto& table = out.nominal_tables[static_cast<size_t>(a.index)];
        table.resize(static_cast<size_t>(a.arity()));
        for (auto& cell : table) cell.classes = ClassDistribution(static_cast<size_t>(schema.class_count()));
    }

    for (const Instance& x : instances) {
        if (!x.has_label()) throw std::invalid_argument("batch_equivalence_oracle: unlabeled instance");
        int label = *x.label;
        double sv = x.values[static_cast<size_t>(schema.sensitive_index())];
        bool deprived = !is_missing(sv) && static_cast<int>(sv) == schema.deprived_value_index();
        bool granted = label == schema.positive_class_index();
        Community community = deprived ? (granted ? Community::DeprivedGranted : Community::DeprivedRejected)
                                       : (granted ? Community::FavoredGranted : Community::FavoredRejected);

        out.classes.counts[static_cast<size_t>(label)] += 1.0;
        switch (community) {
            case Community::DeprivedRejected: out.fairness.dr += 1.0; break;
            case Community::DeprivedGranted: out.fairness.dg += 1.0; break;
            case Community::FavoredRejected: out.fairness.fr += 1.0; break;
            case Community::FavoredGranted: out.fairness.fg += 1.0; break;
        }
        for (const AttributeSpec& a : schema.attributes()) {
            if (!a.is_nominal()) continue;
            double v = x.values[static_cast<size_t>(a.index)];
            if (is_missing(v)) continue;
            ValueCell& cell = out.nominal_tables[static_cast<size_t>(a.index)][static_cast<size_t>(v)];
            cell.classes.counts[static_cast<size_t>(label)] += 1.0;
            switch (community) {
                case Community::DeprivedRejected: cell.fairness.dr += 1.0; break;
                case Community::DeprivedGranted: cell.fairness.dg += 1.0; break;
                case Community::FavoredRejected: cell.fairness.fr += 1.0; break;
                case Community::FavoredGranted: cell.fairness.fg += 1.0; break;
            }
        }
    }
    return out;
}

}  // namespace faht
