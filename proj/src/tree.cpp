#include "faht/tree.hpp"

#include <algorithm>
#include <cmath>

namespace faht {

namespace {

double candidate_merit(const SplitCandidate& cand, const LearnerConfig& config) {
    ClassDistribution parent_classes = cand.partition.merged_classes();
    double ig = information_gain(parent_classes, cand.partition);

    switch (config.split_criterion) {
        case SplitCriterion::InfoGain:
            return ig;
        case SplitCriterion::FairInfoGain: {
            FairnessCounts parent_fairness = cand.partition.merged_fairness();
            return fair_information_gain(ig, fairness_gain(parent_fairness, cand.partition));
        }
        case SplitCriterion::Kamiran: {
            // Gain w.r.t. the sensitive attribute, i.e. how well the split
            // separates deprived from favored instances.
            ClassDistribution parent_sens{0.0, 0.0};
            PartitionStats sens_parts;
            for (const auto& b : cand.partition.branches) {
                BranchStats sb;
                sb.classes = ClassDistribution{b.fairness.deprived(), b.fairness.favored()};
                sens_parts.branches.push_back(std::move(sb));
                parent_sens.counts[0] += b.fairness.deprived();
                parent_sens.counts[1] += b.fairness.favored();
            }
            double ig_sensitive = information_gain(parent_sens, sens_parts);
            return kamiran_merit(ig, ig_sensitive, config.kamiran_variant);
        }
    }
    return ig;
}

// Deterministic candidate order: merit first, then attribute index and
// threshold so equal merits never depend on enumeration order.
bool better_candidate(const SplitCandidate& a, const SplitCandidate& b) {
    if (a.merit != b.merit) return a.merit > b.merit;
    if (a.test.attribute != b.test.attribute) return a.test.attribute < b.test.attribute;
    bool a_num = a.test.kind == SplitTest::Kind::NumericBinary;
    bool b_num = b.test.kind == SplitTest::Kind::NumericBinary;
    if (a_num != b_num) return !a_num;
    return a.test.threshold < b.test.threshold;
}

}  // namespace

void evaluate_candidates(std::vector<SplitCandidate>& candidates,
                         const StreamSchema& /*schema*/,
                         const LearnerConfig& config) {
    for (SplitCandidate& cand : candidates) {
        cand.merit = candidate_merit(cand, config);
    }
}

double null_split_merit(const LeafStats& stats, const LearnerConfig& config) {
    if (config.null_split_mode == NullSplitMode::Zero) return 0.0;
    double h = entropy(stats.class_counts());
    double disc = std::abs(statistical_parity(stats.fairness_counts()));
    return disc < kFairnessGainZeroTolerance ? h : h * disc;
}

SplitDecision attempt_split(const LeafStats& stats,
                            const StreamSchema& schema,
                            const LearnerConfig& config) {
    SplitDecision decision;
    if (stats.class_counts().is_pure()) return decision;

    std::vector<SplitCandidate> candidates = candidate_splits(stats, schema, config);
    if (candidates.empty()) return decision;
    evaluate_candidates(candidates, schema, config);

    size_t best = 0;
    for (size_t i = 1; i < candidates.size(); ++i) {
        if (better_candidate(candidates[i], candidates[best])) best = i;
    }
    double best_merit = candidates[best].merit;
    double second_merit = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < candidates.size(); ++i) {
        if (i == best) continue;
        second_merit = std::max(second_merit, candidates[i].merit);
    }

    double null_merit = null_split_merit(stats, config);
    double epsilon = hoeffding_bound(config.hoeffding_range, config.delta, stats.weight_seen());

    bool confident = best_merit - std::max(second_merit, null_merit) > epsilon;
    bool tie_break = epsilon < config.tie_threshold && best_merit > null_merit;
    if (confident || tie_break) {
        decision.split = true;
        decision.chosen = std::move(candidates[best]);
    }
    return decision;
}

struct FahtTree::Node {
    // Leaf state
    LeafStats stats;
    int n_since_last_attempt = 0;

    // Internal state (split engaged once the node splits)
    std::optional<SplitTest> split;
    std::vector<std::unique_ptr<Node>> children;
    int fallback_branch = 0;  // heaviest branch at split time

    bool is_leaf() const { return !split.has_value(); }

    nlohmann::ordered_json to_json(const StreamSchema& schema) const;
};

FahtTree::FahtTree(StreamSchema schema, LearnerConfig config)
    : schema_(std::move(schema)), config_(std::move(config)) {
    config_.validate();
    root_ = std::make_unique<Node>();
    root_->stats = LeafStats(schema_);
}

FahtTree::~FahtTree() = default;
FahtTree::FahtTree(FahtTree&&) noexcept = default;
FahtTree& FahtTree::operator=(FahtTree&&) noexcept = default;

Prediction FahtTree::predict(const Instance& x) const {
    const Node* node = root_.get();
    while (!node->is_leaf()) {
        int branch = node->split->route(x, schema_);
        if (branch < 0) branch = node->fallback_branch;
        node = node->children[static_cast<size_t>(branch)].get();
    }
    const ClassDistribution& counts = node->stats.class_counts();
    int positive = schema_.positive_class_index();
    int negative = schema_.negative_class_index();
    double pos = counts[static_cast<size_t>(positive)];
    double neg = counts[static_cast<size_t>(negative)];

    Prediction p;
    p.label = pos > neg ? positive : negative;  // ties resolve to rejected
    p.score = (pos + 1.0) / (counts.total() + 2.0);
    return p;
}

void FahtTree::train(const Instance& x) {
    if (!x.has_label()) throw std::invalid_argument("FahtTree::train: instance has no label");

    Node* node = root_.get();
    while (!node->is_leaf()) {
        int branch = node->split->route(x, schema_);
        if (branch < 0) branch = node->fallback_branch;
        node = node->children[static_cast<size_t>(branch)].get();
    }
    node->stats.observe(x, schema_);
    ++instances_trained_;
    if (++node->n_since_last_attempt >= config_.grace_period) {
        node->n_since_last_attempt = 0;
        SplitDecision decision = attempt_split(node->stats, schema_, config_);
        if (decision.split) split_leaf(*node, decision.chosen);
    }
}

void FahtTree::split_leaf(Node& node, const SplitCandidate& chosen) {
    node.split = chosen.test;
    node.children.clear();
    int branches = chosen.test.branch_count();
    node.children.reserve(static_cast<size_t>(branches));
    for (int b = 0; b < branches; ++b) {
        auto child = std::make_unique<Node>();
        child->stats = LeafStats(schema_);  // fresh leaves, no carry-down
        node.children.push_back(std::move(child));
    }
    node.fallback_branch = 0;
    double heaviest = -1.0;
    for (int b = 0; b < branches; ++b) {
        double w = chosen.partition.branches[static_cast<size_t>(b)].weight();
        if (w > heaviest) {
            heaviest = w;
            node.fallback_branch = b;
        }
    }
    node.stats = LeafStats();  // leaf statistics are no longer needed here
    split_log_.push_back(SplitEvent{instances_trained_, chosen.test.attribute, chosen.test.threshold});
}

ModelStats FahtTree::model_stats() const {
    ModelStats out;
    struct Frame {
        const Node* node;
        long depth;
    };
    std::vector<Frame> stack{{root_.get(), 0}};
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        ++out.node_count;
        out.depth = std::max(out.depth, f.depth);
        if (f.node->is_leaf()) {
            ++out.leaf_count;
        } else {
            for (const auto& c : f.node->children) stack.push_back({c.get(), f.depth + 1});
        }
    }
    return out;
}

nlohmann::ordered_json FahtTree::Node::to_json(const StreamSchema& schema) const {
    nlohmann::ordered_json j;
    if (is_leaf()) {
        const ClassDistribution& counts = stats.class_counts();
        nlohmann::ordered_json dist;
        for (int c = 0; c < schema.class_count(); ++c) {
            dist[schema.class_attribute().values[static_cast<size_t>(c)]] = counts[static_cast<size_t>(c)];
        }
        const FairnessCounts& f = stats.fairness_counts();
        j["leaf"] = true;
        j["n"] = counts.total();
        j["class_counts"] = dist;
        j["fairness"] = {{"dr", f.dr}, {"dg", f.dg}, {"fr", f.fr}, {"fg", f.fg}};
        return j;
    }
    const SplitTest& test = *split;
    const AttributeSpec& attr = schema.attribute(static_cast<size_t>(test.attribute));
    j["leaf"] = false;
    j["attribute"] = attr.name;
    if (test.kind == SplitTest::Kind::NumericBinary) {
        j["threshold"] = test.threshold;
        j["children"] = nlohmann::ordered_json::array(
            {children[0]->to_json(schema), children[1]->to_json(schema)});
    } else {
        nlohmann::ordered_json kids = nlohmann::ordered_json::object();
        for (size_t b = 0; b < children.size(); ++b) {
            const std::string& value = attr.values[static_cast<size_t>(test.branch_values[b])];
            kids[value] = children[b]->to_json(schema);
        }
        j["children"] = std::move(kids);
    }
    return j;
}

nlohmann::ordered_json FahtTree::to_json() const {
    nlohmann::ordered_json j;
    j["criterion"] = to_string(config_.split_criterion);
    ModelStats ms = model_stats();
    j["node_count"] = ms.node_count;
    j["leaf_count"] = ms.leaf_count;
    j["depth"] = ms.depth;
    j["root"] = root_->to_json(schema_);
    return j;
}

}  // namespace faht
