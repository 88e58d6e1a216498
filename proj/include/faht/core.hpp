#ifndef FAHT_CORE_HPP_
#define FAHT_CORE_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace faht {

// Thrown when data contradicts the declared schema (unknown nominal value,
// wrong column count, non-binary class/sensitive attribute, ...).
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when an internal consistency condition is violated, e.g. branch
// totals that do not add up to the parent total.
struct InvariantError : std::logic_error {
    using std::logic_error::logic_error;
};

// Thrown by file readers; carries a 1-based line number when known.
struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, long line = 0)
        : std::runtime_error(line > 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
          line_number(line) {}
    long line_number;
};

// Reserved nominal symbol standing in for a missing value. Data loaders
// append it to every nominal predictor domain so that missing categorical
// values stay exact counters instead of requiring imputation.
inline constexpr std::string_view kMissingSymbol = "?";

inline double missing_value() { return std::numeric_limits<double>::quiet_NaN(); }
inline bool is_missing(double v) { return std::isnan(v); }

enum class AttributeKind { Nominal, Numeric };

struct AttributeSpec {
    std::string name;
    AttributeKind kind = AttributeKind::Nominal;
    std::vector<std::string> values;  // nominal domains only, duplicate-free
    int index = 0;                    // dense position within the schema

    bool is_nominal() const { return kind == AttributeKind::Nominal; }
    bool is_numeric() const { return kind == AttributeKind::Numeric; }
    int arity() const { return static_cast<int>(values.size()); }

    // Index of a nominal symbol within the domain, -1 if absent.
    int value_index(std::string_view symbol) const {
        for (int i = 0; i < arity(); ++i) {
            if (values[static_cast<size_t>(i)] == symbol) return i;
        }
        return -1;
    }

    bool operator==(const AttributeSpec&) const = default;
};

// One streamed example. Nominal values are stored as their domain index,
// numeric values as-is; missing entries are NaN in either case.
struct Instance {
    std::vector<double> values;
    std::optional<int> label;  // class value index

    double operator[](size_t i) const { return values[i]; }
    bool has_label() const { return label.has_value(); }
};

// The four communities formed by crossing the (binary) sensitive attribute
// with the (binary) class outcome.
enum class Community { DeprivedRejected, DeprivedGranted, FavoredRejected, FavoredGranted };

inline constexpr const char* to_string(Community c) {
    switch (c) {
        case Community::DeprivedRejected: return "DR";
        case Community::DeprivedGranted: return "DG";
        case Community::FavoredRejected: return "FR";
        case Community::FavoredGranted: return "FG";
    }
    return "?";
}

// Schema of a discriminated data stream: the predictor attributes plus the
// binary class attribute, one nominal predictor designated as sensitive.
// Immutable after construction and safe to share across threads.
class StreamSchema {
  public:
    // Validates and resolves all name references; throws SchemaError when the
    // sensitive attribute is absent/non-binary, the class is not binary, the
    // deprived or positive values are not in their domains, or a nominal
    // domain is empty/duplicated.
    static StreamSchema make(std::vector<AttributeSpec> attributes,
                             AttributeSpec class_attribute,
                             const std::string& sensitive_attribute,
                             const std::string& deprived_value,
                             const std::string& positive_class);

    const std::vector<AttributeSpec>& attributes() const { return attributes_; }
    const AttributeSpec& attribute(size_t i) const { return attributes_[i]; }
    size_t attribute_count() const { return attributes_.size(); }
    const AttributeSpec& class_attribute() const { return class_attribute_; }

    int sensitive_index() const { return sensitive_index_; }
    int deprived_value_index() const { return deprived_value_index_; }
    int positive_class_index() const { return positive_class_index_; }
    int negative_class_index() const { return 1 - positive_class_index_; }
    int class_count() const { return class_attribute_.arity(); }

    const std::string& sensitive_name() const { return attributes_[static_cast<size_t>(sensitive_index_)].name; }
    const std::string& deprived_value() const {
        return attributes_[static_cast<size_t>(sensitive_index_)].values[static_cast<size_t>(deprived_value_index_)];
    }
    const std::string& positive_class() const {
        return class_attribute_.values[static_cast<size_t>(positive_class_index_)];
    }

    int find_attribute(std::string_view name) const {
        for (size_t i = 0; i < attributes_.size(); ++i) {
            if (attributes_[i].name == name) return static_cast<int>(i);
        }
        return -1;
    }

    // Throws SchemaError if the instance does not fit the schema (wrong
    // arity, nominal index out of domain, label out of range).
    void validate(const Instance& x) const;

  private:
    StreamSchema() = default;
    std::vector<AttributeSpec> attributes_;
    AttributeSpec class_attribute_;
    int sensitive_index_ = -1;
    int deprived_value_index_ = -1;
    int positive_class_index_ = -1;
};

// Community of a labeled instance. Total on labeled instances with a
// non-missing sensitive value; throws std::invalid_argument otherwise
// (community classification is impossible without both).
Community community_of(const Instance& x, const StreamSchema& schema);

inline bool is_deprived(Community c) {
    return c == Community::DeprivedRejected || c == Community::DeprivedGranted;
}
inline bool is_granted(Community c) {
    return c == Community::DeprivedGranted || c == Community::FavoredGranted;
}

enum class SplitCriterion { InfoGain, FairInfoGain, Kamiran };
enum class KamiranVariant { Subtract, Divide, Add };
enum class NullSplitMode { Zero, EntropyTimesDisc };
enum class LeafPrediction { MajorityClass };

// Learner hyperparameters. Defaults are the established stream-tree values;
// all of them are overridable from the CLI.
struct LearnerConfig {
    SplitCriterion split_criterion = SplitCriterion::FairInfoGain;
    KamiranVariant kamiran_variant = KamiranVariant::Subtract;
    int grace_period = 200;
    double delta = 1e-7;
    double tie_threshold = 0.05;
    NullSplitMode null_split_mode = NullSplitMode::Zero;
    LeafPrediction leaf_prediction = LeafPrediction::MajorityClass;
    int numeric_bins = 10;
    // Range R of the merit for the Hoeffding bound; log2(#classes) = 1 for a
    // binary class, kept configurable.
    double hoeffding_range = 1.0;

    void validate() const {
        if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must be in (0, 1)");
        if (tie_threshold < 0.0) throw std::invalid_argument("tie_threshold must be >= 0");
        if (grace_period < 1) throw std::invalid_argument("grace_period must be >= 1");
        if (numeric_bins < 1) throw std::invalid_argument("numeric_bins must be >= 1");
        if (!(hoeffding_range > 0.0)) throw std::invalid_argument("hoeffding_range must be > 0");
    }
};

const char* to_string(SplitCriterion c);
const char* to_string(KamiranVariant v);
const char* to_string(NullSplitMode m);

SplitCriterion split_criterion_from_string(std::string_view s);
KamiranVariant kamiran_variant_from_string(std::string_view s);
NullSplitMode null_split_mode_from_string(std::string_view s);

}  // namespace faht

#endif  // FAHT_CORE_HPP_
