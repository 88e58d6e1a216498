#include "faht/core.hpp"

#include <algorithm>
#include <unordered_set>

namespace faht {

namespace {

void check_domain(const AttributeSpec& a) {
    if (!a.is_nominal()) return;
    if (a.values.empty()) throw SchemaError("nominal attribute '" + a.name + "' has an empty domain");
    std::unordered_set<std::string> seen;
    for (const auto& v : a.values) {
        if (!seen.insert(v).second) {
            throw SchemaError("nominal attribute '" + a.name + "' declares duplicate value '" + v + "'");
        }
    }
}

// Binary means two real values; the reserved missing symbol does not count.
int real_value_count(const AttributeSpec& a) {
    int n = 0;
    for (const auto& v : a.values) {
        if (v != kMissingSymbol) ++n;
    }
    return n;
}

}  // namespace

StreamSchema StreamSchema::make(std::vector<AttributeSpec> attributes,
                                AttributeSpec class_attribute,
                                const std::string& sensitive_attribute,
                                const std::string& deprived_value,
                                const std::string& positive_class) {
    StreamSchema s;
    s.attributes_ = std::move(attributes);
    s.class_attribute_ = std::move(class_attribute);

    std::unordered_set<std::string> names;
    for (size_t i = 0; i < s.attributes_.size(); ++i) {
        s.attributes_[i].index = static_cast<int>(i);
        check_domain(s.attributes_[i]);
        if (!names.insert(s.attributes_[i].name).second) {
            throw SchemaError("duplicate attribute name '" + s.attributes_[i].name + "'");
        }
    }
    check_domain(s.class_attribute_);

    if (!s.class_attribute_.is_nominal() || s.class_attribute_.arity() != 2) {
        throw SchemaError("class attribute '" + s.class_attribute_.name + "' must be nominal with exactly 2 values");
    }
    s.positive_class_index_ = s.class_attribute_.value_index(positive_class);
    if (s.positive_class_index_ < 0) {
        throw SchemaError("positive class '" + positive_class + "' is not a value of '" + s.class_attribute_.name + "'");
    }

    s.sensitive_index_ = s.find_attribute(sensitive_attribute);
    if (s.sensitive_index_ < 0) {
        throw SchemaError("sensitive attribute '" + sensitive_attribute + "' not found in schema");
    }
    const AttributeSpec& sa = s.attributes_[static_cast<size_t>(s.sensitive_index_)];
    if (!sa.is_nominal() || real_value_count(sa) != 2) {
        throw SchemaError("sensitive attribute '" + sensitive_attribute + "' must be nominal and binary");
    }
    s.deprived_value_index_ = sa.value_index(deprived_value);
    if (s.deprived_value_index_ < 0 || deprived_value == kMissingSymbol) {
        throw SchemaError("deprived value '" + deprived_value + "' is not a value of '" + sensitive_attribute + "'");
    }
    return s;
}

void StreamSchema::validate(const Instance& x) const {
    if (x.values.size() != attributes_.size()) {
        throw SchemaError("instance has " + std::to_string(x.values.size()) + " values, schema declares " +
                          std::to_string(attributes_.size()));
    }
    for (size_t i = 0; i < attributes_.size(); ++i) {
        const AttributeSpec& a = attributes_[i];
        double v = x.values[i];
        if (is_missing(v)) continue;
        if (a.is_nominal()) {
            int idx = static_cast<int>(v);
            if (idx < 0 || idx >= a.arity() || static_cast<double>(idx) != v) {
                throw SchemaError("value " + std::to_string(v) + " out of domain for nominal attribute '" + a.name + "'");
            }
        }
    }
    if (x.label) {
        if (*x.label < 0 || *x.label >= class_count()) {
            throw SchemaError("label index " + std::to_string(*x.label) + " out of range");
        }
    }
}

Community community_of(const Instance& x, const StreamSchema& schema) {
    if (!x.has_label()) {
        throw std::invalid_argument("community_of: instance has no label");
    }
    double sv = x.values[static_cast<size_t>(schema.sensitive_index())];
    if (is_missing(sv)) {
        throw std::invalid_argument("community_of: sensitive value is missing");
    }
    int sidx = static_cast<int>(sv);
    const AttributeSpec& sa = schema.attribute(static_cast<size_t>(schema.sensitive_index()));
    if (sidx >= 0 && sidx < sa.arity() && sa.values[static_cast<size_t>(sidx)] == kMissingSymbol) {
        throw std::invalid_argument("community_of: sensitive value is the reserved missing symbol");
    }
    bool deprived = sidx == schema.deprived_value_index();
    bool granted = *x.label == schema.positive_class_index();
    if (deprived) return granted ? Community::DeprivedGranted : Community::DeprivedRejected;
    return granted ? Community::FavoredGranted : Community::FavoredRejected;
}

const char* to_string(SplitCriterion c) {
    switch (c) {
        case SplitCriterion::InfoGain: return "ht";
        case SplitCriterion::FairInfoGain: return "faht";
        case SplitCriterion::Kamiran: return "kamiran";
    }
    return "?";
}

const char* to_string(KamiranVariant v) {
    switch (v) {
        case KamiranVariant::Subtract: return "subtract";
        case KamiranVariant::Divide: return "divide";
        case KamiranVariant::Add: return "add";
    }
    return "?";
}

const char* to_string(NullSplitMode m) {
    switch (m) {
        case NullSplitMode::Zero: return "zero";
        case NullSplitMode::EntropyTimesDisc: return "entropy_times_disc";
    }
    return "?";
}

SplitCriterion split_criterion_from_string(std::string_view s) {
    if (s == "ht" || s == "info_gain") return SplitCriterion::InfoGain;
    if (s == "faht" || s == "fair_info_gain") return SplitCriterion::FairInfoGain;
    if (s == "kamiran") return SplitCriterion::Kamiran;
    throw std::invalid_argument("unknown split criterion: " + std::string(s));
}

KamiranVariant kamiran_variant_from_string(std::string_view s) {
    if (s == "subtract") return KamiranVariant::Subtract;
    if (s == "divide") return KamiranVariant::Divide;
    if (s == "add") return KamiranVariant::Add;
    throw std::invalid_argument("unknown kamiran variant: " + std::string(s));
}

NullSplitMode null_split_mode_from_string(std::string_view s) {
    if (s == "zero") return NullSplitMode::Zero;
    if (s == "entropy_times_disc") return NullSplitMode::EntropyTimesDisc;
    throw std::invalid_argument("unknown null split mode: " + std::string(s));
}

}  // namespace faht
