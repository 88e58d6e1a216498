#include "faht/eval.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <string>

namespace faht {

namespace {

// Shortest round-trip decimal rendering; keeps artifacts byte-stable.
std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace

MetricSnapshot metrics_from_records(std::span<const PrequentialRecord> records,
                                    const StreamSchema& schema) {
    long correct = 0;
    FairnessCounts predicted_counts;
    for (const PrequentialRecord& r : records) {
        if (r.predicted_label == r.true_label) ++correct;
        bool deprived = is_deprived(r.community);
        bool granted = r.predicted_label == schema.positive_class_index();
        predicted_counts.add(deprived ? (granted ? Community::DeprivedGranted : Community::DeprivedRejected)
                                      : (granted ? Community::FavoredGranted : Community::FavoredRejected));
    }
    long n = static_cast<long>(records.size());
    return MetricSnapshot{n, n > 0 ? static_cast<double>(correct) / static_cast<double>(n) : 0.0,
                          statistical_parity(predicted_counts), 0};
}

McNemarTable paired_table(std::span<const PrequentialRecord> run_a,
                          std::span<const PrequentialRecord> run_b,
                          const StreamSchema& schema,
                          CommunityFilter filter) {
    if (run_a.size() != run_b.size()) {
        throw InvariantError("paired_table: record logs have different lengths");
    }
    McNemarTable t;
    for (size_t i = 0; i < run_a.size(); ++i) {
        const PrequentialRecord& a = run_a[i];
        const PrequentialRecord& b = run_b[i];
        if (a.true_label != b.true_label || a.index != b.index) {
            throw InvariantError("paired_table: record logs disagree on the underlying stream");
        }
        if (filter == CommunityFilter::Deprived && !is_deprived(a.community)) continue;
        if (filter == CommunityFilter::Favored && is_deprived(a.community)) continue;

        bool a_granted = a.predicted_label == schema.positive_class_index();
        bool b_granted = b.predicted_label == schema.positive_class_index();
        if (a_granted && b_granted) ++t.both_granted;
        else if (a_granted && !b_granted) ++t.a_granted_b_rejected;
        else if (!a_granted && b_granted) ++t.a_rejected_b_granted;
        else ++t.both_rejected;
    }
    return t;
}

double mcnemar(const McNemarTable& table) {
    double b = static_cast<double>(table.a_granted_b_rejected);
    double c = static_cast<double>(table.a_rejected_b_granted);
    if (b + c <= 0) {
        throw std::invalid_argument("mcnemar: statistic undefined, no discordant pairs");
    }
    double diff = std::abs(b - c) - 1.0;
    return diff * diff / (b + c);
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("pearson: vectors differ in length");

    // Two-pass over complete pairs.
    double sx = 0, sy = 0;
    long n = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        if (std::isnan(x[i]) || std::isnan(y[i])) continue;
        sx += x[i];
        sy += y[i];
        ++n;
    }
    if (n < 2) throw std::invalid_argument("pearson: fewer than two complete pairs");
    double mx = sx / n, my = sy / n;
    double sxx = 0, syy = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        if (std::isnan(x[i]) || std::isnan(y[i])) continue;
        double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0 || syy <= 0) throw std::invalid_argument("pearson: zero variance");
    return sxy / std::sqrt(sxx * syy);
}

namespace {

double percent_change(double old_value, double new_value) {
    if (old_value == 0.0) return new_value == 0.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
    return (new_value - old_value) / old_value * 100.0;
}

}  // namespace

CompareReport compare_report(const PrequentialResult& run_a, const PrequentialResult& run_b) {
    if (run_a.records.size() != run_b.records.size()) {
        throw InvariantError("compare_report: runs cover different stream lengths");
    }
    const MetricSnapshot& a = run_a.final_snapshot();
    const MetricSnapshot& b = run_b.final_snapshot();
    CompareReport r;
    r.accuracy_a = a.accuracy;
    r.accuracy_b = b.accuracy;
    r.accuracy_delta = b.accuracy - a.accuracy;
    r.accuracy_change_pct = percent_change(a.accuracy, b.accuracy);
    r.discrimination_a = a.discrimination;
    r.discrimination_b = b.discrimination;
    r.discrimination_delta = b.discrimination - a.discrimination;
    r.discrimination_change_pct = percent_change(a.discrimination, b.discrimination);
    return r;
}

void write_snapshot_csv(std::ostream& os, std::span<const MetricSnapshot> snapshots) {
    os << "n,accuracy,discrimination,node_count\n";
    for (const MetricSnapshot& s : snapshots) {
        os << s.n << ',' << format_double(s.accuracy) << ',' << format_double(s.discrimination)
           << ',' << s.node_count << '\n';
    }
}

nlohmann::ordered_json snapshot_to_json(const MetricSnapshot& s) {
    return {{"n", s.n},
            {"accuracy", s.accuracy},
            {"discrimination", s.discrimination},
            {"node_count", s.node_count}};
}

nlohmann::ordered_json compare_report_to_json(const CompareReport& r) {
    auto pct = [](double v) -> nlohmann::ordered_json {
        if (std::isnan(v)) return nullptr;
        return v;
    };
    return {{"accuracy", {{"baseline", r.accuracy_a}, {"candidate", r.accuracy_b},
                          {"delta", r.accuracy_delta}, {"change_pct", pct(r.accuracy_change_pct)}}},
            {"discrimination", {{"baseline", r.discrimination_a}, {"candidate", r.discrimination_b},
                                {"delta", r.discrimination_delta}, {"change_pct", pct(r.discrimination_change_pct)}}}};
}

}  // namespace faht
