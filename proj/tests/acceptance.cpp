// Acceptance suite. Runs every criterion at its stated tolerance and prints
// one PASS/FAIL line each. Criteria that need the Adult/Census datasets are
// SKIPped when the files are absent (see scripts/fetch_datasets.sh); exit
// code 77 marks a run with skips, 1 a run with failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "faht/data.hpp"
#include "faht/ensemble.hpp"
#include "faht/eval.hpp"
#include "faht/metrics.hpp"
#include "faht/stats.hpp"
#include "faht/tree.hpp"

namespace fs = std::filesystem;
using namespace faht;

namespace {

int failures = 0;
int skips = 0;

void report(int criterion, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << criterion << ": " << detail << "\n";
    if (!ok) ++failures;
}

void report_skip(int criterion, const std::string& detail) {
    std::cout << "SKIP  criterion " << criterion << ": " << detail << "\n";
    ++skips;
}

std::optional<DatasetConfig> dataset_config(const fs::path& data_dir, const std::string& name) {
    fs::path conf = data_dir / (name + ".conf");
    if (!fs::exists(conf)) return std::nullopt;
    DatasetConfig cfg = DatasetConfig::parse_file(conf);
    if (!fs::exists(cfg.source)) return std::nullopt;
    return cfg;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// ---- 1: dataset discrimination ------------------------------------------

void criterion_1(const fs::path& data_dir) {
    struct Expectation {
        const char* name;
        double expected;
    };
    for (const Expectation& e : {Expectation{"adult", 0.1945}, Expectation{"census", 0.0763}}) {
        auto cfg = dataset_config(data_dir, e.name);
        if (!cfg) {
            report_skip(1, std::string(e.name) + " dataset not found under " + data_dir.string() +
                               " (run scripts/fetch_datasets.sh)");
            continue;
        }
        cfg->shuffle_seed.reset();  // order does not matter for Eq. 1
        Dataset data = load(*cfg);
        double disc = dataset_discrimination(data);
        bool ok = std::abs(disc - e.expected) <= 0.0005;
        report(1, ok, std::string(e.name) + " dataset discrimination " + fmt(disc) + " vs " +
                          fmt(e.expected) + " +- 0.0005 (n=" + std::to_string(data.instances.size()) + ")");
    }
}

// ---- 2: McNemar statistic -------------------------------------------------

void criterion_2() {
    McNemarTable adult{527, 310, 523, 14832};
    double chi_adult = mcnemar(adult);
    bool ok_adult = std::abs(chi_adult - 53.954) <= 0.01;
    McNemarTable census{824, 963, 564, 153424};
    double chi_census = mcnemar(census);
    bool ok_census = std::abs(chi_census - 103.74) <= 0.01;
    report(2, ok_adult && ok_census,
           "McNemar chi-squared " + fmt(chi_adult) + " (want 53.954 +- 0.01), " + fmt(chi_census) +
               " (want 103.74 +- 0.01)");
}

// ---- 3: FIG identity at fg = 0 ---------------------------------------------

void criterion_3() {
    Xoshiro256StarStar rng(31337);
    int exact = 0;
    const int trials = 1000;
    for (int i = 0; i < trials; ++i) {
        double ig = rng.next_double() * 2.0 - 0.5;
        if (fair_information_gain(ig, 0.0) == ig) ++exact;
    }
    report(3, exact == trials,
           "fair_information_gain(ig, 0) == ig exactly for " + std::to_string(exact) + "/1000 random ig");
}

// ---- 4: incremental/batch oracle -------------------------------------------

void criterion_4() {
    Xoshiro256StarStar rng(8888);
    bool counters_exact = true;
    double worst_gap = 0.0;
    const int streams = 100;

    for (int s = 0; s < streams && counters_exact; ++s) {
        SyntheticStreamSpec spec;
        spec.n = 200 + static_cast<long>(rng.next_below(9800));
        spec.base_positive_rate = 0.2 + 0.5 * rng.next_double();
        spec.discrimination = 0.4 * rng.next_double() - 0.1;
        spec.seed = rng.next();
        Dataset data = generate(spec);

        LeafStats incremental(data.schema);
        for (const Instance& x : data.instances) incremental.observe(x, data.schema);
        BatchStats batch = batch_equivalence_oracle(data.instances, data.schema);

        if (!(incremental.class_counts() == batch.classes) ||
            !(incremental.fairness_counts() == batch.fairness)) {
            counters_exact = false;
            break;
        }
        for (const AttributeSpec& a : data.schema.attributes()) {
            if (!a.is_nominal()) continue;
            PartitionStats from_stats, from_oracle;
            for (int v = 0; v < a.arity(); ++v) {
                const ValueCell& cell_i = incremental.nominal(a.index).cell(v);
                const ValueCell& cell_b = batch.nominal_tables[static_cast<size_t>(a.index)][static_cast<size_t>(v)];
                if (!(cell_i.classes == cell_b.classes) || !(cell_i.fairness == cell_b.fairness)) {
                    counters_exact = false;
                }
                if (cell_i.classes.total() > 0) {
                    from_stats.branches.push_back({cell_i.classes, cell_i.fairness});
                }
                if (cell_b.classes.total() > 0) {
                    from_oracle.branches.push_back({cell_b.classes, cell_b.fairness});
                }
            }
            if (from_stats.branches.size() < 2) continue;
            double ig_gap = std::abs(information_gain(from_stats.merged_classes(), from_stats) -
                                     information_gain(from_oracle.merged_classes(), from_oracle));
            double fg_gap = std::abs(fairness_gain(from_stats.merged_fairness(), from_stats) -
                                     fairness_gain(from_oracle.merged_fairness(), from_oracle));
            worst_gap = std::max({worst_gap, ig_gap, fg_gap});
        }
    }
    report(4, counters_exact && worst_gap <= 1e-12,
           std::string("100 random streams: nominal counters ") +
               (counters_exact ? "bit-identical" : "DIVERGED") + ", worst IG/FG gap " + fmt(worst_gap));
}

// ---- 5: HT reduction on a discrimination-free stream ------------------------

void criterion_5() {
    SyntheticStreamSpec spec;
    spec.n = 30000;
    spec.base_positive_rate = 0.4;
    spec.seed = 4242;
    spec.mirrored = true;  // Disc == 0 exactly by construction
    Dataset data = generate(spec);

    LearnerConfig ht_cfg;
    ht_cfg.split_criterion = SplitCriterion::InfoGain;
    LearnerConfig faht_cfg;
    faht_cfg.split_criterion = SplitCriterion::FairInfoGain;

    FahtTree ht(data.schema, ht_cfg);
    FahtTree faht(data.schema, faht_cfg);
    bool nodes_match = true;
    long i = 0;
    for (const Instance& x : data.instances) {
        ht.train(x);
        faht.train(x);
        if (++i % 1000 == 0 && ht.model_stats().node_count != faht.model_stats().node_count) {
            nodes_match = false;
        }
    }
    bool log_match = ht.split_log().size() == faht.split_log().size();
    if (log_match) {
        for (size_t k = 0; k < ht.split_log().size(); ++k) {
            const SplitEvent& a = ht.split_log()[k];
            const SplitEvent& b = faht.split_log()[k];
            bool same_threshold = (std::isnan(a.threshold) && std::isnan(b.threshold)) ||
                                  a.threshold == b.threshold;
            if (a.instances_seen != b.instances_seen || a.attribute != b.attribute || !same_threshold) {
                log_match = false;
            }
        }
    }
    auto ja = ht.to_json();
    auto jb = faht.to_json();
    ja.erase("criterion");
    jb.erase("criterion");
    bool structure_match = ja.dump() == jb.dump();
    bool grew = !ht.split_log().empty();

    report(5, nodes_match && log_match && structure_match && grew,
           "zero-discrimination stream: " + std::to_string(ht.split_log().size()) +
               " splits, identical sequence/structure=" + (log_match && structure_match ? "yes" : "NO") +
               ", node counts equal at every snapshot=" + (nodes_match ? "yes" : "NO"));
}

// ---- 6 and 7: Table 1 direction and Fig. 3 node counts on Adult -------------

void criteria_6_and_7(const fs::path& data_dir) {
    auto cfg = dataset_config(data_dir, "adult");
    if (!cfg) {
        report_skip(6, "adult dataset not found (run scripts/fetch_datasets.sh)");
        report_skip(7, "adult dataset not found (run scripts/fetch_datasets.sh)");
        return;
    }
    const std::vector<uint64_t> seeds = {1, 2, 3, 4, 5};

    struct SeedOutcome {
        double acc_ht, disc_ht, acc_faht, disc_faht;
        long nodes_ht, nodes_faht;
    };
    auto run_seed = [&](uint64_t seed) {
        DatasetConfig c = *cfg;
        c.shuffle_seed = seed;
        Dataset data = load(c);
        LearnerConfig ht_cfg;
        ht_cfg.split_criterion = SplitCriterion::InfoGain;
        LearnerConfig faht_cfg;
        faht_cfg.split_criterion = SplitCriterion::FairInfoGain;
        FahtTree ht(data.schema, ht_cfg);
        PrequentialResult rh = prequential_run(ht, data.instances, data.schema, 0);
        FahtTree faht(data.schema, faht_cfg);
        PrequentialResult rf = prequential_run(faht, data.instances, data.schema, 0);
        return SeedOutcome{rh.final_snapshot().accuracy, rh.final_snapshot().discrimination,
                           rf.final_snapshot().accuracy, rf.final_snapshot().discrimination,
                           rh.final_snapshot().node_count, rf.final_snapshot().node_count};
    };

    std::vector<std::future<SeedOutcome>> futures;
    for (uint64_t s : seeds) futures.push_back(std::async(std::launch::async, run_seed, s));

    bool disc_lower_everywhere = true;
    bool acc_within_5pts = true;
    double reduction_sum = 0;
    int shorter = 0;
    std::ostringstream detail;
    for (size_t i = 0; i < futures.size(); ++i) {
        SeedOutcome o = futures[i].get();
        if (!(o.disc_faht < o.disc_ht)) disc_lower_everywhere = false;
        if (std::abs(o.acc_ht - o.acc_faht) > 0.05) acc_within_5pts = false;
        if (o.disc_ht > 0) reduction_sum += (o.disc_ht - o.disc_faht) / o.disc_ht;
        if (o.nodes_faht <= o.nodes_ht) ++shorter;
        detail << " s" << seeds[i] << "[disc " << fmt(o.disc_ht) << "->" << fmt(o.disc_faht) << " acc "
               << fmt(o.acc_ht) << "->" << fmt(o.acc_faht) << " nodes " << o.nodes_ht << "->"
               << o.nodes_faht << "]";
    }
    double mean_reduction = reduction_sum / static_cast<double>(seeds.size());

    report(6, disc_lower_everywhere && mean_reduction >= 0.15 && acc_within_5pts,
           "FAHT vs HT over 5 Adult seeds: disc lower on every seed=" +
               std::string(disc_lower_everywhere ? "yes" : "NO") + ", mean relative reduction " +
               fmt(mean_reduction * 100) + "% (need >= 15%), accuracy within 5 points=" +
               std::string(acc_within_5pts ? "yes" : "NO") + ";" + detail.str());
    report(7, shorter >= 4,
           "final FAHT node count <= HT node count on " + std::to_string(shorter) + "/5 Adult seeds");
}

// ---- 8: ensemble equivalence -------------------------------------------------

void criterion_8() {
    SyntheticStreamSpec spec;
    spec.n = 5000;
    spec.base_positive_rate = 0.35;
    spec.discrimination = 0.2;
    spec.seed = 777;
    Dataset data = generate(spec);

    LearnerConfig cfg;
    WindowEnsemble ensemble(data.schema, cfg, 1L << 40, 1);  // window far beyond the stream
    FahtTree tree(data.schema, cfg);
    PrequentialResult re = prequential_run(ensemble, data.instances, data.schema, 500);
    PrequentialResult rt = prequential_run(tree, data.instances, data.schema, 500);

    bool equal = re.records.size() == rt.records.size() && re.snapshots.size() == rt.snapshots.size();
    if (equal) {
        for (size_t i = 0; i < re.records.size(); ++i) {
            if (re.records[i].predicted_label != rt.records[i].predicted_label) equal = false;
        }
        for (size_t i = 0; i < re.snapshots.size(); ++i) {
            const MetricSnapshot& a = re.snapshots[i];
            const MetricSnapshot& b = rt.snapshots[i];
            if (a.accuracy != b.accuracy || a.discrimination != b.discrimination ||
                a.node_count != b.node_count) {
                equal = false;
            }
        }
    }
    report(8, equal, "capacity-1 ensemble with unbounded window matches the single-tree harness exactly");
}

// ---- 9: Hoeffding bound formula ------------------------------------------------

void criterion_9() {
    double e1000 = hoeffding_bound(1.0, 0.05, 1000);
    bool point = std::abs(e1000 - 0.03870) <= 1e-5;

    bool scaling = true;
    double ref = hoeffding_bound(1.0, 0.05, 1.0);
    for (double n : {2.0, 10.0, 100.0, 1000.0, 12345.0, 1e6}) {
        if (std::abs(hoeffding_bound(1.0, 0.05, n) * std::sqrt(n) - ref) > 1e-12) scaling = false;
    }
    for (double r : {0.5, 1.0, 2.0, 3.5}) {
        if (std::abs(hoeffding_bound(r, 0.05, 1000) - r * e1000) > 1e-12) scaling = false;
    }
    report(9, point && scaling,
           "epsilon(1, 0.05, 1000) = " + fmt(e1000) + " (want 0.03870 +- 1e-5); 1/sqrt(n) and R scaling to 1e-12");
}

// ---- 10: Table 3 spot cell -----------------------------------------------------

void criterion_10(const fs::path& data_dir) {
    auto cfg = dataset_config(data_dir, "adult");
    if (!cfg) {
        report_skip(10, "adult dataset not found (run scripts/fetch_datasets.sh)");
        return;
    }
    cfg->shuffle_seed.reset();
    Dataset data = load(*cfg);
    int sex = data.schema.find_attribute("sex");
    if (sex < 0) {
        report(10, false, "adult schema has no 'sex' attribute");
        return;
    }
    double r = pearson(encode_attribute(data, sex), encode_labels(data));
    report(10, std::abs(r - (-0.21)) <= 0.01,
           "pearson(sex, class) on Adult = " + fmt(r) + " (want -0.21 +- 0.01)");
}

}  // namespace

int main(int argc, char** argv) {
    fs::path data_dir = "data";
    std::string only = "all";  // all | core | datasets
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--data-dir" && i + 1 < argc) data_dir = argv[++i];
        else if (arg == "--only" && i + 1 < argc) only = argv[++i];
    }
    bool core = only != "datasets";
    bool datasets = only != "core";

    auto t0 = std::chrono::steady_clock::now();
    if (datasets) criterion_1(data_dir);
    if (core) {
        criterion_2();
        criterion_3();
        criterion_4();
        criterion_5();
    }
    if (datasets) criteria_6_and_7(data_dir);
    if (core) {
        criterion_8();
        criterion_9();
    }
    if (datasets) criterion_10(data_dir);
    auto seconds =
        std::chrono::duration_cast<std::chrono::seconds>(std::chrono::steady_clock::now() - t0).count();

    std::cout << "----\n"
              << "failures: " << failures << ", skips: " << skips << " (" << seconds << "s)\n";
    if (failures > 0) return 1;
    if (skips > 0) return 77;
    return 0;
}
