// Command-line driver: prequential experiments over discriminated streams.
//
//   faht run      --data adult.conf --criterion faht --seed 7 --out results/
//   faht compare  --data adult.conf --criterion ht --criterion faht --seed 7
//   faht ensemble --data adult.conf --window 1000 --capacity 5 --seed 7
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "faht/data.hpp"
#include "faht/ensemble.hpp"
#include "faht/eval.hpp"
#include "faht/metrics.hpp"
#include "faht/tree.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct CommonOptions {
    std::string data_config;
    std::vector<std::string> criteria;
    std::string kamiran_variant = "subtract";
    std::string null_split_mode = "zero";
    int grace_period = 200;
    double delta = 1e-7;
    double tau = 0.05;
    int numeric_bins = 10;
    std::optional<uint64_t> seed;
    std::vector<uint64_t> seeds;
    std::string out_dir = "out";
    long snapshot_every = 1000;
    long window = 1000;
    int capacity = 5;
};

void add_learner_options(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--data", opt.data_config, "dataset config file")->required();
    cmd->add_option("--criterion", opt.criteria, "split criterion: ht, faht or kamiran (repeatable)");
    cmd->add_option("--kamiran-variant", opt.kamiran_variant, "subtract, divide or add");
    cmd->add_option("--grace-period", opt.grace_period, "instances between split attempts");
    cmd->add_option("--delta", opt.delta, "Hoeffding bound confidence");
    cmd->add_option("--tau", opt.tau, "tie-break threshold");
    cmd->add_option("--null-split-mode", opt.null_split_mode, "zero or entropy_times_disc");
    cmd->add_option("--numeric-bins", opt.numeric_bins, "candidate thresholds per numeric attribute");
    cmd->add_option("--seed", opt.seed, "shuffle seed (overrides the config file)");
    cmd->add_option("--seeds", opt.seeds, "comma-separated shuffle seeds")->delimiter(',');
    cmd->add_option("--out", opt.out_dir, "output directory");
    cmd->add_option("--snapshot-every", opt.snapshot_every, "snapshot cadence in instances");
}

faht::LearnerConfig learner_config(const CommonOptions& opt, const std::string& criterion) {
    faht::LearnerConfig cfg;
    cfg.split_criterion = faht::split_criterion_from_string(criterion);
    cfg.kamiran_variant = faht::kamiran_variant_from_string(opt.kamiran_variant);
    cfg.null_split_mode = faht::null_split_mode_from_string(opt.null_split_mode);
    cfg.grace_period = opt.grace_period;
    cfg.delta = opt.delta;
    cfg.tie_threshold = opt.tau;
    cfg.numeric_bins = opt.numeric_bins;
    cfg.validate();
    return cfg;
}

// Seeds to run: --seeds wins, then --seed, then the config file, then an
// unshuffled pass (represented as nullopt).
std::vector<std::optional<uint64_t>> resolve_seeds(const CommonOptions& opt,
                                                   const faht::DatasetConfig& data_cfg) {
    if (!opt.seeds.empty()) return {opt.seeds.begin(), opt.seeds.end()};
    if (opt.seed) return {opt.seed};
    if (data_cfg.shuffle_seed) return {data_cfg.shuffle_seed};
    return {std::nullopt};
}

std::string seed_label(const std::optional<uint64_t>& seed) {
    return seed ? std::to_string(*seed) : "none";
}

faht::Dataset load_with_seed(const faht::DatasetConfig& base, const std::optional<uint64_t>& seed) {
    faht::DatasetConfig cfg = base;
    cfg.shuffle_seed = seed;
    return faht::load(cfg);
}

ordered_json dataset_json(const faht::Dataset& data) {
    return {{"instances", data.instances.size()},
            {"attributes", data.schema.attribute_count()},
            {"sensitive", data.schema.sensitive_name()},
            {"deprived", data.schema.deprived_value()},
            {"positive_class", data.schema.positive_class()},
            {"dataset_discrimination", faht::dataset_discrimination(data)}};
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << text;
}

std::vector<double> predicted_vector(const std::vector<faht::PrequentialRecord>& records) {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(static_cast<double>(r.predicted_label));
    return out;
}

double safe_pearson(std::span<const double> x, std::span<const double> y) {
    try {
        return faht::pearson(x, y);
    } catch (const std::invalid_argument&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

ordered_json nan_to_null(double v) {
    if (std::isnan(v)) return nullptr;
    return v;
}

// ---- run --------------------------------------------------------------

int cmd_run(const CommonOptions& opt) {
    faht::DatasetConfig data_cfg = faht::DatasetConfig::parse_file(opt.data_config);
    std::string criterion = opt.criteria.empty() ? "faht" : opt.criteria.front();
    if (opt.criteria.size() > 1) {
        std::cerr << "run takes a single --criterion; use compare for two\n";
        return 2;
    }
    faht::LearnerConfig learner_cfg = learner_config(opt, criterion);
    auto seeds = resolve_seeds(opt, data_cfg);
    fs::create_directories(opt.out_dir);

    struct SeedResult {
        faht::PrequentialResult run;
        ordered_json dataset;
        std::string tree_json;
    };

    std::vector<std::future<SeedResult>> futures;
    for (const auto& seed : seeds) {
        futures.push_back(std::async(std::launch::async, [&, seed] {
            faht::Dataset data = load_with_seed(data_cfg, seed);
            faht::FahtTree tree(data.schema, learner_cfg);
            SeedResult r;
            r.run = faht::prequential_run(tree, data.instances, data.schema, opt.snapshot_every);
            r.dataset = dataset_json(data);
            r.tree_json = tree.to_json().dump(2);
            return r;
        }));
    }

    ordered_json summary;
    summary["command"] = "run";
    summary["criterion"] = criterion;
    summary["config"] = {{"grace_period", learner_cfg.grace_period},
                         {"delta", learner_cfg.delta},
                         {"tau", learner_cfg.tie_threshold},
                         {"null_split_mode", faht::to_string(learner_cfg.null_split_mode)},
                         {"numeric_bins", learner_cfg.numeric_bins}};
    ordered_json per_seed = ordered_json::array();

    double acc_sum = 0, disc_sum = 0;
    for (size_t i = 0; i < futures.size(); ++i) {
        SeedResult r = futures[i].get();
        std::string label = seed_label(seeds[i]);

        std::ofstream csv(fs::path(opt.out_dir) / ("run_" + criterion + "_seed" + label + ".csv"));
        faht::write_snapshot_csv(csv, r.run.snapshots);
        write_text(fs::path(opt.out_dir) / ("tree_" + criterion + "_seed" + label + ".json"), r.tree_json);

        const faht::MetricSnapshot& fin = r.run.final_snapshot();
        acc_sum += fin.accuracy;
        disc_sum += fin.discrimination;
        if (i == 0) summary["dataset"] = r.dataset;
        per_seed.push_back({{"seed", label}, {"final", faht::snapshot_to_json(fin)}});
        std::cout << "seed " << label << ": accuracy " << fin.accuracy << ", discrimination "
                  << fin.discrimination << ", nodes " << fin.node_count << "\n";
    }
    summary["per_seed"] = per_seed;
    summary["mean"] = {{"accuracy", acc_sum / static_cast<double>(futures.size())},
                       {"discrimination", disc_sum / static_cast<double>(futures.size())}};
    write_text(fs::path(opt.out_dir) / "summary.json", summary.dump(2));
    std::cout << "mean accuracy " << acc_sum / static_cast<double>(futures.size())
              << ", mean discrimination " << disc_sum / static_cast<double>(futures.size()) << "\n"
              << "artifacts in " << opt.out_dir << "\n";
    return 0;
}

// ---- compare -----------------------------------------------------------

int cmd_compare(const CommonOptions& opt) {
    faht::DatasetConfig data_cfg = faht::DatasetConfig::parse_file(opt.data_config);
    std::vector<std::string> criteria = opt.criteria;
    if (criteria.empty()) criteria = {"ht", "faht"};
    if (criteria.size() != 2) {
        std::cerr << "compare needs exactly two --criterion values\n";
        return 2;
    }
    faht::LearnerConfig cfg_a = learner_config(opt, criteria[0]);
    faht::LearnerConfig cfg_b = learner_config(opt, criteria[1]);
    auto seeds = resolve_seeds(opt, data_cfg);
    fs::create_directories(opt.out_dir);

    struct SeedResult {
        faht::PrequentialResult run_a, run_b;
        std::vector<double> sensitive;
        std::vector<double> actual;
        std::optional<faht::StreamSchema> schema;
        ordered_json dataset;
    };

    std::vector<std::future<SeedResult>> futures;
    for (const auto& seed : seeds) {
        futures.push_back(std::async(std::launch::async, [&, seed] {
            faht::Dataset data = load_with_seed(data_cfg, seed);
            SeedResult r;
            faht::FahtTree tree_a(data.schema, cfg_a);
            r.run_a = faht::prequential_run(tree_a, data.instances, data.schema, opt.snapshot_every);
            faht::FahtTree tree_b(data.schema, cfg_b);
            r.run_b = faht::prequential_run(tree_b, data.instances, data.schema, opt.snapshot_every);
            r.sensitive = faht::encode_attribute(data, data.schema.sensitive_index());
            r.actual = faht::encode_labels(data);
            r.schema = data.schema;
            r.dataset = dataset_json(data);
            return r;
        }));
    }

    ordered_json summary;
    summary["command"] = "compare";
    summary["baseline"] = criteria[0];
    summary["candidate"] = criteria[1];
    ordered_json per_seed = ordered_json::array();

    for (size_t i = 0; i < futures.size(); ++i) {
        SeedResult r = futures[i].get();
        std::string label = seed_label(seeds[i]);
        if (i == 0) summary["dataset"] = r.dataset;

        // side-by-side snapshot series, node counts included
        {
            std::ofstream csv(fs::path(opt.out_dir) / ("compare_seed" + label + ".csv"));
            csv << "n,accuracy_" << criteria[0] << ",accuracy_" << criteria[1] << ",discrimination_"
                << criteria[0] << ",discrimination_" << criteria[1] << ",nodes_" << criteria[0]
                << ",nodes_" << criteria[1] << "\n";
            size_t rows = std::min(r.run_a.snapshots.size(), r.run_b.snapshots.size());
            for (size_t k = 0; k < rows; ++k) {
                const auto& a = r.run_a.snapshots[k];
                const auto& b = r.run_b.snapshots[k];
                csv << a.n << ',' << a.accuracy << ',' << b.accuracy << ',' << a.discrimination << ','
                    << b.discrimination << ',' << a.node_count << ',' << b.node_count << "\n";
            }
        }

        faht::CompareReport report = faht::compare_report(r.run_a, r.run_b);
        ordered_json seed_json;
        seed_json["seed"] = label;
        seed_json["report"] = faht::compare_report_to_json(report);

        faht::McNemarTable table = faht::paired_table(r.run_a.records, r.run_b.records, *r.schema,
                                                      faht::CommunityFilter::Deprived);
        ordered_json mc;
        mc["table"] = {{"both_granted", table.both_granted},
                       {"b", table.a_granted_b_rejected},
                       {"c", table.a_rejected_b_granted},
                       {"both_rejected", table.both_rejected}};
        try {
            double chi2 = faht::mcnemar(table);
            mc["chi_squared"] = chi2;
            mc["df"] = 1;
            mc["p_below_0.001"] = chi2 > faht::kChiSquared1DofP001;
            std::cout << "seed " << label << ": McNemar chi-squared " << chi2
                      << (chi2 > faht::kChiSquared1DofP001 ? " (p < 0.001)" : "") << "\n";
        } catch (const std::invalid_argument&) {
            mc["chi_squared"] = nullptr;
            mc["note"] = "undefined: no discordant pairs";
            std::cout << "seed " << label << ": McNemar undefined (no discordant pairs)\n";
        }
        seed_json["mcnemar_deprived"] = mc;

        std::vector<double> pred_a = predicted_vector(r.run_a.records);
        std::vector<double> pred_b = predicted_vector(r.run_b.records);
        seed_json["correlations"] = {
            {"sensitive_vs_predicted",
             {{criteria[0], nan_to_null(safe_pearson(r.sensitive, pred_a))},
              {criteria[1], nan_to_null(safe_pearson(r.sensitive, pred_b))}}},
            {"sensitive_vs_actual", nan_to_null(safe_pearson(r.sensitive, r.actual))},
            {"predicted_vs_actual",
             {{criteria[0], nan_to_null(safe_pearson(pred_a, r.actual))},
              {criteria[1], nan_to_null(safe_pearson(pred_b, r.actual))}}},
        };

        const auto& fa = r.run_a.final_snapshot();
        const auto& fb = r.run_b.final_snapshot();
        std::cout << "  " << criteria[0] << ": acc " << fa.accuracy << ", disc " << fa.discrimination
                  << ", nodes " << fa.node_count << "\n"
                  << "  " << criteria[1] << ": acc " << fb.accuracy << ", disc " << fb.discrimination
                  << ", nodes " << fb.node_count << "\n";
        per_seed.push_back(std::move(seed_json));
    }
    summary["per_seed"] = per_seed;
    write_text(fs::path(opt.out_dir) / "compare_summary.json", summary.dump(2));
    std::cout << "artifacts in " << opt.out_dir << "\n";
    return 0;
}

// ---- ensemble ----------------------------------------------------------

int cmd_ensemble(const CommonOptions& opt) {
    faht::DatasetConfig data_cfg = faht::DatasetConfig::parse_file(opt.data_config);
    if (opt.window < 1 || opt.capacity < 1) {
        std::cerr << "--window and --capacity must be >= 1\n";
        return 2;
    }
    auto seeds = resolve_seeds(opt, data_cfg);
    fs::create_directories(opt.out_dir);
    faht::LearnerConfig cfg_ht = learner_config(opt, "ht");
    faht::LearnerConfig cfg_faht = learner_config(opt, "faht");

    struct SeedResult {
        faht::PrequentialResult run_ht, run_faht;
        std::optional<faht::StreamSchema> schema;
        ordered_json dataset;
    };

    std::vector<std::future<SeedResult>> futures;
    for (const auto& seed : seeds) {
        futures.push_back(std::async(std::launch::async, [&, seed]() -> SeedResult {
            faht::Dataset data = load_with_seed(data_cfg, seed);
            faht::WindowEnsemble ht(data.schema, cfg_ht, opt.window, opt.capacity);
            faht::WindowEnsemble ft(data.schema, cfg_faht, opt.window, opt.capacity);
            return SeedResult{faht::prequential_run(ht, data.instances, data.schema, opt.snapshot_every),
                              faht::prequential_run(ft, data.instances, data.schema, opt.snapshot_every),
                              data.schema, dataset_json(data)};
        }));
    }

    ordered_json summary;
    summary["command"] = "ensemble";
    summary["window"] = opt.window;
    summary["capacity"] = opt.capacity;
    ordered_json per_seed = ordered_json::array();

    for (size_t i = 0; i < futures.size(); ++i) {
        SeedResult r = futures[i].get();
        std::string label = seed_label(seeds[i]);
        if (i == 0) summary["dataset"] = r.dataset;

        std::ofstream csv(fs::path(opt.out_dir) / ("ensemble_seed" + label + ".csv"));
        csv << "window,n,accuracy_ht,discrimination_ht,accuracy_faht,discrimination_faht\n";
        size_t total = r.run_ht.records.size();
        long window_index = 0;
        for (size_t start = 0; start < total; start += static_cast<size_t>(opt.window)) {
            size_t end = std::min(total, start + static_cast<size_t>(opt.window));
            std::span<const faht::PrequentialRecord> slice_ht(r.run_ht.records.data() + start, end - start);
            std::span<const faht::PrequentialRecord> slice_ft(r.run_faht.records.data() + start, end - start);
            faht::MetricSnapshot mh = faht::metrics_from_records(slice_ht, *r.schema);
            faht::MetricSnapshot mf = faht::metrics_from_records(slice_ft, *r.schema);
            csv << window_index << ',' << (end - start) << ',' << mh.accuracy << ',' << mh.discrimination
                << ',' << mf.accuracy << ',' << mf.discrimination << "\n";
            ++window_index;
        }

        per_seed.push_back({{"seed", label},
                            {"ht", faht::snapshot_to_json(r.run_ht.final_snapshot())},
                            {"faht", faht::snapshot_to_json(r.run_faht.final_snapshot())}});
        std::cout << "seed " << label << ": ht acc " << r.run_ht.final_snapshot().accuracy << " disc "
                  << r.run_ht.final_snapshot().discrimination << " | faht acc "
                  << r.run_faht.final_snapshot().accuracy << " disc "
                  << r.run_faht.final_snapshot().discrimination << "\n";
    }
    summary["per_seed"] = per_seed;
    write_text(fs::path(opt.out_dir) / "ensemble_summary.json", summary.dump(2));
    std::cout << "artifacts in " << opt.out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fairness-aware Hoeffding tree experiments"};
    app.require_subcommand(1);

    CommonOptions run_opt, compare_opt, ensemble_opt;
    CLI::App* run = app.add_subcommand("run", "single-learner prequential experiment");
    add_learner_options(run, run_opt);
    CLI::App* compare = app.add_subcommand("compare", "two criteria head-to-head on one stream");
    add_learner_options(compare, compare_opt);
    CLI::App* ensemble = app.add_subcommand("ensemble", "sliding-window ensembles (ht and faht based)");
    add_learner_options(ensemble, ensemble_opt);
    ensemble->add_option("--window", ensemble_opt.window, "sliding window size");
    ensemble->add_option("--capacity", ensemble_opt.capacity, "classifier queue capacity");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (run->parsed()) return cmd_run(run_opt);
        if (compare->parsed()) return cmd_compare(compare_opt);
        if (ensemble->parsed()) return cmd_ensemble(ensemble_opt);
        return 2;
    } catch (const faht::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const faht::SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
