#include "doctest.h"

#include <cmath>
#include <sstream>

#include "faht/data.hpp"
#include "faht/eval.hpp"
#include "faht/tree.hpp"
#include "test_helpers.hpp"

using namespace faht;

namespace {

// Test-only learners exercising the harness contract.
struct ConstantNegative {
    Prediction predict(const Instance&) const { return {0, 0.0}; }
    void train(const Instance&) {}
    long node_count() const { return 0; }
};

// Peeks at the true label; the ideal classifier for oracle checks.
struct CopyLabel {
    Prediction predict(const Instance& x) const { return {*x.label, 1.0}; }
    void train(const Instance&) {}
    long node_count() const { return 0; }
};

// Predicts the label of the previously trained instance. If the harness
// trained before predicting, the prediction at t would equal label[t].
struct LastLabel {
    int last = 0;
    Prediction predict(const Instance&) const { return {last, 0.5}; }
    void train(const Instance& x) { last = *x.label; }
    long node_count() const { return 0; }
};

Dataset sampled_stream(long n, uint64_t seed) {
    SyntheticStreamSpec spec;
    spec.n = n;
    spec.base_positive_rate = 0.4;
    spec.discrimination = 0.25;
    spec.seed = seed;
    return generate(spec);
}

}  // namespace

TEST_CASE("a constant-negative predictor has zero discrimination") {
    Dataset data = sampled_stream(2000, 42);
    ConstantNegative learner;
    PrequentialResult r = prequential_run(learner, data.instances, data.schema, 500);
    CHECK(r.final_snapshot().discrimination == 0.0);
    CHECK(r.final_snapshot().n == 2000);
    CHECK(r.snapshots.size() == 4);
}

TEST_CASE("a label-copying predictor reproduces the dataset discrimination exactly") {
    Dataset data = sampled_stream(20000, 43);
    CopyLabel learner;
    PrequentialResult r = prequential_run(learner, data.instances, data.schema, 0);
    CHECK(r.final_snapshot().accuracy == 1.0);
    CHECK(r.final_snapshot().discrimination == doctest::Approx(dataset_discrimination(data)).epsilon(1e-12));
}

TEST_CASE("the prediction at t only sees instances before t") {
    Dataset data = sampled_stream(500, 44);
    LastLabel learner;
    PrequentialResult r = prequential_run(learner, data.instances, data.schema, 0);
    for (size_t t = 1; t < r.records.size(); ++t) {
        CHECK(r.records[t].predicted_label == *data.instances[t - 1].label);
    }
    CHECK(r.records[0].predicted_label == 0);
}

TEST_CASE("snapshots carry cumulative metrics and a final partial snapshot") {
    Dataset data = sampled_stream(2500, 45);
    LearnerConfig cfg;
    FahtTree tree(data.schema, cfg);
    PrequentialResult r = prequential_run(tree, data.instances, data.schema, 1000);
    REQUIRE(r.snapshots.size() == 3);  // 1000, 2000, 2500
    CHECK(r.snapshots[0].n == 1000);
    CHECK(r.snapshots[1].n == 2000);
    CHECK(r.snapshots[2].n == 2500);

    SUBCASE("landmark metrics recomputed from the log match the accumulator exactly") {
        MetricSnapshot recomputed = metrics_from_records(r.records, data.schema);
        CHECK(recomputed.accuracy == r.final_snapshot().accuracy);
        CHECK(recomputed.discrimination == r.final_snapshot().discrimination);
    }
}

TEST_CASE("mcnemar reproduces the published checks") {
    // Adult: b = 310, c = 523
    McNemarTable adult{527, 310, 523, 14832};
    CHECK(mcnemar(adult) == doctest::Approx(53.954).epsilon(2e-4));
    // Census: b = 963, c = 564
    McNemarTable census{824, 963, 564, 153424};
    CHECK(mcnemar(census) == doctest::Approx(103.74).epsilon(1e-4));
    CHECK(mcnemar(census) > kChiSquared1DofP001);

    SUBCASE("symmetric under swapping the classifiers") {
        McNemarTable swapped{527, 523, 310, 14832};
        CHECK(mcnemar(swapped) == mcnemar(adult));
    }
    SUBCASE("equal discordance") {
        McNemarTable even{10, 7, 7, 10};
        CHECK(mcnemar(even) == doctest::Approx(1.0 / 14.0));
    }
    SUBCASE("no discordant pairs is undefined") {
        McNemarTable none{5, 0, 0, 5};
        CHECK_THROWS_AS(mcnemar(none), std::invalid_argument);
    }
}

TEST_CASE("paired table restricted to the deprived community") {
    StreamSchema schema = faht::testing::small_schema();
    std::vector<PrequentialRecord> a, b;
    auto push = [&](Community c, int truth, int pa, int pb) {
        long idx = static_cast<long>(a.size());
        a.push_back({idx, truth, pa, c});
        b.push_back({idx, truth, pb, c});
    };
    push(Community::DeprivedGranted, 1, 1, 1);   // both granted
    push(Community::DeprivedRejected, 0, 1, 0);  // a granted, b rejected
    push(Community::DeprivedRejected, 0, 0, 1);  // a rejected, b granted
    push(Community::DeprivedGranted, 1, 0, 0);   // both rejected
    push(Community::FavoredGranted, 1, 1, 0);    // filtered out
    push(Community::FavoredRejected, 0, 0, 1);   // filtered out

    McNemarTable t = paired_table(a, b, schema, CommunityFilter::Deprived);
    CHECK(t.both_granted == 1);
    CHECK(t.a_granted_b_rejected == 1);
    CHECK(t.a_rejected_b_granted == 1);
    CHECK(t.both_rejected == 1);

    McNemarTable all = paired_table(a, b, schema, CommunityFilter::All);
    CHECK(all.a_granted_b_rejected == 2);
    CHECK(all.a_rejected_b_granted == 2);

    SUBCASE("mismatched logs throw") {
        b.pop_back();
        CHECK_THROWS_AS(paired_table(a, b, schema, CommunityFilter::All), InvariantError);
    }
}

TEST_CASE("pearson correlation") {
    std::vector<double> x = {1, 2, 3, 4, 5, 6};
    std::vector<double> y = {2, 4, 6, 8, 10, 12};
    CHECK(pearson(x, x) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pearson(x, y) == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<double> neg;
    for (double v : x) neg.push_back(-v);
    CHECK(pearson(x, neg) == doctest::Approx(-1.0).epsilon(1e-12));

    SUBCASE("invariant under positive affine transforms") {
        std::vector<double> u = {0.3, -1.2, 4.4, 2.0, 0.0, 9.1};
        std::vector<double> v = {5.0, 3.1, -2.2, 0.7, 1.1, 4.0};
        double base = pearson(u, v);
        std::vector<double> u2;
        for (double w : u) u2.push_back(3.5 * w + 11.0);
        std::vector<double> v2;
        for (double w : v) v2.push_back(0.25 * w - 2.0);
        CHECK(pearson(u2, v2) == doctest::Approx(base).epsilon(1e-9));
    }
    SUBCASE("incomplete pairs are dropped") {
        std::vector<double> with_nan = {1, std::nan(""), 3, 4, std::nan(""), 6};
        std::vector<double> other = {10, 99, 30, 40, -1, 60};
        CHECK(pearson(with_nan, other) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("degenerate inputs throw") {
        std::vector<double> flat = {3, 3, 3, 3, 3, 3};
        CHECK_THROWS_AS(pearson(x, flat), std::invalid_argument);
        std::vector<double> one_pair = {1, std::nan(""), std::nan(""), std::nan(""), std::nan(""), std::nan("")};
        CHECK_THROWS_AS(pearson(one_pair, y), std::invalid_argument);
    }
}

TEST_CASE("compare_report arithmetic matches the published percent changes") {
    PrequentialResult a, b;
    a.records.resize(10);
    b.records.resize(10);
    a.snapshots.push_back({10, 0.8391, 0.2259, 100});
    b.snapshots.push_back({10, 0.8183, 0.1629, 80});

    CompareReport r = compare_report(a, b);
    CHECK(r.discrimination_change_pct == doctest::Approx(-27.89).epsilon(1e-3));
    CHECK(r.accuracy_change_pct == doctest::Approx(-2.48).epsilon(1e-3));
    CHECK(r.discrimination_delta == doctest::Approx(-0.063).epsilon(1e-9));

    SUBCASE("identical runs have zero deltas") {
        CompareReport same = compare_report(a, a);
        CHECK(same.accuracy_delta == 0.0);
        CHECK(same.discrimination_delta == 0.0);
        CHECK(same.accuracy_change_pct == 0.0);
        CHECK(same.discrimination_change_pct == 0.0);
    }
    SUBCASE("length mismatch throws") {
        PrequentialResult c;
        c.records.resize(9);
        c.snapshots.push_back({9, 0.5, 0.1, 1});
        CHECK_THROWS_AS(compare_report(a, c), InvariantError);
    }
}

TEST_CASE("snapshot csv format") {
    std::vector<MetricSnapshot> snaps = {{1000, 0.75, 0.125, 11}, {2000, 0.8, 0.1, 21}};
    std::ostringstream os;
    write_snapshot_csv(os, snaps);
    CHECK(os.str() == "n,accuracy,discrimination,node_count\n1000,0.75,0.125,11\n2000,0.8,0.1,21\n");
}
