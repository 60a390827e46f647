#include <doctest.h>

#include <algorithm>

#include "phishlens/docx.hpp"
#include "phishlens/ml/importance.hpp"
#include "phishlens/ml/metrics.hpp"
#include "phishlens/ml/rng.hpp"
#include "phishlens/ml/tree.hpp"
#include "support.hpp"

using namespace phishlens;
using namespace phishlens::ml;

namespace {

SchemaPtr schema_of(std::size_t n) {
    std::vector<std::string> cols;
    for (std::size_t i = 0; i < n; ++i) cols.push_back("f" + std::to_string(i));
    return std::make_shared<const FeatureSchema>(FormatKind::url, cols, 1);
}

LabeledDataset dataset(std::size_t width, std::vector<std::pair<std::vector<double>, int>> rows) {
    LabeledDataset ds{schema_of(width), {}, {}};
    for (auto& [x, y] : rows) ds.add(std::move(x), y);
    return ds;
}

LabeledDataset blobs(std::uint64_t seed, std::size_t n, double separation) {
    Rng rng(seed);
    LabeledDataset ds{schema_of(2), {}, {}};
    for (std::size_t i = 0; i < n; ++i) {
        const int y = static_cast<int>(i % 2);
        ds.add({rng.normal(y * separation, 1.0), rng.normal(y * separation, 1.0)}, y);
    }
    return ds;
}

double train_accuracy(const DecisionTreeModel& m, const LabeledDataset& ds) {
    return evaluate(m, ds).accuracy;
}

}  // namespace

TEST_CASE("one-dimensional split") {
    const auto ds = dataset(1, {{{0}, 0}, {{1}, 1}});
    const auto m = train_decision_tree(ds);
    REQUIRE(m.nodes.size() == 3);
    CHECK(m.nodes[0].feature == 0);
    CHECK(m.nodes[0].threshold == 0.5);
    CHECK(train_accuracy(m, ds) == 1.0);
}

TEST_CASE("xor") {
    const auto ds = dataset(2, {{{0, 0}, 0}, {{0, 1}, 1}, {{1, 0}, 1}, {{1, 1}, 0}});
    TreeParams p;
    p.max_depth = 2;
    const auto m = train_decision_tree(ds, p);
    for (std::size_t i = 0; i < ds.size(); ++i) CHECK(m.predict_row(ds.rows[i]) == ds.labels[i]);
}

TEST_CASE("identical rows and single-class data") {
    const auto tie = train_decision_tree(dataset(2, {{{1, 1}, 0}, {{1, 1}, 1}}));
    CHECK(tie.nodes.size() == 1);
    CHECK(tie.nodes[0].label == 0);
    CHECK(train_decision_tree(dataset(2, {{{1, 1}, 1}, {{1, 1}, 1}, {{1, 1}, 0}})).nodes[0].label == 1);

    const auto single = train_decision_tree(dataset(1, {{{0}, 1}, {{5}, 1}}));
    CHECK(single.nodes.size() == 1);
    CHECK_FALSE(single.warnings.empty());
    CHECK(single.predict_row(std::vector<double>{100.0}) == 1);

    CHECK(test::error_of([] { train_decision_tree(LabeledDataset{schema_of(1), {}, {}}); }) == Errc::empty_dataset);
}

TEST_CASE("schema checks on prediction") {
    const auto m = train_decision_tree(dataset(1, {{{0}, 0}, {{1}, 1}}));
    CHECK(predict(m, FeatureVector(m.schema, {2.0})) == 1);
    CHECK(test::error_of([&] { predict(m, FeatureVector(schema_of(2), {0, 0})); }) == Errc::schema_mismatch);
}

TEST_CASE("majority vote") {
    CHECK(majority_vote(std::vector<int>{1, 1, 0}) == 1);
    CHECK(majority_vote(std::vector<int>{1, 0}) == 0);
    CHECK(majority_vote(std::vector<int>{}) == 0);
}

TEST_CASE("forest of one equals a tree") {
    const auto ds = blobs(4, 120, 1.5);
    ForestParams p;
    p.n_trees = 1;
    p.bootstrap = false;
    p.max_features = MaxFeatures::all();
    const auto forest = train_random_forest(ds, p);
    const auto tree = train_decision_tree(ds);
    Rng rng(1);
    for (int i = 0; i < 500; ++i) {
        const std::vector<double> x{rng.normal(0.75, 2), rng.normal(0.75, 2)};
        CHECK(forest.predict_row(x) == tree.predict_row(x));
    }
    CHECK(forest.trees[0].nodes.size() == tree.nodes.size());
}

TEST_CASE("forest determinism and serialization") {
    const auto ds = blobs(9, 150, 1.0);
    ForestParams p;
    p.n_trees = 15;
    p.seed = 42;
    p.jobs = 1;
    const auto a = serialize_model(train_random_forest(ds, p));
    p.jobs = 4;
    const auto b = serialize_model(train_random_forest(ds, p));
    CHECK(a == b);
    const auto loaded = load_model(a);
    CHECK(serialize_model(loaded) == a);
    CHECK(test::error_of([] { load_model("{\"kind\": 3}"); }) == Errc::parse_error);

    const auto tree = train_decision_tree(ds);
    const auto as_forest = load_model(serialize_model(tree));
    CHECK(as_forest.trees.size() == 1);
    for (std::size_t i = 0; i < ds.size(); ++i) CHECK(as_forest.predict_row(ds.rows[i]) == tree.predict_row(ds.rows[i]));
}

TEST_CASE("separable blobs have high out-of-bag accuracy") {
    const auto ds = blobs(21, 200, 6.0);
    // the two class means sit 6 sd apart per axis: check separability first
    const auto full = train_decision_tree(ds);
    REQUIRE(train_accuracy(full, ds) == 1.0);
    ForestParams p;
    p.n_trees = 50;
    const auto forest = train_random_forest(ds, p);
    REQUIRE(forest.oob_accuracy);
    CHECK(*forest.oob_accuracy >= 0.95);
}

TEST_CASE("scaling a feature leaves predictions unchanged") {
    auto ds = blobs(13, 200, 1.0);
    auto scaled = ds;
    for (auto& r : scaled.rows) r[1] *= 1000.0;
    const auto a = train_decision_tree(ds);
    const auto b = train_decision_tree(scaled);
    for (std::size_t i = 0; i < ds.size(); ++i) CHECK(a.predict_row(ds.rows[i]) == b.predict_row(scaled.rows[i]));
}

TEST_CASE("metrics") {
    const auto m = metrics_from_confusion({3, 1, 1, 5});
    CHECK(m.accuracy == doctest::Approx(0.8));
    CHECK(m.precision == doctest::Approx(0.75));
    CHECK(m.recall == doctest::Approx(0.75));
    CHECK(m.f1 == doctest::Approx(0.75));
    CHECK(f1_score(0.9301, 0.8401) == doctest::Approx(0.8828).epsilon(1e-4));
    CHECK(f1_score(0.9856, 0.9860) == doctest::Approx(0.9858).epsilon(1e-4));
    CHECK(f1_score(0, 0) == 0);

    const std::vector<int> pred{1, 1, 0, 0, 1}, actual{1, 0, 0, 1, 1};
    const auto e = evaluate_predictions(pred, actual);
    CHECK(e.confusion.total() == 5);
    CHECK(e.confusion.tp == 2);
    CHECK(e.accuracy == doctest::Approx(0.6));
    CHECK(test::error_of([] { evaluate_predictions({}, {}); }) == Errc::empty_dataset);

    const auto table = metrics_table("Word", {{"Random Forest", m}});
    CHECK(table.find("Random Forest") != std::string::npos);
    CHECK(table.find("F1") != std::string::npos);
}

TEST_CASE("stratified split") {
    LabeledDataset ds{schema_of(1), {}, {}};
    for (int i = 0; i < 100; ++i) ds.add({static_cast<double>(i)}, i < 30 ? 1 : 0);
    const auto [train, test] = stratified_split(ds, 0.7, 7);
    CHECK(train.size() == 70);
    CHECK(test.size() == 30);
    CHECK(ds.subset(train).count_label(1) == 21);
    CHECK(stratified_split(ds, 0.7, 7) == stratified_split(ds, 0.7, 7));
}

TEST_CASE("gini importance") {
    auto ds = dataset(3, {{{5, 0, 1}, 0}, {{5, 1, 2}, 1}, {{5, 0, 3}, 0}, {{5, 1, 1}, 1}});
    const auto tree = train_decision_tree(ds);
    const auto r = rank_features_gini(tree);
    CHECK(r.entries[0].feature == "f1");
    CHECK(r.entries[0].score == doctest::Approx(1.0));
    for (const auto& e : r.entries)
        if (e.feature == "f0") CHECK(e.score == 0);

    ForestParams p;
    p.n_trees = 20;
    const auto forest = train_random_forest(blobs(3, 200, 1.0), p);
    double sum = 0;
    for (const auto& e : rank_features_gini(forest).entries) sum += e.score;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("permutation importance") {
    std::vector<double> label_scores, noise_scores;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed + 100);
        LabeledDataset ds{schema_of(2), {}, {}};
        for (int i = 0; i < 200; ++i) {
            const int y = i % 2;
            ds.add({static_cast<double>(y), rng.uniform()}, y);
        }
        const auto tree = train_decision_tree(ds);
        const auto r = rank_features_permutation(tree, ds, seed, 5);
        for (const auto& e : r.entries) (e.feature == "f0" ? label_scores : noise_scores).push_back(e.score);
        for (const auto& e : r.entries) CHECK(e.score >= 0);
    }
    for (double s : label_scores) CHECK(s == doctest::Approx(0.5).epsilon(0.2));
    std::sort(noise_scores.begin(), noise_scores.end());
    CHECK(noise_scores[noise_scores.size() / 2] <= 0.01);
}

TEST_CASE("top-k selection") {
    ImportanceRanking r;
    r.entries = {{"f2", 0.5}, {"f0", 0.25}, {"f1", 0.25}, {"f3", 0}};
    const FeatureSchema base = *schema_of(4);
    const auto top = select_top_k(r, 2, base);
    CHECK(top->columns() == std::vector<std::string>{"f2", "f0"});
    CHECK(select_top_k(r, 4, base)->size() == 4);
    CHECK(test::error_of([&] { select_top_k(r, 0, base); }) == Errc::invalid_argument);
    CHECK(test::error_of([&] { select_top_k(r, 5, base); }) == Errc::invalid_argument);

    auto scaled = r;
    for (auto& e : scaled.entries) e.score *= 7;
    CHECK(select_top_k(scaled, 3, base)->columns() == select_top_k(r, 3, base)->columns());

    // ties in an unsorted gini ranking keep schema order
    auto ds = dataset(3, {{{0, 0, 9}, 0}, {{1, 1, 9}, 1}});
    const auto g = rank_features_gini(train_decision_tree(ds));
    CHECK(g.entries[0].feature == "f0");
    CHECK(g.entries[1].feature == "f1");
    CHECK(g.entries[2].feature == "f2");

    ImportanceRanking wide;
    for (const auto& c : docx_schema()->columns()) wide.entries.push_back({c, 0.0});
    CHECK(select_top_k(wide, 10, *docx_schema())->size() == 10);
}
