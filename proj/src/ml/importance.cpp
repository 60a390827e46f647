#include "phishlens/ml/importance.hpp"

#include <algorithm>
#include <numeric>

#include "phishlens/dataset_csv.hpp"
#include "phishlens/error.hpp"
#include "phishlens/ml/metrics.hpp"
#include "phishlens/ml/rng.hpp"

namespace phishlens::ml {
namespace {

ImportanceRanking make_ranking(const FeatureSchema& schema, const std::vector<double>& scores,
                               ImportanceRanking::Method method) {
    ImportanceRanking r;
    r.method = method;
    for (std::size_t i = 0; i < schema.size(); ++i) r.entries.push_back({schema.columns()[i], scores[i]});
    std::stable_sort(r.entries.begin(), r.entries.end(),
                     [](const ImportanceEntry& a, const ImportanceEntry& b) { return a.score > b.score; });
    return r;
}

std::vector<double> tree_impurity_decrease(const DecisionTreeModel& t, std::size_t width) {
    std::vector<double> acc(width, 0.0);
    const double root = t.nodes.front().samples();
    if (root <= 0) return acc;
    for (const auto& n : t.nodes) {
        if (n.is_leaf()) continue;
        const auto& l = t.nodes[static_cast<std::size_t>(n.left)];
        const auto& r = t.nodes[static_cast<std::size_t>(n.right)];
        double dec = n.samples() * n.impurity - l.samples() * l.impurity - r.samples() * r.impurity;
        acc[static_cast<std::size_t>(n.feature)] += std::max(0.0, dec) / root;
    }
    return acc;
}

ImportanceRanking gini_over(const std::vector<const DecisionTreeModel*>& trees, const FeatureSchema& schema) {
    std::vector<double> total(schema.size(), 0.0);
    for (const auto* t : trees) {
        auto d = tree_impurity_decrease(*t, schema.size());
        for (std::size_t i = 0; i < d.size(); ++i) total[i] += d[i] / static_cast<double>(trees.size());
    }
    double sum = std::accumulate(total.begin(), total.end(), 0.0);
    if (sum > 0)
        for (auto& v : total) v /= sum;
    return make_ranking(schema, total, ImportanceRanking::Method::gini);
}

template <typename Model>
ImportanceRanking permutation(const Model& model, const LabeledDataset& ds, std::uint64_t seed, int n_repeats) {
    if (n_repeats < 1) throw Error(Errc::invalid_argument, "n_repeats must be >= 1");
    const double baseline = evaluate(model, ds).accuracy;  // also checks schema and emptiness
    const std::size_t width = ds.width(), n = ds.size();
    Rng rng(seed);
    std::vector<double> scores(width, 0.0);
    std::vector<double> row;
    std::vector<std::size_t> perm(n);
    for (std::size_t j = 0; j < width; ++j) {
        double drop = 0;
        for (int r = 0; r < n_repeats; ++r) {
            std::iota(perm.begin(), perm.end(), std::size_t{0});
            rng.shuffle(perm);
            std::size_t correct = 0;
            for (std::size_t i = 0; i < n; ++i) {
                row = ds.rows[i];
                row[j] = ds.rows[perm[i]][j];
                correct += model.predict_row(row) == ds.labels[i];
            }
            drop += baseline - static_cast<double>(correct) / static_cast<double>(n);
        }
        scores[j] = std::max(0.0, drop / n_repeats);
    }
    return make_ranking(*ds.schema, scores, ImportanceRanking::Method::permutation);
}

}  // namespace

std::string_view method_name(ImportanceRanking::Method m) noexcept {
    return m == ImportanceRanking::Method::gini ? "gini" : "permutation";
}

ImportanceRanking rank_features_gini(const RandomForestModel& model) {
    std::vector<const DecisionTreeModel*> trees;
    for (const auto& t : model.trees) trees.push_back(&t);
    return gini_over(trees, *model.schema);
}

ImportanceRanking rank_features_gini(const DecisionTreeModel& model) { return gini_over({&model}, *model.schema); }

ImportanceRanking rank_features_permutation(const RandomForestModel& model, const LabeledDataset& ds,
                                            std::uint64_t seed, int n_repeats) {
    return permutation(model, ds, seed, n_repeats);
}

ImportanceRanking rank_features_permutation(const DecisionTreeModel& model, const LabeledDataset& ds,
                                            std::uint64_t seed, int n_repeats) {
    return permutation(model, ds, seed, n_repeats);
}

SchemaPtr select_top_k(const ImportanceRanking& ranking, std::size_t k, const FeatureSchema& base) {
    if (k == 0) throw Error(Errc::invalid_argument, "k must be at least 1");
    if (k > ranking.entries.size())
        throw Error(Errc::invalid_argument, "k = " + std::to_string(k) + " exceeds the " +
                                                std::to_string(ranking.entries.size()) + " ranked features");
    // Re-sort with an explicit schema-order tie-break so callers may pass any entry order.
    std::vector<ImportanceEntry> entries = ranking.entries;
    auto pos = [&](const std::string& name) { return base.index_of(name).value_or(base.size()); };
    std::stable_sort(entries.begin(), entries.end(), [&](const ImportanceEntry& a, const ImportanceEntry& b) {
        if (a.score != b.score) return a.score > b.score;
        return pos(a.feature) < pos(b.feature);
    });
    std::vector<std::string> names;
    for (std::size_t i = 0; i < k; ++i) names.push_back(entries[i].feature);
    return project_schema(base, names);
}

std::string ranking_csv(const ImportanceRanking& ranking) {
    std::string out = "rank,feature,score,method\n";
    std::size_t i = 1;
    for (const auto& e : ranking.entries)
        out += std::to_string(i++) + "," + e.feature + "," + format_value(e.score) + "," +
               std::string(method_name(ranking.method)) + "\n";
    return out;
}

}  // namespace phishlens::ml
