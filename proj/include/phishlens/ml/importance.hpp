#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phishlens/features.hpp"
#include "phishlens/ml/tree.hpp"

namespace phishlens::ml {

struct ImportanceEntry {
    std::string feature;
    double score = 0;
};

struct ImportanceRanking {
    enum class Method { gini, permutation } method = Method::gini;
    std::vector<ImportanceEntry> entries;  // descending; ties keep schema order
};

std::string_view method_name(ImportanceRanking::Method m) noexcept;

/// Mean impurity decrease per feature, normalized to sum 1 (all zero when no tree splits).
ImportanceRanking rank_features_gini(const RandomForestModel& model);
ImportanceRanking rank_features_gini(const DecisionTreeModel& model);

/// Mean accuracy drop over `n_repeats` column shuffles, clipped at 0.
ImportanceRanking rank_features_permutation(const RandomForestModel& model, const LabeledDataset& ds,
                                            std::uint64_t seed, int n_repeats = 5);
ImportanceRanking rank_features_permutation(const DecisionTreeModel& model, const LabeledDataset& ds,
                                            std::uint64_t seed, int n_repeats = 5);

/// Top-k columns as a projection of `base`. Throws Error(invalid_argument) for
/// k == 0 or k larger than the ranking.
SchemaPtr select_top_k(const ImportanceRanking& ranking, std::size_t k, const FeatureSchema& base);

std::string ranking_csv(const ImportanceRanking& ranking);

}  // namespace phishlens::ml
