#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "phishlens/features.hpp"

namespace phishlens::ml {

struct TreeParams {
    std::optional<int> max_depth;  // root has depth 0
    int min_samples_leaf = 1;
};

/// Internal node when feature >= 0 (go left iff x[feature] <= threshold), leaf otherwise.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::array<double, 2> counts{};  // samples per class reaching the node
    int label = 0;                   // argmax of counts, ties to 0
    double impurity = 0.0;

    bool is_leaf() const noexcept { return feature < 0; }
    double samples() const noexcept { return counts[0] + counts[1]; }
};

struct DecisionTreeModel {
    SchemaPtr schema;
    TreeParams params;
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    std::vector<std::string> warnings;

    /// No schema check; `x` must have schema->size() values.
    int predict_row(std::span<const double> x) const;
};

DecisionTreeModel train_decision_tree(const LabeledDataset& ds, const TreeParams& params = {});
/// Throws Error(schema_mismatch) when x's schema differs from the model's.
int predict(const DecisionTreeModel& model, const FeatureVector& x);

struct MaxFeatures {
    enum class Kind { sqrt, all, count } kind = Kind::sqrt;
    int count = 0;

    static MaxFeatures sqrt() { return {Kind::sqrt, 0}; }
    static MaxFeatures all() { return {Kind::all, 0}; }
    static MaxFeatures fixed(int n) { return {Kind::count, n}; }
    int resolve(int n_features) const;
};

struct ForestParams {
    int n_trees = 100;
    MaxFeatures max_features;
    bool bootstrap = true;
    std::uint64_t seed = 7;
    TreeParams tree;
    int jobs = 0;  // worker threads; 0 = hardware concurrency. Does not affect results.
};

struct RandomForestModel {
    SchemaPtr schema;
    ForestParams params;
    std::vector<DecisionTreeModel> trees;
    std::optional<double> oob_accuracy;  // bootstrap forests only
    std::vector<std::string> warnings;

    int predict_row(std::span<const double> x) const;
};

RandomForestModel train_random_forest(const LabeledDataset& ds, const ForestParams& params = {});
int predict_forest(const RandomForestModel& model, const FeatureVector& x);

/// Majority vote over 0/1 votes, ties to 0.
int majority_vote(std::span<const int> votes) noexcept;

// Versioned JSON model files.
std::string serialize_model(const DecisionTreeModel& model);
std::string serialize_model(const RandomForestModel& model);
/// Either kind; a decision tree loads as a forest of one tree without bootstrap.
/// Throws Error(parse_error) for malformed documents.
RandomForestModel load_model(std::string_view json);

}  // namespace phishlens::ml
