#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "phishlens/features.hpp"
#include "phishlens/ml/tree.hpp"

namespace phishlens::ml {

struct Confusion {
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    std::size_t total() const noexcept { return tp + fp + fn + tn; }
};

/// Malicious (1) is the positive class; *_macro average both classes.
struct EvalMetrics {
    Confusion confusion;
    double accuracy = 0, precision = 0, recall = 0, f1 = 0;
    double precision_macro = 0, recall_macro = 0, f1_macro = 0;
};

/// Harmonic mean of precision and recall; 0 when both are 0.
double f1_score(double precision, double recall) noexcept;

EvalMetrics metrics_from_confusion(const Confusion& c);
/// Throws Error(empty_dataset) for empty input, invalid_argument on length mismatch.
EvalMetrics evaluate_predictions(std::span<const int> predicted, std::span<const int> actual);
/// Schema-checked evaluation; throws Error(schema_mismatch).
EvalMetrics evaluate(const DecisionTreeModel& model, const LabeledDataset& ds);
EvalMetrics evaluate(const RandomForestModel& model, const LabeledDataset& ds);

/// Per-class shuffled split; each class contributes round(n_c * train_fraction) rows to training.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(const LabeledDataset& ds,
                                                                               double train_fraction,
                                                                               std::uint64_t seed);

struct MetricsRow {
    std::string label;  // e.g. "Random Forest"
    EvalMetrics metrics;
};

/// Aligned text table with macro Precision / Recall / F1 columns.
std::string metrics_table(const std::string& title, const std::vector<MetricsRow>& rows);
std::string metrics_json(const std::vector<MetricsRow>& rows);

}  // namespace phishlens::ml
