#include "phishlens/ml/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <json.hpp>

#include "phishlens/error.hpp"
#include "phishlens/ml/rng.hpp"

namespace phishlens::ml {
namespace {

double ratio(double num, double den) { return den > 0 ? num / den : 0.0; }

template <typename Model>
EvalMetrics evaluate_model(const Model& model, const LabeledDataset& ds) {
    if (!ds.schema || ds.size() == 0) throw Error(Errc::empty_dataset, "cannot evaluate on an empty dataset");
    if (!(*ds.schema == *model.schema))
        throw Error(Errc::schema_mismatch, "dataset schema (" + std::string(format_name(ds.schema->format())) + ", " +
                                               std::to_string(ds.schema->size()) + " columns) differs from the model's (" +
                                               std::string(format_name(model.schema->format())) + ", " +
                                               std::to_string(model.schema->size()) + " columns)");
    std::vector<int> predicted;
    predicted.reserve(ds.size());
    for (const auto& row : ds.rows) predicted.push_back(model.predict_row(row));
    return evaluate_predictions(predicted, ds.labels);
}

}  // namespace

double f1_score(double precision, double recall) noexcept {
    return precision + recall > 0 ? 2 * precision * recall / (precision + recall) : 0.0;
}

EvalMetrics metrics_from_confusion(const Confusion& c) {
    EvalMetrics m;
    m.confusion = c;
    const double tp = static_cast<double>(c.tp), fp = static_cast<double>(c.fp), fn = static_cast<double>(c.fn),
                 tn = static_cast<double>(c.tn);
    m.accuracy = ratio(tp + tn, tp + tn + fp + fn);
    m.precision = ratio(tp, tp + fp);
    m.recall = ratio(tp, tp + fn);
    m.f1 = f1_score(m.precision, m.recall);
    // benign as the positive class
    double p0 = ratio(tn, tn + fn), r0 = ratio(tn, tn + fp);
    m.precision_macro = (m.precision + p0) / 2;
    m.recall_macro = (m.recall + r0) / 2;
    m.f1_macro = (m.f1 + f1_score(p0, r0)) / 2;
    return m;
}

EvalMetrics evaluate_predictions(std::span<const int> predicted, std::span<const int> actual) {
    if (predicted.size() != actual.size()) throw Error(Errc::invalid_argument, "prediction and label counts differ");
    if (actual.empty()) throw Error(Errc::empty_dataset, "cannot evaluate on an empty dataset");
    Confusion c;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        bool p = predicted[i] == 1, a = actual[i] == 1;
        if (p && a) ++c.tp;
        else if (p) ++c.fp;
        else if (a) ++c.fn;
        else ++c.tn;
    }
    return metrics_from_confusion(c);
}

EvalMetrics evaluate(const DecisionTreeModel& model, const LabeledDataset& ds) { return evaluate_model(model, ds); }
EvalMetrics evaluate(const RandomForestModel& model, const LabeledDataset& ds) { return evaluate_model(model, ds); }

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(const LabeledDataset& ds,
                                                                               double train_fraction,
                                                                               std::uint64_t seed) {
    if (!(train_fraction > 0 && train_fraction < 1)) throw Error(Errc::invalid_argument, "train fraction must be in (0, 1)");
    Rng rng(seed);
    std::vector<std::size_t> train, test;
    for (int label : {0, 1}) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < ds.size(); ++i)
            if (ds.labels[i] == label) idx.push_back(i);
        rng.shuffle(idx);
        auto n_train = static_cast<std::size_t>(std::llround(static_cast<double>(idx.size()) * train_fraction));
        train.insert(train.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
        test.insert(test.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
    }
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    return {train, test};
}

std::string metrics_table(const std::string& title, const std::vector<MetricsRow>& rows) {
    std::size_t width = 5;
    for (const auto& r : rows) width = std::max(width, r.label.size());
    std::string out = title + "\n";
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-*s  %9s  %9s  %9s  %9s\n", static_cast<int>(width), "Model", "Precision", "Recall",
                  "F1", "Accuracy");
    out += buf;
    out += std::string(width + 44, '-') + "\n";
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%-*s  %9.4f  %9.4f  %9.4f  %9.4f\n", static_cast<int>(width), r.label.c_str(),
                      r.metrics.precision_macro, r.metrics.recall_macro, r.metrics.f1_macro, r.metrics.accuracy);
        out += buf;
    }
    out += "Metrics are macro-averaged.\n";
    return out;
}

std::string metrics_json(const std::vector<MetricsRow>& rows) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        const auto& m = r.metrics;
        j.push_back({{"model", r.label},
                     {"confusion", {{"tp", m.confusion.tp}, {"fp", m.confusion.fp}, {"fn", m.confusion.fn}, {"tn", m.confusion.tn}}},
                     {"accuracy", m.accuracy},
                     {"precision", m.precision},
                     {"recall", m.recall},
                     {"f1", m.f1},
                     {"precision_macro", m.precision_macro},
                     {"recall_macro", m.recall_macro},
                     {"f1_macro", m.f1_macro}});
    }
    return j.dump(2) + "\n";
}

}  // namespace phishlens::ml
