#include "phishlens/ml/tree.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "phishlens/error.hpp"
#include "phishlens/ml/rng.hpp"

namespace phishlens::ml {
namespace {

double gini(double c0, double c1) {
    double n = c0 + c1;
    if (n <= 0) return 0.0;
    double p0 = c0 / n, p1 = c1 / n;
    return 1.0 - p0 * p0 - p1 * p1;
}

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double score = 0.0;  // weighted child impurity, lower is better
};

class Builder {
public:
    Builder(const LabeledDataset& ds, const TreeParams& params, Rng* rng, int max_features)
        : ds_(ds), params_(params), rng_(rng), max_features_(max_features),
          n_features_(static_cast<int>(ds.width())) {}

    std::vector<TreeNode> build(std::vector<std::size_t> samples) {
        nodes_.clear();
        grow(std::move(samples), 0);
        return std::move(nodes_);
    }

private:
    int grow(std::vector<std::size_t> samples, int depth) {
        TreeNode node;
        for (auto s : samples) node.counts[static_cast<std::size_t>(ds_.labels[s])] += 1;
        node.label = node.counts[1] > node.counts[0] ? 1 : 0;
        node.impurity = gini(node.counts[0], node.counts[1]);
        const int id = static_cast<int>(nodes_.size());
        nodes_.push_back(node);

        bool pure = node.counts[0] == 0 || node.counts[1] == 0;
        bool depth_done = params_.max_depth && depth >= *params_.max_depth;
        if (pure || depth_done || samples.size() < 2 * static_cast<std::size_t>(params_.min_samples_leaf)) return id;

        auto split = best_split(samples);
        if (split.feature < 0) return id;

        std::vector<std::size_t> left, right;
        for (auto s : samples)
            (ds_.rows[s][static_cast<std::size_t>(split.feature)] <= split.threshold ? left : right).push_back(s);
        samples.clear();
        samples.shrink_to_fit();
        nodes_[static_cast<std::size_t>(id)].feature = split.feature;
        nodes_[static_cast<std::size_t>(id)].threshold = split.threshold;
        int l = grow(std::move(left), depth + 1);
        int r = grow(std::move(right), depth + 1);
        nodes_[static_cast<std::size_t>(id)].left = l;
        nodes_[static_cast<std::size_t>(id)].right = r;
        return id;
    }

    // Evaluates one feature; returns false when it is constant over the node.
    bool evaluate_feature(const std::vector<std::size_t>& samples, int f, Split& best) {
        buf_.clear();
        for (auto s : samples) buf_.emplace_back(ds_.rows[s][static_cast<std::size_t>(f)], ds_.labels[s]);
        std::sort(buf_.begin(), buf_.end());
        if (buf_.front().first == buf_.back().first) return false;
        double total[2] = {0, 0};
        for (const auto& [v, y] : buf_) total[y] += 1;
        const double n = static_cast<double>(buf_.size());
        const std::size_t min_leaf = static_cast<std::size_t>(params_.min_samples_leaf);
        double left[2] = {0, 0};
        for (std::size_t i = 0; i + 1 < buf_.size(); ++i) {
            left[buf_[i].second] += 1;
            if (buf_[i].first == buf_[i + 1].first) continue;
            std::size_t nl = i + 1, nr = buf_.size() - nl;
            if (nl < min_leaf || nr < min_leaf) continue;
            double gl = gini(left[0], left[1]);
            double gr = gini(total[0] - left[0], total[1] - left[1]);
            double score = (static_cast<double>(nl) * gl + static_cast<double>(nr) * gr) / n;
            if (best.feature < 0 || score < best.score - 1e-12) {
                best.feature = f;
                best.score = score;
                double mid = buf_[i].first + (buf_[i + 1].first - buf_[i].first) / 2.0;
                // guard against rounding up onto the right value
                best.threshold = mid < buf_[i + 1].first ? mid : buf_[i].first;
            }
        }
        return true;
    }

    Split best_split(const std::vector<std::size_t>& samples) {
        Split best;
        if (!rng_ || max_features_ >= n_features_) {
            for (int f = 0; f < n_features_; ++f) evaluate_feature(samples, f, best);
            return best;
        }
        // Draw features without replacement until max_features non-constant ones were seen.
        std::vector<int> order(static_cast<std::size_t>(n_features_));
        for (int f = 0; f < n_features_; ++f) order[static_cast<std::size_t>(f)] = f;
        int visited = 0;
        for (std::size_t i = 0; i < order.size() && visited < max_features_; ++i) {
            std::size_t j = i + static_cast<std::size_t>(rng_->below(order.size() - i));
            std::swap(order[i], order[j]);
            if (evaluate_feature(samples, order[i], best)) ++visited;
        }
        return best;
    }

    const LabeledDataset& ds_;
    const TreeParams& params_;
    Rng* rng_;
    int max_features_;
    int n_features_;
    std::vector<TreeNode> nodes_;
    std::vector<std::pair<double, int>> buf_;
};

void validate(const LabeledDataset& ds, const TreeParams& params) {
    if (!ds.schema || ds.size() == 0) throw Error(Errc::empty_dataset, "cannot train on an empty dataset");
    if (params.min_samples_leaf < 1) throw Error(Errc::invalid_argument, "min_samples_leaf must be >= 1");
    if (params.max_depth && *params.max_depth < 0) throw Error(Errc::invalid_argument, "max_depth must be >= 0");
}

std::vector<std::string> class_warnings(const LabeledDataset& ds) {
    if (ds.count_label(0) == 0 || ds.count_label(1) == 0)
        return {"training data holds a single class; model is a single leaf"};
    return {};
}

DecisionTreeModel build_tree(const LabeledDataset& ds, const TreeParams& params, std::vector<std::size_t> samples,
                             Rng* rng, int max_features) {
    DecisionTreeModel m;
    m.schema = ds.schema;
    m.params = params;
    m.nodes = Builder(ds, params, rng, max_features).build(std::move(samples));
    return m;
}

}  // namespace

int DecisionTreeModel::predict_row(std::span<const double> x) const {
    std::size_t i = 0;
    while (!nodes[i].is_leaf()) {
        const auto& n = nodes[i];
        i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
    }
    return nodes[i].label;
}

DecisionTreeModel train_decision_tree(const LabeledDataset& ds, const TreeParams& params) {
    validate(ds, params);
    std::vector<std::size_t> samples(ds.size());
    for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = i;
    auto m = build_tree(ds, params, std::move(samples), nullptr, static_cast<int>(ds.width()));
    m.warnings = class_warnings(ds);
    return m;
}

int predict(const DecisionTreeModel& model, const FeatureVector& x) {
    if (!(x.schema() == *model.schema)) throw Error(Errc::schema_mismatch, "feature vector schema differs from the model's");
    return model.predict_row(x.values());
}

int MaxFeatures::resolve(int n_features) const {
    switch (kind) {
        case Kind::all: return n_features;
        case Kind::sqrt: return std::max(1, static_cast<int>(std::sqrt(static_cast<double>(n_features))));
        case Kind::count: return std::clamp(count, 1, n_features);
    }
    return n_features;
}

int majority_vote(std::span<const int> votes) noexcept {
    std::size_t ones = 0;
    for (int v : votes) ones += v == 1;
    return 2 * ones > votes.size() ? 1 : 0;
}

int RandomForestModel::predict_row(std::span<const double> x) const {
    std::size_t ones = 0;
    for (const auto& t : trees) ones += t.predict_row(x) == 1;
    return 2 * ones > trees.size() ? 1 : 0;
}

int predict_forest(const RandomForestModel& model, const FeatureVector& x) {
    if (!(x.schema() == *model.schema)) throw Error(Errc::schema_mismatch, "feature vector schema differs from the model's");
    return model.predict_row(x.values());
}

RandomForestModel train_random_forest(const LabeledDataset& ds, const ForestParams& params) {
    validate(ds, params.tree);
    if (params.n_trees < 1) throw Error(Errc::invalid_argument, "n_trees must be >= 1");
    const std::size_t n = ds.size();
    const int max_features = params.max_features.resolve(static_cast<int>(ds.width()));

    RandomForestModel forest;
    forest.schema = ds.schema;
    forest.params = params;
    forest.trees.resize(static_cast<std::size_t>(params.n_trees));
    std::vector<std::vector<std::uint8_t>> in_bag(params.bootstrap ? forest.trees.size() : 0);

    auto train_one = [&](std::size_t t) {
        Rng rng(derive_seed(params.seed, t));
        std::vector<std::size_t> samples(n);
        if (params.bootstrap) {
            in_bag[t].assign(n, 0);
            for (auto& s : samples) {
                s = static_cast<std::size_t>(rng.below(n));
                in_bag[t][s] = 1;
            }
            std::sort(samples.begin(), samples.end());
        } else {
            for (std::size_t i = 0; i < n; ++i) samples[i] = i;
        }
        forest.trees[t] = build_tree(ds, params.tree, std::move(samples), &rng, max_features);
    };

    unsigned workers = params.jobs > 0 ? static_cast<unsigned>(params.jobs) : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(forest.trees.size()));
    if (workers <= 1) {
        for (std::size_t t = 0; t < forest.trees.size(); ++t) train_one(t);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t t; (t = next.fetch_add(1)) < forest.trees.size();) train_one(t);
            });
        for (auto& th : pool) th.join();
    }

    if (params.bootstrap) {
        std::size_t scored = 0, correct = 0;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t votes = 0, ones = 0;
            for (std::size_t t = 0; t < forest.trees.size(); ++t) {
                if (in_bag[t][i]) continue;
                ++votes;
                ones += forest.trees[t].predict_row(ds.rows[i]) == 1;
            }
            if (votes == 0) continue;
            ++scored;
            correct += (2 * ones > votes ? 1 : 0) == ds.labels[i];
        }
        if (scored) forest.oob_accuracy = static_cast<double>(correct) / static_cast<double>(scored);
    }
    forest.warnings = class_warnings(ds);
    return forest;
}

}  // namespace phishlens::ml
