#include <json.hpp>

#include "phishlens/error.hpp"
#include "phishlens/ml/tree.hpp"

namespace phishlens::ml {
namespace {

using json = nlohmann::ordered_json;
constexpr int kModelFileVersion = 1;

json schema_json(const FeatureSchema& s) {
    return {{"format", std::string(format_name(s.format()))}, {"version", s.version()}, {"columns", s.columns()}};
}

json tree_params_json(const TreeParams& p) {
    json j;
    j["max_depth"] = p.max_depth ? json(*p.max_depth) : json(nullptr);
    j["min_samples_leaf"] = p.min_samples_leaf;
    j["criterion"] = "gini";
    return j;
}

json nodes_json(const DecisionTreeModel& m) {
    json nodes = json::array();
    for (const auto& n : m.nodes) {
        if (n.is_leaf())
            nodes.push_back({{"counts", {n.counts[0], n.counts[1]}}, {"label", n.label}});
        else
            nodes.push_back({{"feature", n.feature},
                             {"threshold", n.threshold},
                             {"left", n.left},
                             {"right", n.right},
                             {"counts", {n.counts[0], n.counts[1]}},
                             {"impurity", n.impurity}});
    }
    return nodes;
}

double leaf_impurity(double c0, double c1) {
    double n = c0 + c1;
    if (n <= 0) return 0;
    return 1 - (c0 / n) * (c0 / n) - (c1 / n) * (c1 / n);
}

DecisionTreeModel tree_from_json(const json& j, const SchemaPtr& schema, const TreeParams& params) {
    DecisionTreeModel m;
    m.schema = schema;
    m.params = params;
    const auto& nodes = j.at("nodes");
    if (!nodes.is_array() || nodes.empty()) throw Error(Errc::parse_error, "tree without nodes");
    const int count = static_cast<int>(nodes.size());
    for (const auto& jn : nodes) {
        TreeNode n;
        n.counts = {jn.at("counts").at(0).get<double>(), jn.at("counts").at(1).get<double>()};
        n.label = n.counts[1] > n.counts[0] ? 1 : 0;
        n.impurity = leaf_impurity(n.counts[0], n.counts[1]);
        if (jn.contains("feature")) {
            n.feature = jn.at("feature").get<int>();
            n.threshold = jn.at("threshold").get<double>();
            n.left = jn.at("left").get<int>();
            n.right = jn.at("right").get<int>();
            if (n.feature < 0 || static_cast<std::size_t>(n.feature) >= schema->size())
                throw Error(Errc::parse_error, "split feature index out of range");
        }
        if (jn.contains("label") && jn.at("label").get<int>() != n.label)
            throw Error(Errc::parse_error, "leaf label disagrees with class counts");
        m.nodes.push_back(n);
    }
    // children must point forward so traversal terminates
    for (int i = 0; i < count; ++i) {
        const auto& n = m.nodes[static_cast<std::size_t>(i)];
        if (!n.is_leaf() && (n.left <= i || n.right <= i || n.left >= count || n.right >= count))
            throw Error(Errc::parse_error, "malformed tree links");
    }
    return m;
}

}  // namespace

std::string serialize_model(const DecisionTreeModel& model) {
    json j;
    j["model_file_version"] = kModelFileVersion;
    j["kind"] = "decision_tree";
    j["schema"] = schema_json(*model.schema);
    j["params"] = tree_params_json(model.params);
    j["nodes"] = nodes_json(model);
    return j.dump(1) + "\n";
}

std::string serialize_model(const RandomForestModel& model) {
    json j;
    j["model_file_version"] = kModelFileVersion;
    j["kind"] = "random_forest";
    j["schema"] = schema_json(*model.schema);
    const auto& p = model.params;
    json mf;
    switch (p.max_features.kind) {
        case MaxFeatures::Kind::sqrt: mf = "sqrt"; break;
        case MaxFeatures::Kind::all: mf = "all"; break;
        case MaxFeatures::Kind::count: mf = p.max_features.count; break;
    }
    j["params"] = {{"n_trees", p.n_trees},
                   {"max_features", mf},
                   {"bootstrap", p.bootstrap},
                   {"seed", std::to_string(p.seed)},
                   {"tree", tree_params_json(p.tree)}};
    j["oob_accuracy"] = model.oob_accuracy ? json(*model.oob_accuracy) : json(nullptr);
    json trees = json::array();
    for (const auto& t : model.trees) trees.push_back({{"nodes", nodes_json(t)}});
    j["trees"] = std::move(trees);
    return j.dump(1) + "\n";
}

RandomForestModel load_model(std::string_view text) {
    try {
        json j = json::parse(text);
        if (j.at("model_file_version").get<int>() != kModelFileVersion)
            throw Error(Errc::parse_error, "unsupported model file version");
        const auto& js = j.at("schema");
        auto format = parse_format(js.at("format").get<std::string>());
        if (!format) throw Error(Errc::parse_error, "unknown schema format");
        auto schema = std::make_shared<const FeatureSchema>(*format, js.at("columns").get<std::vector<std::string>>(),
                                                            js.at("version").get<int>());
        auto read_tree_params = [](const json& jp) {
            TreeParams tp;
            if (!jp.at("max_depth").is_null()) tp.max_depth = jp.at("max_depth").get<int>();
            tp.min_samples_leaf = jp.at("min_samples_leaf").get<int>();
            return tp;
        };
        RandomForestModel forest;
        forest.schema = schema;
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "decision_tree") {
            auto tp = read_tree_params(j.at("params"));
            forest.params.n_trees = 1;
            forest.params.bootstrap = false;
            forest.params.max_features = MaxFeatures::all();
            forest.params.tree = tp;
            forest.trees.push_back(tree_from_json(j, schema, tp));
        } else if (kind == "random_forest") {
            const auto& jp = j.at("params");
            auto& p = forest.params;
            p.n_trees = jp.at("n_trees").get<int>();
            const auto& mf = jp.at("max_features");
            if (mf.is_number()) p.max_features = MaxFeatures::fixed(mf.get<int>());
            else p.max_features = mf.get<std::string>() == "all" ? MaxFeatures::all() : MaxFeatures::sqrt();
            p.bootstrap = jp.at("bootstrap").get<bool>();
            p.seed = std::stoull(jp.at("seed").get<std::string>());
            p.tree = read_tree_params(jp.at("tree"));
            if (!j.at("oob_accuracy").is_null()) forest.oob_accuracy = j.at("oob_accuracy").get<double>();
            for (const auto& jt : j.at("trees")) forest.trees.push_back(tree_from_json(jt, schema, p.tree));
            if (forest.trees.empty() || static_cast<int>(forest.trees.size()) != p.n_trees)
                throw Error(Errc::parse_error, "tree count disagrees with n_trees");
        } else {
            throw Error(Errc::parse_error, "unknown model kind '" + kind + "'");
        }
        return forest;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::parse_error, std::string("model file: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw Error(Errc::parse_error, std::string("model file: ") + e.what());
    } catch (const std::out_of_range& e) {
        throw Error(Errc::parse_error, std::string("model file: ") + e.what());
    }
}

}  // namespace phishlens::ml
