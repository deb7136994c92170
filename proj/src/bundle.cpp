#include "bitsentry/bundle.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bitsentry/error.hpp"
#include "bitsentry/util.hpp"

namespace bitsentry {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
    return {{"rows", m.rows}, {"cols", m.cols}, {"data", encode_doubles(m.data)}};
}

Matrix matrix_from_json(const json& j) {
    Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
    m.data = decode_doubles(j.at("data").get<std::string>(), m.rows * m.cols);
    return m;
}

// Nodes flatten into parallel arrays; class distributions are stored for
// leaves only (internal nodes carry none), in node order.
json tree_to_json(const DecisionTreeModel& tree) {
    json j;
    std::vector<int> feature, left, right;
    std::vector<double> threshold, leaf_probs;
    for (const TreeNode& node : tree.nodes) {
        feature.push_back(node.feature);
        left.push_back(node.left);
        right.push_back(node.right);
        threshold.push_back(node.threshold);
        if (node.feature < 0)
            leaf_probs.insert(leaf_probs.end(), node.class_probs.begin(),
                              node.class_probs.end());
    }
    j["feature"] = feature;
    j["left"] = left;
    j["right"] = right;
    j["threshold"] = encode_doubles(threshold);
    j["leaf_probs"] = encode_doubles(leaf_probs);
    return j;
}

DecisionTreeModel tree_from_json(const json& j, std::size_t n_classes) {
    DecisionTreeModel tree;
    const auto feature = j.at("feature").get<std::vector<int>>();
    const auto left = j.at("left").get<std::vector<int>>();
    const auto right = j.at("right").get<std::vector<int>>();
    if (left.size() != feature.size() || right.size() != feature.size())
        throw Error(ErrorCode::BundleFormat, "tree arrays disagree on node count");
    const auto threshold =
        decode_doubles(j.at("threshold").get<std::string>(), feature.size());
    std::size_t n_leaves = 0;
    for (int f : feature)
        if (f < 0) ++n_leaves;
    const auto leaf_probs =
        decode_doubles(j.at("leaf_probs").get<std::string>(), n_leaves * n_classes);

    std::size_t cursor = 0;
    tree.nodes.resize(feature.size());
    for (std::size_t i = 0; i < feature.size(); ++i) {
        TreeNode& node = tree.nodes[i];
        node.feature = feature[i];
        node.threshold = threshold[i];
        node.left = left[i];
        node.right = right[i];
        if (node.feature < 0) {
            node.class_probs.assign(leaf_probs.begin() + cursor,
                                    leaf_probs.begin() + cursor + n_classes);
            cursor += n_classes;
        }
    }
    return tree;
}

json classifier_model_to_json(const TrainedClassifier& clf) {
    json j;
    switch (clf.kind) {
        case ClassifierKind::DecisionTree:
            j["tree"] = tree_to_json(std::get<DecisionTreeModel>(clf.model));
            break;
        case ClassifierKind::RandomForest: {
            const auto& forest = std::get<RandomForestModel>(clf.model);
            j["trees"] = json::array();
            for (const auto& tree : forest.trees) j["trees"].push_back(tree_to_json(tree));
            break;
        }
        case ClassifierKind::Knn: {
            const auto& knn = std::get<KnnModel>(clf.model);
            j["k"] = knn.k;
            j["train_x"] = matrix_to_json(knn.train_x);
            j["train_y"] = knn.train_y;
            break;
        }
        case ClassifierKind::GaussianNb: {
            const auto& nb = std::get<GaussianNbModel>(clf.model);
            j["means"] = matrix_to_json(nb.means);
            j["variances"] = matrix_to_json(nb.variances);
            j["priors"] = encode_doubles(nb.priors);
            break;
        }
        case ClassifierKind::LogisticRegression: {
            const auto& lr = std::get<LogisticRegressionModel>(clf.model);
            j["weights"] = matrix_to_json(lr.weights);
            j["bias"] = encode_doubles(lr.bias);
            break;
        }
        case ClassifierKind::AdaBoost: {
            const auto& ada = std::get<AdaBoostModel>(clf.model);
            j["stumps"] = json::array();
            for (const auto& stump : ada.stumps) j["stumps"].push_back(tree_to_json(stump));
            j["alphas"] = encode_doubles(ada.alphas);
            j["prior_probs"] = encode_doubles(ada.prior_probs);
            break;
        }
        default:
            throw Error(ErrorCode::BundleFormat,
                        "cannot serialize classifier kind " + to_string(clf.kind));
    }
    return j;
}

TrainedClassifier classifier_from_json(const json& j) {
    TrainedClassifier clf;
    clf.kind = classifier_kind_from_string(j.at("kind").get<std::string>());
    clf.n_classes = j.at("n_classes").get<std::size_t>();
    clf.n_features = j.at("n_features").get<std::size_t>();
    const json& m = j.at("model");
    switch (clf.kind) {
        case ClassifierKind::DecisionTree:
            clf.model = tree_from_json(m.at("tree"), clf.n_classes);
            break;
        case ClassifierKind::RandomForest: {
            RandomForestModel forest;
            for (const auto& tree : m.at("trees"))
                forest.trees.push_back(tree_from_json(tree, clf.n_classes));
            clf.model = std::move(forest);
            break;
        }
        case ClassifierKind::Knn: {
            KnnModel knn;
            knn.k = m.at("k").get<std::size_t>();
            knn.train_x = matrix_from_json(m.at("train_x"));
            knn.train_y = m.at("train_y").get<std::vector<int>>();
            clf.model = std::move(knn);
            break;
        }
        case ClassifierKind::GaussianNb: {
            GaussianNbModel nb;
            nb.means = matrix_from_json(m.at("means"));
            nb.variances = matrix_from_json(m.at("variances"));
            nb.priors = decode_doubles(m.at("priors").get<std::string>(), clf.n_classes);
            clf.model = std::move(nb);
            break;
        }
        case ClassifierKind::LogisticRegression: {
            LogisticRegressionModel lr;
            lr.weights = matrix_from_json(m.at("weights"));
            lr.bias = decode_doubles(m.at("bias").get<std::string>(), clf.n_classes);
            clf.model = std::move(lr);
            break;
        }
        case ClassifierKind::AdaBoost: {
            AdaBoostModel ada;
            for (const auto& stump : m.at("stumps"))
                ada.stumps.push_back(tree_from_json(stump, clf.n_classes));
            ada.alphas =
                decode_doubles(m.at("alphas").get<std::string>(), ada.stumps.size());
            ada.prior_probs =
                decode_doubles(m.at("prior_probs").get<std::string>(), clf.n_classes);
            clf.model = std::move(ada);
            break;
        }
        default:
            throw Error(ErrorCode::BundleFormat,
                        "bundle names unloadable classifier kind " + to_string(clf.kind));
    }
    return clf;
}

}  // namespace

std::string serialize_bundle(const ModelBundle& bundle) {
    json doc;
    doc["format_version"] = bundle.format_version;
    doc["preprocessing"] = {{"normalization", bundle.normalization},
                            {"tsvd_rank", bundle.tsvd_rank}};
    doc["projector"] = {{"components", matrix_to_json(bundle.projector.components)},
                        {"singular_values", encode_doubles(bundle.projector.singular_values)},
                        {"rank", bundle.projector.rank}};
    doc["classifier"] = {{"kind", to_string(bundle.classifier.kind)},
                         {"n_classes", bundle.classifier.n_classes},
                         {"n_features", bundle.classifier.n_features},
                         {"model", classifier_model_to_json(bundle.classifier)}};
    doc["label_table"] = bundle.label_table;
    doc["provenance"] = {{"manifest_digest", bundle.provenance.manifest_digest},
                         {"seed", bundle.provenance.seed},
                         {"created_at", bundle.provenance.created_at}};
    return std::string(kBundleMagic) + "\n" + doc.dump(2) + "\n";
}

ModelBundle deserialize_bundle(const std::string& text) {
    const std::size_t eol = text.find('\n');
    if (eol == std::string::npos || text.substr(0, eol) != kBundleMagic)
        throw Error(ErrorCode::BundleFormat, "missing BSDM1 magic line");
    json doc;
    try {
        doc = json::parse(text.substr(eol + 1));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::BundleFormat, std::string("bundle JSON: ") + e.what());
    }
    try {
        ModelBundle bundle;
        bundle.format_version = doc.at("format_version").get<int>();
        if (bundle.format_version != kBundleFormatVersion)
            throw Error(ErrorCode::BundleFormat,
                        "unsupported format_version " +
                            std::to_string(bundle.format_version) + " (expected " +
                            std::to_string(kBundleFormatVersion) + ")");
        const json& prep = doc.at("preprocessing");
        bundle.normalization = prep.at("normalization").get<std::string>();
        bundle.tsvd_rank = prep.at("tsvd_rank").get<std::size_t>();
        const json& proj = doc.at("projector");
        bundle.projector.components = matrix_from_json(proj.at("components"));
        bundle.projector.rank = proj.at("rank").get<std::size_t>();
        bundle.projector.singular_values =
            decode_doubles(proj.at("singular_values").get<std::string>(),
                           bundle.projector.rank);
        bundle.classifier = classifier_from_json(doc.at("classifier"));
        bundle.label_table = doc.at("label_table").get<std::vector<std::string>>();
        const json& prov = doc.at("provenance");
        bundle.provenance.manifest_digest = prov.at("manifest_digest").get<std::string>();
        bundle.provenance.seed = prov.at("seed").get<std::uint64_t>();
        bundle.provenance.created_at = prov.at("created_at").get<std::string>();
        return bundle;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::BundleFormat, std::string("bundle fields: ") + e.what());
    }
}

std::string bundle_digest(const ModelBundle& bundle) {
    ModelBundle copy = bundle;
    copy.provenance.created_at.clear();
    return "fnv1a64:" + to_hex(fnv1a64(serialize_bundle(copy)));
}

void save_bundle(const ModelBundle& bundle, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    const std::string text = serialize_bundle(bundle);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error(ErrorCode::IoError, "short write to " + path.string());
}

ModelBundle load_bundle(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::FileNotFound, "no such bundle: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw Error(ErrorCode::IoError, "read failure on " + path.string());
    return deserialize_bundle(buf.str());
}

}  // namespace bitsentry
