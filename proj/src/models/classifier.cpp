#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "bitsentry/models.hpp"
#include "bitsentry/rng.hpp"
#include "tree_builder.hpp"

namespace bitsentry {

namespace {

const std::array<std::pair<ClassifierKind, const char*>, 8> kKindNames = {{
    {ClassifierKind::RandomForest, "random_forest"},
    {ClassifierKind::DecisionTree, "decision_tree"},
    {ClassifierKind::Knn, "knn"},
    {ClassifierKind::GaussianNb, "naive_bayes"},
    {ClassifierKind::LogisticRegression, "logistic_regression"},
    {ClassifierKind::AdaBoost, "adaboost"},
    {ClassifierKind::GradientBoosting, "gradient_boosting"},
    {ClassifierKind::SvmRbf, "svm_rbf"},
}};

constexpr double kVarianceFloor = 1e-9;

std::size_t infer_n_classes(const std::vector<int>& y) {
    int top = -1;
    for (int label : y) {
        if (label < 0) throw Error(ErrorCode::LabelOutOfRange, "negative class id");
        top = std::max(top, label);
    }
    return static_cast<std::size_t>(top + 1);
}

std::vector<std::size_t> all_rows(std::size_t n) {
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), 0);
    return rows;
}

DecisionTreeModel fit_single_tree(const Matrix& x, const std::vector<int>& y,
                                  const DecisionTreeParams& params, std::size_t n_classes) {
    detail::TreeFitConfig cfg;
    cfg.n_classes = n_classes;
    cfg.max_depth = params.max_depth;
    cfg.min_samples_split = params.min_samples_split;
    return detail::fit_tree(x, y, all_rows(x.rows), {}, cfg);
}

RandomForestModel fit_forest(const Matrix& x, const std::vector<int>& y,
                             const RandomForestParams& params, std::uint64_t seed,
                             std::size_t n_classes) {
    if (params.n_trees < 1) throw Error(ErrorCode::InvalidConfig, "n_trees must be >= 1");
    RandomForestModel forest;
    forest.trees.reserve(params.n_trees);
    const auto features_per_split = static_cast<std::size_t>(
        std::ceil(std::sqrt(static_cast<double>(x.cols))));
    for (std::size_t t = 0; t < params.n_trees; ++t) {
        // Per-tree stream: bootstrap draws first, then per-split feature
        // draws in depth-first build order.
        SplitMix64 rng(seed + t);
        std::vector<std::size_t> bootstrap(x.rows);
        for (auto& idx : bootstrap) idx = rng.next_below(x.rows);

        detail::TreeFitConfig cfg;
        cfg.n_classes = n_classes;
        cfg.max_depth = params.max_depth;
        cfg.min_samples_split = params.min_samples_split;
        cfg.features_per_split = features_per_split;
        cfg.rng = &rng;
        forest.trees.push_back(detail::fit_tree(x, y, bootstrap, {}, cfg));
    }
    return forest;
}

GaussianNbModel fit_gaussian_nb(const Matrix& x, const std::vector<int>& y,
                                std::size_t n_classes) {
    GaussianNbModel model;
    model.means = Matrix(n_classes, x.cols);
    model.variances = Matrix(n_classes, x.cols);
    model.priors.assign(n_classes, 0.0);

    std::vector<double> counts(n_classes, 0.0);
    for (std::size_t i = 0; i < x.rows; ++i) {
        const auto c = static_cast<std::size_t>(y[i]);
        counts[c] += 1.0;
        for (std::size_t j = 0; j < x.cols; ++j) model.means(c, j) += x(i, j);
    }
    for (std::size_t c = 0; c < n_classes; ++c) {
        if (counts[c] == 0.0) continue;
        for (std::size_t j = 0; j < x.cols; ++j) model.means(c, j) /= counts[c];
    }
    for (std::size_t i = 0; i < x.rows; ++i) {
        const auto c = static_cast<std::size_t>(y[i]);
        for (std::size_t j = 0; j < x.cols; ++j) {
            const double d = x(i, j) - model.means(c, j);
            model.variances(c, j) += d * d;
        }
    }
    for (std::size_t c = 0; c < n_classes; ++c) {
        model.priors[c] = counts[c] / static_cast<double>(x.rows);
        for (std::size_t j = 0; j < x.cols; ++j) {
            const double v = counts[c] > 0.0 ? model.variances(c, j) / counts[c] : 0.0;
            model.variances(c, j) = std::max(v, kVarianceFloor);
        }
    }
    return model;
}

void softmax_row(std::span<double> logits) {
    const double top = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double& v : logits) {
        v = std::exp(v - top);
        sum += v;
    }
    for (double& v : logits) v /= sum;
}

LogisticRegressionModel fit_logreg(const Matrix& x, const std::vector<int>& y,
                                   const LogisticRegressionParams& params,
                                   std::size_t n_classes) {
    LogisticRegressionModel model;
    model.weights = Matrix(n_classes, x.cols);
    model.bias.assign(n_classes, 0.0);
    Matrix grad_w;
    std::vector<double> grad_b;
    for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
        logreg_gradient(model.weights, model.bias, x, y, n_classes, params.l2, grad_w, grad_b);
        for (std::size_t i = 0; i < model.weights.data.size(); ++i)
            model.weights.data[i] -= params.learning_rate * grad_w.data[i];
        for (std::size_t c = 0; c < n_classes; ++c)
            model.bias[c] -= params.learning_rate * grad_b[c];
    }
    return model;
}

AdaBoostModel fit_adaboost(const Matrix& x, const std::vector<int>& y,
                           const AdaBoostParams& params, std::size_t n_classes) {
    AdaBoostModel model;
    const std::size_t n = x.rows;
    model.prior_probs.assign(n_classes, 0.0);
    for (int label : y) model.prior_probs[static_cast<std::size_t>(label)] += 1.0 / n;

    std::vector<double> weights(n, 1.0 / static_cast<double>(n));
    const auto rows = all_rows(n);
    const double chance = 1.0 - 1.0 / static_cast<double>(n_classes);

    detail::TreeFitConfig stump_cfg;
    stump_cfg.n_classes = n_classes;
    stump_cfg.max_depth = 1;

    for (std::size_t round = 0; round < params.n_rounds; ++round) {
        DecisionTreeModel stump = detail::fit_tree(x, y, rows, weights, stump_cfg);
        std::vector<bool> wrong(n);
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const TreeNode& leaf = detail::tree_leaf_for(stump, x.row(i));
            const auto pred = argmax_lowest(leaf.class_probs);
            wrong[i] = pred != static_cast<std::size_t>(y[i]);
            if (wrong[i]) err += weights[i];
        }
        if (err >= chance) break;  // no better than chance; discard
        const double alpha =
            std::log((1.0 - err) / std::max(err, 1e-12)) + std::log(n_classes - 1.0);
        model.stumps.push_back(std::move(stump));
        model.alphas.push_back(alpha);
        if (err <= 1e-12) break;

        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (wrong[i]) weights[i] *= std::exp(alpha);
            total += weights[i];
        }
        for (double& w : weights) w /= total;
    }
    return model;
}

Matrix proba_tree(const DecisionTreeModel& tree, const Matrix& x, std::size_t n_classes) {
    Matrix out(x.rows, n_classes);
    for (std::size_t i = 0; i < x.rows; ++i) {
        const TreeNode& leaf = detail::tree_leaf_for(tree, x.row(i));
        std::copy(leaf.class_probs.begin(), leaf.class_probs.end(), out.row(i).begin());
    }
    return out;
}

Matrix proba_forest(const RandomForestModel& forest, const Matrix& x, std::size_t n_classes) {
    Matrix out(x.rows, n_classes);
    for (const auto& tree : forest.trees) {
        for (std::size_t i = 0; i < x.rows; ++i) {
            const TreeNode& leaf = detail::tree_leaf_for(tree, x.row(i));
            auto row = out.row(i);
            for (std::size_t c = 0; c < n_classes; ++c) row[c] += leaf.class_probs[c];
        }
    }
    const double scale = 1.0 / static_cast<double>(forest.trees.size());
    for (double& v : out.data) v *= scale;
    return out;
}

Matrix proba_knn(const KnnModel& model, const Matrix& x, std::size_t n_classes) {
    Matrix out(x.rows, n_classes);
    const std::size_t k_eff = std::min(model.k, model.train_x.rows);
    std::vector<std::pair<double, std::size_t>> dists(model.train_x.rows);
    for (std::size_t i = 0; i < x.rows; ++i) {
        for (std::size_t t = 0; t < model.train_x.rows; ++t)
            dists[t] = {euclidean_distance(x.row(i), model.train_x.row(t)), t};
        std::partial_sort(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(k_eff),
                          dists.end());
        auto row = out.row(i);
        for (std::size_t j = 0; j < k_eff; ++j)
            row[static_cast<std::size_t>(model.train_y[dists[j].second])] +=
                1.0 / static_cast<double>(k_eff);
    }
    return out;
}

Matrix proba_gaussian_nb(const GaussianNbModel& model, const Matrix& x, std::size_t n_classes) {
    Matrix out(x.rows, n_classes);
    constexpr double kLog2Pi = 1.8378770664093453;
    for (std::size_t i = 0; i < x.rows; ++i) {
        auto row = out.row(i);
        for (std::size_t c = 0; c < n_classes; ++c) {
            if (model.priors[c] == 0.0) {
                row[c] = -std::numeric_limits<double>::infinity();
                continue;
            }
            double lp = std::log(model.priors[c]);
            for (std::size_t j = 0; j < x.cols; ++j) {
                const double var = model.variances(c, j);
                const double d = x(i, j) - model.means(c, j);
                lp += -0.5 * (kLog2Pi + std::log(var)) - d * d / (2.0 * var);
            }
            row[c] = lp;
        }
        softmax_row(row);
    }
    return out;
}

Matrix proba_logreg(const LogisticRegressionModel& model, const Matrix& x,
                    std::size_t n_classes) {
    Matrix out(x.rows, n_classes);
    for (std::size_t i = 0; i < x.rows; ++i) {
        auto row = out.row(i);
        for (std::size_t c = 0; c < n_classes; ++c) {
            double z = model.bias[c];
            for (std::size_t j = 0; j < x.cols; ++j) z += model.weights(c, j) * x(i, j);
            row[c] = z;
        }
        softmax_row(row);
    }
    return out;
}

Matrix proba_adaboost(const AdaBoostModel& model, const Matrix& x, std::size_t n_classes) {
    Matrix out(x.rows, n_classes);
    if (model.stumps.empty()) {
        for (std::size_t i = 0; i < x.rows; ++i)
            std::copy(model.prior_probs.begin(), model.prior_probs.end(), out.row(i).begin());
        return out;
    }
    const double alpha_total = std::accumulate(model.alphas.begin(), model.alphas.end(), 0.0);
    for (std::size_t s = 0; s < model.stumps.size(); ++s) {
        for (std::size_t i = 0; i < x.rows; ++i) {
            const TreeNode& leaf = detail::tree_leaf_for(model.stumps[s], x.row(i));
            out(i, argmax_lowest(leaf.class_probs)) += model.alphas[s];
        }
    }
    for (double& v : out.data) v /= alpha_total;
    return out;
}

}  // namespace

bool is_implemented(ClassifierKind kind) {
    return kind != ClassifierKind::GradientBoosting && kind != ClassifierKind::SvmRbf;
}

const std::string& to_string(ClassifierKind kind) {
    static const std::array<std::string, 8> names = [] {
        std::array<std::string, 8> out;
        for (const auto& [k, name] : kKindNames) out[static_cast<std::size_t>(k)] = name;
        return out;
    }();
    return names[static_cast<std::size_t>(kind)];
}

ClassifierKind classifier_kind_from_string(const std::string& name) {
    for (const auto& [kind, kind_name] : kKindNames)
        if (name == kind_name) return kind;
    throw Error(ErrorCode::InvalidConfig, "unknown classifier kind '" + name + "'");
}

const std::vector<ClassifierKind>& implemented_kinds() {
    static const std::vector<ClassifierKind> kinds = {
        ClassifierKind::RandomForest,      ClassifierKind::DecisionTree,
        ClassifierKind::Knn,               ClassifierKind::GaussianNb,
        ClassifierKind::LogisticRegression, ClassifierKind::AdaBoost,
    };
    return kinds;
}

double logreg_loss(const Matrix& weights, const std::vector<double>& bias, const Matrix& x,
                   const std::vector<int>& y, std::size_t n_classes, double l2) {
    double loss = 0.0;
    std::vector<double> logits(n_classes);
    for (std::size_t i = 0; i < x.rows; ++i) {
        for (std::size_t c = 0; c < n_classes; ++c) {
            double z = bias[c];
            for (std::size_t j = 0; j < x.cols; ++j) z += weights(c, j) * x(i, j);
            logits[c] = z;
        }
        softmax_row(logits);
        loss += -std::log(std::max(logits[static_cast<std::size_t>(y[i])], 1e-300));
    }
    loss /= static_cast<double>(x.rows);
    double reg = 0.0;
    for (double w : weights.data) reg += w * w;
    return loss + 0.5 * l2 * reg;
}

void logreg_gradient(const Matrix& weights, const std::vector<double>& bias, const Matrix& x,
                     const std::vector<int>& y, std::size_t n_classes, double l2,
                     Matrix& grad_weights, std::vector<double>& grad_bias) {
    grad_weights = Matrix(n_classes, x.cols);
    grad_bias.assign(n_classes, 0.0);
    const double inv_n = 1.0 / static_cast<double>(x.rows);
    std::vector<double> probs(n_classes);
    for (std::size_t i = 0; i < x.rows; ++i) {
        for (std::size_t c = 0; c < n_classes; ++c) {
            double z = bias[c];
            for (std::size_t j = 0; j < x.cols; ++j) z += weights(c, j) * x(i, j);
            probs[c] = z;
        }
        softmax_row(probs);
        probs[static_cast<std::size_t>(y[i])] -= 1.0;
        for (std::size_t c = 0; c < n_classes; ++c) {
            const double g = probs[c] * inv_n;
            if (g == 0.0) continue;
            for (std::size_t j = 0; j < x.cols; ++j) grad_weights(c, j) += g * x(i, j);
            grad_bias[c] += g;
        }
    }
    for (std::size_t i = 0; i < grad_weights.data.size(); ++i)
        grad_weights.data[i] += l2 * weights.data[i];
}

TrainedClassifier fit(const ClassifierSpec& spec, const Matrix& x, const std::vector<int>& y) {
    if (!is_implemented(spec.kind))
        throw Error(ErrorCode::Unimplemented, "classifier kind " + to_string(spec.kind));
    if (x.rows < 1) throw Error(ErrorCode::EmptyDataset, "fit: no training rows");
    if (x.cols < 1) throw Error(ErrorCode::DimensionMismatch, "fit: zero feature columns");
    if (y.size() != x.rows)
        throw Error(ErrorCode::LabelLengthMismatch,
                    std::to_string(y.size()) + " labels for " + std::to_string(x.rows) + " rows");

    TrainedClassifier out;
    out.kind = spec.kind;
    out.n_classes = infer_n_classes(y);
    out.n_features = x.cols;
    switch (spec.kind) {
        case ClassifierKind::RandomForest:
            out.model = fit_forest(x, y, spec.forest, spec.seed, out.n_classes);
            break;
        case ClassifierKind::DecisionTree:
            out.model = fit_single_tree(x, y, spec.tree, out.n_classes);
            break;
        case ClassifierKind::Knn: {
            if (spec.knn.k < 1) throw Error(ErrorCode::InvalidConfig, "knn k must be >= 1");
            out.model = KnnModel{x, y, spec.knn.k};
            break;
        }
        case ClassifierKind::GaussianNb:
            out.model = fit_gaussian_nb(x, y, out.n_classes);
            break;
        case ClassifierKind::LogisticRegression:
            out.model = fit_logreg(x, y, spec.logreg, out.n_classes);
            break;
        case ClassifierKind::AdaBoost:
            out.model = fit_adaboost(x, y, spec.adaboost, out.n_classes);
            break;
        default:
            throw Error(ErrorCode::Unimplemented, "classifier kind " + to_string(spec.kind));
    }
    return out;
}

Matrix predict_proba(const TrainedClassifier& m, const Matrix& x) {
    if (x.cols != m.n_features)
        throw Error(ErrorCode::DimensionMismatch,
                    "predict: input has " + std::to_string(x.cols) + " features, model expects " +
                        std::to_string(m.n_features));
    return std::visit(
        [&](const auto& model) -> Matrix {
            using T = std::decay_t<decltype(model)>;
            if constexpr (std::is_same_v<T, DecisionTreeModel>)
                return proba_tree(model, x, m.n_classes);
            else if constexpr (std::is_same_v<T, RandomForestModel>)
                return proba_forest(model, x, m.n_classes);
            else if constexpr (std::is_same_v<T, KnnModel>)
                return proba_knn(model, x, m.n_classes);
            else if constexpr (std::is_same_v<T, GaussianNbModel>)
                return proba_gaussian_nb(model, x, m.n_classes);
            else if constexpr (std::is_same_v<T, LogisticRegressionModel>)
                return proba_logreg(model, x, m.n_classes);
            else
                return proba_adaboost(model, x, m.n_classes);
        },
        m.model);
}

std::vector<int> predict(const TrainedClassifier& m, const Matrix& x) {
    const Matrix probs = predict_proba(m, x);
    std::vector<int> labels(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i)
        labels[i] = static_cast<int>(argmax_lowest(probs.row(i)));
    return labels;
}

}  // namespace bitsentry
