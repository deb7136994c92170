#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "bitsentry/matrix.hpp"

namespace bitsentry {

enum class ClassifierKind {
    RandomForest,
    DecisionTree,
    Knn,
    GaussianNb,
    LogisticRegression,
    AdaBoost,
    // Recognized so evaluation can report them as unimplemented instead of
    // failing the whole run.
    GradientBoosting,
    SvmRbf,
};

bool is_implemented(ClassifierKind kind);
const std::string& to_string(ClassifierKind kind);
ClassifierKind classifier_kind_from_string(const std::string& name);
// The six trainable kinds, in reporting order.
const std::vector<ClassifierKind>& implemented_kinds();

struct RandomForestParams {
    std::size_t n_trees = 100;
    std::size_t max_depth = 0;  // 0 = unlimited
    std::size_t min_samples_split = 2;
};
struct DecisionTreeParams {
    std::size_t max_depth = 0;
    std::size_t min_samples_split = 2;
};
struct KnnParams {
    std::size_t k = 5;
};
struct LogisticRegressionParams {
    double learning_rate = 0.1;
    std::size_t epochs = 500;
    double l2 = 1e-4;
};
struct AdaBoostParams {
    std::size_t n_rounds = 50;
};

struct ClassifierSpec {
    ClassifierKind kind = ClassifierKind::RandomForest;
    std::uint64_t seed = 0;
    RandomForestParams forest;
    DecisionTreeParams tree;
    KnnParams knn;
    LogisticRegressionParams logreg;
    AdaBoostParams adaboost;
};

// CART node. feature < 0 marks a leaf; rows with x[feature] <= threshold go
// left. class_probs holds the leaf's class proportions.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::vector<double> class_probs;

    bool operator==(const TreeNode&) const = default;
};

struct DecisionTreeModel {
    std::vector<TreeNode> nodes;
    bool operator==(const DecisionTreeModel&) const = default;
};
struct RandomForestModel {
    std::vector<DecisionTreeModel> trees;
    bool operator==(const RandomForestModel&) const = default;
};
struct KnnModel {
    Matrix train_x;
    std::vector<int> train_y;
    std::size_t k = 5;
    bool operator==(const KnnModel&) const = default;
};
struct GaussianNbModel {
    Matrix means;      // C × d
    Matrix variances;  // C × d, floored at 1e-9
    std::vector<double> priors;
    bool operator==(const GaussianNbModel&) const = default;
};
struct LogisticRegressionModel {
    Matrix weights;  // C × d
    std::vector<double> bias;
    bool operator==(const LogisticRegressionModel&) const = default;
};
struct AdaBoostModel {
    std::vector<DecisionTreeModel> stumps;
    std::vector<double> alphas;
    // Class proportions of the training set; used when no stump beat chance.
    std::vector<double> prior_probs;
    bool operator==(const AdaBoostModel&) const = default;
};

struct TrainedClassifier {
    ClassifierKind kind = ClassifierKind::DecisionTree;
    std::size_t n_classes = 0;
    std::size_t n_features = 0;
    std::variant<DecisionTreeModel, RandomForestModel, KnnModel, GaussianNbModel,
                 LogisticRegressionModel, AdaBoostModel>
        model;

    bool operator==(const TrainedClassifier&) const = default;
};

// Deterministic given spec.seed. Class count is inferred as max(y) + 1.
TrainedClassifier fit(const ClassifierSpec& spec, const Matrix& x, const std::vector<int>& y);

// One label per row: argmax of predict_proba with ties to the lowest class id.
std::vector<int> predict(const TrainedClassifier& m, const Matrix& x);

// n × C row-stochastic matrix.
Matrix predict_proba(const TrainedClassifier& m, const Matrix& x);

// Softmax cross-entropy objective used by the logistic-regression trainer,
// exposed so the analytic gradient can be checked against finite differences.
double logreg_loss(const Matrix& weights, const std::vector<double>& bias, const Matrix& x,
                   const std::vector<int>& y, std::size_t n_classes, double l2);
void logreg_gradient(const Matrix& weights, const std::vector<double>& bias, const Matrix& x,
                     const std::vector<int>& y, std::size_t n_classes, double l2,
                     Matrix& grad_weights, std::vector<double>& grad_bias);

}  // namespace bitsentry
