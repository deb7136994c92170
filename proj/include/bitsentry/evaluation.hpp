#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bitsentry/features.hpp"
#include "bitsentry/models.hpp"

namespace bitsentry {

// Row = actual class, column = predicted class.
struct ConfusionMatrix {
    std::size_t n_classes = 0;
    std::vector<std::uint64_t> counts;

    ConfusionMatrix() = default;
    explicit ConfusionMatrix(std::size_t c) : n_classes(c), counts(c * c, 0) {}

    std::uint64_t& at(std::size_t actual, std::size_t predicted) {
        return counts[actual * n_classes + predicted];
    }
    std::uint64_t at(std::size_t actual, std::size_t predicted) const {
        return counts[actual * n_classes + predicted];
    }
    std::uint64_t total() const;

    bool operator==(const ConfusionMatrix&) const = default;
};

struct PerClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::uint64_t support = 0;
};

// Rates of the positive-vs-rest binarization. NaN when the corresponding
// denominator is empty.
struct BinaryRates {
    double tpr = 0.0;
    double fnr = 0.0;
    double fpr = 0.0;
};

struct Metrics {
    double accuracy = 0.0;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    std::vector<PerClassMetrics> per_class;
    std::optional<BinaryRates> binary_rates;
    // Classes absent from both actual and predicted; they still enter the
    // macro denominators with zero scores.
    std::vector<int> missing_classes;
};

struct MetricsResult {
    Metrics metrics;
    ConfusionMatrix confusion;
};

struct CvConfig {
    std::size_t folds = 5;
    std::uint64_t seed = 0;
    bool shuffle = true;
};

struct PreprocessConfig {
    std::size_t tsvd_rank = 16;
    std::size_t smote_neighbors = 5;
};

struct AggregateStat {
    double mean = 0.0;
    double stddev = 0.0;  // population (divide by fold count)
};

struct ModelEvaluation {
    ClassifierKind kind = ClassifierKind::RandomForest;
    bool implemented = true;
    std::vector<Metrics> fold_metrics;
    ConfusionMatrix pooled_confusion;
    AggregateStat accuracy;
    AggregateStat precision;
    AggregateStat recall;
    AggregateStat f1;
};

struct EvaluationReport {
    CvConfig cv;
    PreprocessConfig preprocessing;
    std::vector<ModelEvaluation> models;
    std::size_t best_index = 0;

    const ModelEvaluation& best() const { return models[best_index]; }
};

// Seeded shuffle within each class, then round-robin assignment, so
// per-class counts across folds differ by at most one. Fold contents are
// returned sorted ascending.
std::vector<std::vector<std::size_t>> stratified_folds(const std::vector<int>& y,
                                                       const CvConfig& cfg);

// Macro scores are unweighted means over all n_classes classes (inferred as
// max(label) + 1 when n_classes is 0). binary_rates is filled when
// positive_set is non-null, collapsing labels to positive/negative.
MetricsResult compute_metrics(const std::vector<int>& actual, const std::vector<int>& predicted,
                              std::size_t n_classes = 0,
                              const std::vector<int>* positive_set = nullptr);

// Test instrumentation: observes each fold's train/validation index split.
using FoldObserver =
    std::function<void(std::size_t fold, const std::vector<std::size_t>& train_indices,
                       const std::vector<std::size_t>& val_indices)>;

// Per fold: fit TSVD on the training rows only, SMOTE-balance the
// transformed training rows, fit every implemented spec, and score the
// untouched validation rows. Best model = highest mean macro F1, ties to
// higher mean accuracy, then to listed order.
EvaluationReport cross_validate(const DatasetMatrix& dataset,
                                const std::vector<ClassifierSpec>& specs, const CvConfig& cv,
                                const PreprocessConfig& prep,
                                const FoldObserver& observer = {});

// Human-readable table in the Model | Accuracy | Precision | Recall | F1
// layout, every cell "m ± s" to two decimals.
std::string format_report_table(const EvaluationReport& report);

// Machine-readable JSON rendering of the same report.
std::string report_to_json(const EvaluationReport& report, int indent = 2);

}  // namespace bitsentry
