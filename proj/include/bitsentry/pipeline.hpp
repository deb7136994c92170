#pragma once

#include <string>
#include <vector>

#include "bitsentry/bundle.hpp"
#include "bitsentry/evaluation.hpp"
#include "bitsentry/labels.hpp"

namespace bitsentry {

struct TrainConfig {
    // cv.seed doubles as the master seed for classifier and SMOTE sub-seeds.
    CvConfig cv;
    PreprocessConfig prep;
    // Empty = every implemented kind, in reporting order.
    std::vector<ClassifierKind> kinds;
};

struct TrainOutcome {
    ModelBundle bundle;
    EvaluationReport report;
};

struct PredictionReport {
    std::string path;
    ClassLabel predicted = ClassLabel::BenignAes;
    double confidence = 0.0;
    double load_ms = 0.0;
    double extract_ms = 0.0;
    double predict_ms = 0.0;
};

// One spec per kind. spec.seed derives from the master seed and the kind id,
// so a kind's seed does not depend on the list order.
std::vector<ClassifierSpec> make_specs(const std::vector<ClassifierKind>& kinds,
                                       std::uint64_t seed);

// Cross-validates the configured kinds, then refits the winner on the full
// dataset (TSVD over all rows, then SMOTE over all rows) and bundles it.
TrainOutcome train_bundle(const std::string& manifest_path, const TrainConfig& config);

// Same contract, for a dataset already in memory. manifest_digest may be
// empty; it is stored verbatim in the bundle provenance.
TrainOutcome train_bundle(const DatasetMatrix& dataset, const TrainConfig& config,
                          const std::string& manifest_digest);

// Three separately measured monotonic-clock phases: load = read + parse,
// extract = histogram + projection, predict = classifier inference.
PredictionReport predict_file(const ModelBundle& bundle, const std::string& path);

// `<path>: predicted=<label> confidence=<c>` plus, when with_timing,
// ` load_ms=<l> extract_ms=<e> predict_ms=<p>`.
std::string format_prediction_line(const PredictionReport& report, bool with_timing = true);

}  // namespace bitsentry
