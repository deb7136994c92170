#include "bitsentry/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "bitsentry/bitstream.hpp"
#include "bitsentry/error.hpp"
#include "bitsentry/features.hpp"
#include "bitsentry/rng.hpp"
#include "bitsentry/smote.hpp"
#include "bitsentry/tsvd.hpp"
#include "bitsentry/util.hpp"

namespace bitsentry {

namespace {

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
}

std::string digest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::FileNotFound, "no such manifest: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return "fnv1a64:" + to_hex(fnv1a64(buf.str()));
}

double elapsed_ms(std::chrono::steady_clock::time_point from,
                  std::chrono::steady_clock::time_point to) {
    return std::chrono::duration<double, std::milli>(to - from).count();
}

}  // namespace

std::vector<ClassifierSpec> make_specs(const std::vector<ClassifierKind>& kinds,
                                       std::uint64_t seed) {
    const std::vector<ClassifierKind>& effective = kinds.empty() ? implemented_kinds() : kinds;
    std::vector<ClassifierSpec> specs;
    specs.reserve(effective.size());
    for (ClassifierKind kind : effective) {
        ClassifierSpec spec;
        spec.kind = kind;
        spec.seed = mix_seed(seed + 0x300 + static_cast<std::uint64_t>(kind));
        specs.push_back(spec);
    }
    return specs;
}

TrainOutcome train_bundle(const DatasetMatrix& dataset, const TrainConfig& config,
                          const std::string& manifest_digest) {
    const std::vector<ClassifierSpec> specs = make_specs(config.kinds, config.cv.seed);

    TrainOutcome outcome;
    outcome.report = cross_validate(dataset, specs, config.cv, config.prep);
    const ClassifierSpec& winner = specs[outcome.report.best_index];

    // Final refit on everything; CV only picked the winning ClassifierSpec.
    TsvdProjector projector = fit_tsvd(dataset.features, config.prep.tsvd_rank);
    const Matrix projected = transform(projector, dataset.features);
    const ResampledData balanced =
        smote_oversample(projected, dataset.labels,
                         {config.prep.smote_neighbors, mix_seed(config.cv.seed + 0x200)});

    ModelBundle& bundle = outcome.bundle;
    bundle.tsvd_rank = config.prep.tsvd_rank;
    bundle.projector = std::move(projector);
    bundle.classifier = fit(winner, balanced.features, balanced.labels);
    bundle.label_table = default_label_table();
    bundle.provenance.manifest_digest = manifest_digest;
    bundle.provenance.seed = config.cv.seed;
    bundle.provenance.created_at = utc_timestamp();
    return outcome;
}

TrainOutcome train_bundle(const std::string& manifest_path, const TrainConfig& config) {
    return train_bundle(load_dataset(manifest_path), config, digest_file(manifest_path));
}

PredictionReport predict_file(const ModelBundle& bundle, const std::string& path) {
    using clock = std::chrono::steady_clock;
    PredictionReport report;
    report.path = path;

    const auto t0 = clock::now();
    const BitstreamFile file = load_bitstream(path);
    const auto t1 = clock::now();

    const FeatureVector histogram = byte_histogram(file.payload);
    Matrix row(1, histogram.size());
    std::copy(histogram.begin(), histogram.end(), row.data.begin());
    if (bundle.classifier.n_features != bundle.projector.rank)
        throw Error(ErrorCode::DimensionMismatch,
                    "bundle projector rank " + std::to_string(bundle.projector.rank) +
                        " does not match classifier input width " +
                        std::to_string(bundle.classifier.n_features));
    const Matrix projected = transform(bundle.projector, row);
    const auto t2 = clock::now();

    const Matrix probs = predict_proba(bundle.classifier, projected);
    const std::size_t winner = argmax_lowest(probs.row(0));
    const auto t3 = clock::now();

    if (winner >= bundle.label_table.size())
        throw Error(ErrorCode::LabelOutOfRange, "predicted class id " +
                                                    std::to_string(winner) +
                                                    " exceeds the bundle label table");
    report.predicted = static_cast<ClassLabel>(winner);
    report.confidence = probs(0, winner);
    report.load_ms = elapsed_ms(t0, t1);
    report.extract_ms = elapsed_ms(t1, t2);
    report.predict_ms = elapsed_ms(t2, t3);
    return report;
}

std::string format_prediction_line(const PredictionReport& report, bool with_timing) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "predicted=%s confidence=%.4f",
                  to_string(report.predicted).c_str(), report.confidence);
    std::string line = report.path + ": " + buf;
    if (with_timing) {
        std::snprintf(buf, sizeof(buf), " load_ms=%.3f extract_ms=%.3f predict_ms=%.3f",
                      report.load_ms, report.extract_ms, report.predict_ms);
        line += buf;
    }
    return line;
}

}  // namespace bitsentry
