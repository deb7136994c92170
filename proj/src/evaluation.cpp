#include "bitsentry/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "bitsentry/rng.hpp"
#include "bitsentry/smote.hpp"
#include "bitsentry/tsvd.hpp"

namespace bitsentry {

std::uint64_t ConfusionMatrix::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

std::vector<std::vector<std::size_t>> stratified_folds(const std::vector<int>& y,
                                                       const CvConfig& cfg) {
    if (y.empty()) throw Error(ErrorCode::EmptyDataset, "stratified_folds: no labels");
    if (cfg.folds < 2) throw Error(ErrorCode::InvalidConfig, "folds must be >= 2");

    int n_classes = 0;
    for (int label : y) {
        if (label < 0) throw Error(ErrorCode::LabelOutOfRange, "negative class id");
        n_classes = std::max(n_classes, label + 1);
    }
    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(n_classes));
    for (std::size_t i = 0; i < y.size(); ++i)
        members[static_cast<std::size_t>(y[i])].push_back(i);
    for (std::size_t c = 0; c < members.size(); ++c) {
        if (!members[c].empty() && members[c].size() < cfg.folds)
            throw Error(ErrorCode::TooFewSamplesPerClass,
                        "class " + std::to_string(c) + " has " +
                            std::to_string(members[c].size()) + " samples for " +
                            std::to_string(cfg.folds) + " folds");
    }

    SplitMix64 rng(cfg.seed);
    std::vector<std::vector<std::size_t>> folds(cfg.folds);
    for (auto& cls : members) {
        if (cfg.shuffle) {
            for (std::size_t i = cls.size(); i > 1; --i)
                std::swap(cls[i - 1], cls[rng.next_below(i)]);
        }
        for (std::size_t i = 0; i < cls.size(); ++i)
            folds[i % cfg.folds].push_back(cls[i]);
    }
    for (auto& fold : folds) std::sort(fold.begin(), fold.end());
    return folds;
}

MetricsResult compute_metrics(const std::vector<int>& actual, const std::vector<int>& predicted,
                              std::size_t n_classes, const std::vector<int>* positive_set) {
    if (actual.empty() || actual.size() != predicted.size())
        throw Error(ErrorCode::LengthMismatch,
                    std::to_string(actual.size()) + " actual vs " +
                        std::to_string(predicted.size()) + " predicted labels");
    if (n_classes == 0) {
        int top = 0;
        for (int v : actual) top = std::max(top, v);
        for (int v : predicted) top = std::max(top, v);
        n_classes = static_cast<std::size_t>(top + 1);
    }

    MetricsResult result;
    result.confusion = ConfusionMatrix(n_classes);
    for (std::size_t i = 0; i < actual.size(); ++i) {
        if (actual[i] < 0 || predicted[i] < 0 ||
            static_cast<std::size_t>(actual[i]) >= n_classes ||
            static_cast<std::size_t>(predicted[i]) >= n_classes)
            throw Error(ErrorCode::LabelOutOfRange, "label outside 0.." +
                                                        std::to_string(n_classes - 1));
        ++result.confusion.at(static_cast<std::size_t>(actual[i]),
                              static_cast<std::size_t>(predicted[i]));
    }

    Metrics& m = result.metrics;
    m.per_class.resize(n_classes);
    std::uint64_t diagonal = 0;
    for (std::size_t c = 0; c < n_classes; ++c) {
        std::uint64_t tp = result.confusion.at(c, c);
        std::uint64_t actual_c = 0, predicted_c = 0;
        for (std::size_t j = 0; j < n_classes; ++j) {
            actual_c += result.confusion.at(c, j);
            predicted_c += result.confusion.at(j, c);
        }
        diagonal += tp;
        PerClassMetrics& pc = m.per_class[c];
        pc.support = actual_c;
        pc.precision = predicted_c > 0 ? static_cast<double>(tp) / predicted_c : 0.0;
        pc.recall = actual_c > 0 ? static_cast<double>(tp) / actual_c : 0.0;
        pc.f1 = (pc.precision + pc.recall) > 0.0
                    ? 2.0 * pc.precision * pc.recall / (pc.precision + pc.recall)
                    : 0.0;
        if (actual_c == 0 && predicted_c == 0)
            m.missing_classes.push_back(static_cast<int>(c));
        m.macro_precision += pc.precision;
        m.macro_recall += pc.recall;
        m.macro_f1 += pc.f1;
    }
    m.accuracy = static_cast<double>(diagonal) / static_cast<double>(actual.size());
    m.macro_precision /= static_cast<double>(n_classes);
    m.macro_recall /= static_cast<double>(n_classes);
    m.macro_f1 /= static_cast<double>(n_classes);

    if (positive_set != nullptr) {
        const auto is_positive = [&](int label) {
            return std::find(positive_set->begin(), positive_set->end(), label) !=
                   positive_set->end();
        };
        std::uint64_t tp = 0, fn = 0, fp = 0, tn = 0;
        for (std::size_t i = 0; i < actual.size(); ++i) {
            const bool a = is_positive(actual[i]);
            const bool p = is_positive(predicted[i]);
            if (a && p) ++tp;
            else if (a && !p) ++fn;
            else if (!a && p) ++fp;
            else ++tn;
        }
        BinaryRates rates;
        const double nan = std::numeric_limits<double>::quiet_NaN();
        rates.tpr = (tp + fn) > 0 ? static_cast<double>(tp) / (tp + fn) : nan;
        rates.fnr = (tp + fn) > 0 ? static_cast<double>(fn) / (tp + fn) : nan;
        rates.fpr = (fp + tn) > 0 ? static_cast<double>(fp) / (fp + tn) : nan;
        m.binary_rates = rates;
    }
    return result;
}

namespace {

AggregateStat aggregate(const std::vector<double>& values) {
    AggregateStat stat;
    const double n = static_cast<double>(values.size());
    for (double v : values) stat.mean += v;
    stat.mean /= n;
    double var = 0.0;
    for (double v : values) var += (v - stat.mean) * (v - stat.mean);
    stat.stddev = std::sqrt(var / n);
    return stat;
}

std::uint64_t fold_smote_seed(std::uint64_t base, std::size_t fold) {
    return mix_seed(base + 0x100 + fold);
}

}  // namespace

EvaluationReport cross_validate(const DatasetMatrix& dataset,
                                const std::vector<ClassifierSpec>& specs, const CvConfig& cv,
                                const PreprocessConfig& prep, const FoldObserver& observer) {
    if (specs.empty()) throw Error(ErrorCode::InvalidConfig, "no classifier specs given");
    const std::size_t n = dataset.size();
    if (n == 0) throw Error(ErrorCode::EmptyDataset, "empty dataset");

    std::size_t n_classes = 0;
    for (int label : dataset.labels)
        n_classes = std::max(n_classes, static_cast<std::size_t>(label) + 1);

    const auto folds = stratified_folds(dataset.labels, cv);

    EvaluationReport report;
    report.cv = cv;
    report.preprocessing = prep;
    report.models.resize(specs.size());
    for (std::size_t s = 0; s < specs.size(); ++s) {
        report.models[s].kind = specs[s].kind;
        report.models[s].implemented = is_implemented(specs[s].kind);
        report.models[s].pooled_confusion = ConfusionMatrix(n_classes);
    }

    for (std::size_t f = 0; f < folds.size(); ++f) {
        const auto& val_indices = folds[f];
        std::vector<std::size_t> train_indices;
        train_indices.reserve(n - val_indices.size());
        for (std::size_t g = 0; g < folds.size(); ++g)
            if (g != f) train_indices.insert(train_indices.end(), folds[g].begin(), folds[g].end());
        std::sort(train_indices.begin(), train_indices.end());
        if (observer) observer(f, train_indices, val_indices);

        Matrix train_x(train_indices.size(), dataset.features.cols);
        std::vector<int> train_y(train_indices.size());
        for (std::size_t i = 0; i < train_indices.size(); ++i) {
            const auto src = dataset.features.row(train_indices[i]);
            std::copy(src.begin(), src.end(), train_x.row(i).begin());
            train_y[i] = dataset.labels[train_indices[i]];
        }
        Matrix val_x(val_indices.size(), dataset.features.cols);
        std::vector<int> val_y(val_indices.size());
        for (std::size_t i = 0; i < val_indices.size(); ++i) {
            const auto src = dataset.features.row(val_indices[i]);
            std::copy(src.begin(), src.end(), val_x.row(i).begin());
            val_y[i] = dataset.labels[val_indices[i]];
        }

        TsvdProjector projector;
        ResampledData resampled;
        Matrix val_z;
        try {
            projector = fit_tsvd(train_x, prep.tsvd_rank);
            const Matrix train_z = transform(projector, train_x);
            resampled = smote_oversample(train_z, train_y,
                                         {prep.smote_neighbors, fold_smote_seed(cv.seed, f)});
            val_z = transform(projector, val_x);
        } catch (const Error& e) {
            throw Error(e.code(), "fold " + std::to_string(f) + ": " + e.message());
        }

        for (std::size_t s = 0; s < specs.size(); ++s) {
            if (!report.models[s].implemented) continue;
            try {
                const TrainedClassifier model = fit(specs[s], resampled.features, resampled.labels);
                const std::vector<int> predicted = predict(model, val_z);
                MetricsResult scored = compute_metrics(val_y, predicted, n_classes);
                for (std::size_t i = 0; i < scored.confusion.counts.size(); ++i)
                    report.models[s].pooled_confusion.counts[i] += scored.confusion.counts[i];
                report.models[s].fold_metrics.push_back(std::move(scored.metrics));
            } catch (const Error& e) {
                throw Error(e.code(), "fold " + std::to_string(f) + ", model " +
                                          to_string(specs[s].kind) + ": " + e.message());
            }
        }
    }

    bool any_implemented = false;
    for (auto& row : report.models) {
        if (!row.implemented) continue;
        std::vector<double> acc, prec, rec, f1;
        for (const auto& fm : row.fold_metrics) {
            acc.push_back(fm.accuracy);
            prec.push_back(fm.macro_precision);
            rec.push_back(fm.macro_recall);
            f1.push_back(fm.macro_f1);
        }
        row.accuracy = aggregate(acc);
        row.precision = aggregate(prec);
        row.recall = aggregate(rec);
        row.f1 = aggregate(f1);

        if (!any_implemented) {
            report.best_index = static_cast<std::size_t>(&row - report.models.data());
            any_implemented = true;
        } else {
            const auto& best = report.models[report.best_index];
            const std::size_t idx = static_cast<std::size_t>(&row - report.models.data());
            if (row.f1.mean > best.f1.mean ||
                (row.f1.mean == best.f1.mean && row.accuracy.mean > best.accuracy.mean))
                report.best_index = idx;
        }
    }
    if (!any_implemented)
        throw Error(ErrorCode::InvalidConfig, "no implemented classifier kind in spec list");
    return report;
}

namespace {

std::string format_cell(const AggregateStat& stat) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f ± %.2f", stat.mean, stat.stddev);
    return buf;
}

}  // namespace

std::string format_report_table(const EvaluationReport& report) {
    std::ostringstream out;
    out << "# folds=" << report.cv.folds << " seed=" << report.cv.seed
        << " rank=" << report.preprocessing.tsvd_rank << " stddev=population\n";
    out << "Model               | Accuracy    | Precision   | Recall      | F1\n";
    out << "--------------------+-------------+-------------+-------------+------------\n";
    for (const auto& row : report.models) {
        char name[32];
        std::snprintf(name, sizeof(name), "%-19s", to_string(row.kind).c_str());
        out << name << " | ";
        if (!row.implemented) {
            out << "unimplemented\n";
            continue;
        }
        out << format_cell(row.accuracy) << " | " << format_cell(row.precision) << " | "
            << format_cell(row.recall) << " | " << format_cell(row.f1) << "\n";
    }
    out << "best: " << to_string(report.best().kind) << "\n";
    return out.str();
}

std::string report_to_json(const EvaluationReport& report, int indent) {
    nlohmann::json doc;
    doc["folds"] = report.cv.folds;
    doc["seed"] = report.cv.seed;
    doc["shuffle"] = report.cv.shuffle;
    doc["tsvd_rank"] = report.preprocessing.tsvd_rank;
    doc["smote_neighbors"] = report.preprocessing.smote_neighbors;
    doc["stddev"] = "population";
    doc["best_model"] = to_string(report.best().kind);
    doc["models"] = nlohmann::json::array();
    for (const auto& row : report.models) {
        nlohmann::json entry;
        entry["model"] = to_string(row.kind);
        entry["implemented"] = row.implemented;
        if (row.implemented) {
            entry["accuracy"] = {{"mean", row.accuracy.mean}, {"stddev", row.accuracy.stddev}};
            entry["precision"] = {{"mean", row.precision.mean}, {"stddev", row.precision.stddev}};
            entry["recall"] = {{"mean", row.recall.mean}, {"stddev", row.recall.stddev}};
            entry["f1"] = {{"mean", row.f1.mean}, {"stddev", row.f1.stddev}};
            entry["per_fold"] = nlohmann::json::array();
            for (const auto& fm : row.fold_metrics)
                entry["per_fold"].push_back({{"accuracy", fm.accuracy},
                                             {"precision", fm.macro_precision},
                                             {"recall", fm.macro_recall},
                                             {"f1", fm.macro_f1}});
            entry["pooled_confusion"] = row.pooled_confusion.counts;
        }
        doc["models"].push_back(entry);
    }
    return doc.dump(indent) + "\n";
}

}  // namespace bitsentry
