#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "bitsentry/evaluation.hpp"
#include "bitsentry/rng.hpp"

using namespace bitsentry;

namespace {

// Three classes on disjoint byte alphabets: rows are trivially separable.
DatasetMatrix separable_dataset(std::size_t per_class) {
    DatasetMatrix data;
    data.features = Matrix(3 * per_class, 256);
    SplitMix64 rng(314);
    for (std::size_t c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < per_class; ++i) {
            const std::size_t r = c * per_class + i;
            double sum = 0.0;
            double w[4];
            for (std::size_t j = 0; j < 4; ++j) {
                w[j] = 0.5 + rng.next_double();
                sum += w[j];
            }
            for (std::size_t j = 0; j < 4; ++j)
                data.features(r, 10 * c + j) = w[j] / sum;
            data.labels.push_back(static_cast<int>(c));
            data.source_paths.push_back("mem");
        }
    }
    return data;
}

std::pair<std::vector<int>, std::vector<int>> streams_from_confusion(
    const std::vector<std::vector<int>>& counts) {
    std::vector<int> actual, predicted;
    for (std::size_t a = 0; a < counts.size(); ++a)
        for (std::size_t p = 0; p < counts[a].size(); ++p)
            for (int rep = 0; rep < counts[a][p]; ++rep) {
                actual.push_back(static_cast<int>(a));
                predicted.push_back(static_cast<int>(p));
            }
    return {actual, predicted};
}

}  // namespace

TEST_CASE("ten samples over two classes split one per fold") {
    const std::vector<int> y = {0, 1, 0, 1, 0, 1, 0, 1, 0, 1};
    const auto folds = stratified_folds(y, {5, 123, true});
    REQUIRE(folds.size() == 5);
    for (const auto& fold : folds) {
        REQUIRE(fold.size() == 2);
        CHECK(y[fold[0]] + y[fold[1]] == 1);  // one of each class
    }
}

TEST_CASE("a class smaller than the fold count is rejected") {
    const std::vector<int> y = {0, 0, 0, 0, 0, 1, 1, 1};
    try {
        stratified_folds(y, {5, 0, true});
        FAIL("expected TooFewSamplesPerClass");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TooFewSamplesPerClass);
    }
}

TEST_CASE("fold assignment is deterministic and stratified within one") {
    SplitMix64 rng(55);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<int> y;
        const std::size_t n_classes = 2 + rng.next_below(3);
        for (std::size_t c = 0; c < n_classes; ++c) {
            const std::size_t count = 3 + rng.next_below(10);
            for (std::size_t i = 0; i < count; ++i) y.push_back(static_cast<int>(c));
        }
        for (std::size_t i = y.size(); i > 1; --i)
            std::swap(y[i - 1], y[rng.next_below(i)]);

        const CvConfig cfg{3, rng.next_u64(), true};
        const auto folds = stratified_folds(y, cfg);
        CHECK(folds == stratified_folds(y, cfg));

        // Partition: every index exactly once.
        std::set<std::size_t> seen;
        for (const auto& fold : folds)
            for (std::size_t idx : fold) CHECK(seen.insert(idx).second);
        CHECK(seen.size() == y.size());

        // Per-class counts across folds differ by at most one.
        for (std::size_t c = 0; c < n_classes; ++c) {
            std::size_t lo = y.size(), hi = 0;
            for (const auto& fold : folds) {
                std::size_t count = 0;
                for (std::size_t idx : fold)
                    if (y[idx] == static_cast<int>(c)) ++count;
                lo = std::min(lo, count);
                hi = std::max(hi, count);
            }
            CHECK(hi - lo <= 1);
        }
    }
}

TEST_CASE("perfect predictions give a diagonal confusion matrix") {
    const std::vector<int> y = {0, 1, 2, 3, 4, 0, 1, 2, 3, 4};
    const MetricsResult result = compute_metrics(y, y, 5);
    CHECK(result.metrics.accuracy == 1.0);
    CHECK(result.metrics.macro_f1 == 1.0);
    CHECK(result.metrics.missing_classes.empty());
    for (std::size_t a = 0; a < 5; ++a)
        for (std::size_t p = 0; p < 5; ++p)
            CHECK(result.confusion.at(a, p) == (a == p ? 2 : 0));
    CHECK(result.confusion.total() == 10);
}

TEST_CASE("three-class confusion matrix reproduces the hand-worked scores") {
    const auto [actual, predicted] =
        streams_from_confusion({{2, 1, 0}, {0, 2, 0}, {0, 0, 3}});
    const MetricsResult result = compute_metrics(actual, predicted, 3);

    // Worked by hand: class 0 P=2/2 R=2/3 F1=4/5; class 1 P=2/3 R=2/2
    // F1=4/5; class 2 all 1. Accuracy 7/8. Macro P=R=8/9, macro F1=13/15.
    const Metrics& m = result.metrics;
    CHECK(std::abs(m.accuracy - 7.0 / 8.0) <= 1e-12);
    CHECK(std::abs(m.per_class[0].precision - 1.0) <= 1e-12);
    CHECK(std::abs(m.per_class[0].recall - 2.0 / 3.0) <= 1e-12);
    CHECK(std::abs(m.per_class[0].f1 - 4.0 / 5.0) <= 1e-12);
    CHECK(std::abs(m.per_class[1].precision - 2.0 / 3.0) <= 1e-12);
    CHECK(std::abs(m.per_class[1].recall - 1.0) <= 1e-12);
    CHECK(std::abs(m.per_class[1].f1 - 4.0 / 5.0) <= 1e-12);
    CHECK(std::abs(m.per_class[2].f1 - 1.0) <= 1e-12);
    CHECK(std::abs(m.macro_precision - 8.0 / 9.0) <= 1e-12);
    CHECK(std::abs(m.macro_recall - 8.0 / 9.0) <= 1e-12);
    CHECK(std::abs(m.macro_f1 - 13.0 / 15.0) <= 1e-12);
    CHECK(m.per_class[0].support == 3);
    CHECK(m.per_class[1].support == 2);
    CHECK(m.per_class[2].support == 3);
}

TEST_CASE("binarized rates recover the 34-of-35 detection case") {
    // 35 positives with 34 detected, 125 negatives with 1 false alarm.
    std::vector<int> actual, predicted;
    for (int i = 0; i < 34; ++i) { actual.push_back(1); predicted.push_back(1); }
    actual.push_back(1); predicted.push_back(0);
    for (int i = 0; i < 124; ++i) { actual.push_back(0); predicted.push_back(0); }
    actual.push_back(0); predicted.push_back(1);

    const std::vector<int> positive = {1, 3};
    const MetricsResult result = compute_metrics(actual, predicted, 2, &positive);
    REQUIRE(result.metrics.binary_rates.has_value());
    const BinaryRates rates = *result.metrics.binary_rates;
    CHECK(std::abs(rates.tpr * 100.0 - 97.14) < 0.005);
    CHECK(std::abs(rates.fnr * 100.0 - 2.86) < 0.005);
    CHECK(std::abs(rates.fpr * 100.0 - 0.80) < 0.005);
    CHECK(std::abs(rates.tpr + rates.fnr - 1.0) <= 1e-12);
}

TEST_CASE("a class absent on both sides is flagged and zeroes the macro") {
    const std::vector<int> actual = {0, 0, 1, 1};
    const std::vector<int> predicted = {0, 0, 1, 1};
    const MetricsResult result = compute_metrics(actual, predicted, 4);
    CHECK(result.metrics.missing_classes == std::vector<int>{2, 3});
    // Two perfect classes, two missing ones: macro F1 = 2/4.
    CHECK(std::abs(result.metrics.macro_f1 - 0.5) <= 1e-12);
}

TEST_CASE("mismatched or empty label streams are rejected") {
    try {
        compute_metrics({0, 1}, {0}, 2);
        FAIL("expected LengthMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::LengthMismatch);
    }
    CHECK_THROWS_AS(compute_metrics({}, {}, 2), Error);
}

TEST_CASE("cross-validation on separable data scores a perfect forest") {
    const DatasetMatrix data = separable_dataset(10);
    std::vector<ClassifierSpec> specs(1);
    specs[0].kind = ClassifierKind::RandomForest;
    specs[0].seed = 77;
    CvConfig cv{5, 9, true};
    PreprocessConfig prep{8, 5};

    const EvaluationReport report = cross_validate(data, specs, cv, prep);
    REQUIRE(report.models.size() == 1);
    CHECK(report.models[0].f1.mean == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(report.models[0].f1.stddev == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(report.best().kind == ClassifierKind::RandomForest);

    // Pooled confusion covers every sample exactly once.
    CHECK(report.models[0].pooled_confusion.total() == data.size());
}

TEST_CASE("unimplemented kinds are reported without failing the run") {
    const DatasetMatrix data = separable_dataset(5);
    std::vector<ClassifierSpec> specs(2);
    specs[0].kind = ClassifierKind::GradientBoosting;
    specs[1].kind = ClassifierKind::DecisionTree;

    const EvaluationReport report = cross_validate(data, specs, {5, 3, true}, {4, 5});
    CHECK_FALSE(report.models[0].implemented);
    CHECK(report.models[0].fold_metrics.empty());
    CHECK(report.models[1].implemented);
    CHECK(report.best().kind == ClassifierKind::DecisionTree);

    const std::string table = format_report_table(report);
    CHECK(table.find("unimplemented") != std::string::npos);

    std::vector<ClassifierSpec> none(1);
    none[0].kind = ClassifierKind::SvmRbf;
    try {
        cross_validate(data, none, {5, 3, true}, {4, 5});
        FAIL("expected InvalidConfig");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidConfig);
    }
}

TEST_CASE("identical configuration reproduces the report byte for byte") {
    const DatasetMatrix data = separable_dataset(6);
    std::vector<ClassifierSpec> specs(2);
    specs[0].kind = ClassifierKind::Knn;
    specs[1].kind = ClassifierKind::GaussianNb;
    const CvConfig cv{3, 21, true};
    const PreprocessConfig prep{6, 5};

    const std::string a = report_to_json(cross_validate(data, specs, cv, prep));
    const std::string b = report_to_json(cross_validate(data, specs, cv, prep));
    CHECK(a == b);
}

TEST_CASE("no validation index reaches the training side of a fold") {
    const DatasetMatrix data = separable_dataset(5);
    std::vector<ClassifierSpec> specs(1);
    specs[0].kind = ClassifierKind::DecisionTree;

    std::size_t folds_seen = 0;
    const FoldObserver observer = [&](std::size_t, const std::vector<std::size_t>& train,
                                      const std::vector<std::size_t>& val) {
        ++folds_seen;
        CHECK(train.size() + val.size() == data.size());
        std::set<std::size_t> train_set(train.begin(), train.end());
        for (std::size_t idx : val) CHECK(train_set.count(idx) == 0);
    };
    cross_validate(data, specs, {5, 8, true}, {4, 5}, observer);
    CHECK(folds_seen == 5);
}

TEST_CASE("the table is shaped like the score report") {
    const DatasetMatrix data = separable_dataset(5);
    std::vector<ClassifierSpec> specs(1);
    specs[0].kind = ClassifierKind::Knn;
    const EvaluationReport report = cross_validate(data, specs, {5, 4, true}, {4, 5});

    const std::string table = format_report_table(report);
    CHECK(table.find("# folds=5 seed=4 rank=4 stddev=population") != std::string::npos);
    CHECK(table.find("Model") != std::string::npos);
    CHECK(table.find("Accuracy") != std::string::npos);
    CHECK(table.find("F1") != std::string::npos);
    CHECK(table.find("1.00 ± 0.00") != std::string::npos);
    CHECK(table.find("best: knn") != std::string::npos);
}
