#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "bitsentry/rng.hpp"
#include "bitsentry/smote.hpp"

using namespace bitsentry;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, SplitMix64& rng) {
    Matrix x(rows, cols);
    for (double& v : x.data) v = rng.next_double() * 10.0 - 5.0;
    return x;
}

std::map<int, std::size_t> census(const std::vector<int>& y) {
    std::map<int, std::size_t> counts;
    for (int label : y) ++counts[label];
    return counts;
}

}  // namespace

TEST_CASE("balanced input comes back unchanged") {
    SplitMix64 rng(11);
    const Matrix x = random_matrix(6, 4, rng);
    const std::vector<int> y = {0, 1, 2, 0, 1, 2};
    const ResampledData out = smote_oversample(x, y, {5, 99});
    CHECK(out.features == x);
    CHECK(out.labels == y);
}

TEST_CASE("two-point minority synthesizes on the segment") {
    // Class 0 holds 3 rows, class 1 holds rows 3 and 4: deficit of one.
    Matrix x(5, 3);
    const double a[3] = {1.0, 2.0, 3.0};
    const double b[3] = {4.0, 0.0, -2.0};
    for (std::size_t j = 0; j < 3; ++j) {
        x(0, j) = 10.0 + static_cast<double>(j);
        x(1, j) = 11.0 + static_cast<double>(j);
        x(2, j) = 12.0 + static_cast<double>(j);
        x(3, j) = a[j];
        x(4, j) = b[j];
    }
    const std::vector<int> y = {0, 0, 0, 1, 1};
    const std::uint64_t seed = 1234;
    const ResampledData out = smote_oversample(x, y, {5, seed});

    REQUIRE(out.features.rows == 6);
    CHECK(out.labels[5] == 1);

    // Replay the documented draw order: sample index, neighbor slot, lambda.
    SplitMix64 replay(seed);
    const std::size_t pick = replay.next_below(2);
    replay.next_below(1);  // the lone neighbor
    const double lambda = replay.next_double();
    const double* base = pick == 0 ? a : b;
    const double* other = pick == 0 ? b : a;
    for (std::size_t j = 0; j < 3; ++j) {
        const double expect = base[j] + lambda * (other[j] - base[j]);
        CHECK(out.features(5, j) == expect);
        CHECK(out.features(5, j) >= std::min(a[j], b[j]) - 1e-12);
        CHECK(out.features(5, j) <= std::max(a[j], b[j]) + 1e-12);
    }
}

TEST_CASE("size-1 class duplicates its lone sample") {
    Matrix x(4, 2);
    x(0, 0) = 1.0;
    x(1, 0) = 2.0;
    x(2, 0) = 3.0;
    x(3, 0) = 7.5;
    x(3, 1) = -2.25;
    const std::vector<int> y = {0, 0, 0, 1};
    const ResampledData out = smote_oversample(x, y, {5, 42});

    REQUIRE(out.features.rows == 6);
    for (std::size_t r = 4; r < 6; ++r) {
        CHECK(out.labels[r] == 1);
        CHECK(out.features(r, 0) == 7.5);
        CHECK(out.features(r, 1) == -2.25);
    }
}

TEST_CASE("resampling properties hold on random datasets") {
    SplitMix64 rng(777);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t cols = 1 + rng.next_below(6);
        const std::size_t n_classes = 2 + rng.next_below(3);
        std::vector<int> y;
        for (std::size_t c = 0; c < n_classes; ++c) {
            const std::size_t count = 1 + rng.next_below(8);
            for (std::size_t i = 0; i < count; ++i) y.push_back(static_cast<int>(c));
        }
        // Interleave classes so member order is nontrivial.
        for (std::size_t i = y.size(); i > 1; --i)
            std::swap(y[i - 1], y[rng.next_below(i)]);
        const Matrix x = random_matrix(y.size(), cols, rng);
        const ResampleConfig cfg{1 + rng.next_below(6), rng.next_u64()};

        const ResampledData out = smote_oversample(x, y, cfg);

        // Census: all classes sit at the majority count.
        const auto before = census(y);
        std::size_t majority = 0;
        for (const auto& [label, count] : before) majority = std::max(majority, count);
        for (const auto& [label, count] : census(out.labels)) CHECK(count == majority);

        // Originals first, bit-exact, in order.
        REQUIRE(out.features.rows >= x.rows);
        CHECK(std::equal(x.data.begin(), x.data.end(), out.features.data.begin()));
        CHECK(std::equal(y.begin(), y.end(), out.labels.begin()));

        // Synthetic rows grouped by ascending class id.
        for (std::size_t r = x.rows + 1; r < out.features.rows; ++r)
            CHECK(out.labels[r - 1] <= out.labels[r]);

        // Bounding box per class.
        for (std::size_t r = x.rows; r < out.features.rows; ++r) {
            const int label = out.labels[r];
            for (std::size_t j = 0; j < cols; ++j) {
                double lo = 1e300, hi = -1e300;
                for (std::size_t i = 0; i < x.rows; ++i) {
                    if (y[i] != label) continue;
                    lo = std::min(lo, x(i, j));
                    hi = std::max(hi, x(i, j));
                }
                CHECK(out.features(r, j) >= lo - 1e-12);
                CHECK(out.features(r, j) <= hi + 1e-12);
            }
        }

        // Determinism.
        const ResampledData again = smote_oversample(x, y, cfg);
        CHECK(again.features == out.features);
        CHECK(again.labels == out.labels);
    }
}

TEST_CASE("invalid inputs are rejected") {
    Matrix x(2, 2);
    x(0, 0) = 1.0;
    x(1, 1) = 1.0;

    try {
        smote_oversample(Matrix(), {}, {5, 0});
        FAIL("expected EmptyDataset");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyDataset);
    }
    try {
        smote_oversample(x, {0}, {5, 0});
        FAIL("expected LabelLengthMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::LabelLengthMismatch);
    }
    try {
        smote_oversample(x, {0, 1}, {0, 0});
        FAIL("expected InvalidConfig");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidConfig);
    }
    try {
        smote_oversample(x, {0, -1}, {5, 0});
        FAIL("expected LabelOutOfRange");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::LabelOutOfRange);
    }
}
