#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "bitsentry/error.hpp"

namespace bitsentry {

// Dense row-major matrix of doubles. Small fixed-dimension problems only;
// no view/stride machinery.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
    std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }

    bool operator==(const Matrix& other) const = default;
};

// A · Bᵀ for A (n×d), B (k×d) -> n×k.
inline Matrix multiply_transposed(const Matrix& a, const Matrix& b) {
    if (a.cols != b.cols)
        throw Error(ErrorCode::DimensionMismatch,
                    "multiply_transposed: " + std::to_string(a.cols) + " vs " +
                        std::to_string(b.cols) + " columns");
    Matrix out(a.rows, b.rows);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* ai = a.data.data() + i * a.cols;
        for (std::size_t j = 0; j < b.rows; ++j) {
            const double* bj = b.data.data() + j * b.cols;
            double acc = 0.0;
            for (std::size_t t = 0; t < a.cols; ++t) acc += ai[t] * bj[t];
            out(i, j) = acc;
        }
    }
    return out;
}

// A · B for A (n×k), B (k×d) -> n×d.
inline Matrix multiply(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows)
        throw Error(ErrorCode::DimensionMismatch,
                    "multiply: inner dimensions " + std::to_string(a.cols) + " vs " +
                        std::to_string(b.rows));
    Matrix out(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t t = 0; t < a.cols; ++t) {
            const double av = a(i, t);
            if (av == 0.0) continue;
            const double* bt = b.data.data() + t * b.cols;
            double* oi = out.data.data() + i * out.cols;
            for (std::size_t j = 0; j < b.cols; ++j) oi[j] += av * bt[j];
        }
    }
    return out;
}

inline double frobenius_distance(const Matrix& a, const Matrix& b) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw Error(ErrorCode::DimensionMismatch, "frobenius_distance: shape mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const double d = a.data[i] - b.data[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

inline double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

// Index of the row maximum; the first (lowest) index wins ties. This is the
// tie rule shared by every classifier's argmax.
inline std::size_t argmax_lowest(std::span<const double> values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] > values[best]) best = i;
    return best;
}

}  // namespace bitsentry
