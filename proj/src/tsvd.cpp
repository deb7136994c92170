#include "bitsentry/tsvd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bitsentry {

namespace {

constexpr double kJacobiTol = 1e-15;
constexpr int kMaxSweeps = 100;

double off_diagonal_norm(const Matrix& a) {
    double acc = 0.0;
    for (std::size_t p = 0; p < a.rows; ++p)
        for (std::size_t q = p + 1; q < a.cols; ++q) acc += 2.0 * a(p, q) * a(p, q);
    return std::sqrt(acc);
}

double frobenius_norm(const Matrix& a) {
    double acc = 0.0;
    for (double v : a.data) acc += v * v;
    return std::sqrt(acc);
}

}  // namespace

EighResult jacobi_eigh(const Matrix& symmetric) {
    const std::size_t n = symmetric.rows;
    if (symmetric.cols != n)
        throw Error(ErrorCode::DimensionMismatch, "jacobi_eigh: matrix is not square");

    Matrix a = symmetric;
    Matrix vt(n, n);
    for (std::size_t i = 0; i < n; ++i) vt(i, i) = 1.0;

    const double scale = frobenius_norm(a);
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (off_diagonal_norm(a) <= kJacobiTol * scale) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;

                const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (tau >= 0.0)
                                     ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                     : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                const double app = a(p, p);
                const double aqq = a(q, q);
                a(p, p) = c * c * app - 2.0 * s * c * apq + s * s * aqq;
                a(q, q) = s * s * app + 2.0 * s * c * apq + c * c * aqq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const double aip = a(i, p);
                    const double aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(p, i) = a(i, p);
                    a(i, q) = s * aip + c * aiq;
                    a(q, i) = a(i, q);
                }
                double* vp = vt.data.data() + p * n;
                double* vq = vt.data.data() + q * n;
                for (std::size_t i = 0; i < n; ++i) {
                    const double rp = vp[i];
                    const double rq = vq[i];
                    vp[i] = c * rp - s * rq;
                    vq[i] = s * rp + c * rq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&a](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

    EighResult result;
    result.eigenvalues.resize(n);
    result.eigenvectors = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        result.eigenvalues[i] = a(order[i], order[i]);
        std::copy(vt.row(order[i]).begin(), vt.row(order[i]).end(),
                  result.eigenvectors.row(i).begin());
    }
    return result;
}

TsvdProjector fit_tsvd(const Matrix& x, std::size_t k) {
    const std::size_t n = x.rows;
    const std::size_t d = x.cols;
    if (n < 1) throw Error(ErrorCode::EmptyDataset, "fit_tsvd: no rows");
    if (k < 1 || k > std::min(n, d))
        throw Error(ErrorCode::RankOutOfRange,
                    "k=" + std::to_string(k) + " outside [1, " +
                        std::to_string(std::min(n, d)) + "]");
    for (double v : x.data)
        if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteInput, "fit_tsvd: non-finite entry");

    // Gram route: d is fixed at 256 for this pipeline, so a dense d×d
    // eigenproblem is exact and cheap.
    Matrix gram(d, d);
    for (std::size_t r = 0; r < n; ++r) {
        const double* row = x.data.data() + r * d;
        for (std::size_t i = 0; i < d; ++i) {
            const double xi = row[i];
            if (xi == 0.0) continue;
            double* gi = gram.data.data() + i * d;
            for (std::size_t j = i; j < d; ++j) gi[j] += xi * row[j];
        }
    }
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < i; ++j) gram(i, j) = gram(j, i);

    const EighResult eig = jacobi_eigh(gram);

    // Eigenvalues below the Gram's rounding noise are indistinguishable from
    // zero; flooring them keeps trailing singular values exactly 0 when k
    // exceeds the numerical rank.
    const double lambda_floor =
        static_cast<double>(d) * 2.220446049250313e-16 * std::max(eig.eigenvalues[0], 0.0);

    TsvdProjector projector;
    projector.rank = k;
    projector.components = Matrix(k, d);
    projector.singular_values.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        const double lambda = eig.eigenvalues[i];
        projector.singular_values[i] = (lambda > lambda_floor) ? std::sqrt(lambda) : 0.0;
        auto src = eig.eigenvectors.row(i);
        auto dst = projector.components.row(i);
        std::size_t peak = 0;
        for (std::size_t j = 1; j < d; ++j)
            if (std::abs(src[j]) > std::abs(src[peak])) peak = j;
        const double sign = (src[peak] < 0.0) ? -1.0 : 1.0;
        for (std::size_t j = 0; j < d; ++j) dst[j] = sign * src[j];
    }
    return projector;
}

Matrix transform(const TsvdProjector& projector, const Matrix& x) {
    if (x.cols != projector.components.cols)
        throw Error(ErrorCode::DimensionMismatch,
                    "transform: input has " + std::to_string(x.cols) +
                        " columns, projector expects " +
                        std::to_string(projector.components.cols));
    return multiply_transposed(x, projector.components);
}

}  // namespace bitsentry
