#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>

namespace oracle {

Eig eig_symmetric(Mat a) {
    const std::size_t n = a.size();
    Mat v(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;

    for (long iter = 0; iter < 1000000; ++iter) {
        // Largest off-diagonal pivot.
        std::size_t p = 0, q = 1;
        double biggest = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (std::abs(a[i][j]) > biggest) {
                    biggest = std::abs(a[i][j]);
                    p = i;
                    q = j;
                }
        double diag_scale = 1e-300;
        for (std::size_t i = 0; i < n; ++i) diag_scale = std::max(diag_scale, std::abs(a[i][i]));
        if (n < 2 || biggest <= 1e-15 * diag_scale) break;

        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t =
            (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        const double apq = a[p][q];
        a[p][p] -= t * apq;
        a[q][q] += t * apq;
        a[p][q] = a[q][p] = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == p || i == q) continue;
            const double aip = a[i][p];
            const double aiq = a[i][q];
            a[i][p] = a[p][i] = c * aip - s * aiq;
            a[i][q] = a[q][i] = s * aip + c * aiq;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double vip = v[i][p];
            const double viq = v[i][q];
            v[i][p] = c * vip - s * viq;
            v[i][q] = s * vip + c * viq;
        }
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&a](std::size_t i, std::size_t j) { return a[i][i] > a[j][j]; });

    Eig out;
    out.values.resize(n);
    out.v.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t rank = 0; rank < n; ++rank) {
        out.values[rank] = a[order[rank]][order[rank]];
        for (std::size_t i = 0; i < n; ++i) out.v[i][rank] = v[i][order[rank]];
    }
    return out;
}

std::vector<double> singular_values(const Mat& a) {
    const std::size_t n = a.size();
    const std::size_t d = a.empty() ? 0 : a[0].size();
    Mat gram(d, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t r = 0; r < n; ++r) gram[i][j] += a[r][i] * a[r][j];

    const Eig eig = eig_symmetric(std::move(gram));
    // Eigenvalues below the Gram's rounding noise are numerically zero;
    // without the floor, structurally-zero directions read back as ~1e-8
    // singular values and poison small-tail comparisons.
    const double floor = static_cast<double>(d) * 2.220446049250313e-16 *
                         std::max(eig.values.empty() ? 0.0 : eig.values[0], 0.0);
    std::vector<double> sv(d);
    for (std::size_t i = 0; i < d; ++i) sv[i] = eig.values[i] > floor ? std::sqrt(eig.values[i]) : 0.0;
    return sv;
}

double tail_error(const Mat& a, std::size_t k) {
    const std::vector<double> sv = singular_values(a);
    double acc = 0.0;
    for (std::size_t i = k; i < sv.size(); ++i) acc += sv[i] * sv[i];
    return std::sqrt(acc);
}

double frobenius(const Mat& a) {
    double acc = 0.0;
    for (const auto& row : a)
        for (double x : row) acc += x * x;
    return std::sqrt(acc);
}

}  // namespace oracle
