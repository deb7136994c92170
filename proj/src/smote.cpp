#include "bitsentry/smote.hpp"

#include <algorithm>
#include <cmath>

#include "bitsentry/rng.hpp"

namespace bitsentry {

namespace {

// Indices of the k nearest same-class neighbors of members[self], sorted by
// (distance, row index) ascending.
std::vector<std::size_t> nearest_neighbors(const Matrix& x,
                                           const std::vector<std::size_t>& members,
                                           std::size_t self, std::size_t k) {
    std::vector<std::pair<double, std::size_t>> dists;
    dists.reserve(members.size() - 1);
    const auto anchor = x.row(members[self]);
    for (std::size_t m = 0; m < members.size(); ++m) {
        if (m == self) continue;
        dists.emplace_back(euclidean_distance(anchor, x.row(members[m])), members[m]);
    }
    std::sort(dists.begin(), dists.end());
    std::vector<std::size_t> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k && i < dists.size(); ++i) out.push_back(dists[i].second);
    return out;
}

}  // namespace

ResampledData smote_oversample(const Matrix& x, const std::vector<int>& y,
                               const ResampleConfig& cfg) {
    if (x.rows == 0) throw Error(ErrorCode::EmptyDataset, "smote_oversample: no rows");
    if (y.size() != x.rows)
        throw Error(ErrorCode::LabelLengthMismatch,
                    std::to_string(y.size()) + " labels for " + std::to_string(x.rows) + " rows");
    if (cfg.k_neighbors < 1)
        throw Error(ErrorCode::InvalidConfig, "k_neighbors must be >= 1");

    int n_classes = 0;
    for (int label : y) {
        if (label < 0) throw Error(ErrorCode::LabelOutOfRange, "negative class id");
        n_classes = std::max(n_classes, label + 1);
    }
    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(n_classes));
    for (std::size_t i = 0; i < y.size(); ++i)
        members[static_cast<std::size_t>(y[i])].push_back(i);

    std::size_t majority = 0;
    for (const auto& m : members) majority = std::max(majority, m.size());

    std::size_t total = x.rows;
    for (const auto& m : members)
        if (!m.empty()) total += majority - m.size();

    ResampledData out;
    out.features = Matrix(total, x.cols);
    out.labels.reserve(total);
    std::copy(x.data.begin(), x.data.end(), out.features.data.begin());
    out.labels.assign(y.begin(), y.end());

    SplitMix64 rng(cfg.seed);
    std::size_t write_row = x.rows;
    for (int c = 0; c < n_classes; ++c) {
        const auto& cls = members[static_cast<std::size_t>(c)];
        if (cls.empty() || cls.size() == majority) continue;
        const std::size_t deficit = majority - cls.size();
        const std::size_t k_eff = std::min(cfg.k_neighbors, cls.size() - 1);

        // Neighbor lists are a pure function of the inputs; compute lazily
        // per referenced sample.
        std::vector<std::vector<std::size_t>> neighbor_cache(cls.size());
        for (std::size_t s = 0; s < deficit; ++s) {
            auto dst = out.features.row(write_row);
            if (cls.size() == 1) {
                const auto src = x.row(cls[0]);
                std::copy(src.begin(), src.end(), dst.begin());
            } else {
                const std::size_t pick = rng.next_below(cls.size());
                auto& neighbors = neighbor_cache[pick];
                if (neighbors.empty()) neighbors = nearest_neighbors(x, cls, pick, k_eff);
                const std::size_t nn = neighbors[rng.next_below(neighbors.size())];
                const double lambda = rng.next_double();
                const auto base = x.row(cls[pick]);
                const auto other = x.row(nn);
                for (std::size_t j = 0; j < x.cols; ++j)
                    dst[j] = base[j] + lambda * (other[j] - base[j]);
            }
            out.labels.push_back(c);
            ++write_row;
        }
    }
    return out;
}

}  // namespace bitsentry
