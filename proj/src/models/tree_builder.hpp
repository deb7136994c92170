#pragma once

#include <cstddef>
#include <vector>

#include "bitsentry/models.hpp"
#include "bitsentry/rng.hpp"

namespace bitsentry::detail {

struct TreeFitConfig {
    std::size_t n_classes = 0;
    std::size_t max_depth = 0;  // 0 = unlimited
    std::size_t min_samples_split = 2;
    // When > 0, each split considers only this many features, drawn without
    // replacement from `rng` (which must then be non-null).
    std::size_t features_per_split = 0;
    SplitMix64* rng = nullptr;
};

// CART with Gini impurity. `rows` selects (possibly repeated) training rows;
// `weights` are per-selected-row sample weights (empty = uniform). Split
// candidates sit at midpoints of sorted distinct values; ties between equal
// gains resolve to the lowest feature index, then the lowest threshold.
DecisionTreeModel fit_tree(const Matrix& x, const std::vector<int>& y,
                           const std::vector<std::size_t>& rows,
                           const std::vector<double>& weights, const TreeFitConfig& cfg);

const TreeNode& tree_leaf_for(const DecisionTreeModel& tree, std::span<const double> row);

}  // namespace bitsentry::detail
