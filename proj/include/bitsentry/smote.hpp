#pragma once

#include <cstdint>
#include <vector>

#include "bitsentry/matrix.hpp"

namespace bitsentry {

struct ResampleConfig {
    std::size_t k_neighbors = 5;
    std::uint64_t seed = 0;
};

struct ResampledData {
    Matrix features;
    std::vector<int> labels;
};

// Equalizes every class count to the majority count. Synthetic rows are
// s = x + λ·(x_nn − x) with x a uniformly drawn class member, x_nn one of
// its min(k_neighbors, class_size − 1) nearest same-class neighbors
// (Euclidean, distance ties to the lower row index), λ ~ U[0,1) from a
// SplitMix64 stream. Original rows come first, unchanged and in input
// order; synthetic rows follow, grouped by class id ascending. A class of
// size 1 has no neighbors, so its synthetic rows duplicate the lone sample.
//
// Draw order per synthetic row: sample index, neighbor slot, λ. Size-1
// classes consume no draws.
ResampledData smote_oversample(const Matrix& x, const std::vector<int>& y,
                               const ResampleConfig& cfg);

}  // namespace bitsentry
