#pragma once

#include <cstddef>
#include <vector>

#include "bitsentry/matrix.hpp"

namespace bitsentry {

// Rank-k truncated SVD projector. Rows of `components` are the top-k right
// singular vectors (orthonormal); no mean-centering is applied, which is
// what distinguishes this reduction from PCA.
struct TsvdProjector {
    Matrix components;                   // k × d, orthonormal rows
    std::vector<double> singular_values; // length k, non-negative, non-increasing
    std::size_t rank = 0;

    bool operator==(const TsvdProjector&) const = default;
};

// Symmetric eigendecomposition by cyclic Jacobi rotations. Returns
// eigenvalues and matching eigenvectors (rows of `eigenvectors`), sorted by
// eigenvalue descending with ties kept in index order. Convergence: the
// off-diagonal Frobenius norm falls below 1e-12 of the matrix norm, or 100
// sweeps. Deterministic sweep order (p ascending, q ascending).
struct EighResult {
    std::vector<double> eigenvalues;
    Matrix eigenvectors;
};
EighResult jacobi_eigh(const Matrix& symmetric);

// Fits via the 256×256 Gram matrix XᵀX. singular_value_i = sqrt(λ_i), with
// eigenvalues at or below the Gram's rounding noise (d·eps·λ_max) treated as
// exactly 0. Each component row is negated when its largest-magnitude entry
// is negative so the output is unique. When k exceeds the numerical rank the
// trailing singular values are 0 and their components come from the Jacobi
// basis of the null space, which is already orthonormal against the leading
// rows.
TsvdProjector fit_tsvd(const Matrix& x, std::size_t k);

// X · componentsᵀ -> n × k scores.
Matrix transform(const TsvdProjector& projector, const Matrix& x);

}  // namespace bitsentry
