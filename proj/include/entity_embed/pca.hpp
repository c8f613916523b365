#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace entity_embed {

struct Projection2D {
    std::vector<std::array<double, 2>> coords;  // one (pc1, pc2) row per input vector
    std::array<double, 2> eigenvalues{};
};

// Centers the rows and projects onto the top two principal components of the
// covariance (Jacobi eigendecomposition). Component signs are fixed so the
// output is deterministic. Requires n >= 3.
Projection2D project_top2(const std::vector<double>& data, std::size_t n, int dim);

}  // namespace entity_embed
