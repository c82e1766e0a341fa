#pragma once

#include <array>
#include <vector>

#include "climb/errors.hpp"

namespace climb {
namespace pca {

// Rows are climbers; columns are speed time (s), boulder tops, lead holds.
struct PerformanceMatrix {
    std::vector<std::array<double, 3>> rows;

    static constexpr std::array<const char*, 3> column_names = {
        "speed_time", "boulder_tops", "lead_holds"};
};

struct PCAResult {
    // loadings[v][c]: weight of variable v on component c; columns orthonormal,
    // each oriented so its largest-magnitude entry is positive
    std::array<std::array<double, 3>, 3> loadings;
    std::array<double, 3> eigenvalues; // non-increasing, sum = 3
    std::array<double, 3> explained;   // eigenvalue / 3
    std::vector<std::array<double, 3>> scores; // standardized rows times loadings
};

// PCA of the 3x3 correlation matrix of the standardized columns.
// Throws DomainError on fewer than 3 rows or a zero-variance column.
PCAResult pca(const PerformanceMatrix& data);

} // namespace pca
} // namespace climb
