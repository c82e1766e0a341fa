#include "climb/pca.hpp"

#include <algorithm>
#include <cmath>

namespace climb {
namespace pca {

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;

// Cyclic Jacobi rotations; plenty for a symmetric 3x3.
void jacobi_eigen(Mat3 a, std::array<double, 3>& values, Mat3& vectors) {
    vectors = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = std::fabs(a[0][1]) + std::fabs(a[0][2]) + std::fabs(a[1][2]);
        if (off < 1e-15) break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (std::fabs(a[p][q]) < 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < 3; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < 3; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (int k = 0; k < 3; ++k) {
                    const double vkp = vectors[k][p], vkq = vectors[k][q];
                    vectors[k][p] = c * vkp - s * vkq;
                    vectors[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    for (int i = 0; i < 3; ++i) values[i] = a[i][i];
}

} // namespace

PCAResult pca(const PerformanceMatrix& data) {
    const int n = static_cast<int>(data.rows.size());
    if (n < 3)
        throw DomainError("PCA needs at least three rows");

    std::array<double, 3> mean{}, sd{};
    for (const auto& row : data.rows)
        for (int v = 0; v < 3; ++v) mean[v] += row[v];
    for (int v = 0; v < 3; ++v) mean[v] /= n;
    for (const auto& row : data.rows)
        for (int v = 0; v < 3; ++v) sd[v] += (row[v] - mean[v]) * (row[v] - mean[v]);
    for (int v = 0; v < 3; ++v) {
        sd[v] = std::sqrt(sd[v] / (n - 1));
        if (!(sd[v] > 0.0))
            throw DomainError(std::string("zero-variance column: ") +
                              PerformanceMatrix::column_names[v]);
    }

    std::vector<std::array<double, 3>> standardized(data.rows.size());
    for (std::size_t i = 0; i < data.rows.size(); ++i)
        for (int v = 0; v < 3; ++v)
            standardized[i][v] = (data.rows[i][v] - mean[v]) / sd[v];

    Mat3 corr{};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            double s = 0.0;
            for (const auto& row : standardized) s += row[a] * row[b];
            corr[a][b] = s / (n - 1);
        }

    std::array<double, 3> values;
    Mat3 vectors;
    jacobi_eigen(corr, values, vectors);

    // order components by eigenvalue, largest first
    std::array<int, 3> order = {0, 1, 2};
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return values[a] > values[b]; });

    PCAResult result;
    for (int c = 0; c < 3; ++c) {
        result.eigenvalues[c] = values[order[c]];
        for (int v = 0; v < 3; ++v) result.loadings[v][c] = vectors[v][order[c]];
    }

    // sign convention: largest-magnitude entry of each column positive
    for (int c = 0; c < 3; ++c) {
        int arg = 0;
        for (int v = 1; v < 3; ++v)
            if (std::fabs(result.loadings[v][c]) > std::fabs(result.loadings[arg][c]))
                arg = v;
        if (result.loadings[arg][c] < 0.0)
            for (int v = 0; v < 3; ++v) result.loadings[v][c] = -result.loadings[v][c];
    }

    for (int c = 0; c < 3; ++c)
        result.explained[c] = result.eigenvalues[c] / 3.0;

    result.scores.resize(standardized.size());
    for (std::size_t i = 0; i < standardized.size(); ++i)
        for (int c = 0; c < 3; ++c) {
            double s = 0.0;
            for (int v = 0; v < 3; ++v) s += standardized[i][v] * result.loadings[v][c];
            result.scores[i][c] = s;
        }
    return result;
}

} // namespace pca
} // namespace climb
