#pragma once

// Test-only reference implementations, kept independent of the library code
// paths they are used to check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

// Full eigendecomposition of a symmetric matrix by the classical Jacobi
// method (largest off-diagonal pivot). Structured differently from the
// library's cyclic-sweep solver on purpose; only the mathematics is shared.
inline void symmetric_eigen(std::vector<double> a, std::size_t n,
                            std::vector<double>& values,
                            std::vector<std::vector<double>>& vectors) {
    std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;

    for (int iter = 0; iter < 100000; ++iter) {
        std::size_t p = 0, q = 1;
        double big = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (std::abs(a[i * n + j]) > big) {
                    big = std::abs(a[i * n + j]);
                    p = i;
                    q = j;
                }
            }
        }
        if (big < 1e-14) break;

        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        const double apq = a[p * n + q];
        const double phi = 0.5 * std::atan2(2.0 * apq, aqq - app);
        const double c = std::cos(phi);
        const double s = std::sin(phi);

        for (std::size_t k = 0; k < n; ++k) {
            const double akp = a[k * n + p];
            const double akq = a[k * n + q];
            a[k * n + p] = c * akp - s * akq;
            a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
            const double apk = a[p * n + k];
            const double aqk = a[q * n + k];
            a[p * n + k] = c * apk - s * aqk;
            a[q * n + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
            const double vkp = v[k][p];
            const double vkq = v[k][q];
            v[k][p] = c * vkp - s * vkq;
            v[k][q] = s * vkp + c * vkq;
        }
    }

    values.resize(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = a[i * n + i];

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t x, std::size_t y) { return values[x] > values[y]; });
    std::vector<double> sorted_values(n);
    vectors.assign(n, std::vector<double>(n));
    for (std::size_t k = 0; k < n; ++k) {
        sorted_values[k] = values[idx[k]];
        for (std::size_t i = 0; i < n; ++i) vectors[k][i] = v[i][idx[k]];
    }
    values = sorted_values;
}

// Population covariance of a row-major data matrix, assembled directly.
inline std::vector<double> population_covariance(const std::vector<std::vector<double>>& x) {
    const std::size_t n = x.size();
    const std::size_t f = x[0].size();
    std::vector<double> mean(f, 0.0);
    for (const auto& row : x)
        for (std::size_t i = 0; i < f; ++i) mean[i] += row[i];
    for (double& m : mean) m /= static_cast<double>(n);
    std::vector<double> cov(f * f, 0.0);
    for (const auto& row : x) {
        for (std::size_t i = 0; i < f; ++i) {
            for (std::size_t j = 0; j < f; ++j) {
                cov[i * f + j] += (row[i] - mean[i]) * (row[j] - mean[j]);
            }
        }
    }
    for (double& c : cov) c /= static_cast<double>(n);
    return cov;
}

} // namespace oracle
