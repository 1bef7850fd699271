#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "latentry/dataset.hpp"
#include "latentry/types.hpp"

namespace latentry {

// Column-wise z-score parameters. Population convention throughout: both the
// standard deviation and the PCA covariance divide by N, so the two stages
// agree on scale.
struct StandardizationParams {
    std::vector<double> means;
    std::vector<double> stds; // 0 for constant columns
    std::vector<std::size_t> constant_columns;

    std::size_t size() const { return means.size(); }
    bool is_constant(std::size_t col) const;
};

// The latent mapping: standardize, then project onto two orthonormal
// principal axes. Axes follow a deterministic sign convention: the component
// of largest absolute value is non-negative.
struct PcaProjection {
    std::array<std::vector<double>, 2> axes;
    std::array<double, 2> explained_variance = {0.0, 0.0};
    StandardizationParams standardization;
    bool rank_deficient = false; // fewer than 2 nonzero eigenvalues

    std::string to_json() const;
};

StandardizationParams fit_standardization(const Dataset& ds);

// Applies z-scoring column-wise; constant columns map to 0 exactly.
Dataset standardize(const Dataset& ds, const StandardizationParams& sp);

// Top-2 eigenvectors/eigenvalues of the population covariance of ds_std.
// The input is taken as-is (no internal standardization); the returned
// projection carries an identity standardization of matching width.
// Uses the FxF covariance when N > F and the NxN Gram matrix otherwise.
PcaProjection fit_pca(const Dataset& ds_std);

// fit_standardization + standardize + fit_pca, with the fitted
// standardization embedded so project() reproduces the full mapping.
PcaProjection fit_projection(const Dataset& ds);

LatentPoint project(const Observation& obs, const PcaProjection& p);
std::vector<LatentPoint> project_all(const Dataset& ds, const PcaProjection& p);

} // namespace latentry
