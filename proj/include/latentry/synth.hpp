#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "latentry/dataset.hpp"
#include "latentry/latent_metrics.hpp"
#include "latentry/types.hpp"

namespace latentry {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

// Specification of a synthetic dataset with a planted latent transformation.
//
// Observations live (up to noise) in a fixed 2-D plane of feature space:
// cell mean = base_point + condition offset (+ planted shift at M2). The
// plane is spanned by two exactly orthonormal trigonometric direction
// vectors with equal per-coordinate leverage, and the remaining variance is
// filled with noise orthogonal to the plane so that per-column variances
// come out near 1 and the ingest->standardize->PCA pipeline reproduces the
// planted geometry with minimal distortion.
struct SynthSpec {
    std::uint64_t seed = 42;
    std::size_t n_features = 60;
    std::map<std::pair<ConditionId, SessionId>, std::size_t> counts;
    Vec2 base_point{0.0, 0.0};
    std::map<ConditionId, Vec2> condition_offsets;
    std::map<ConditionId, Vec2> planted_shifts;
    double noise_sigma = 0.3; // within-cell scatter, in latent units

    enum class ShiftModel { free, linear_in_descriptors };
    ShiftModel shift_model = ShiftModel::free;
    // Columns of the 2x5 map from descriptor vectors to shifts, used when
    // shift_model == linear_in_descriptors: shift = sum_j descriptor_j * col_j.
    std::array<Vec2, 5> descriptor_shift_columns{};

    // Off-plane noise std per direction. Negative means automatic: sized so
    // per-column variance is about 1 (and 0 when noise_sigma == 0, keeping
    // within-cell observations identical).
    double offplane_sigma = -1.0;

    double tie_tol = 0.05;

    // Table-shaped default: six conditions, counts 50/60, 33/57, 46/58,
    // 41/60, 51/57, 49/62, spread offsets, distinct shift norms.
    static SynthSpec defaults();

    // Effective per-condition shift (planted_shifts, or the descriptor map).
    Vec2 shift_for(ConditionId c) const;

    std::string to_json() const;
    static SynthSpec from_json(const std::string& text);
    static SynthSpec from_json_file(const std::string& path);
};

Dataset generate(const SynthSpec& spec);

// Ascending ranking of planted shift norms under spec.tie_tol.
Ranking planted_ranking(const SynthSpec& spec);

// Sidecar ground-truth document: shifts, norms, planted ranking.
std::string planted_truth_json(const SynthSpec& spec);

} // namespace latentry
