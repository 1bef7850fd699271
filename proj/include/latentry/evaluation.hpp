#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "latentry/dataset.hpp"
#include "latentry/latent_metrics.hpp"
#include "latentry/mlp.hpp"
#include "latentry/pairing.hpp"
#include "latentry/preprocess.hpp"
#include "latentry/types.hpp"

namespace latentry {

inline constexpr double kDefaultTieTol = 0.05;

// Within-condition held-out split. The held-out count per condition is
// ceiling(holdout_fraction * n_pairs); selection is a seeded uniform draw
// without replacement by default, or the last k pairs when order_based.
struct SplitSpec {
    double holdout_fraction = 0.2;
    std::uint64_t seed = 42;
    enum class Selection { seeded_random, last_k };
    Selection selection = Selection::seeded_random;
};

struct SplitResult {
    std::vector<TrainingPair> train;
    std::vector<TrainingPair> heldout;
};

SplitResult split_held_out(const std::vector<TrainingPair>& pairs,
                           const SplitSpec& spec);

enum class Protocol { full, held_out, leave_condition_out, within_session };
std::string_view to_string(Protocol p);

struct DisplacementRecord {
    ConditionId condition = ConditionId::ONL;
    double d_obs = 0.0;
    std::optional<double> d_pred;
    std::optional<double> e_centroid;
    std::optional<double> pointwise_rmse;
    std::optional<std::size_t> heldout_count;
};

// One row of the within-session table: ONL-relative distance and rank per
// session plus the longitudinal displacement and its rank.
struct WithinSessionRow {
    ConditionId condition = ConditionId::ONL;
    double m1_dist = 0.0;
    std::size_t m1_rank = 0;
    double m2_dist = 0.0;
    std::size_t m2_rank = 0;
    double displacement = 0.0;
    std::size_t long_rank = 0;
};

struct HierarchyFlag {
    std::string label;
    bool satisfied = false;
};

struct EvaluationReport {
    Protocol protocol = Protocol::full;
    std::vector<DisplacementRecord> rows; // one per evaluated condition
    std::vector<WithinSessionRow> within_rows;
    std::optional<double> global_rmse;
    std::optional<Ranking> observed_ranking;
    std::optional<Ranking> predicted_ranking;
    std::vector<HierarchyFlag> hierarchy_flags;
    std::optional<ConditionId> withheld_condition; // LOCO folds only
    std::optional<ModelParams> trained_model;      // full protocol only
    std::size_t trained_pair_count = 0;
    std::uint64_t model_seed = 0;
    std::optional<std::uint64_t> split_seed;
    double tie_tol = kDefaultTieTol;
};

// Projection and pairing stage shared by the protocols: subset, fit the
// aggregated standardization+PCA, project, pair per condition in
// enumeration order. Exposed for the audit export.
std::vector<TrainingPair>
build_condition_pairs(const Dataset& ds, const std::set<ConditionId>& conditions);

// sqrt(mean squared Euclidean error) over two equal-length point lists
// aligned by position.
double pointwise_rmse(const std::vector<LatentPoint>& pred,
                      const std::vector<LatentPoint>& target);

// Full-dataset protocol: fit standardization+PCA on the aggregated subset,
// train on all pairs, predict every condition's M2 from its M1 points.
EvaluationReport eval_full(const Dataset& ds,
                           const std::set<ConditionId>& conditions,
                           const TrainConfig& cfg,
                           double tie_tol = kDefaultTieTol);

// Held-out protocol: train on the retained pairs only; all reported
// quantities are computed over the held-out pairs (M1 reference centroid,
// observed/predicted M2 centroids, per-condition and global RMSE).
EvaluationReport eval_held_out(const Dataset& ds,
                               const std::set<ConditionId>& conditions,
                               const TrainConfig& cfg, const SplitSpec& spec,
                               double tie_tol = kDefaultTieTol);

// Leave-condition-out protocol: one fold per condition, trained on every
// other condition's pairs. The projection is fitted once on the aggregated
// subset and shared across folds.
std::vector<EvaluationReport>
eval_leave_condition_out(const Dataset& ds,
                         const std::set<ConditionId>& conditions,
                         const TrainConfig& cfg,
                         double tie_tol = kDefaultTieTol);

// Within-session protocol: ONL-relative distances and ranks at M1 and M2
// plus longitudinal displacements; no model involved.
EvaluationReport eval_within_session(const Dataset& ds,
                                     const std::set<ConditionId>& conditions,
                                     double tie_tol = kDefaultTieTol);

} // namespace latentry
