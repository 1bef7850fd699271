#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "latentry/evaluation.hpp"
#include "latentry/preprocess.hpp"
#include "latentry/types.hpp"

namespace latentry {

// Identification block embedded in every output file. generated_at is the
// only field allowed to differ between runs with identical configuration;
// it is excluded from the config hash.
struct Provenance {
    std::string tool_version;
    std::string config_hash; // hex FNV-1a of the canonical config string
    std::optional<std::uint64_t> model_seed;
    std::optional<std::uint64_t> split_seed;
    std::string config_line; // human-readable run parameters
    std::string generated_at; // ISO-8601 UTC

    static Provenance make(const std::string& canonical_config,
                           std::optional<std::uint64_t> model_seed,
                           std::optional<std::uint64_t> split_seed);
};

std::uint64_t fnv1a64(std::string_view text);

// Full-precision decimal formatting (17 significant digits) for stored
// values; fixed 2-decimal formatting for exported display tables.
std::string format_full(double v);
std::string format_2dp(double v);

std::string hierarchy_label(const std::vector<ConditionId>& expected);

// Displacement table: condition, observed/predicted displacement, centroid
// error, plus RMSE and held-out count where the protocol defines them.
std::string displacement_csv(const EvaluationReport& report,
                             const Provenance& prov);
std::string displacement_json(const EvaluationReport& report,
                              const Provenance& prov);

// Within-session table: condition, per-session ONL distance and rank,
// longitudinal displacement and rank.
std::string within_session_csv(const EvaluationReport& report,
                               const Provenance& prov);
std::string within_session_json(const EvaluationReport& report,
                                const Provenance& prov);

// LOCO folds merged into one table, one row per withheld condition.
std::string loco_csv(const std::vector<EvaluationReport>& folds,
                     const Provenance& prov);
std::string loco_json(const std::vector<EvaluationReport>& folds,
                      const Provenance& prov);

std::string pca_json(const PcaProjection& p, const Provenance& prov);

// Aggregated hierarchy flags and per-protocol summary values.
std::string summary_json(const std::vector<const EvaluationReport*>& reports,
                         const Provenance& prov);

// Plot-ready exports of latent points and per-cell centroids.
std::string latent_points_csv(const std::vector<LatentPoint>& points,
                              const Provenance& prov);
std::string centroids_csv(const std::vector<Centroid>& centroids,
                          const Provenance& prov);

// Audit export of training pairs.
std::string pairs_csv(const std::vector<TrainingPair>& pairs,
                      const Provenance& prov);

void write_text_file(const std::string& path, const std::string& content);

} // namespace latentry
