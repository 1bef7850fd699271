#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "latentry/types.hpp"

namespace latentry {

// Ingestion schema: which columns carry the condition and session labels and
// which columns are technical (never part of the feature matrix).
struct IngestConfig {
    std::string condition_col = "condition";
    std::string session_col = "session";
    std::vector<std::string> exclude_cols = {"side", "flag", "overflow"};

    static IngestConfig from_json_file(const std::string& path);
    static IngestConfig from_json(const std::string& text);
};

struct Observation {
    ConditionId condition = ConditionId::ONL;
    SessionId session = SessionId::M1;
    std::vector<double> features; // length F, finite values only
};

struct Dataset {
    std::vector<Observation> observations; // file row order, preserved
    std::vector<std::string> feature_names; // length F
    std::vector<std::string> technical_columns; // excluded by schema
    std::vector<std::string> warnings; // dropped columns, skipped rows
    std::map<std::pair<ConditionId, SessionId>, std::size_t> counts;

    std::size_t feature_count() const { return feature_names.size(); }
    std::size_t count(ConditionId c, SessionId s) const;
    void recount();
};

// Parses a header CSV file into a Dataset. Rows whose condition or session
// label does not parse are skipped (recorded in warnings); columns that fail
// numeric parsing in any surviving row are dropped with a warning naming the
// column. Throws MissingColumn, RaggedRows, EmptyDataset.
Dataset load_dataset(const std::string& path, const IngestConfig& cfg = {});
Dataset load_dataset_from_string(const std::string& csv_text,
                                 const IngestConfig& cfg = {});

// Drops the named feature columns, re-projecting every observation. Names
// must belong to the current features or the recorded technical columns.
Dataset select_features(const Dataset& ds,
                        const std::vector<std::string>& exclude);

// Keeps only observations of the given conditions; counts recomputed.
Dataset subset_conditions(const Dataset& ds, const std::set<ConditionId>& keep);

// Writes the Dataset back to the ingestion CSV schema (used by synth).
void write_dataset_csv(const Dataset& ds, const std::string& path);

} // namespace latentry
