#include "latentry/report_io.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "latentry/cli.hpp"
#include "latentry/errors.hpp"

namespace latentry {

namespace {

std::string iso8601_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string opt_full(const std::optional<double>& v) {
    return v ? format_full(*v) : std::string();
}

std::string opt_2dp(const std::optional<double>& v) {
    return v ? format_2dp(*v) : std::string();
}

// Common "# key: value" comment block at the top of CSV exports.
void csv_header(std::ostream& os, const Provenance& prov) {
    os << "# latentry " << prov.tool_version << "\n";
    os << "# config_hash: " << prov.config_hash << "\n";
    if (prov.model_seed) os << "# model_seed: " << *prov.model_seed << "\n";
    if (prov.split_seed) os << "# split_seed: " << *prov.split_seed << "\n";
    if (!prov.config_line.empty()) os << "# config: " << prov.config_line << "\n";
    os << "# generated_at: " << prov.generated_at << "\n";
}

void provenance_json(std::ostream& os, const Provenance& prov) {
    os << "  \"provenance\": {\"tool_version\": \"" << prov.tool_version
       << "\", \"config_hash\": \"" << prov.config_hash << '\"';
    if (prov.model_seed) os << ", \"model_seed\": " << *prov.model_seed;
    if (prov.split_seed) os << ", \"split_seed\": " << *prov.split_seed;
    if (!prov.config_line.empty()) os << ", \"config\": \"" << prov.config_line << '\"';
    os << ", \"generated_at\": \"" << prov.generated_at << "\"}";
}

void ranking_json(std::ostream& os, const char* name, const Ranking& r) {
    os << "  \"" << name << "\": {\"order\": [";
    for (std::size_t i = 0; i < r.ordered.size(); ++i) {
        if (i) os << ",";
        os << '"' << to_string(r.ordered[i].first) << '"';
    }
    os << "], \"values\": [";
    for (std::size_t i = 0; i < r.ordered.size(); ++i) {
        if (i) os << ",";
        os << format_full(r.ordered[i].second);
    }
    os << "], \"tie_groups\": [";
    for (std::size_t g = 0; g < r.tie_groups.size(); ++g) {
        if (g) os << ",";
        os << "[";
        for (std::size_t i = 0; i < r.tie_groups[g].size(); ++i) {
            if (i) os << ",";
            os << '"' << to_string(r.tie_groups[g][i]) << '"';
        }
        os << "]";
    }
    os << "]}";
}

void rows_json(std::ostream& os, const EvaluationReport& report) {
    os << "  \"rows\": [";
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const DisplacementRecord& r = report.rows[i];
        if (i) os << ",";
        os << "\n    {\"condition\": \"" << to_string(r.condition)
           << "\", \"observed_displacement\": " << format_full(r.d_obs);
        if (r.d_pred) os << ", \"predicted_displacement\": " << format_full(*r.d_pred);
        if (r.e_centroid) os << ", \"centroid_error\": " << format_full(*r.e_centroid);
        if (r.pointwise_rmse)
            os << ", \"pointwise_rmse\": " << format_full(*r.pointwise_rmse);
        if (r.heldout_count) os << ", \"heldout_count\": " << *r.heldout_count;
        os << "}";
    }
    os << "\n  ]";
}

void flags_json(std::ostream& os, const std::vector<HierarchyFlag>& flags) {
    os << "\"hierarchy_flags\": {";
    for (std::size_t i = 0; i < flags.size(); ++i) {
        if (i) os << ", ";
        os << '"' << flags[i].label << "\": " << (flags[i].satisfied ? "true" : "false");
    }
    os << "}";
}

} // namespace

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001B3ULL;
    }
    return h;
}

Provenance Provenance::make(const std::string& canonical_config,
                            std::optional<std::uint64_t> model_seed,
                            std::optional<std::uint64_t> split_seed) {
    Provenance p;
    p.tool_version = kToolVersion;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(canonical_config)));
    p.config_hash = buf;
    p.model_seed = model_seed;
    p.split_seed = split_seed;
    p.generated_at = iso8601_now();
    return p;
}

std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_2dp(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string hierarchy_label(const std::vector<ConditionId>& expected) {
    std::string s;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i) s += '<';
        s += to_string(expected[i]);
    }
    return s;
}

std::string displacement_csv(const EvaluationReport& report,
                             const Provenance& prov) {
    std::ostringstream os;
    csv_header(os, prov);
    os << "# protocol: " << to_string(report.protocol) << "\n";
    os << "condition,observed_displacement,predicted_displacement,centroid_error,"
          "pointwise_rmse,heldout_count\n";
    for (const DisplacementRecord& r : report.rows) {
        os << to_string(r.condition) << ',' << format_2dp(r.d_obs) << ','
           << opt_2dp(r.d_pred) << ',' << opt_2dp(r.e_centroid) << ','
           << opt_2dp(r.pointwise_rmse) << ',';
        if (r.heldout_count) os << *r.heldout_count;
        os << '\n';
    }
    if (report.global_rmse)
        os << "# global_rmse: " << format_2dp(*report.global_rmse) << "\n";
    return os.str();
}

std::string displacement_json(const EvaluationReport& report,
                              const Provenance& prov) {
    std::ostringstream os;
    os << "{\n";
    provenance_json(os, prov);
    os << ",\n  \"protocol\": \"" << to_string(report.protocol) << "\",\n";
    rows_json(os, report);
    if (report.global_rmse)
        os << ",\n  \"global_rmse\": " << format_full(*report.global_rmse);
    if (report.observed_ranking) {
        os << ",\n";
        ranking_json(os, "observed_ranking", *report.observed_ranking);
    }
    if (report.predicted_ranking) {
        os << ",\n";
        ranking_json(os, "predicted_ranking", *report.predicted_ranking);
    }
    os << ",\n  ";
    flags_json(os, report.hierarchy_flags);
    os << ",\n  \"trained_pair_count\": " << report.trained_pair_count << "\n}\n";
    return os.str();
}

std::string within_session_csv(const EvaluationReport& report,
                               const Provenance& prov) {
    std::ostringstream os;
    csv_header(os, prov);
    os << "condition,m1_dist,m1_rank,m2_dist,m2_rank,displacement,long_rank\n";
    for (const WithinSessionRow& r : report.within_rows) {
        os << to_string(r.condition) << ',' << format_2dp(r.m1_dist) << ','
           << r.m1_rank << ',' << format_2dp(r.m2_dist) << ',' << r.m2_rank << ','
           << format_2dp(r.displacement) << ',' << r.long_rank << '\n';
    }
    return os.str();
}

std::string within_session_json(const EvaluationReport& report,
                                const Provenance& prov) {
    std::ostringstream os;
    os << "{\n";
    provenance_json(os, prov);
    os << ",\n  \"rows\": [";
    for (std::size_t i = 0; i < report.within_rows.size(); ++i) {
        const WithinSessionRow& r = report.within_rows[i];
        if (i) os << ",";
        os << "\n    {\"condition\": \"" << to_string(r.condition)
           << "\", \"m1_dist\": " << format_full(r.m1_dist)
           << ", \"m1_rank\": " << r.m1_rank
           << ", \"m2_dist\": " << format_full(r.m2_dist)
           << ", \"m2_rank\": " << r.m2_rank
           << ", \"displacement\": " << format_full(r.displacement)
           << ", \"long_rank\": " << r.long_rank << "}";
    }
    os << "\n  ]\n}\n";
    return os.str();
}

std::string loco_csv(const std::vector<EvaluationReport>& folds,
                     const Provenance& prov) {
    std::ostringstream os;
    csv_header(os, prov);
    os << "withheld_condition,observed_displacement,predicted_displacement,"
          "centroid_error,pointwise_rmse\n";
    for (const EvaluationReport& fold : folds) {
        for (const DisplacementRecord& r : fold.rows) {
            os << to_string(r.condition) << ',' << format_2dp(r.d_obs) << ','
               << opt_2dp(r.d_pred) << ',' << opt_2dp(r.e_centroid) << ','
               << opt_2dp(r.pointwise_rmse) << '\n';
        }
    }
    return os.str();
}

std::string loco_json(const std::vector<EvaluationReport>& folds,
                      const Provenance& prov) {
    std::ostringstream os;
    os << "{\n";
    provenance_json(os, prov);
    os << ",\n  \"folds\": [";
    for (std::size_t i = 0; i < folds.size(); ++i) {
        const DisplacementRecord& r = folds[i].rows.front();
        if (i) os << ",";
        os << "\n    {\"withheld_condition\": \"" << to_string(r.condition)
           << "\", \"observed_displacement\": " << format_full(r.d_obs)
           << ", \"predicted_displacement\": " << opt_full(r.d_pred)
           << ", \"centroid_error\": " << opt_full(r.e_centroid)
           << ", \"pointwise_rmse\": " << opt_full(r.pointwise_rmse)
           << ", \"trained_pair_count\": " << folds[i].trained_pair_count << "}";
    }
    os << "\n  ]\n}\n";
    return os.str();
}

std::string pca_json(const PcaProjection& p, const Provenance& prov) {
    // Inject provenance as the first key of the serialized projection.
    std::ostringstream os;
    os << "{\n";
    provenance_json(os, prov);
    os << ",\n";
    const std::string body = p.to_json();
    os << body.substr(2); // skip "{\n"
    return os.str();
}

std::string summary_json(const std::vector<const EvaluationReport*>& reports,
                         const Provenance& prov) {
    std::ostringstream os;
    os << "{\n";
    provenance_json(os, prov);
    os << ",\n  \"protocols\": [";
    bool first = true;
    for (const EvaluationReport* r : reports) {
        if (!first) os << ",";
        first = false;
        os << "\n    {\"protocol\": \"" << to_string(r->protocol) << "\", ";
        if (r->withheld_condition)
            os << "\"withheld_condition\": \"" << to_string(*r->withheld_condition)
               << "\", ";
        flags_json(os, r->hierarchy_flags);
        if (r->global_rmse) os << ", \"global_rmse\": " << format_full(*r->global_rmse);
        os << "}";
    }
    os << "\n  ]\n}\n";
    return os.str();
}

std::string latent_points_csv(const std::vector<LatentPoint>& points,
                              const Provenance& prov) {
    std::ostringstream os;
    csv_header(os, prov);
    os << "condition,session,pc1,pc2\n";
    for (const LatentPoint& p : points) {
        os << to_string(p.condition) << ',' << to_string(p.session) << ','
           << format_full(p.pc1) << ',' << format_full(p.pc2) << '\n';
    }
    return os.str();
}

std::string centroids_csv(const std::vector<Centroid>& centroids,
                          const Provenance& prov) {
    std::ostringstream os;
    csv_header(os, prov);
    os << "condition,session,pc1,pc2,n\n";
    for (const Centroid& c : centroids) {
        os << to_string(c.condition) << ',' << to_string(c.session) << ','
           << format_full(c.pc1) << ',' << format_full(c.pc2) << ',' << c.n << '\n';
    }
    return os.str();
}

std::string pairs_csv(const std::vector<TrainingPair>& pairs,
                      const Provenance& prov) {
    std::ostringstream os;
    csv_header(os, prov);
    os << "pair_index,condition,in_pc1,in_pc2,target_pc1,target_pc2\n";
    for (const TrainingPair& p : pairs) {
        os << p.pair_index << ',' << to_string(p.condition) << ','
           << format_full(p.in_pc1) << ',' << format_full(p.in_pc2) << ','
           << format_full(p.target_pc1) << ',' << format_full(p.target_pc2) << '\n';
    }
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write output file: " + path);
    out << content;
}

} // namespace latentry
