#include "latentry/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "latentry/errors.hpp"

namespace latentry {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

bool parse_finite_double(const std::string& s, double& out) {
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    while (begin != end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end != begin && (*(end - 1) == ' ' || *(end - 1) == '\t')) --end;
    if (begin == end) return false;
    auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc() || ptr != end) return false;
    return std::isfinite(out);
}

} // namespace

IngestConfig IngestConfig::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid ingest config: ") + e.what());
    }
    IngestConfig cfg;
    if (j.contains("condition_col")) cfg.condition_col = j["condition_col"];
    if (j.contains("session_col")) cfg.session_col = j["session_col"];
    if (j.contains("exclude_cols")) {
        cfg.exclude_cols.clear();
        for (const auto& e : j["exclude_cols"]) cfg.exclude_cols.push_back(e);
    }
    return cfg;
}

IngestConfig IngestConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open ingest config: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

std::size_t Dataset::count(ConditionId c, SessionId s) const {
    auto it = counts.find({c, s});
    return it == counts.end() ? 0 : it->second;
}

void Dataset::recount() {
    counts.clear();
    for (const Observation& o : observations) {
        ++counts[{o.condition, o.session}];
    }
}

Dataset load_dataset_from_string(const std::string& csv_text,
                                 const IngestConfig& cfg) {
    std::istringstream in(csv_text);
    std::string line;
    if (!std::getline(in, line)) throw EmptyDataset("input has no header row");
    const std::vector<std::string> header = split_csv_line(strip_cr(line));

    auto col_of = [&](const std::string& name) -> std::size_t {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            throw MissingColumn("required column not found: " + name);
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t cond_col = col_of(cfg.condition_col);
    const std::size_t sess_col = col_of(cfg.session_col);

    std::vector<bool> technical(header.size(), false);
    technical[cond_col] = true;
    technical[sess_col] = true;
    std::vector<std::string> technical_names;
    for (const std::string& name : cfg.exclude_cols) {
        auto it = std::find(header.begin(), header.end(), name);
        if (it != header.end()) {
            technical[static_cast<std::size_t>(it - header.begin())] = true;
            technical_names.push_back(name);
        }
    }

    // First pass: keep rows whose labels parse, remember raw fields.
    std::vector<std::vector<std::string>> rows;
    std::vector<ConditionId> row_cond;
    std::vector<SessionId> row_sess;
    std::size_t skipped_rows = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw RaggedRows("row " + std::to_string(line_no) + " has " +
                             std::to_string(fields.size()) + " fields, header has " +
                             std::to_string(header.size()));
        }
        auto cond = parse_condition(fields[cond_col]);
        auto sess = parse_session(fields[sess_col]);
        if (!cond || !sess) {
            ++skipped_rows;
            continue;
        }
        row_cond.push_back(*cond);
        row_sess.push_back(*sess);
        rows.push_back(std::move(fields));
    }
    if (rows.empty()) throw EmptyDataset("no valid data rows");

    // Second pass: candidate feature columns must parse to a finite value in
    // every row; offenders are dropped, not fatal.
    Dataset ds;
    ds.technical_columns = technical_names;
    if (skipped_rows > 0) {
        ds.warnings.push_back("skipped " + std::to_string(skipped_rows) +
                              " row(s) with unrecognized condition/session");
    }
    std::vector<std::size_t> feature_cols;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (technical[c]) continue;
        bool ok = true;
        double v = 0.0;
        for (const auto& fields : rows) {
            if (!parse_finite_double(fields[c], v)) {
                ok = false;
                break;
            }
        }
        if (ok) {
            feature_cols.push_back(c);
            ds.feature_names.push_back(header[c]);
        } else {
            ds.warnings.push_back("column excluded (non-numeric value): " +
                                  header[c]);
        }
    }

    ds.observations.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        Observation obs;
        obs.condition = row_cond[r];
        obs.session = row_sess[r];
        obs.features.reserve(feature_cols.size());
        for (std::size_t c : feature_cols) {
            double v = 0.0;
            parse_finite_double(rows[r][c], v);
            obs.features.push_back(v);
        }
        ds.observations.push_back(std::move(obs));
    }
    ds.recount();
    return ds;
}

Dataset load_dataset(const std::string& path, const IngestConfig& cfg) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open input file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_dataset_from_string(ss.str(), cfg);
}

Dataset select_features(const Dataset& ds,
                        const std::vector<std::string>& exclude) {
    for (const std::string& name : exclude) {
        const bool known =
            std::find(ds.feature_names.begin(), ds.feature_names.end(), name) !=
                ds.feature_names.end() ||
            std::find(ds.technical_columns.begin(), ds.technical_columns.end(),
                      name) != ds.technical_columns.end();
        if (!known) throw MissingColumn("unknown column in exclude list: " + name);
    }

    std::vector<std::size_t> keep_idx;
    Dataset out;
    out.technical_columns = ds.technical_columns;
    out.warnings = ds.warnings;
    for (std::size_t i = 0; i < ds.feature_names.size(); ++i) {
        if (std::find(exclude.begin(), exclude.end(), ds.feature_names[i]) ==
            exclude.end()) {
            keep_idx.push_back(i);
            out.feature_names.push_back(ds.feature_names[i]);
        }
    }
    if (out.feature_names.empty())
        throw AllFeaturesExcluded("exclude list removes every feature column");

    out.observations.reserve(ds.observations.size());
    for (const Observation& o : ds.observations) {
        Observation n;
        n.condition = o.condition;
        n.session = o.session;
        n.features.reserve(keep_idx.size());
        for (std::size_t i : keep_idx) n.features.push_back(o.features[i]);
        out.observations.push_back(std::move(n));
    }
    out.recount();
    return out;
}

Dataset subset_conditions(const Dataset& ds, const std::set<ConditionId>& keep) {
    if (keep.empty()) throw DataError("empty condition set");
    Dataset out;
    out.feature_names = ds.feature_names;
    out.technical_columns = ds.technical_columns;
    out.warnings = ds.warnings;
    for (const Observation& o : ds.observations) {
        if (keep.count(o.condition)) out.observations.push_back(o);
    }
    if (out.observations.empty())
        throw EmptyDataset("no observation matches the requested conditions");
    out.recount();
    return out;
}

void write_dataset_csv(const Dataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write dataset: " + path);
    out << "condition,session";
    for (const std::string& name : ds.feature_names) out << ',' << name;
    out << '\n';
    char buf[64];
    for (const Observation& o : ds.observations) {
        out << to_string(o.condition) << ',' << to_string(o.session);
        for (double v : o.features) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << ',' << buf;
        }
        out << '\n';
    }
}

} // namespace latentry
