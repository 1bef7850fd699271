#include "latentry/synth.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "latentry/errors.hpp"
#include "latentry/pairing.hpp"
#include "latentry/rng.hpp"

namespace latentry {

namespace {

constexpr double kPi = 3.14159265358979323846;

double norm2(const Vec2& v) { return std::sqrt(v.x * v.x + v.y * v.y); }

Vec2 cell_mean(const SynthSpec& spec, ConditionId c, SessionId s) {
    Vec2 m = spec.base_point;
    auto it = spec.condition_offsets.find(c);
    if (it != spec.condition_offsets.end()) {
        m.x += it->second.x;
        m.y += it->second.y;
    }
    if (s == SessionId::M2) {
        const Vec2 shift = spec.shift_for(c);
        m.x += shift.x;
        m.y += shift.y;
    }
    return m;
}

// Population covariance trace of the planted in-plane coordinates: a
// weighted mixture of the cell means plus the isotropic within-cell noise.
double planted_variance_trace(const SynthSpec& spec) {
    double n = 0.0;
    Vec2 mean{0.0, 0.0};
    for (const auto& [cell, count] : spec.counts) {
        const Vec2 m = cell_mean(spec, cell.first, cell.second);
        mean.x += m.x * static_cast<double>(count);
        mean.y += m.y * static_cast<double>(count);
        n += static_cast<double>(count);
    }
    if (n == 0.0) return 0.0;
    mean.x /= n;
    mean.y /= n;
    double tr = 0.0;
    for (const auto& [cell, count] : spec.counts) {
        const Vec2 m = cell_mean(spec, cell.first, cell.second);
        const double dx = m.x - mean.x;
        const double dy = m.y - mean.y;
        tr += (dx * dx + dy * dy) * static_cast<double>(count);
    }
    return tr / n + 2.0 * spec.noise_sigma * spec.noise_sigma;
}

} // namespace

Vec2 SynthSpec::shift_for(ConditionId c) const {
    if (shift_model == ShiftModel::linear_in_descriptors) {
        const DescriptorVector d = encode_condition(c);
        const double coef[5] = {d.dental_contact, d.open_mouth, d.strong_clench,
                                d.vdo_increase_deg, d.protrusion_mm};
        Vec2 s{0.0, 0.0};
        for (int j = 0; j < 5; ++j) {
            s.x += coef[j] * descriptor_shift_columns[static_cast<std::size_t>(j)].x;
            s.y += coef[j] * descriptor_shift_columns[static_cast<std::size_t>(j)].y;
        }
        return s;
    }
    auto it = planted_shifts.find(c);
    return it == planted_shifts.end() ? Vec2{0.0, 0.0} : it->second;
}

SynthSpec SynthSpec::defaults() {
    SynthSpec spec;
    const std::size_t m1[kConditionCount] = {50, 33, 46, 41, 51, 49};
    const std::size_t m2[kConditionCount] = {60, 57, 58, 60, 57, 62};
    std::size_t i = 0;
    for (ConditionId c : all_conditions()) {
        spec.counts[{c, SessionId::M1}] = m1[i];
        spec.counts[{c, SessionId::M2}] = m2[i];
        ++i;
    }
    spec.condition_offsets = {
        {ConditionId::ONL, {0.0, 0.0}},   {ConditionId::OBL, {1.6, -1.2}},
        {ConditionId::OSL, {-1.4, -0.9}}, {ConditionId::OC25, {1.1, 1.3}},
        {ConditionId::OC3, {-0.9, 1.1}},  {ConditionId::OC3P, {0.3, -1.6}},
    };
    // Parallel shift directions with distinct norms; parallel shifts keep the
    // displacement ordering immune to any residual projection anisotropy.
    const double ca = std::cos(35.0 * kPi / 180.0);
    const double sa = std::sin(35.0 * kPi / 180.0);
    const double norms[kConditionCount] = {2.0, 2.6, 1.4, 3.0, 1.0, 1.7};
    i = 0;
    for (ConditionId c : all_conditions()) {
        spec.planted_shifts[c] = {norms[i] * ca, norms[i] * sa};
        ++i;
    }
    return spec;
}

Dataset generate(const SynthSpec& spec) {
    const std::size_t f = spec.n_features;
    if (f < 3) throw ConfigError("synth requires at least 3 features");
    for (const auto& [cell, count] : spec.counts) {
        (void)cell;
        if (count == 0) throw ConfigError("synth counts must be positive");
    }
    if (spec.counts.empty()) throw ConfigError("synth counts are empty");

    // Two exactly orthonormal plane directions with equal leverage on every
    // coordinate: u_i, v_i = sqrt(2/F) * (cos, sin)(2*pi*i/F).
    std::vector<double> u(f), v(f);
    const double amp = std::sqrt(2.0 / static_cast<double>(f));
    for (std::size_t i = 0; i < f; ++i) {
        const double th = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(f);
        u[i] = amp * std::cos(th);
        v[i] = amp * std::sin(th);
    }

    // Off-plane noise scale. Automatic mode fills per-column variance up to
    // about 1 so the downstream z-scoring is close to the identity and the
    // planted latent geometry survives the full pipeline; with zero noise
    // the dataset is kept exactly deterministic instead.
    double offplane = spec.offplane_sigma;
    if (offplane < 0.0) {
        if (spec.noise_sigma == 0.0) {
            offplane = 0.0;
        } else {
            const double tr = planted_variance_trace(spec);
            const double fill = (1.0 - tr / static_cast<double>(f)) /
                                (1.0 - 2.0 / static_cast<double>(f));
            offplane = fill > 1e-4 ? std::sqrt(fill) : 1e-2;
        }
    }

    Dataset ds;
    ds.feature_names.reserve(f);
    for (std::size_t i = 0; i < f; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "v%03zu", i + 1);
        ds.feature_names.push_back(name);
    }

    SplitMix64 rng(spec.seed);
    std::vector<double> raw(f);
    for (ConditionId c : all_conditions()) {
        for (SessionId s : {SessionId::M1, SessionId::M2}) {
            auto it = spec.counts.find({c, s});
            if (it == spec.counts.end()) continue;
            const Vec2 mu = cell_mean(spec, c, s);
            for (std::size_t k = 0; k < it->second; ++k) {
                double px = mu.x;
                double py = mu.y;
                if (spec.noise_sigma > 0.0) {
                    px += spec.noise_sigma * rng.normal();
                    py += spec.noise_sigma * rng.normal();
                }
                Observation obs;
                obs.condition = c;
                obs.session = s;
                obs.features.resize(f);
                if (offplane > 0.0) {
                    double du = 0.0;
                    double dv = 0.0;
                    for (std::size_t i = 0; i < f; ++i) {
                        raw[i] = offplane * rng.normal();
                        du += raw[i] * u[i];
                        dv += raw[i] * v[i];
                    }
                    // Remove the in-plane component so the distractor is
                    // exactly orthogonal to the planted plane.
                    for (std::size_t i = 0; i < f; ++i)
                        obs.features[i] = px * u[i] + py * v[i] + raw[i] -
                                          du * u[i] - dv * v[i];
                } else {
                    for (std::size_t i = 0; i < f; ++i)
                        obs.features[i] = px * u[i] + py * v[i];
                }
                ds.observations.push_back(std::move(obs));
            }
        }
    }
    ds.recount();
    return ds;
}

Ranking planted_ranking(const SynthSpec& spec) {
    std::vector<std::pair<ConditionId, double>> norms;
    if (spec.shift_model == SynthSpec::ShiftModel::free) {
        for (ConditionId c : all_conditions()) {
            auto it = spec.planted_shifts.find(c);
            if (it != spec.planted_shifts.end())
                norms.emplace_back(c, norm2(it->second));
        }
    } else {
        for (ConditionId c : all_conditions()) {
            if (spec.counts.count({c, SessionId::M1}) ||
                spec.counts.count({c, SessionId::M2}))
                norms.emplace_back(c, norm2(spec.shift_for(c)));
        }
    }
    return rank(norms, spec.tie_tol);
}

std::string SynthSpec::to_json() const {
    nlohmann::json j;
    j["seed"] = seed;
    j["n_features"] = n_features;
    nlohmann::json counts_json = nlohmann::json::object();
    for (ConditionId c : all_conditions()) {
        auto m1 = counts.find({c, SessionId::M1});
        auto m2 = counts.find({c, SessionId::M2});
        if (m1 == counts.end() && m2 == counts.end()) continue;
        counts_json[std::string(to_string(c))] = {
            m1 == counts.end() ? 0 : m1->second,
            m2 == counts.end() ? 0 : m2->second};
    }
    j["counts"] = counts_json;
    j["base_point"] = {base_point.x, base_point.y};
    nlohmann::json offsets = nlohmann::json::object();
    for (const auto& [c, o] : condition_offsets)
        offsets[std::string(to_string(c))] = {o.x, o.y};
    j["condition_offsets"] = offsets;
    nlohmann::json shifts = nlohmann::json::object();
    for (const auto& [c, o] : planted_shifts)
        shifts[std::string(to_string(c))] = {o.x, o.y};
    j["planted_shifts"] = shifts;
    j["noise_sigma"] = noise_sigma;
    j["shift_model"] = shift_model == ShiftModel::free ? "free" : "linear_in_descriptors";
    nlohmann::json cols = nlohmann::json::array();
    for (const Vec2& col : descriptor_shift_columns)
        cols.push_back({col.x, col.y});
    j["descriptor_shift_columns"] = cols;
    j["offplane_sigma"] = offplane_sigma;
    j["tie_tol"] = tie_tol;
    return j.dump(2) + "\n";
}

SynthSpec SynthSpec::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid synth spec: ") + e.what());
    }
    SynthSpec spec = SynthSpec::defaults();
    try {
        if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("n_features")) spec.n_features = j["n_features"].get<std::size_t>();
        if (j.contains("counts")) {
            spec.counts.clear();
            for (const auto& [name, pair] : j["counts"].items()) {
                auto c = parse_condition(name);
                if (!c) throw ConfigError("unknown condition in counts: " + name);
                const std::size_t m1 = pair.at(0).get<std::size_t>();
                const std::size_t m2 = pair.at(1).get<std::size_t>();
                if (m1 > 0) spec.counts[{*c, SessionId::M1}] = m1;
                if (m2 > 0) spec.counts[{*c, SessionId::M2}] = m2;
            }
        }
        auto read_vec2 = [](const nlohmann::json& a) {
            return Vec2{a.at(0).get<double>(), a.at(1).get<double>()};
        };
        if (j.contains("base_point")) spec.base_point = read_vec2(j["base_point"]);
        if (j.contains("condition_offsets")) {
            spec.condition_offsets.clear();
            for (const auto& [name, val] : j["condition_offsets"].items()) {
                auto c = parse_condition(name);
                if (!c) throw ConfigError("unknown condition in offsets: " + name);
                spec.condition_offsets[*c] = read_vec2(val);
            }
        }
        if (j.contains("planted_shifts")) {
            spec.planted_shifts.clear();
            for (const auto& [name, val] : j["planted_shifts"].items()) {
                auto c = parse_condition(name);
                if (!c) throw ConfigError("unknown condition in shifts: " + name);
                spec.planted_shifts[*c] = read_vec2(val);
            }
        }
        if (j.contains("noise_sigma")) spec.noise_sigma = j["noise_sigma"].get<double>();
        if (j.contains("shift_model")) {
            const std::string m = j["shift_model"];
            if (m == "free") {
                spec.shift_model = ShiftModel::free;
            } else if (m == "linear_in_descriptors") {
                spec.shift_model = ShiftModel::linear_in_descriptors;
            } else {
                throw ConfigError("unknown shift_model: " + m);
            }
        }
        if (j.contains("descriptor_shift_columns")) {
            const auto& cols = j["descriptor_shift_columns"];
            if (cols.size() != 5)
                throw ConfigError("descriptor_shift_columns must have 5 entries");
            for (std::size_t k = 0; k < 5; ++k)
                spec.descriptor_shift_columns[k] = read_vec2(cols[k]);
        }
        if (j.contains("offplane_sigma")) spec.offplane_sigma = j["offplane_sigma"].get<double>();
        if (j.contains("tie_tol")) spec.tie_tol = j["tie_tol"].get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid synth spec: ") + e.what());
    }
    return spec;
}

SynthSpec SynthSpec::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open synth spec: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

std::string planted_truth_json(const SynthSpec& spec) {
    nlohmann::json j;
    j["spec"] = nlohmann::json::parse(spec.to_json());
    nlohmann::json shifts = nlohmann::json::object();
    nlohmann::json norms = nlohmann::json::object();
    for (ConditionId c : all_conditions()) {
        if (!spec.counts.count({c, SessionId::M1}) &&
            !spec.counts.count({c, SessionId::M2}))
            continue;
        const Vec2 s = spec.shift_for(c);
        shifts[std::string(to_string(c))] = {s.x, s.y};
        norms[std::string(to_string(c))] = norm2(s);
    }
    j["planted_shifts"] = shifts;
    j["planted_shift_norms"] = norms;
    nlohmann::json order = nlohmann::json::array();
    for (const auto& [c, val] : planted_ranking(spec).ordered) {
        (void)val;
        order.push_back(std::string(to_string(c)));
    }
    j["planted_ranking"] = order;
    return j.dump(2) + "\n";
}

} // namespace latentry
