#include "latentry/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "latentry/errors.hpp"
#include "latentry/rng.hpp"

namespace latentry {

namespace {

const std::vector<ConditionId> kCoreHierarchy = {
    ConditionId::OC3, ConditionId::ONL, ConditionId::OC25};

std::string hierarchy_key(std::string_view prefix,
                          const std::vector<ConditionId>& expected) {
    std::string s(prefix);
    s += ':';
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i) s += '<';
        s += to_string(expected[i]);
    }
    return s;
}

// Conditions of the set in enumeration order, for deterministic reports.
std::vector<ConditionId> ordered(const std::set<ConditionId>& conditions) {
    std::vector<ConditionId> out;
    for (ConditionId c : all_conditions()) {
        if (conditions.count(c)) out.push_back(c);
    }
    return out;
}

void preflight_counts(const Dataset& ds, const std::vector<ConditionId>& conds) {
    for (ConditionId c : conds) {
        for (SessionId s : {SessionId::M1, SessionId::M2}) {
            if (ds.count(c, s) < 2) {
                throw DataError("condition " + std::string(to_string(c)) +
                                " session " + std::string(to_string(s)) +
                                " has fewer than 2 observations");
            }
        }
    }
}

std::vector<LatentPoint> filter_points(const std::vector<LatentPoint>& points,
                                       ConditionId c, SessionId s) {
    std::vector<LatentPoint> out;
    for (const LatentPoint& p : points) {
        if (p.condition == c && p.session == s) out.push_back(p);
    }
    return out;
}

std::vector<LatentPoint> pair_inputs(const std::vector<TrainingPair>& pairs) {
    std::vector<LatentPoint> out;
    out.reserve(pairs.size());
    for (const TrainingPair& p : pairs)
        out.push_back(LatentPoint{p.in_pc1, p.in_pc2, p.condition, SessionId::M1});
    return out;
}

std::vector<LatentPoint> pair_targets(const std::vector<TrainingPair>& pairs) {
    std::vector<LatentPoint> out;
    out.reserve(pairs.size());
    for (const TrainingPair& p : pairs)
        out.push_back(LatentPoint{p.target_pc1, p.target_pc2, p.condition,
                                  SessionId::M2});
    return out;
}

std::vector<LatentPoint> predict_pairs(const ModelParams& params,
                                       const std::vector<TrainingPair>& pairs) {
    std::vector<LatentPoint> out;
    out.reserve(pairs.size());
    for (const TrainingPair& p : pairs) {
        const auto y = forward(params, assemble_input(p));
        out.push_back(LatentPoint{y[0], y[1], p.condition, SessionId::M2});
    }
    return out;
}

void add_core_flags(EvaluationReport& report,
                    const std::set<ConditionId>& conditions) {
    bool applicable = true;
    for (ConditionId c : kCoreHierarchy) applicable &= conditions.count(c) > 0;
    if (!applicable) return;
    if (report.observed_ranking) {
        report.hierarchy_flags.push_back(
            {hierarchy_key("observed", kCoreHierarchy),
             hierarchy_satisfied(*report.observed_ranking, kCoreHierarchy)});
    }
    if (report.predicted_ranking) {
        report.hierarchy_flags.push_back(
            {hierarchy_key("predicted", kCoreHierarchy),
             hierarchy_satisfied(*report.predicted_ranking, kCoreHierarchy)});
    }
}

} // namespace

std::string_view to_string(Protocol p) {
    switch (p) {
    case Protocol::full: return "full";
    case Protocol::held_out: return "held_out";
    case Protocol::leave_condition_out: return "leave_condition_out";
    case Protocol::within_session: return "within_session";
    }
    return "?";
}

double pointwise_rmse(const std::vector<LatentPoint>& pred,
                      const std::vector<LatentPoint>& target) {
    if (pred.size() != target.size() || pred.empty())
        throw LengthMismatch("RMSE requires equal-length nonempty point lists");
    double total = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double dx = pred[i].pc1 - target[i].pc1;
        const double dy = pred[i].pc2 - target[i].pc2;
        total += dx * dx + dy * dy;
    }
    return std::sqrt(total / static_cast<double>(pred.size()));
}

std::vector<TrainingPair>
build_condition_pairs(const Dataset& ds, const std::set<ConditionId>& conditions) {
    const Dataset sub = subset_conditions(ds, conditions);
    const std::vector<ConditionId> conds = ordered(conditions);
    preflight_counts(sub, conds);
    const PcaProjection proj = fit_projection(sub);
    const std::vector<LatentPoint> points = project_all(sub, proj);

    std::vector<TrainingPair> all_pairs;
    for (ConditionId c : conds) {
        auto pairs = build_pairs(filter_points(points, c, SessionId::M1),
                                 filter_points(points, c, SessionId::M2), c);
        all_pairs.insert(all_pairs.end(), pairs.begin(), pairs.end());
    }
    return all_pairs;
}

SplitResult split_held_out(const std::vector<TrainingPair>& pairs,
                           const SplitSpec& spec) {
    if (spec.holdout_fraction <= 0.0 || spec.holdout_fraction >= 1.0)
        throw ConfigError("holdout fraction must lie in (0, 1)");

    std::map<ConditionId, std::vector<TrainingPair>> by_condition;
    for (const TrainingPair& p : pairs) by_condition[p.condition].push_back(p);

    SplitResult result;
    for (const auto& [c, group] : by_condition) {
        const std::size_t n = group.size();
        // Small backoff keeps ceil() exact where fraction*n is an integer.
        const std::size_t k = static_cast<std::size_t>(
            std::ceil(spec.holdout_fraction * static_cast<double>(n) - 1e-9));
        if (k < 1 || k >= n)
            throw TooFewPairs("condition " + std::string(to_string(c)) + " has " +
                              std::to_string(n) + " pairs; cannot hold out " +
                              std::to_string(k));

        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        if (spec.selection == SplitSpec::Selection::seeded_random) {
            // Per-condition stream so the draw is independent of which other
            // conditions are present.
            SplitMix64 rng(SplitMix64::mix(spec.seed, static_cast<std::uint64_t>(c)));
            for (std::size_t i = 0; i < k; ++i) {
                const std::size_t j =
                    i + static_cast<std::size_t>(rng.next_below(n - i));
                std::swap(idx[i], idx[j]);
            }
        } else {
            for (std::size_t i = 0; i < k; ++i) idx[i] = n - k + i;
        }
        std::vector<bool> held(n, false);
        for (std::size_t i = 0; i < k; ++i) held[idx[i]] = true;
        for (std::size_t i = 0; i < n; ++i) {
            (held[i] ? result.heldout : result.train).push_back(group[i]);
        }
    }
    return result;
}

EvaluationReport eval_full(const Dataset& ds,
                           const std::set<ConditionId>& conditions,
                           const TrainConfig& cfg, double tie_tol) {
    const Dataset sub = subset_conditions(ds, conditions);
    const std::vector<ConditionId> conds = ordered(conditions);
    preflight_counts(sub, conds);

    const PcaProjection proj = fit_projection(sub);
    const std::vector<LatentPoint> points = project_all(sub, proj);

    std::vector<TrainingPair> all_pairs;
    std::map<ConditionId, std::vector<LatentPoint>> m1pts, m2pts;
    std::map<ConditionId, Centroid> cm1, cm2;
    for (ConditionId c : conds) {
        m1pts[c] = filter_points(points, c, SessionId::M1);
        m2pts[c] = filter_points(points, c, SessionId::M2);
        cm1[c] = centroid(points, c, SessionId::M1);
        cm2[c] = centroid(points, c, SessionId::M2);
        auto pairs = build_pairs(m1pts[c], m2pts[c], c);
        all_pairs.insert(all_pairs.end(), pairs.begin(), pairs.end());
    }

    const TrainResult trained = train(all_pairs, cfg);

    EvaluationReport report;
    report.protocol = Protocol::full;
    report.model_seed = cfg.seed;
    report.tie_tol = tie_tol;
    report.trained_pair_count = all_pairs.size();
    report.trained_model = trained.params;

    std::vector<std::pair<ConditionId, double>> obs_values, pred_values;
    for (ConditionId c : conds) {
        const auto preds = predict_m2(trained.params, m1pts[c], c);
        const Centroid pred_cen = centroid(preds, c, SessionId::M2);

        DisplacementRecord row;
        row.condition = c;
        row.d_obs = observed_displacement(cm1[c], cm2[c]);
        row.d_pred = observed_displacement(cm1[c], pred_cen);
        row.e_centroid = centroid_error(pred_cen, cm2[c]);

        const std::size_t n_pairs = std::min(m1pts[c].size(), m2pts[c].size());
        std::vector<LatentPoint> pred_sub(preds.begin(),
                                          preds.begin() + static_cast<std::ptrdiff_t>(n_pairs));
        std::vector<LatentPoint> target_sub(m2pts[c].begin(),
                                            m2pts[c].begin() + static_cast<std::ptrdiff_t>(n_pairs));
        row.pointwise_rmse = pointwise_rmse(pred_sub, target_sub);

        obs_values.emplace_back(c, row.d_obs);
        pred_values.emplace_back(c, *row.d_pred);
        report.rows.push_back(row);
    }
    report.observed_ranking = rank(obs_values, tie_tol);
    report.predicted_ranking = rank(pred_values, tie_tol);
    add_core_flags(report, conditions);
    return report;
}

EvaluationReport eval_held_out(const Dataset& ds,
                               const std::set<ConditionId>& conditions,
                               const TrainConfig& cfg, const SplitSpec& spec,
                               double tie_tol) {
    const Dataset sub = subset_conditions(ds, conditions);
    const std::vector<ConditionId> conds = ordered(conditions);
    preflight_counts(sub, conds);

    // Standardization and PCA are fitted on the aggregated subset including
    // the held-out rows; only the network training respects the split.
    const PcaProjection proj = fit_projection(sub);
    const std::vector<LatentPoint> points = project_all(sub, proj);

    std::vector<TrainingPair> all_pairs;
    for (ConditionId c : conds) {
        auto pairs = build_pairs(filter_points(points, c, SessionId::M1),
                                 filter_points(points, c, SessionId::M2), c);
        all_pairs.insert(all_pairs.end(), pairs.begin(), pairs.end());
    }
    const SplitResult split = split_held_out(all_pairs, spec);
    const TrainResult trained = train(split.train, cfg);

    EvaluationReport report;
    report.protocol = Protocol::held_out;
    report.model_seed = cfg.seed;
    report.split_seed = spec.seed;
    report.tie_tol = tie_tol;
    report.trained_pair_count = split.train.size();

    std::vector<std::pair<ConditionId, double>> obs_values, pred_values;
    double pooled_sq = 0.0;
    std::size_t pooled_n = 0;
    for (ConditionId c : conds) {
        std::vector<TrainingPair> held;
        for (const TrainingPair& p : split.heldout)
            if (p.condition == c) held.push_back(p);
        if (held.empty())
            throw TooFewPairs("no held-out pairs for " + std::string(to_string(c)));

        const auto inputs = pair_inputs(held);
        const auto targets = pair_targets(held);
        const auto preds = predict_pairs(trained.params, held);
        const Centroid m1_ref = centroid(inputs, c, SessionId::M1);
        const Centroid obs_cen = centroid(targets, c, SessionId::M2);
        const Centroid pred_cen = centroid(preds, c, SessionId::M2);

        DisplacementRecord row;
        row.condition = c;
        row.heldout_count = held.size();
        row.d_obs = observed_displacement(m1_ref, obs_cen);
        row.d_pred = observed_displacement(m1_ref, pred_cen);
        row.e_centroid = centroid_error(pred_cen, obs_cen);
        row.pointwise_rmse = pointwise_rmse(preds, targets);
        report.rows.push_back(row);

        obs_values.emplace_back(c, row.d_obs);
        pred_values.emplace_back(c, *row.d_pred);
        for (std::size_t i = 0; i < preds.size(); ++i) {
            const double dx = preds[i].pc1 - targets[i].pc1;
            const double dy = preds[i].pc2 - targets[i].pc2;
            pooled_sq += dx * dx + dy * dy;
        }
        pooled_n += preds.size();
    }
    report.global_rmse = std::sqrt(pooled_sq / static_cast<double>(pooled_n));
    report.observed_ranking = rank(obs_values, tie_tol);
    report.predicted_ranking = rank(pred_values, tie_tol);
    add_core_flags(report, conditions);
    return report;
}

std::vector<EvaluationReport>
eval_leave_condition_out(const Dataset& ds,
                         const std::set<ConditionId>& conditions,
                         const TrainConfig& cfg, double tie_tol) {
    if (conditions.size() < 2)
        throw DataError("leave-condition-out requires at least 2 conditions");
    const Dataset sub = subset_conditions(ds, conditions);
    const std::vector<ConditionId> conds = ordered(conditions);
    preflight_counts(sub, conds);

    // One shared projection across folds, fitted on the aggregated subset.
    const PcaProjection proj = fit_projection(sub);
    const std::vector<LatentPoint> points = project_all(sub, proj);

    std::map<ConditionId, std::vector<TrainingPair>> pairs_by_cond;
    std::map<ConditionId, std::vector<LatentPoint>> m1pts, m2pts;
    for (ConditionId c : conds) {
        m1pts[c] = filter_points(points, c, SessionId::M1);
        m2pts[c] = filter_points(points, c, SessionId::M2);
        pairs_by_cond[c] = build_pairs(m1pts[c], m2pts[c], c);
    }

    std::vector<EvaluationReport> folds;
    for (ConditionId withheld : conds) {
        std::vector<TrainingPair> train_pairs;
        for (ConditionId c : conds) {
            if (c == withheld) continue;
            train_pairs.insert(train_pairs.end(), pairs_by_cond[c].begin(),
                               pairs_by_cond[c].end());
        }
        const TrainResult trained = train(train_pairs, cfg);

        const Centroid cm1 = centroid(points, withheld, SessionId::M1);
        const Centroid cm2 = centroid(points, withheld, SessionId::M2);
        const auto preds = predict_m2(trained.params, m1pts[withheld], withheld);
        const Centroid pred_cen = centroid(preds, withheld, SessionId::M2);

        DisplacementRecord row;
        row.condition = withheld;
        row.d_obs = observed_displacement(cm1, cm2);
        row.d_pred = observed_displacement(cm1, pred_cen);
        row.e_centroid = centroid_error(pred_cen, cm2);

        const std::size_t n_pairs = pairs_by_cond[withheld].size();
        std::vector<LatentPoint> pred_sub(preds.begin(),
                                          preds.begin() + static_cast<std::ptrdiff_t>(n_pairs));
        std::vector<LatentPoint> target_sub(
            m2pts[withheld].begin(),
            m2pts[withheld].begin() + static_cast<std::ptrdiff_t>(n_pairs));
        row.pointwise_rmse = pointwise_rmse(pred_sub, target_sub);

        EvaluationReport fold;
        fold.protocol = Protocol::leave_condition_out;
        fold.model_seed = cfg.seed;
        fold.tie_tol = tie_tol;
        fold.withheld_condition = withheld;
        fold.trained_pair_count = train_pairs.size();
        fold.rows.push_back(row);
        folds.push_back(std::move(fold));
    }
    return folds;
}

EvaluationReport eval_within_session(const Dataset& ds,
                                     const std::set<ConditionId>& conditions,
                                     double tie_tol) {
    if (!conditions.count(ConditionId::ONL))
        throw MissingReference("within-session analysis requires ONL");
    const Dataset sub = subset_conditions(ds, conditions);
    const std::vector<ConditionId> conds = ordered(conditions);
    preflight_counts(sub, conds);

    const PcaProjection proj = fit_projection(sub);
    const std::vector<LatentPoint> points = project_all(sub, proj);

    std::vector<Centroid> centroids;
    for (ConditionId c : conds) {
        centroids.push_back(centroid(points, c, SessionId::M1));
        centroids.push_back(centroid(points, c, SessionId::M2));
    }

    const auto m1_dist = within_session_distances(centroids, SessionId::M1);
    const auto m2_dist = within_session_distances(centroids, SessionId::M2);
    const Ranking m1_rank = rank(m1_dist, tie_tol);
    const Ranking m2_rank = rank(m2_dist, tie_tol);

    std::vector<std::pair<ConditionId, double>> disp_values;
    for (ConditionId c : conds) {
        const Centroid* cm1 = nullptr;
        const Centroid* cm2 = nullptr;
        for (const Centroid& cen : centroids) {
            if (cen.condition != c) continue;
            (cen.session == SessionId::M1 ? cm1 : cm2) = &cen;
        }
        disp_values.emplace_back(c, observed_displacement(*cm1, *cm2));
    }
    const Ranking disp_rank = rank(disp_values, tie_tol);

    EvaluationReport report;
    report.protocol = Protocol::within_session;
    report.tie_tol = tie_tol;
    auto value_of = [](const std::vector<std::pair<ConditionId, double>>& v,
                       ConditionId c) {
        for (const auto& [cond, val] : v)
            if (cond == c) return val;
        throw UnknownCondition("missing condition value");
    };
    for (ConditionId c : conds) {
        WithinSessionRow row;
        row.condition = c;
        row.m1_dist = value_of(m1_dist, c);
        row.m1_rank = m1_rank.position(c);
        row.m2_dist = value_of(m2_dist, c);
        row.m2_rank = m2_rank.position(c);
        row.displacement = value_of(disp_values, c);
        row.long_rank = disp_rank.position(c);
        report.within_rows.push_back(row);

        DisplacementRecord drow;
        drow.condition = c;
        drow.d_obs = row.displacement;
        report.rows.push_back(drow);
    }
    report.observed_ranking = disp_rank;
    add_core_flags(report, conditions);
    return report;
}

} // namespace latentry
