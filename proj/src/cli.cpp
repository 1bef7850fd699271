#include "latentry/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "latentry/dataset.hpp"
#include "latentry/errors.hpp"
#include "latentry/evaluation.hpp"
#include "latentry/report_io.hpp"
#include "latentry/synth.hpp"

namespace latentry {

namespace {

std::set<ConditionId> parse_condition_list(const std::string& csv) {
    std::set<ConditionId> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        auto c = parse_condition(item);
        if (!c) throw ConfigError("unknown condition: " + item);
        out.insert(*c);
    }
    if (out.empty()) throw ConfigError("empty condition list");
    return out;
}

std::vector<ConditionId> parse_hierarchy(const std::string& expr) {
    std::vector<ConditionId> out;
    std::stringstream ss(expr);
    std::string item;
    while (std::getline(ss, item, '<')) {
        auto c = parse_condition(item);
        if (!c) throw ConfigError("unknown condition in hierarchy: " + item);
        out.push_back(*c);
    }
    if (out.size() < 2) throw ConfigError("hierarchy needs at least 2 conditions");
    return out;
}

std::string conditions_string(const std::set<ConditionId>& conds) {
    std::string s;
    for (ConditionId c : all_conditions()) {
        if (!conds.count(c)) continue;
        if (!s.empty()) s += ',';
        s += to_string(c);
    }
    return s;
}

struct CommonOptions {
    std::string input;
    std::string out_dir;
    std::string analysis = "core";
    std::string conditions_csv;
    std::string ingest_config;
    std::string format = "csv";
    double tie_tol = kDefaultTieTol;

    std::set<ConditionId> resolve_conditions() const {
        std::set<ConditionId> conds;
        if (!conditions_csv.empty()) {
            conds = parse_condition_list(conditions_csv);
        } else if (analysis == "core") {
            conds = {ConditionId::ONL, ConditionId::OC25, ConditionId::OC3};
        } else {
            for (ConditionId c : all_conditions()) conds.insert(c);
        }
        if (analysis == "core") {
            for (ConditionId c : conds) {
                if (c != ConditionId::ONL && c != ConditionId::OC25 &&
                    c != ConditionId::OC3) {
                    throw ConfigError("core analysis allows only ONL, OC2.5, OC3");
                }
            }
        }
        return conds;
    }

    Dataset load() const {
        IngestConfig cfg;
        if (!ingest_config.empty()) cfg = IngestConfig::from_json_file(ingest_config);
        Dataset ds = load_dataset(input, cfg);
        for (const std::string& w : ds.warnings) std::cerr << "warning: " << w << "\n";
        return ds;
    }
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--input", opt.input, "input dataset CSV")->required();
    cmd->add_option("--out", opt.out_dir, "output directory")->required();
    cmd->add_option("--analysis", opt.analysis, "analysis subset")
        ->check(CLI::IsMember({"core", "extended"}));
    cmd->add_option("--conditions", opt.conditions_csv,
                    "comma-separated condition override");
    cmd->add_option("--ingest-config", opt.ingest_config,
                    "JSON ingest schema (condition_col, session_col, exclude_cols)");
    cmd->add_option("--tie-tol", opt.tie_tol, "ranking tie tolerance");
    cmd->add_option("--format", opt.format, "table format")
        ->check(CLI::IsMember({"csv", "json"}));
}

int cmd_synth(const std::string& spec_path, const std::string& out_path,
              std::optional<std::uint64_t> seed_override) {
    SynthSpec spec =
        spec_path.empty() ? SynthSpec::defaults() : SynthSpec::from_json_file(spec_path);
    if (seed_override) spec.seed = *seed_override;
    const Dataset ds = generate(spec);
    write_dataset_csv(ds, out_path);
    write_text_file(out_path + ".truth.json", planted_truth_json(spec));
    std::cout << "wrote " << ds.observations.size() << " rows to " << out_path
              << "\n";
    return 0;
}

int cmd_analyze(const CommonOptions& opt) {
    const std::set<ConditionId> conds = opt.resolve_conditions();
    const Dataset ds = opt.load();
    const Dataset sub = subset_conditions(ds, conds);

    const PcaProjection proj = fit_projection(sub);
    const std::vector<LatentPoint> points = project_all(sub, proj);

    std::vector<Centroid> centroids;
    std::vector<std::pair<ConditionId, double>> disp;
    std::vector<DisplacementRecord> rows;
    for (ConditionId c : all_conditions()) {
        if (!conds.count(c)) continue;
        const Centroid m1 = centroid(points, c, SessionId::M1);
        const Centroid m2 = centroid(points, c, SessionId::M2);
        centroids.push_back(m1);
        centroids.push_back(m2);
        DisplacementRecord row;
        row.condition = c;
        row.d_obs = observed_displacement(m1, m2);
        rows.push_back(row);
        disp.emplace_back(c, row.d_obs);
    }

    EvaluationReport observed;
    observed.protocol = Protocol::full;
    observed.rows = rows;
    observed.tie_tol = opt.tie_tol;
    observed.observed_ranking = rank(disp, opt.tie_tol);
    const std::vector<ConditionId> core{ConditionId::OC3, ConditionId::ONL,
                                        ConditionId::OC25};
    if (std::all_of(core.begin(), core.end(),
                    [&](ConditionId c) { return conds.count(c) > 0; })) {
        observed.hierarchy_flags.push_back(
            {"observed:" + hierarchy_label(core),
             hierarchy_satisfied(*observed.observed_ranking, core)});
    }

    const std::string config = "cmd=analyze;input=" + opt.input +
                               ";analysis=" + opt.analysis +
                               ";conditions=" + conditions_string(conds) +
                               ";tie_tol=" + format_full(opt.tie_tol) +
                               ";format=" + opt.format;
    const Provenance prov = Provenance::make(config, std::nullopt, std::nullopt);
    const std::string dir = opt.out_dir + "/";

    write_text_file(dir + (opt.format == "json" ? "displacements.json"
                                                : "displacements.csv"),
                    opt.format == "json" ? displacement_json(observed, prov)
                                         : displacement_csv(observed, prov));

    std::vector<const EvaluationReport*> for_summary{&observed};
    EvaluationReport within;
    if (conds.count(ConditionId::ONL)) {
        within = eval_within_session(ds, conds, opt.tie_tol);
        write_text_file(dir + (opt.format == "json" ? "within_session.json"
                                                    : "within_session.csv"),
                        opt.format == "json" ? within_session_json(within, prov)
                                             : within_session_csv(within, prov));
        for_summary.push_back(&within);
    } else {
        std::cerr << "warning: ONL not in the analyzed conditions; "
                     "within-session table skipped\n";
    }

    write_text_file(dir + "pca.json", pca_json(proj, prov));
    write_text_file(dir + "latent_points.csv", latent_points_csv(points, prov));
    write_text_file(dir + "centroids.csv", centroids_csv(centroids, prov));
    write_text_file(dir + "summary.json", summary_json(for_summary, prov));
    return 0;
}

int cmd_train_eval(const CommonOptions& opt, const TrainConfig& train_cfg,
                   const SplitSpec& split_spec,
                   const std::string& expect_hierarchy) {
    const std::set<ConditionId> conds = opt.resolve_conditions();
    const Dataset ds = opt.load();

    EvaluationReport full = eval_full(ds, conds, train_cfg, opt.tie_tol);
    EvaluationReport held =
        eval_held_out(ds, conds, train_cfg, split_spec, opt.tie_tol);
    std::vector<EvaluationReport> folds =
        eval_leave_condition_out(ds, conds, train_cfg, opt.tie_tol);

    if (!expect_hierarchy.empty()) {
        const std::vector<ConditionId> expected = parse_hierarchy(expect_hierarchy);
        for (EvaluationReport* r : {&full, &held}) {
            if (r->observed_ranking)
                r->hierarchy_flags.push_back(
                    {"observed:" + hierarchy_label(expected),
                     hierarchy_satisfied(*r->observed_ranking, expected)});
            if (r->predicted_ranking)
                r->hierarchy_flags.push_back(
                    {"predicted:" + hierarchy_label(expected),
                     hierarchy_satisfied(*r->predicted_ranking, expected)});
        }
    }

    const std::string config =
        "cmd=train-eval;input=" + opt.input + ";analysis=" + opt.analysis +
        ";conditions=" + conditions_string(conds) +
        ";epochs=" + std::to_string(train_cfg.epochs) +
        ";lr=" + format_full(train_cfg.lr) +
        ";seed=" + std::to_string(train_cfg.seed) +
        ";split_seed=" + std::to_string(split_spec.seed) +
        ";holdout=" + format_full(split_spec.holdout_fraction) +
        ";split_rule=" +
        (split_spec.selection == SplitSpec::Selection::seeded_random ? "random"
                                                                     : "last") +
        ";tie_tol=" + format_full(opt.tie_tol) + ";format=" + opt.format +
        ";expect=" + expect_hierarchy;
    Provenance prov = Provenance::make(config, train_cfg.seed, split_spec.seed);
    auto compact = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", v);
        return std::string(buf);
    };
    prov.config_line =
        "epochs=" + std::to_string(train_cfg.epochs) + " lr=" + compact(train_cfg.lr) +
        " holdout_frac=" + compact(split_spec.holdout_fraction) + " split_rule=" +
        (split_spec.selection == SplitSpec::Selection::seeded_random ? "random" : "last") +
        " tie_tol=" + compact(opt.tie_tol);
    const std::string dir = opt.out_dir + "/";
    const bool json = opt.format == "json";

    write_text_file(dir + (json ? "full.json" : "full.csv"),
                    json ? displacement_json(full, prov)
                         : displacement_csv(full, prov));
    write_text_file(dir + (json ? "held_out.json" : "held_out.csv"),
                    json ? displacement_json(held, prov)
                         : displacement_csv(held, prov));
    write_text_file(dir + (json ? "loco.json" : "loco.csv"),
                    json ? loco_json(folds, prov) : loco_csv(folds, prov));
    if (full.trained_model) {
        write_text_file(dir + "model.json",
                        full.trained_model->to_json(train_cfg.seed,
                                                    train_cfg.epochs, train_cfg.lr));
    }
    write_text_file(dir + "pairs.csv",
                    pairs_csv(build_condition_pairs(ds, conds), prov));

    std::vector<const EvaluationReport*> for_summary{&full, &held};
    for (const EvaluationReport& fold : folds) for_summary.push_back(&fold);
    write_text_file(dir + "summary.json", summary_json(for_summary, prov));
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"latent gait trajectory analysis"};
    app.require_subcommand(1);

    // synth
    std::string spec_path;
    std::string synth_out;
    std::optional<std::uint64_t> synth_seed;
    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset");
    synth->add_option("--spec", spec_path, "synth spec JSON");
    synth->add_option("--out", synth_out, "output CSV path")->required();
    synth->add_option("--seed", synth_seed, "override spec seed")
        ->envname("LATENTRY_SEED");

    // analyze
    CommonOptions analyze_opt;
    CLI::App* analyze = app.add_subcommand("analyze", "observed latent analysis");
    add_common(analyze, analyze_opt);

    // train-eval
    CommonOptions te_opt;
    TrainConfig train_cfg;
    SplitSpec split_spec;
    std::string split_rule = "random";
    std::string expect_hierarchy;
    bool split_seed_given = false;
    CLI::App* te = app.add_subcommand("train-eval",
                                      "train the model and run all protocols");
    add_common(te, te_opt);
    te->add_option("--epochs", train_cfg.epochs, "training epochs");
    te->add_option("--lr", train_cfg.lr, "learning rate");
    te->add_option("--seed", train_cfg.seed, "model seed")
        ->envname("LATENTRY_SEED");
    te->add_option("--split-seed", split_spec.seed, "held-out split seed")
        ->each([&](const std::string&) { split_seed_given = true; });
    te->add_option("--holdout-frac", split_spec.holdout_fraction,
                   "held-out fraction per condition");
    te->add_option("--split-rule", split_rule, "held-out selection rule")
        ->check(CLI::IsMember({"random", "last"}));
    te->add_option("--expect-hierarchy", expect_hierarchy,
                   "expected ordering, e.g. OC3<ONL<OC2.5");

    std::vector<const char*> argv;
    argv.push_back("latentry");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (synth->parsed()) return cmd_synth(spec_path, synth_out, synth_seed);
        if (analyze->parsed()) return cmd_analyze(analyze_opt);
        if (te->parsed()) {
            // Split seed defaults to the model seed unless given explicitly.
            if (!split_seed_given) split_spec.seed = train_cfg.seed;
            split_spec.selection = split_rule == "last"
                                       ? SplitSpec::Selection::last_k
                                       : SplitSpec::Selection::seeded_random;
            return cmd_train_eval(te_opt, train_cfg, split_spec, expect_hierarchy);
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}

} // namespace latentry
