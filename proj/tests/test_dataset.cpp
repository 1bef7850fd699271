#include <doctest.h>

#include <sstream>

#include "latentry/dataset.hpp"
#include "latentry/errors.hpp"

using namespace latentry;

namespace {

// Three rows per (condition, session) over two conditions, fixed values.
std::string small_csv() {
    return "condition,session,side,v1,v2,v3\n"
           "ONL,M1,L,1.0,10,100\n"
           "ONL,M1,R,2.0,20,200\n"
           "ONL,M2,L,3.0,30,300\n"
           "ONL,M2,R,4.0,40,400\n"
           "OC3,M1,L,5.0,50,500\n"
           "OC3,M1,R,6.0,60,600\n"
           "OC3,M2,L,7.0,70,700\n"
           "OC3,M2,R,8.0,80,800\n";
}

} // namespace

TEST_CASE("load_dataset parses rows and excludes technical columns") {
    const Dataset ds = load_dataset_from_string(small_csv());
    CHECK(ds.feature_count() == 3);
    CHECK(ds.feature_names == std::vector<std::string>{"v1", "v2", "v3"});
    CHECK(ds.observations.size() == 8);
    CHECK(ds.count(ConditionId::ONL, SessionId::M1) == 2);
    CHECK(ds.count(ConditionId::OC3, SessionId::M2) == 2);
    CHECK(ds.observations.front().features == std::vector<double>{1.0, 10, 100});
    CHECK(ds.technical_columns == std::vector<std::string>{"side"});
}

TEST_CASE("load_dataset preserves file row order") {
    const Dataset ds = load_dataset_from_string(small_csv());
    CHECK(ds.observations[0].features[0] == 1.0);
    CHECK(ds.observations[3].features[0] == 4.0);
    CHECK(ds.observations[7].features[0] == 8.0);
}

TEST_CASE("load_dataset is deterministic over the same bytes") {
    const Dataset a = load_dataset_from_string(small_csv());
    const Dataset b = load_dataset_from_string(small_csv());
    REQUIRE(a.observations.size() == b.observations.size());
    for (std::size_t i = 0; i < a.observations.size(); ++i) {
        CHECK(a.observations[i].features == b.observations[i].features);
        CHECK(a.observations[i].condition == b.observations[i].condition);
    }
    CHECK(a.feature_names == b.feature_names);
}

TEST_CASE("non-numeric value drops the column with a warning") {
    std::string csv = "condition,session,v1,v7\n"
                      "ONL,M1,1.0,2.0\n"
                      "ONL,M2,2.0,abc\n"
                      "OC3,M1,3.0,4.0\n";
    const Dataset ds = load_dataset_from_string(csv);
    CHECK(ds.feature_count() == 1);
    CHECK(ds.feature_names == std::vector<std::string>{"v1"});
    REQUIRE(ds.warnings.size() == 1);
    CHECK(ds.warnings[0].find("v7") != std::string::npos);
}

TEST_CASE("non-finite literals are treated as parse failures") {
    std::string csv = "condition,session,v1,v2\n"
                      "ONL,M1,1.0,inf\n"
                      "ONL,M2,2.0,3.0\n";
    const Dataset ds = load_dataset_from_string(csv);
    CHECK(ds.feature_names == std::vector<std::string>{"v1"});
}

TEST_CASE("empty and malformed inputs") {
    CHECK_THROWS_AS(load_dataset_from_string("condition,session,v1\n"),
                    EmptyDataset);
    CHECK_THROWS_AS(load_dataset_from_string("session,v1\nM1,1.0\n"),
                    MissingColumn);
    CHECK_THROWS_AS(
        load_dataset_from_string("condition,session,v1\nONL,M1,1.0,9\n"),
        RaggedRows);
}

TEST_CASE("rows with unrecognized labels are skipped, not fatal") {
    std::string csv = "condition,session,v1\n"
                      "ONL,M1,1.0\n"
                      "BOGUS,M1,2.0\n"
                      "ONL,M3,3.0\n"
                      "ONL,M2,4.0\n";
    const Dataset ds = load_dataset_from_string(csv);
    CHECK(ds.observations.size() == 2);
    REQUIRE(!ds.warnings.empty());
    CHECK(ds.warnings[0].find("2 row(s)") != std::string::npos);
}

TEST_CASE("select_features removes named columns in order") {
    const Dataset ds = load_dataset_from_string(small_csv());
    const Dataset out = select_features(ds, {"v2"});
    CHECK(out.feature_names == std::vector<std::string>{"v1", "v3"});
    CHECK(out.observations[0].features == std::vector<double>{1.0, 100});

    SUBCASE("empty exclude is the identity") {
        const Dataset same = select_features(ds, {});
        CHECK(same.feature_names == ds.feature_names);
        CHECK(same.observations[2].features == ds.observations[2].features);
    }
    SUBCASE("excluding everything fails") {
        CHECK_THROWS_AS(select_features(ds, {"v1", "v2", "v3"}),
                        AllFeaturesExcluded);
    }
    SUBCASE("already-excluded technical columns are accepted") {
        const Dataset same = select_features(ds, {"side"});
        CHECK(same.feature_names == ds.feature_names);
    }
    SUBCASE("unknown names are rejected") {
        CHECK_THROWS_AS(select_features(ds, {"nope"}), MissingColumn);
    }
}

TEST_CASE("subset_conditions filters and recounts") {
    const Dataset ds = load_dataset_from_string(small_csv());
    const Dataset out = subset_conditions(ds, {ConditionId::OC3});
    CHECK(out.observations.size() == 4);
    CHECK(out.count(ConditionId::OC3, SessionId::M1) == 2);
    CHECK(out.count(ConditionId::ONL, SessionId::M1) == 0);

    SUBCASE("keeping every condition is the identity") {
        std::set<ConditionId> all;
        for (ConditionId c : all_conditions()) all.insert(c);
        const Dataset same = subset_conditions(ds, all);
        CHECK(same.observations.size() == ds.observations.size());
    }
    SUBCASE("no matching observations") {
        CHECK_THROWS_AS(subset_conditions(ds, {ConditionId::OBL}), EmptyDataset);
    }
}

TEST_CASE("ingest config remaps the label columns") {
    IngestConfig cfg = IngestConfig::from_json(
        R"({"condition_col": "probe", "session_col": "visit",)"
        R"( "exclude_cols": ["note"]})");
    CHECK(cfg.condition_col == "probe");
    CHECK(cfg.session_col == "visit");

    std::string csv = "probe,visit,note,v1\n"
                      "ONL,M1,x,1.0\n"
                      "OC3,M2,y,2.0\n";
    const Dataset ds = load_dataset_from_string(csv, cfg);
    CHECK(ds.observations.size() == 2);
    CHECK(ds.feature_names == std::vector<std::string>{"v1"});
    CHECK(ds.technical_columns == std::vector<std::string>{"note"});

    CHECK_THROWS_AS(IngestConfig::from_json("{bad"), ConfigError);
}

TEST_CASE("all configured technical columns are excluded from the features") {
    std::string csv = "condition,session,side,flag,overflow,v1,v2\n"
                      "ONL,M1,L,0,n,1.0,2.0\n"
                      "ONL,M2,R,1,y,3.0,4.0\n"
                      "OC3,M1,L,0,n,5.0,6.0\n";
    const Dataset ds = load_dataset_from_string(csv);
    CHECK(ds.feature_names == std::vector<std::string>{"v1", "v2"});
    CHECK(ds.technical_columns ==
          std::vector<std::string>{"side", "flag", "overflow"});
}

TEST_CASE("condition names round-trip, including OC2.5") {
    for (ConditionId c : all_conditions()) {
        auto parsed = parse_condition(to_string(c));
        REQUIRE(parsed.has_value());
        CHECK(*parsed == c);
    }
    CHECK(parse_condition("OC2.5") == ConditionId::OC25);
    CHECK(to_string(ConditionId::OC25) == "OC2.5");
    CHECK(!parse_condition("oc3").has_value());
}
