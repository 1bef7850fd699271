#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "latentry/cli.hpp"
#include "latentry/dataset.hpp"
#include "latentry/report_io.hpp"
#include "latentry/synth.hpp"
#include "fixtures.hpp"

using namespace latentry;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / "latentry_tests" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string without_timestamp(const fs::path& path) {
    std::istringstream in(slurp(path));
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find("generated_at") != std::string::npos) continue;
        out << line << '\n';
    }
    return out.str();
}

// Small three-condition dataset written through the synth subcommand.
std::string make_core_fixture(const fs::path& dir, std::uint64_t seed) {
    SynthSpec spec = fixtures::core_planted_spec(seed);
    const fs::path spec_path = dir / "spec.json";
    std::ofstream(spec_path) << spec.to_json();
    const fs::path data = dir / "data.csv";
    REQUIRE(run_cli({"synth", "--spec", spec_path.string(), "--out",
                     data.string()}) == 0);
    return data.string();
}

} // namespace

TEST_CASE("synth: default spec writes the reference row counts and a sidecar") {
    const fs::path dir = fresh_dir("synth_default");
    const fs::path out = dir / "data.csv";
    REQUIRE(run_cli({"synth", "--out", out.string()}) == 0);

    const Dataset ds = load_dataset(out.string());
    CHECK(ds.observations.size() == 624); // 270 M1 + 354 M2
    CHECK(ds.feature_count() == 60);
    const std::size_t m1[] = {50, 33, 46, 41, 51, 49};
    const std::size_t m2[] = {60, 57, 58, 60, 57, 62};
    std::size_t i = 0;
    for (ConditionId c : all_conditions()) {
        CHECK(ds.count(c, SessionId::M1) == m1[i]);
        CHECK(ds.count(c, SessionId::M2) == m2[i]);
        ++i;
    }

    const std::string truth = slurp(dir / "data.csv.truth.json");
    CHECK(truth.find("planted_ranking") != std::string::npos);
}

TEST_CASE("synth: same seed twice produces identical files") {
    const fs::path dir = fresh_dir("synth_repeat");
    const fs::path a = dir / "a.csv";
    const fs::path b = dir / "b.csv";
    REQUIRE(run_cli({"synth", "--out", a.string(), "--seed", "9"}) == 0);
    REQUIRE(run_cli({"synth", "--out", b.string(), "--seed", "9"}) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(!slurp(a).empty());
}

TEST_CASE("synth: counts of 2 per cell give 24 rows") {
    const fs::path dir = fresh_dir("synth_small");
    SynthSpec spec = SynthSpec::defaults();
    for (auto& [cell, count] : spec.counts) count = 2;
    const fs::path spec_path = dir / "spec.json";
    std::ofstream(spec_path) << spec.to_json();
    const fs::path out = dir / "tiny.csv";
    REQUIRE(run_cli({"synth", "--spec", spec_path.string(), "--out",
                     out.string()}) == 0);
    CHECK(load_dataset(out.string()).observations.size() == 24);
}

TEST_CASE("synth: malformed spec exits 2") {
    const fs::path dir = fresh_dir("synth_bad");
    const fs::path spec_path = dir / "bad.json";
    std::ofstream(spec_path) << "{ not json";
    CHECK(run_cli({"synth", "--spec", spec_path.string(), "--out",
                   (dir / "x.csv").string()}) == 2);
}

TEST_CASE("analyze writes the report set and flags the planted hierarchy") {
    const fs::path dir = fresh_dir("analyze");
    const std::string data = make_core_fixture(dir, 21);
    const fs::path out = dir / "out";
    REQUIRE(run_cli({"analyze", "--analysis", "core", "--input", data, "--out",
                     out.string()}) == 0);

    CHECK(fs::exists(out / "displacements.csv"));
    CHECK(fs::exists(out / "within_session.csv"));
    CHECK(fs::exists(out / "pca.json"));
    CHECK(fs::exists(out / "summary.json"));
    CHECK(fs::exists(out / "latent_points.csv"));
    CHECK(fs::exists(out / "centroids.csv"));

    // Planted norms OC3:1 < ONL:2 < OC2.5:3 satisfy the core expectation.
    const std::string summary = slurp(out / "summary.json");
    CHECK(summary.find("\"observed:OC3<ONL<OC2.5\": true") != std::string::npos);
}

TEST_CASE("analyze: missing input exits 3") {
    const fs::path dir = fresh_dir("analyze_missing");
    CHECK(run_cli({"analyze", "--input", (dir / "nope.csv").string(), "--out",
                   (dir / "out").string()}) == 3);
}

TEST_CASE("analyze: core analysis rejects non-core conditions") {
    const fs::path dir = fresh_dir("analyze_badconds");
    const std::string data = make_core_fixture(dir, 22);
    CHECK(run_cli({"analyze", "--analysis", "core", "--conditions", "ONL,OBL",
                   "--input", data, "--out", (dir / "out").string()}) == 2);
}

TEST_CASE("unknown flags exit 2") {
    CHECK(run_cli({"analyze", "--nonsense"}) == 2);
    CHECK(run_cli({}) == 2);
}

TEST_CASE("train-eval writes one report set per protocol") {
    const fs::path dir = fresh_dir("train_eval");
    const std::string data = make_core_fixture(dir, 23);
    const fs::path out = dir / "out";
    REQUIRE(run_cli({"train-eval", "--analysis", "core", "--input", data,
                     "--epochs", "120", "--out", out.string()}) == 0);

    CHECK(fs::exists(out / "full.csv"));
    CHECK(fs::exists(out / "held_out.csv"));
    CHECK(fs::exists(out / "loco.csv"));
    CHECK(fs::exists(out / "summary.json"));
    CHECK(fs::exists(out / "pairs.csv"));
    const std::string model = slurp(out / "model.json");
    CHECK(model.find("\"schema_version\": 1") != std::string::npos);
    CHECK(model.find("\"seed\": 42") != std::string::npos);
    CHECK(model.find("\"w1\"") != std::string::npos);

    // Core analysis has three conditions, so three LOCO rows.
    std::istringstream loco(slurp(out / "loco.csv"));
    std::string line;
    int data_rows = 0;
    while (std::getline(loco, line)) {
        if (!line.empty() && line[0] != '#' && line.rfind("withheld", 0) != 0)
            ++data_rows;
    }
    CHECK(data_rows == 3);

    const std::string full = slurp(out / "full.csv");
    CHECK(full.find("# model_seed: 42") != std::string::npos);
    CHECK(full.find("# config_hash: ") != std::string::npos);
}

TEST_CASE("train-eval: different seeds differ, same seed is byte-identical") {
    const fs::path dir = fresh_dir("train_eval_seeds");
    const std::string data = make_core_fixture(dir, 24);

    auto run = [&](const std::string& name, const std::string& seed) {
        const fs::path out = dir / name;
        REQUIRE(run_cli({"train-eval", "--analysis", "core", "--input", data,
                         "--epochs", "100", "--seed", seed, "--out",
                         out.string()}) == 0);
        return out;
    };
    const fs::path a = run("a", "7");
    const fs::path b = run("b", "7");
    const fs::path c = run("c", "42");

    CHECK(without_timestamp(a / "full.csv") == without_timestamp(b / "full.csv"));
    CHECK(without_timestamp(a / "held_out.csv") ==
          without_timestamp(b / "held_out.csv"));
    CHECK(without_timestamp(a / "full.csv") != without_timestamp(c / "full.csv"));

    // The split seed follows the model seed unless given explicitly.
    CHECK(slurp(a / "held_out.csv").find("# split_seed: 7") != std::string::npos);
}

TEST_CASE("train-eval honors the LATENTRY_SEED fallback") {
    const fs::path dir = fresh_dir("train_eval_env");
    const std::string data = make_core_fixture(dir, 25);
    setenv("LATENTRY_SEED", "7", 1);
    const fs::path out_env = dir / "env";
    REQUIRE(run_cli({"train-eval", "--analysis", "core", "--input", data,
                     "--epochs", "60", "--out", out_env.string()}) == 0);
    unsetenv("LATENTRY_SEED");
    const std::string full = slurp(out_env / "full.csv");
    CHECK(full.find("# model_seed: 7") != std::string::npos);
}

TEST_CASE("train-eval: numeric divergence exits 4") {
    const fs::path dir = fresh_dir("train_eval_diverge");
    const std::string data = make_core_fixture(dir, 26);
    CHECK(run_cli({"train-eval", "--analysis", "core", "--input", data,
                   "--epochs", "10", "--lr", "1e160", "--out",
                   (dir / "out").string()}) == 4);
}

TEST_CASE("json format emits json tables") {
    const fs::path dir = fresh_dir("train_eval_json");
    const std::string data = make_core_fixture(dir, 27);
    const fs::path out = dir / "out";
    REQUIRE(run_cli({"train-eval", "--analysis", "core", "--input", data,
                     "--epochs", "60", "--format", "json", "--out",
                     out.string()}) == 0);
    CHECK(fs::exists(out / "full.json"));
    CHECK(fs::exists(out / "held_out.json"));
    CHECK(fs::exists(out / "loco.json"));
    const std::string full = slurp(out / "full.json");
    CHECK(full.find("\"protocol\": \"full\"") != std::string::npos);
    CHECK(full.find("\"observed_ranking\"") != std::string::npos);
}
