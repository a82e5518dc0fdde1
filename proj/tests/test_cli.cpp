#include <doctest.h>

#include "conceptid/cli.hpp"
#include "conceptid/error.hpp"
#include "conceptid/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

using namespace conceptid;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run(std::vector<std::string> args) {
    args.insert(args.begin(), "conceptid");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("conceptid_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

} // namespace

TEST_CASE("usage errors exit with 2") {
    CHECK(run({}).code == kExitUsage);
    CHECK(run({"gen-data", "nonsense"}).code == kExitUsage);
    CHECK(run({"reproduce", "5d"}).code == kExitUsage);
    CHECK(run({"--help"}).code == kExitOk);

    const fs::path dir = scratch("usage");
    const std::string csv = (dir / "d.csv").string();
    REQUIRE(run({"--out", csv, "gen-data", "uniform2d", "--n", "50"}).code == kExitOk);
    const auto r = run({"identify", "--data", csv});
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find("subspace") != std::string::npos);
    CHECK(run({"identify", "--data", csv, "--subspace", "a=nope"}).code == kExitUsage);
    CHECK(run({"identify", "--data", (dir / "missing.csv").string(), "--subspace", "f1"}).code == kExitUsage);
}

TEST_CASE("gen-data writes a csv and a sidecar") {
    const fs::path dir = scratch("gen");
    const fs::path csv = dir / "g.csv";
    const auto r = run({"--seed", "4", "--out", csv.string(), "gen-data", "gaussian4d", "--n", "30",
                        "--sigma", "0.5"});
    REQUIRE(r.code == kExitOk);
    const Dataset ds = load_csv(csv);
    CHECK(ds.rows() == 30);
    CHECK(ds.cols() == 4);
    const json side = read_json(dir / "g.json");
    CHECK(side["seed"] == 4);
    CHECK(side["generator"] == "gaussian4d");
    CHECK(side["sigma"] == 0.5);
    CHECK(side.contains("config_hash"));
}

TEST_CASE("identify, cluster and evaluate chain together and rerun identically") {
    const fs::path dir = scratch("chain");
    const std::string csv = (dir / "d.csv").string();
    REQUIRE(run({"--seed", "1", "--out", csv, "gen-data", "gaussian4d", "--n", "150"}).code == kExitOk);

    const auto pipeline = [&](const fs::path& out) {
        const std::string o = out.string();
        REQUIRE(run({"--seed", "2", "--out", o, "identify", "--data", csv, "--subspace", "a=f1,f2",
                     "--subspace", "b=f3,f4", "--generations", "15"})
                    .code == kExitOk);
        REQUIRE(run({"--seed", "2", "--out", o, "cluster", "kmeans", "--data", csv}).code == kExitOk);
        REQUIRE(run({"--seed", "2", "--out", o, "cluster", "gmm-trunc", "--data", csv, "--resp-threshold",
                     "0.8"})
                    .code == kExitOk);
        const auto ev = run({"--seed", "2", "--out", o, "evaluate", "--data", csv, "--subspace", "a=f1,f2",
                             "--subspace", "b=f3,f4", "--labels", (out / "labels_concept.csv").string(),
                             "--labels", "km=" + (out / "labels_kmeans.csv").string(), "--labels",
                             (out / "labels_gmm_trunc.csv").string(), "--n-perm", "10"});
        REQUIRE(ev.code == kExitOk);
        CHECK(ev.out.find("km") != std::string::npos);
    };
    pipeline(dir / "one");
    pipeline(dir / "two");
    for (const char* f : {"model.json", "labels_concept.csv", "kmeans.json", "gmm_trunc.json", "report.json",
                          "report.csv"})
        CHECK_MESSAGE(slurp(dir / "one" / f) == slurp(dir / "two" / f), f);

    const json report = read_json(dir / "one" / "report.json");
    CHECK(report.dump().find("gmm_trunc") != std::string::npos);
    CHECK(read_json(dir / "one" / "kmeans.json")["seed"] == 2);

    CHECK(run({"--out", (dir / "bad").string(), "cluster", "kmeans", "--data", csv, "--resp-threshold", "0.5"})
              .code == kExitUsage);
}

TEST_CASE("seed lists") {
    CHECK(parse_seed_list("1..3") == std::vector<std::uint64_t>{1, 2, 3});
    CHECK(parse_seed_list("7") == std::vector<std::uint64_t>{7});
    CHECK(parse_seed_list("1,4..5,9") == std::vector<std::uint64_t>{1, 4, 5, 9});
    CHECK_THROWS(parse_seed_list(""));
    CHECK_THROWS(parse_seed_list("3..1"));
    CHECK_THROWS(parse_seed_list("a"));
}

TEST_CASE("interval helpers") {
    Matrix v(6, 1);
    v << 0, 1, 2, 3, 4, 5;
    const Labeling l{{0, 0, 1, 1, -1, 2}, 4};
    const auto iv = concept_intervals(l, v, 0);
    REQUIRE(iv.size() == 4);
    CHECK(*iv[0] == std::pair{0.0, 1.0});
    CHECK(*iv[1] == std::pair{2.0, 3.0});
    CHECK(*iv[2] == std::pair{5.0, 5.0});
    CHECK_FALSE(iv[3]);
    CHECK(pairwise_disjoint(iv));

    std::vector<std::optional<std::pair<double, double>>> touching{std::pair{0.0, 4.0}, std::pair{4.0, 6.0}};
    CHECK_FALSE(pairwise_disjoint(touching));
    std::vector<std::optional<std::pair<double, double>>> nested{std::pair{0.0, 10.0}, std::pair{4.0, 6.0}};
    CHECK_FALSE(pairwise_disjoint(nested));
}

TEST_CASE("experiment setups and overrides") {
    const ExperimentSetup desk = experiment_setup("4d");
    const ExperimentSetup paper = experiment_setup("4d", Scale::Paper);
    CHECK(paper.generator.n_samples == 30000);
    CHECK(paper.cmaes.generations == 1000);
    CHECK(paper.cmaes.population_size == 10);
    CHECK(desk.subspaces.subspaces.size() == 2);
    CHECK(experiment_setup("2d", Scale::Paper).generator.n_samples == 34000);
    CHECK(experiment_setup("energy", Scale::Paper).generator.n_samples == 20699);
    CHECK_THROWS_AS(experiment_setup("3d"), ConfigError);

    ExperimentSetup s = desk;
    apply_overrides(s, json::parse(R"({"cmaes": {"generations": 7}, "generator": {"n_samples": 90}})"));
    CHECK(s.cmaes.generations == 7);
    CHECK(s.generator.n_samples == 90);
    CHECK_THROWS_AS(apply_overrides(s, json::parse(R"({"bogus": 1})")), ConfigError);
    CHECK(to_json(s) != to_json(desk));
}

TEST_CASE("a small 4-D run produces a full report and assertions") {
    ExperimentSetup s = experiment_setup("4d");
    apply_overrides(s, json::parse(R"({"cmaes": {"generations": 40}, "generator": {"n_samples": 300},
                                       "report": {"n_perm": 10}})"));
    const SeedRun a = run_seed(s, 3);
    const SeedRun b = run_seed(s, 3);
    CHECK(a.model.labeling.labels == b.model.labeling.labels);
    CHECK(a.labelings.size() == kMethods.size());
    CHECK(a.report.methods.size() == kMethods.size());

    const std::vector<SeedRun> runs{a};
    const auto assertions = check_assertions(s, runs);
    CHECK(assertions.size() == 2);
    for (const auto& x : assertions) CHECK_FALSE(x.detail.empty());

    const json summary = summarize(s, runs, assertions);
    CHECK(summary.contains("assertions"));
    CHECK(summary["per_seed"].size() == 1);

    const fs::path dir = scratch("exp");
    write_seed_artifacts(s, a, dir / "seed_3");
    write_summary_artifacts(summary, dir);
    for (const char* f : {"dataset.csv", "model.json", "labels_concept.csv", "labels_gmm_trunc.csv",
                          "report.json", "projection.csv"})
        CHECK_MESSAGE(fs::exists(dir / "seed_3" / f), f);
    CHECK(fs::exists(dir / "summary.json"));
    CHECK(fs::exists(dir / "bars.csv"));
}
