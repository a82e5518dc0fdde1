#include <doctest.h>

#include "conceptid/error.hpp"
#include "conceptid/serialize.hpp"

#include <filesystem>
#include <sstream>

using namespace conceptid;

namespace {

Dataset small_dataset() {
    Matrix m(6, 3);
    m << 0, 0, 1, 0.1, 0.2, 1.5, 5, 5, 2, 5.1, 5.3, 2.5, 9, 9, 3, 9.2, 8.9, 3.5;
    return Dataset(m, {"a", "b", "c"});
}

SubspaceConfig ab_c(const Dataset& ds) {
    SubspaceSpec spec;
    spec.subspaces = {{"ab", {"a", "b"}}, {"c", {"c"}}};
    return SubspaceConfig::resolve(spec, ds.column_names());
}

} // namespace

TEST_CASE("subspace spec round trip") {
    const json j = json::parse(R"({"subspaces": [{"name": "ab", "columns": ["a", "b"]},
                                                 {"name": "c", "columns": ["c"]}], "other": 1})");
    const SubspaceSpec spec = subspace_spec_from_json(j);
    REQUIRE(spec.subspaces.size() == 2);
    CHECK(spec.subspaces[0].columns == std::vector<std::string>{"a", "b"});
    CHECK(subspace_spec_from_json(to_json(spec)).subspaces[1].name == "c");
    CHECK_THROWS(subspace_spec_from_json(json::parse(R"({"subspaces": 3})")));
}

TEST_CASE("ellipsoid set round trip is exact") {
    EllipsoidSet set(2, {2, 1});
    for (std::size_t a = 0; a < 2; ++a) {
        set.region(a, 0).center = Eigen::Vector2d(0.1 * static_cast<double>(a), 1.0 / 3.0);
        set.region(a, 0).semi_axes = Eigen::Vector2d(0.7, 1e-7);
        set.region(a, 0).angles = Vector::Constant(1, 2.9);
        set.region(a, 1).center = Vector::Constant(1, -4.25);
        set.region(a, 1).semi_axes = Vector::Constant(1, 3.0);
        set.region(a, 1).angles = Vector(0);
    }
    const EllipsoidSet back = ellipsoid_set_from_json(json::parse(to_json(set).dump()));
    REQUIRE(back.n_concepts() == 2);
    REQUIRE(back.dims() == set.dims());
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t k = 0; k < 2; ++k) {
            CHECK(back.region(a, k).center == set.region(a, k).center);
            CHECK(back.region(a, k).semi_axes == set.region(a, k).semi_axes);
            CHECK(back.region(a, k).angles == set.region(a, k).angles);
        }
}

TEST_CASE("labeling csv round trip") {
    const Labeling l{{0, -1, 2, 1, -1}, 3};
    std::stringstream ss;
    write_labeling_csv(l, ss);
    CHECK(ss.str().rfind("sample_index,label\n0,0\n1,-1\n", 0) == 0);
    const Labeling back = read_labeling_csv(ss);
    CHECK(back.labels == l.labels);
    CHECK(labeling_from_json(to_json(l)).labels == l.labels);

    std::istringstream bad("sample_index,label\n1,0\n");
    CHECK_THROWS_AS(read_labeling_csv(bad), ParseError);
}

TEST_CASE("config round trips") {
    CqmConfig cqm;
    cqm.s = 0.2;
    cqm.preference = std::vector<std::size_t>{1, 4};
    const CqmConfig cqm2 = cqm_config_from_json(to_json(cqm));
    CHECK(cqm2.s == 0.2);
    CHECK(cqm2.p == 0.1);
    CHECK(cqm2.preference == cqm.preference);

    CmaesConfig cma;
    cma.population_size = 14;
    cma.seed = 123456789012345ULL;
    const CmaesConfig cma2 = cmaes_config_from_json(to_json(cma));
    CHECK(cma2.population_size == 14);
    CHECK(cma2.seed == cma.seed);
    CHECK(cma2.generations == cma.generations);
}

TEST_CASE("concept model round trip keeps labels and regions") {
    const Dataset ds = small_dataset();
    const SubspaceConfig sc = ab_c(ds);
    CmaesConfig cfg;
    cfg.generations = 20;
    cfg.seed = 5;
    const ConceptModel m = identify_concepts(ds, sc, 2, CqmConfig{}, cfg);
    const json j = to_json(m, ds.column_names());
    const ConceptModel back = concept_model_from_json(json::parse(j.dump()), ds.column_names());
    CHECK(back.labeling.labels == m.labeling.labels);
    CHECK(back.genotype == m.genotype);
    CHECK(back.q == m.q);
    CHECK(back.seed == m.seed);
    CHECK(to_json(back, ds.column_names()).dump() == j.dump());
    // a model refers to columns by name
    CHECK_THROWS(concept_model_from_json(j, {"x", "y", "z"}));
}

TEST_CASE("report csv has one row per method, metric and subspace") {
    const Dataset ds = small_dataset();
    const SubspaceConfig sc = ab_c(ds);
    NamedLabelings named{{"m", Labeling{{0, 0, 1, 1, 2, 2}, 3}}};
    ReportOptions opt;
    opt.k = 1;
    opt.n_perm = 5;
    const ConsistencyReport r = consistency_report(ds, sc, named, opt);
    std::ostringstream out;
    write_report_csv(r, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line.find("method") == 0);
    std::size_t rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    // n_assigned, mi + p-value of the one pair, 3 silhouettes, 2 overlaps
    CHECK(rows == 8);
}

TEST_CASE("config hash is stable and key-order independent") {
    const json a = json::parse(R"({"x": 1, "y": [1, 2]})");
    const json b = json::parse(R"({"y": [1, 2], "x": 1})");
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a) != config_hash(json::parse(R"({"x": 2, "y": [1, 2]})")));
    CHECK(config_hash(a).size() == 16);
}

TEST_CASE("json file round trip") {
    const auto path = std::filesystem::temp_directory_path() / "conceptid_json_rt.json";
    const json j = {{"a", 1.0 / 3.0}, {"b", "text"}};
    write_json(j, path);
    CHECK(read_json(path) == j);
    std::filesystem::remove(path);
    CHECK_THROWS(read_json(path));
}
