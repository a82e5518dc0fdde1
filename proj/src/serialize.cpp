#include "conceptid/serialize.hpp"

#include "conceptid/error.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace conceptid {

namespace {

json vec(const Vector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Vector vec_from(const json& a) {
    Vector v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
    return v;
}

json matrix_rows(const Eigen::Ref<const Eigen::MatrixXd>& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json r = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
        rows.push_back(std::move(r));
    }
    return rows;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string format_double(double v) {
    std::ostringstream os;
    os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
    return os.str();
}

} // namespace

SubspaceSpec subspace_spec_from_json(const json& j) {
    if (!j.is_object() || !j.contains("subspaces") || !j["subspaces"].is_array()) {
        throw ConfigError("subspace configuration needs a \"subspaces\" array");
    }
    SubspaceSpec spec;
    for (const auto& s : j["subspaces"]) {
        if (!s.contains("name") || !s.contains("columns")) {
            throw ConfigError("each subspace needs \"name\" and \"columns\"");
        }
        SubspaceSpec::Entry e;
        e.name = s["name"].get<std::string>();
        e.columns = s["columns"].get<std::vector<std::string>>();
        spec.subspaces.push_back(std::move(e));
    }
    if (spec.subspaces.empty()) throw ConfigError("at least one subspace is required");
    return spec;
}

json to_json(const SubspaceSpec& spec) {
    json arr = json::array();
    for (const auto& s : spec.subspaces) arr.push_back({{"name", s.name}, {"columns", s.columns}});
    return json{{"subspaces", arr}};
}

json to_json(const Ellipsoid& e) {
    return json{{"center", vec(e.center)}, {"semi_axes", vec(e.semi_axes)}, {"angles", vec(e.angles)}};
}

Ellipsoid ellipsoid_from_json(const json& j) {
    return Ellipsoid{vec_from(j.at("center")), vec_from(j.at("semi_axes")), vec_from(j.at("angles"))};
}

json to_json(const EllipsoidSet& set) {
    json concepts = json::array();
    for (std::size_t a = 0; a < set.n_concepts(); ++a) {
        json regions = json::array();
        for (std::size_t k = 0; k < set.n_subspaces(); ++k) regions.push_back(to_json(set.region(a, k)));
        concepts.push_back(std::move(regions));
    }
    return json{{"concepts", concepts}};
}

EllipsoidSet ellipsoid_set_from_json(const json& j) {
    const auto& concepts = j.at("concepts");
    if (concepts.empty()) throw ConfigError("ellipsoid set has no concepts");
    std::vector<std::size_t> dims;
    for (const auto& r : concepts[0]) dims.push_back(r.at("center").size());
    std::vector<Ellipsoid> regions;
    for (const auto& c : concepts) {
        for (const auto& r : c) regions.push_back(ellipsoid_from_json(r));
    }
    return EllipsoidSet(concepts.size(), dims, std::move(regions));
}

json to_json(const Labeling& labeling) {
    return json{{"n_concepts", labeling.n_concepts}, {"labels", labeling.labels}};
}

Labeling labeling_from_json(const json& j) {
    return Labeling{j.at("labels").get<std::vector<int>>(), j.at("n_concepts").get<std::size_t>()};
}

void write_labeling_csv(const Labeling& labeling, std::ostream& out) {
    out << "sample_index,label\n";
    for (std::size_t i = 0; i < labeling.size(); ++i) out << i << ',' << labeling.labels[i] << '\n';
}

void write_labeling_csv(const Labeling& labeling, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    write_labeling_csv(labeling, out);
}

Labeling read_labeling_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw EmptyDatasetError("empty labeling file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "sample_index,label") throw SchemaError("labeling header must be 'sample_index,label'");
    Labeling out;
    int max_label = -1;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        long long index = 0;
        long long label = 0;
        char comma = 0;
        std::istringstream ss(line);
        if (!(ss >> index >> comma >> label) || comma != ',' || label < kUnassigned) {
            throw ParseError("bad labeling row '" + line + "'", row, 0);
        }
        if (static_cast<std::size_t>(index) != row) {
            throw ParseError("labeling rows must be in sample order", row, 0);
        }
        out.labels.push_back(static_cast<int>(label));
        max_label = std::max(max_label, static_cast<int>(label));
        ++row;
    }
    out.n_concepts = static_cast<std::size_t>(max_label + 1);
    return out;
}

Labeling read_labeling_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    return read_labeling_csv(in);
}

json to_json(const CqmConfig& cfg) {
    json j{{"s", cfg.s}, {"p", cfg.p}};
    j["preference"] = cfg.preference ? json(*cfg.preference) : json(nullptr);
    return j;
}

CqmConfig cqm_config_from_json(const json& j) {
    CqmConfig cfg;
    cfg.s = j.value("s", cfg.s);
    cfg.p = j.value("p", cfg.p);
    if (j.contains("preference") && !j["preference"].is_null()) {
        cfg.preference = j["preference"].get<std::vector<std::size_t>>();
    }
    return cfg;
}

json to_json(const CmaesConfig& cfg) {
    return json{{"population_size", cfg.population_size},
                {"generations", cfg.generations},
                {"initial_sigma", cfg.initial_sigma},
                {"seed", cfg.seed}};
}

CmaesConfig cmaes_config_from_json(const json& j) {
    CmaesConfig cfg;
    cfg.population_size = j.value("population_size", cfg.population_size);
    cfg.generations = j.value("generations", cfg.generations);
    cfg.initial_sigma = j.value("initial_sigma", cfg.initial_sigma);
    cfg.seed = j.value("seed", cfg.seed);
    return cfg;
}

json to_json(const ConceptModel& model, const std::vector<std::string>& column_names) {
    json config{{"subspaces", to_json(model.subspaces.to_spec(column_names))["subspaces"]},
                {"n_concepts", model.regions.n_concepts()},
                {"cqm", to_json(model.cqm)},
                {"cmaes", to_json(model.cmaes)}};
    return json{{"kind", "concept_model"},
                {"seed", model.seed},
                {"config_hash", config_hash(config)},
                {"config", config},
                {"n_params", model.genotype.size()},
                {"genotype", vec(model.genotype)},
                {"regions", to_json(model.regions)},
                {"q", model.q},
                {"q_alpha", model.q_alpha},
                {"fitness", model.fitness},
                {"degenerate", model.degenerate},
                {"concept_sizes", model.labeling.counts()},
                {"labels", model.labeling.labels},
                {"restart", model.restart},
                {"history", model.history}};
}

ConceptModel concept_model_from_json(const json& j, const std::vector<std::string>& column_names) {
    const json& config = j.at("config");
    const SubspaceSpec spec = subspace_spec_from_json(config);
    ConceptModel m{ellipsoid_set_from_json(j.at("regions")),
                   vec_from(j.at("genotype")),
                   Labeling{j.at("labels").get<std::vector<int>>(), config.at("n_concepts").get<std::size_t>()},
                   j.at("q").get<double>(),
                   j.at("q_alpha").get<std::vector<double>>(),
                   j.at("fitness").get<double>(),
                   j.at("degenerate").get<bool>(),
                   SubspaceConfig::resolve(spec, column_names),
                   cqm_config_from_json(config.at("cqm")),
                   cmaes_config_from_json(config.at("cmaes")),
                   j.at("seed").get<std::uint64_t>(),
                   j.value("history", std::vector<double>{}),
                   j.value("restart", std::size_t{0})};
    return m;
}

json to_json(const KmeansResult& result) {
    return json{{"kind", "kmeans"},
                {"centers", matrix_rows(result.centers)},
                {"inertia", result.inertia},
                {"iterations", result.iterations},
                {"empty_cluster_repairs", result.empty_cluster_repairs}};
}

json to_json(const GmmResult& result) {
    json covs = json::array();
    for (const auto& c : result.covariances) covs.push_back(matrix_rows(c));
    return json{{"kind", "gmm"},
                {"weights", vec(result.weights)},
                {"means", matrix_rows(result.means)},
                {"covariances", covs},
                {"log_likelihood", result.log_likelihood},
                {"iterations", result.iterations}};
}

json to_json(const ConsistencyReport& report) {
    json methods = json::array();
    for (const auto& m : report.methods) {
        json pairs = json::array();
        for (const auto& p : m.pairs) {
            pairs.push_back({{"first", report.subspace_names[p.first]},
                             {"second", report.subspace_names[p.second]},
                             {"mi", optional_number(p.mi)},
                             {"p_value", optional_number(p.p_value)},
                             {"significant", p.p_value ? json(*p.p_value <= report.options.alpha)
                                                       : json(nullptr)}});
        }
        json sil_sub = json::object();
        json overlap = json::object();
        for (std::size_t k = 0; k < report.subspace_names.size(); ++k) {
            sil_sub[report.subspace_names[k]] = optional_number(m.silhouette_subspace[k]);
            overlap[report.subspace_names[k]] = optional_number(m.overlap[k]);
        }
        methods.push_back({{"method", m.method},
                           {"n_assigned", m.n_assigned},
                           {"n_clusters", m.n_clusters},
                           {"insufficient_data", m.insufficient_data},
                           {"pairs", pairs},
                           {"silhouette_joint", optional_number(m.silhouette_joint)},
                           {"silhouette_subspace", sil_sub},
                           {"overlap", overlap}});
    }
    return json{{"kind", "consistency_report"},
                {"subspaces", report.subspace_names},
                {"options",
                 {{"k", report.options.k},
                  {"n_perm", report.options.n_perm},
                  {"alpha", report.options.alpha},
                  {"jitter_seed", report.options.seed}}},
                {"methods", methods}};
}

void write_report_csv(const ConsistencyReport& report, std::ostream& out) {
    out << "method,metric,subspace,value,status\n";
    const auto row = [&](const std::string& method, const std::string& metric,
                         const std::string& where, const std::optional<double>& v,
                         bool insufficient) {
        const char* status = insufficient ? "insufficient_data" : (v ? "ok" : "undefined");
        out << method << ',' << metric << ',' << where << ',' << (v ? format_double(*v) : "")
            << ',' << status << '\n';
    };
    for (const auto& m : report.methods) {
        const bool bad = m.insufficient_data;
        row(m.method, "n_assigned", "joint", static_cast<double>(m.n_assigned), false);
        for (const auto& p : m.pairs) {
            const std::string where = report.subspace_names[p.first] + "|" + report.subspace_names[p.second];
            row(m.method, "mi", where, p.mi, bad);
            row(m.method, "p_value", where, p.p_value, bad);
        }
        row(m.method, "silhouette", "joint", m.silhouette_joint, bad);
        for (std::size_t k = 0; k < report.subspace_names.size(); ++k) {
            row(m.method, "silhouette", report.subspace_names[k], m.silhouette_subspace[k], bad);
        }
        for (std::size_t k = 0; k < report.subspace_names.size(); ++k) {
            row(m.method, "overlap", report.subspace_names[k], m.overlap[k], bad);
        }
    }
}

std::string config_hash(const json& config) {
    const std::string s = config.dump();
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_json(const json& j, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << j.dump(2) << '\n';
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("invalid JSON in '" + path.string() + "': " + e.what());
    }
}

} // namespace conceptid
