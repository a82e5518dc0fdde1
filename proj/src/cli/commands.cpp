#include "conceptid/cli.hpp"

#include "conceptid/error.hpp"
#include "conceptid/experiment.hpp"
#include "conceptid/rng.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;

namespace conceptid {

namespace {

struct GlobalFlags {
    std::uint64_t seed = 0;
    std::string out;
    std::string config;
    int threads = 0;
};

// "name=c1,c2" or "c1,c2" (named after its columns).
SubspaceSpec::Entry parse_subspace(const std::string& text) {
    SubspaceSpec::Entry e;
    std::string cols = text;
    if (const auto eq = text.find('='); eq != std::string::npos) {
        e.name = text.substr(0, eq);
        cols = text.substr(eq + 1);
    }
    std::size_t start = 0;
    while (start <= cols.size()) {
        const std::size_t comma = std::min(cols.find(',', start), cols.size());
        const std::string c = cols.substr(start, comma - start);
        if (c.empty()) throw ConfigError("empty column name in subspace '" + text + "'");
        e.columns.push_back(c);
        start = comma + 1;
    }
    if (e.name.empty()) {
        for (std::size_t i = 0; i < e.columns.size(); ++i) e.name += (i ? "_" : "") + e.columns[i];
    }
    return e;
}

json load_config(const GlobalFlags& g) {
    if (g.config.empty()) return json::object();
    json j = read_json(g.config);
    if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
    return j;
}

SubspaceSpec subspaces_from(const std::vector<std::string>& flags, const json& config) {
    SubspaceSpec spec;
    if (!flags.empty()) {
        for (const auto& f : flags) spec.subspaces.push_back(parse_subspace(f));
    } else if (config.contains("subspaces")) {
        spec = subspace_spec_from_json(config);
    }
    if (spec.subspaces.empty()) {
        throw ConfigError("no subspaces declared; use --subspace NAME=COL[,COL...] or a config file");
    }
    return spec;
}

fs::path out_dir(const GlobalFlags& g, const char* fallback) {
    fs::path p = g.out.empty() ? fs::path(fallback) : fs::path(g.out);
    fs::create_directories(p);
    return p;
}

std::string method_file_name(std::string method) {
    std::replace(method.begin(), method.end(), '-', '_');
    return method;
}

void print_report(const ConsistencyReport& r, std::ostream& out) {
    out << std::left << std::setw(14) << "method" << std::setw(10) << "assigned" << std::setw(12) << "mi"
        << std::setw(10) << "p" << std::setw(12) << "silhouette" << "overlap\n";
    for (const auto& m : r.methods) {
        out << std::setw(14) << m.method << std::setw(10) << m.n_assigned;
        if (m.insufficient_data) {
            out << "insufficient data\n";
            continue;
        }
        auto opt = [](const std::optional<double>& v) {
            std::ostringstream os;
            if (v) os << std::setprecision(4) << *v;
            else os << "-";
            return os.str();
        };
        const auto& p = m.pairs.empty() ? SubspacePairResult{} : m.pairs.front();
        out << std::setw(12) << opt(p.mi) << std::setw(10) << opt(p.p_value) << std::setw(12)
            << opt(m.silhouette_joint);
        for (std::size_t k = 0; k < m.overlap.size(); ++k) out << (k ? " " : "") << opt(m.overlap[k]);
        out << '\n';
    }
}

// ---------------------------------------------------------------- gen-data

struct GenDataArgs {
    std::string kind;
    std::size_t n = 1000;
    double sigma = 1.0;
};

void cmd_gen_data(const GlobalFlags& g, const GenDataArgs& a, std::ostream& out) {
    GeneratorSpec spec;
    spec.kind = parse_generator_kind(a.kind);
    spec.n_samples = a.n;
    spec.seed = g.seed;
    spec.sigma = a.sigma;
    const Dataset ds = generate(spec);

    const fs::path path = g.out.empty() ? fs::path("dataset.csv") : fs::path(g.out);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    write_csv(ds, path);

    json sidecar{{"kind", "dataset"},
                 {"generator", to_string(spec.kind)},
                 {"n_samples", spec.n_samples},
                 {"seed", spec.seed},
                 {"columns", ds.column_names()},
                 {"rng", Rng::kIdentity}};
    if (spec.kind == GeneratorKind::Gaussian4d) sidecar["sigma"] = spec.sigma;
    sidecar["config_hash"] = config_hash(sidecar);
    fs::path side = path;
    side.replace_extension(".json");
    write_json(sidecar, side);
    out << "wrote " << path.string() << " (" << ds.rows() << " rows) and " << side.string() << '\n';
}

// ---------------------------------------------------------------- identify

struct IdentifyArgs {
    std::string data;
    std::vector<std::string> subspaces;
    std::optional<std::size_t> n_concepts;
    std::optional<std::size_t> population;
    std::optional<std::size_t> generations;
    std::optional<double> sigma;
    std::optional<std::size_t> restarts;
    std::optional<double> radius;
    std::optional<std::string> init;
    bool progress = false;
};

void cmd_identify(const GlobalFlags& g, const IdentifyArgs& a, std::ostream& out, std::ostream& err) {
    const json config = load_config(g);
    const SubspaceSpec spec = subspaces_from(a.subspaces, config);
    const Dataset ds = load_csv(a.data, spec);
    const SubspaceConfig sc = SubspaceConfig::resolve(spec, ds.column_names());

    const std::size_t n_concepts = a.n_concepts.value_or(config.value("n_concepts", std::size_t{3}));
    CqmConfig cqm = config.contains("cqm") ? cqm_config_from_json(config["cqm"]) : CqmConfig{};
    CmaesConfig cmaes = config.contains("cmaes") ? cmaes_config_from_json(config["cmaes"]) : CmaesConfig{};
    if (a.population) cmaes.population_size = *a.population;
    if (a.generations) cmaes.generations = *a.generations;
    if (a.sigma) cmaes.initial_sigma = *a.sigma;
    cmaes.seed = g.seed;

    IdentifyOptions opts;
    if (config.contains("identify")) {
        const json& i = config["identify"];
        opts.initial_radius_fraction = i.value("initial_radius_fraction", opts.initial_radius_fraction);
        opts.restarts = i.value("restarts", opts.restarts);
        if (i.value("init", std::string("kmeans")) == "midpoint") opts.init = InitStrategy::BoxMidpoint;
    }
    if (a.restarts) opts.restarts = *a.restarts;
    if (a.radius) opts.initial_radius_fraction = *a.radius;
    if (a.init) {
        if (*a.init == "kmeans") opts.init = InitStrategy::KmeansCenters;
        else if (*a.init == "midpoint") opts.init = InitStrategy::BoxMidpoint;
        else throw ConfigError("--init must be kmeans or midpoint");
    }
    if (a.progress) opts.progress = &err;

    const ConceptModel model = identify_concepts(ds, sc, n_concepts, cqm, cmaes, opts);
    const fs::path dir = out_dir(g, ".");
    write_json(to_json(model, ds.column_names()), dir / "model.json");
    write_labeling_csv(model.labeling, dir / "labels_concept.csv");

    out << "Q = " << model.q << (model.degenerate ? " (degenerate)" : "") << ", sizes";
    for (auto c : model.labeling.counts()) out << ' ' << c;
    out << ", " << model.genotype.size() << " parameters\n";
    out << "wrote " << (dir / "model.json").string() << " and " << (dir / "labels_concept.csv").string() << '\n';
}

// ---------------------------------------------------------------- cluster

struct ClusterArgs {
    std::string method;
    std::string data;
    std::size_t k = 3;
    std::optional<double> radius;
    std::optional<double> threshold;
};

void cmd_cluster(const GlobalFlags& g, const ClusterArgs& a, std::ostream& out) {
    const Dataset ds = load_csv(a.data);
    const fs::path dir = out_dir(g, ".");
    const std::string name = method_file_name(a.method);
    Labeling labeling;
    json model;
    if (a.method == "kmeans" || a.method == "kmeans-trunc") {
        if (a.threshold) throw ConfigError("--resp-threshold applies to gmm-trunc only");
        const KmeansResult km = kmeans(ds, a.k, g.seed);
        labeling = km.labeling;
        if (a.method == "kmeans-trunc") labeling = truncate_by_radius(km, ds, a.radius.value_or(0.2));
        else if (a.radius) throw ConfigError("--radius-frac needs kmeans-trunc or gmm-trunc");
        model = to_json(km);
    } else if (a.method == "gmm" || a.method == "gmm-trunc") {
        const GmmResult gm = gmm_em(ds, a.k, g.seed);
        labeling = gm.labeling;
        if (a.method == "gmm-trunc") {
            if (a.radius && a.threshold) throw ConfigError("give either --radius-frac or --resp-threshold");
            labeling = a.radius ? truncate_by_radius(gm, ds, *a.radius)
                                : truncate_by_responsibility(gm, a.threshold.value_or(0.9));
        } else if (a.radius || a.threshold) {
            throw ConfigError("truncation flags need gmm-trunc");
        }
        model = to_json(gm);
    } else {
        throw ConfigError("unknown method '" + a.method + "'");
    }
    json params{{"method", a.method}, {"k", a.k}};
    if (a.radius) params["radius_frac"] = *a.radius;
    if (a.threshold) params["resp_threshold"] = *a.threshold;
    model["seed"] = g.seed;
    model["params"] = params;
    model["config_hash"] = config_hash(params);
    write_labeling_csv(labeling, dir / ("labels_" + name + ".csv"));
    write_json(model, dir / (name + ".json"));
    out << a.method << ": " << labeling.n_assigned() << "/" << labeling.size() << " samples assigned\n";
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
    std::string data;
    std::vector<std::string> subspaces;
    std::vector<std::string> labels;
    std::size_t k = kDefaultKsgNeighbors;
    std::size_t n_perm = kDefaultPermutations;
    double alpha = kDefaultAlpha;
};

std::pair<std::string, fs::path> parse_labels_arg(const std::string& text) {
    if (const auto eq = text.find('='); eq != std::string::npos) {
        return {text.substr(0, eq), fs::path(text.substr(eq + 1))};
    }
    fs::path p(text);
    std::string stem = p.stem().string();
    if (stem.rfind("labels_", 0) == 0) stem = stem.substr(7);
    return {stem, p};
}

void cmd_evaluate(const GlobalFlags& g, const EvaluateArgs& a, std::ostream& out) {
    const json config = load_config(g);
    const SubspaceSpec spec = subspaces_from(a.subspaces, config);
    const Dataset ds = load_csv(a.data, spec);
    const SubspaceConfig sc = SubspaceConfig::resolve(spec, ds.column_names());

    NamedLabelings labelings;
    for (const auto& l : a.labels) {
        auto [name, path] = parse_labels_arg(l);
        labelings.emplace_back(name, read_labeling_csv(path));
    }
    ReportOptions opts;
    opts.k = a.k;
    opts.n_perm = a.n_perm;
    opts.alpha = a.alpha;
    opts.seed = g.seed;
    const ConsistencyReport report = consistency_report(ds, sc, labelings, opts);

    const fs::path dir = out_dir(g, ".");
    json j = to_json(report);
    j["seed"] = g.seed;
    j["config_hash"] = config_hash(json{{"subspaces", to_json(spec)["subspaces"]},
                                        {"k", a.k},
                                        {"n_perm", a.n_perm},
                                        {"alpha", a.alpha}});
    write_json(j, dir / "report.json");
    std::ofstream csv(dir / "report.csv");
    if (!csv) throw Error("cannot write " + (dir / "report.csv").string());
    write_report_csv(report, csv);
    print_report(report, out);
}

// ---------------------------------------------------------------- reproduce

struct ReproduceArgs {
    std::string experiment;
    std::string seeds = "1..10";
    std::string scale = "desk";
};

int cmd_reproduce(const GlobalFlags& g, const ReproduceArgs& a, std::ostream& out, std::ostream& err) {
    ExperimentSetup setup = experiment_setup(a.experiment, parse_scale(a.scale));
    if (!g.config.empty()) apply_overrides(setup, load_config(g));
    const std::vector<std::uint64_t> seeds = parse_seed_list(a.seeds);
    const fs::path root = out_dir(g, "runs") / setup.name;

    std::vector<SeedRun> runs;
    runs.reserve(seeds.size());
    for (std::uint64_t seed : seeds) {
        try {
            runs.push_back(run_seed(setup, seed));
        } catch (const std::exception& e) {
            // keep what finished so far before giving up
            write_summary_artifacts(summarize(setup, runs, {}), root);
            err << "seed " << seed << " failed: " << e.what() << '\n';
            throw;
        }
        const SeedRun& r = runs.back();
        write_seed_artifacts(setup, r, root / ("seed_" + std::to_string(seed)));
        out << "seed " << seed << ": Q = " << r.model.q << ", sizes";
        for (auto c : r.model.labeling.counts()) out << ' ' << c;
        out << '\n';
    }

    const auto assertions = check_assertions(setup, runs);
    write_summary_artifacts(summarize(setup, runs, assertions), root);
    bool ok = true;
    for (const auto& as : assertions) {
        out << (as.passed ? "PASS " : "FAIL ") << setup.name << '.' << as.name << ": " << as.detail << '\n';
        ok = ok && as.passed;
    }
    out << "wrote " << (root / "summary.json").string() << '\n';
    return ok ? kExitOk : kExitAssertionFailed;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Concept identification: consistent, non-overlapping groups across feature subspaces"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalFlags g;
    app.add_option("--seed", g.seed, "Random seed");
    app.add_option("--out", g.out, "Output file (gen-data) or run directory");
    app.add_option("--config", g.config, "JSON configuration file");
    app.add_option("--threads", g.threads, "OpenMP thread count (0 = runtime default)")
        ->check(CLI::NonNegativeNumber);

    GenDataArgs gen;
    auto* gen_cmd = app.add_subcommand("gen-data", "Generate a synthetic dataset");
    gen_cmd->add_option("kind", gen.kind, "uniform2d, gaussian4d or energy_surrogate")->required();
    gen_cmd->add_option("--n", gen.n, "Number of samples")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--sigma", gen.sigma, "Standard deviation (gaussian4d)");

    IdentifyArgs id;
    auto* id_cmd = app.add_subcommand("identify", "Identify concepts by evolutionary optimization");
    id_cmd->add_option("--data", id.data, "Input CSV")->required();
    id_cmd->add_option("--subspace", id.subspaces, "NAME=COL[,COL...] (repeat per subspace)");
    id_cmd->add_option("--n-concepts", id.n_concepts, "Number of concepts");
    id_cmd->add_option("--population", id.population, "CMA-ES population size");
    id_cmd->add_option("--generations", id.generations, "CMA-ES generations");
    id_cmd->add_option("--sigma", id.sigma, "Initial CMA-ES step size");
    id_cmd->add_option("--restarts", id.restarts, "Independent runs; the best by fitness is kept");
    id_cmd->add_option("--radius-frac", id.radius, "Initial region radius relative to the range");
    id_cmd->add_option("--init", id.init, "kmeans or midpoint");
    id_cmd->add_flag("--progress", id.progress, "Write per-generation JSON lines to stderr");

    ClusterArgs cl;
    auto* cl_cmd = app.add_subcommand("cluster", "Run a baseline clustering");
    cl_cmd->add_option("method", cl.method, "kmeans, gmm, kmeans-trunc or gmm-trunc")
        ->required()
        ->check(CLI::IsMember({"kmeans", "gmm", "kmeans-trunc", "gmm-trunc"}));
    cl_cmd->add_option("--data", cl.data, "Input CSV")->required();
    cl_cmd->add_option("--k", cl.k, "Number of clusters");
    cl_cmd->add_option("--radius-frac", cl.radius, "Keep samples within this fraction of d_max");
    cl_cmd->add_option("--resp-threshold", cl.threshold, "Keep samples whose max responsibility exceeds this");

    EvaluateArgs ev;
    auto* ev_cmd = app.add_subcommand("evaluate", "Consistency report for one or more labelings");
    ev_cmd->add_option("--data", ev.data, "Input CSV")->required();
    ev_cmd->add_option("--subspace", ev.subspaces, "NAME=COL[,COL...] (repeat per subspace)");
    ev_cmd->add_option("--labels", ev.labels, "[NAME=]labels.csv (repeatable)")->required();
    ev_cmd->add_option("--k", ev.k, "KSG neighbour count");
    ev_cmd->add_option("--n-perm", ev.n_perm, "Permutations for the significance test");
    ev_cmd->add_option("--alpha", ev.alpha, "Significance level");

    ReproduceArgs rp;
    auto* rp_cmd = app.add_subcommand("reproduce", "Run a reference experiment end to end");
    rp_cmd->add_option("experiment", rp.experiment, "2d, 4d or energy")
        ->required()
        ->check(CLI::IsMember({"2d", "4d", "energy"}));
    rp_cmd->add_option("--seeds", rp.seeds, "Seed list, e.g. 1..10 or 1,3,5");
    rp_cmd->add_option("--scale", rp.scale, "desk or paper")->check(CLI::IsMember({"desk", "paper"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (g.threads > 0) omp_set_num_threads(g.threads);
        if (gen_cmd->parsed()) cmd_gen_data(g, gen, out);
        else if (id_cmd->parsed()) cmd_identify(g, id, out, err);
        else if (cl_cmd->parsed()) cmd_cluster(g, cl, out);
        else if (ev_cmd->parsed()) cmd_evaluate(g, ev, out);
        else if (rp_cmd->parsed()) return cmd_reproduce(g, rp, out, err);
        return kExitOk;
    } catch (const json::exception& e) {
        err << "error: malformed configuration: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return kExitUsage;
}

} // namespace conceptid
