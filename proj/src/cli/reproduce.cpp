#include "conceptid/experiment.hpp"

#include "conceptid/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace conceptid {

namespace {

constexpr double kSilhouetteGap = 0.25;
constexpr double kConceptOverlap4d = 0.02;
constexpr double kBaselineOverlap4d = 0.2;

std::size_t required(std::size_t n, double fraction) {
    // 9/10 of 10 seeds is 9; round up so small runs stay at least as strict
    return static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
}

std::string count_text(std::size_t hits, std::size_t n, std::size_t need) {
    return std::to_string(hits) + "/" + std::to_string(n) + " seeds (need " + std::to_string(need) + ")";
}

SubspaceSpec spec_of(std::initializer_list<std::pair<const char*, std::vector<std::string>>> entries) {
    SubspaceSpec spec;
    for (const auto& [name, cols] : entries) spec.subspaces.push_back({name, cols});
    return spec;
}

const char* to_string(Truncation::Mode mode) {
    return mode == Truncation::Mode::Radius ? "radius" : "responsibility";
}

Truncation::Mode parse_mode(const std::string& s) {
    if (s == "radius") return Truncation::Mode::Radius;
    if (s == "responsibility") return Truncation::Mode::Responsibility;
    throw ConfigError("unknown truncation mode '" + s + "'");
}

const char* to_string(InitStrategy s) {
    return s == InitStrategy::KmeansCenters ? "kmeans" : "midpoint";
}

InitStrategy parse_init(const std::string& s) {
    if (s == "kmeans") return InitStrategy::KmeansCenters;
    if (s == "midpoint") return InitStrategy::BoxMidpoint;
    throw ConfigError("unknown init strategy '" + s + "'");
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* where) {
    if (!j.is_object()) throw ConfigError(std::string(where) + " must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) ==
            allowed.end()) {
            throw ConfigError("unknown key '" + key + "' in " + where);
        }
    }
}

Labeling truncate(const Truncation& t, const KmeansResult& km, const Dataset& ds) {
    if (t.mode == Truncation::Mode::Responsibility) {
        throw ConfigError("k-means has no responsibilities to truncate by");
    }
    return truncate_by_radius(km, ds, t.value);
}

Labeling truncate(const Truncation& t, const GmmResult& gm, const Dataset& ds) {
    return t.mode == Truncation::Mode::Radius ? truncate_by_radius(gm, ds, t.value)
                                               : truncate_by_responsibility(gm, t.value);
}

std::optional<double> pair_mi(const MethodReport& m) {
    if (m.pairs.empty()) return std::nullopt;
    return m.pairs.front().mi;
}

// Concept MI strictly above every baseline that has an estimate at all.
bool concept_mi_wins(const ConsistencyReport& report) {
    const auto concept_mi = pair_mi(report.method("concept"));
    if (!concept_mi) return false;
    for (std::size_t i = 1; i < kMethods.size(); ++i) {
        const auto other = pair_mi(report.method(std::string(kMethods[i])));
        if (other && !(*concept_mi > *other)) return false;
    }
    return true;
}

bool all_overlap_zero(const MethodReport& m) {
    return std::all_of(m.overlap.begin(), m.overlap.end(),
                       [](const std::optional<double>& o) { return o && *o == 0.0; });
}

double max_overlap(const MethodReport& m) {
    double best = -1.0;
    for (const auto& o : m.overlap) if (o) best = std::max(best, *o);
    return best;
}

bool intervals_disjoint_in(const SeedRun& run, std::span<const std::size_t> columns) {
    for (std::size_t c : columns) {
        const auto iv = concept_intervals(run.model.labeling, run.dataset.values(), c);
        if (!pairwise_disjoint(iv)) return false;
    }
    return true;
}

std::vector<std::size_t> subspace_columns(const SubspaceConfig& sc) {
    std::vector<std::size_t> cols;
    for (const auto& s : sc.subspaces()) cols.insert(cols.end(), s.columns.begin(), s.columns.end());
    return cols;
}

// Independent of select_archetypes: recompute means and scan for the closest member.
bool archetype_verified(const SeedRun& run, std::size_t concept_index) {
    const auto& arch = run.archetypes;
    if (concept_index >= arch.size() || !arch[concept_index]) return false;
    const Matrix& v = run.dataset.values();
    const auto& labels = run.model.labeling.labels;
    Vector mean = Vector::Zero(v.cols());
    std::size_t n = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == static_cast<int>(concept_index)) {
            mean += v.row(static_cast<Eigen::Index>(i)).transpose();
            ++n;
        }
    }
    if (n == 0) return false;
    mean /= static_cast<double>(n);
    const std::size_t chosen = *arch[concept_index];
    if (labels[chosen] != static_cast<int>(concept_index)) return false;
    const double d_chosen = (v.row(static_cast<Eigen::Index>(chosen)).transpose() - mean).squaredNorm();
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != static_cast<int>(concept_index)) continue;
        const double d = (v.row(static_cast<Eigen::Index>(i)).transpose() - mean).squaredNorm();
        if (d < d_chosen || (d == d_chosen && i < chosen)) return false;
    }
    return true;
}

struct Stats {
    double mean = 0.0;
    double std = 0.0;
    std::size_t n = 0;
};

Stats stats_of(const std::vector<double>& xs) {
    Stats s;
    s.n = xs.size();
    if (xs.empty()) return s;
    for (double x : xs) s.mean += x;
    s.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    return s;
}

json stats_json(const std::vector<double>& xs) {
    const Stats s = stats_of(xs);
    if (s.n == 0) return json{{"mean", nullptr}, {"std", nullptr}, {"n", 0}};
    return json{{"mean", s.mean}, {"std", s.std}, {"n", s.n}};
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(std::numeric_limits<double>::max_digits10);
    os << x;
    return os.str();
}

} // namespace

Scale parse_scale(std::string_view text) {
    if (text == "desk") return Scale::Desk;
    if (text == "paper") return Scale::Paper;
    throw ConfigError("unknown scale '" + std::string(text) + "' (expected desk or paper)");
}

ExperimentSetup experiment_setup(std::string_view name, Scale scale) {
    const bool desk = scale == Scale::Desk;
    ExperimentSetup s;
    s.name = std::string(name);
    s.cmaes.population_size = 10;
    s.cmaes.initial_sigma = 0.3;
    if (name == "2d") {
        s.generator.kind = GeneratorKind::Uniform2d;
        s.generator.n_samples = desk ? 5000 : 34000;
        s.subspaces = spec_of({{"f1", {"f1"}}, {"f2", {"f2"}}});
        s.cmaes.generations = desk ? 300 : 1000;
        s.kmeans_truncation = {Truncation::Mode::Radius, 0.2};
        s.gmm_truncation = {Truncation::Mode::Responsibility, 0.9};
    } else if (name == "4d") {
        s.generator.kind = GeneratorKind::Gaussian4d;
        s.generator.n_samples = desk ? 6000 : 30000;
        s.subspaces = spec_of({{"f1_f2", {"f1", "f2"}}, {"f3_f4", {"f3", "f4"}}});
        s.cmaes.generations = desk ? 300 : 1000;
        s.kmeans_truncation = {Truncation::Mode::Radius, 0.1};
        s.gmm_truncation = {Truncation::Mode::Radius, 0.1};
    } else if (name == "energy") {
        s.generator.kind = GeneratorKind::EnergySurrogate;
        s.generator.n_samples = desk ? 4000 : 20699;
        s.subspaces = spec_of({{"investment", {"investment"}},
                               {"performance", {"yearly_costs", "resilience"}}});
        s.cmaes.generations = desk ? 400 : 1000;
        s.kmeans_truncation = {Truncation::Mode::Radius, 0.2};
        s.gmm_truncation = {Truncation::Mode::Responsibility, 0.9};
    } else {
        throw ConfigError("unknown experiment '" + std::string(name) + "' (expected 2d, 4d or energy)");
    }
    return s;
}

void apply_overrides(ExperimentSetup& setup, const json& o) {
    check_keys(o, {"generator", "cmaes", "cqm", "identify", "report", "truncation"}, "overrides");
    if (o.contains("generator")) {
        const json& g = o["generator"];
        check_keys(g, {"n_samples", "sigma"}, "generator");
        setup.generator.n_samples = g.value("n_samples", setup.generator.n_samples);
        setup.generator.sigma = g.value("sigma", setup.generator.sigma);
    }
    if (o.contains("cmaes")) {
        json merged = to_json(setup.cmaes);
        merged.update(o["cmaes"]);
        setup.cmaes = cmaes_config_from_json(merged);
    }
    if (o.contains("cqm")) {
        json merged = to_json(setup.cqm);
        merged.update(o["cqm"]);
        setup.cqm = cqm_config_from_json(merged);
    }
    if (o.contains("identify")) {
        const json& i = o["identify"];
        check_keys(i, {"initial_radius_fraction", "restarts", "init"}, "identify");
        setup.identify.initial_radius_fraction =
            i.value("initial_radius_fraction", setup.identify.initial_radius_fraction);
        setup.identify.restarts = i.value("restarts", setup.identify.restarts);
        if (i.contains("init")) setup.identify.init = parse_init(i["init"].get<std::string>());
    }
    if (o.contains("report")) {
        const json& r = o["report"];
        check_keys(r, {"k", "n_perm", "alpha"}, "report");
        setup.report.k = r.value("k", setup.report.k);
        setup.report.n_perm = r.value("n_perm", setup.report.n_perm);
        setup.report.alpha = r.value("alpha", setup.report.alpha);
    }
    if (o.contains("truncation")) {
        const json& t = o["truncation"];
        check_keys(t, {"kmeans", "gmm"}, "truncation");
        for (auto [key, target] : {std::pair{"kmeans", &setup.kmeans_truncation},
                                   std::pair{"gmm", &setup.gmm_truncation}}) {
            if (!t.contains(key)) continue;
            check_keys(t[key], {"mode", "value"}, key);
            if (t[key].contains("mode")) target->mode = parse_mode(t[key]["mode"].get<std::string>());
            target->value = t[key].value("value", target->value);
        }
    }
    setup.cmaes.validate();
}

json to_json(const ExperimentSetup& s) {
    auto trunc = [](const Truncation& t) { return json{{"mode", to_string(t.mode)}, {"value", t.value}}; };
    json cmaes = to_json(s.cmaes);
    cmaes.erase("seed");
    return json{{"experiment", s.name},
                {"generator",
                 {{"kind", to_string(s.generator.kind)},
                  {"n_samples", s.generator.n_samples},
                  {"sigma", s.generator.sigma}}},
                {"subspaces", to_json(s.subspaces)["subspaces"]},
                {"n_concepts", s.n_concepts},
                {"cqm", to_json(s.cqm)},
                {"cmaes", cmaes},
                {"identify",
                 {{"initial_radius_fraction", s.identify.initial_radius_fraction},
                  {"init", to_string(s.identify.init)},
                  {"restarts", s.identify.restarts}}},
                {"n_clusters", s.n_clusters},
                {"truncation", {{"kmeans", trunc(s.kmeans_truncation)}, {"gmm", trunc(s.gmm_truncation)}}},
                {"report", {{"k", s.report.k}, {"n_perm", s.report.n_perm}, {"alpha", s.report.alpha}}}};
}

SeedRun run_seed(const ExperimentSetup& setup, std::uint64_t seed) {
    GeneratorSpec gen = setup.generator;
    gen.seed = seed;
    Dataset dataset = generate(gen);
    SubspaceConfig subspaces = SubspaceConfig::resolve(setup.subspaces, dataset.column_names());

    CmaesConfig cmaes = setup.cmaes;
    cmaes.seed = seed;
    ConceptModel model = identify_concepts(dataset, subspaces, setup.n_concepts, setup.cqm, cmaes,
                                           setup.identify);

    KmeansOptions kopt;
    kopt.parallel = setup.identify.parallel;
    KmeansResult km = kmeans(dataset, setup.n_clusters, seed, kopt);
    GmmOptions gopt;
    gopt.parallel = setup.identify.parallel;
    GmmResult gm = gmm_em(dataset, setup.n_clusters, seed, gopt);

    NamedLabelings labelings{{"concept", model.labeling},
                             {"kmeans", km.labeling},
                             {"gmm", gm.labeling},
                             {"kmeans_trunc", truncate(setup.kmeans_truncation, km, dataset)},
                             {"gmm_trunc", truncate(setup.gmm_truncation, gm, dataset)}};

    ReportOptions ropt = setup.report;
    ropt.seed = seed;
    ConsistencyReport report = consistency_report(dataset, subspaces, labelings, ropt);
    auto archetypes = select_archetypes(model, dataset);

    return SeedRun{seed,
                   std::move(dataset),
                   std::move(subspaces),
                   std::move(model),
                   std::move(km),
                   std::move(gm),
                   std::move(labelings),
                   std::move(report),
                   std::move(archetypes)};
}

std::vector<std::optional<std::pair<double, double>>>
concept_intervals(const Labeling& labeling, const Matrix& values, std::size_t column) {
    if (labeling.size() != static_cast<std::size_t>(values.rows())) {
        throw DimensionError("labeling length does not match the data");
    }
    if (column >= static_cast<std::size_t>(values.cols())) throw RangeError("column out of range");
    std::vector<std::optional<std::pair<double, double>>> out(labeling.n_concepts);
    for (std::size_t i = 0; i < labeling.size(); ++i) {
        const int l = labeling.labels[i];
        if (l == kUnassigned) continue;
        const double x = values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(column));
        auto& iv = out[static_cast<std::size_t>(l)];
        if (!iv) iv = std::pair{x, x};
        else iv = std::pair{std::min(iv->first, x), std::max(iv->second, x)};
    }
    return out;
}

bool pairwise_disjoint(std::span<const std::optional<std::pair<double, double>>> iv) {
    for (std::size_t a = 0; a < iv.size(); ++a) {
        for (std::size_t b = a + 1; b < iv.size(); ++b) {
            if (!iv[a] || !iv[b]) continue;
            if (!(iv[a]->second < iv[b]->first || iv[b]->second < iv[a]->first)) return false;
        }
    }
    return true;
}

std::vector<Assertion> check_assertions(const ExperimentSetup& setup, std::span<const SeedRun> runs) {
    std::vector<Assertion> out;
    const std::size_t n = runs.size();
    if (n == 0) return out;

    if (setup.name == "2d") {
        std::vector<const SeedRun*> winners;
        for (const auto& r : runs) if (concept_mi_wins(r.report)) winners.push_back(&r);
        const std::size_t need = required(n, 0.9);
        out.push_back({"mi_ordering", winners.size() >= need,
                       "concept MI above every baseline in " + count_text(winners.size(), n, need)});

        std::size_t clean = 0;
        std::string failing;
        for (const SeedRun* r : winners) {
            const auto cols = subspace_columns(r->subspaces);
            const bool ok = all_overlap_zero(r->report.method("concept")) && intervals_disjoint_in(*r, cols);
            if (ok) ++clean;
            else failing += (failing.empty() ? "" : ",") + std::to_string(r->seed);
        }
        out.push_back({"projection_disjoint", !winners.empty() && clean == winners.size(),
                       std::to_string(clean) + "/" + std::to_string(winners.size()) +
                           " MI-passing seeds with zero overlap and disjoint intervals" +
                           (failing.empty() ? "" : "; failing seeds " + failing)});

        std::size_t close = 0;
        for (const auto& r : runs) {
            const auto c = r.report.method("concept").silhouette_joint;
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 1; i < kMethods.size(); ++i) {
                const auto s = r.report.method(std::string(kMethods[i])).silhouette_joint;
                if (s) best = std::max(best, *s);
            }
            if (c && std::isfinite(best) && std::abs(*c - best) <= kSilhouetteGap) ++close;
        }
        const std::size_t need_sil = required(n, 0.8);
        out.push_back({"silhouette_comparable", close >= need_sil,
                       "concept within 0.25 of best baseline in " + count_text(close, n, need_sil)});
    } else if (setup.name == "4d") {
        std::size_t separated = 0, wins = 0;
        for (const auto& r : runs) {
            const auto& c = r.report.method("concept");
            const bool concept_ok = std::all_of(c.overlap.begin(), c.overlap.end(), [](const auto& o) {
                return o && *o < kConceptOverlap4d;
            });
            const bool baselines_overlap = max_overlap(r.report.method("kmeans")) > kBaselineOverlap4d &&
                                           max_overlap(r.report.method("gmm")) > kBaselineOverlap4d;
            if (concept_ok && baselines_overlap) ++separated;
            if (concept_mi_wins(r.report)) ++wins;
        }
        const std::size_t need = required(n, 0.8);
        out.push_back({"subspace_overlap", separated >= need,
                       "concept < 0.02 and k-means/GMM > 0.2 in " + count_text(separated, n, need)});
        out.push_back({"mi_ordering", wins >= need,
                       "concept MI above every baseline in " + count_text(wins, n, need)});
    } else if (setup.name == "energy") {
        std::size_t good = 0;
        std::string failing;
        for (const auto& r : runs) {
            const auto counts = r.model.labeling.counts();
            const bool three = counts.size() == 3 &&
                               std::all_of(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; });
            const auto& inv = r.subspaces.subspace(0).columns;
            const bool disjoint = intervals_disjoint_in(r, inv);
            const auto& perf = r.report.method("concept").overlap;
            const bool perf_clean = perf.size() > 1 && perf[1] && *perf[1] == 0.0;
            bool archetypes_ok = three;
            for (std::size_t a = 0; archetypes_ok && a < 3; ++a) archetypes_ok = archetype_verified(r, a);
            if (three && disjoint && perf_clean && archetypes_ok) ++good;
            else failing += (failing.empty() ? "" : ",") + std::to_string(r.seed);
        }
        out.push_back({"energy_structure", good == n,
                       std::to_string(good) + "/" + std::to_string(n) +
                           " seeds with three concepts, disjoint investment intervals, zero overlap "
                           "in the performance subspace and verified archetypes" +
                           (failing.empty() ? "" : "; failing seeds " + failing)});
    }
    return out;
}

json summarize(const ExperimentSetup& setup, std::span<const SeedRun> runs,
               std::span<const Assertion> assertions) {
    const json cfg = to_json(setup);
    json methods = json::object();
    std::vector<std::string> subspace_names;
    if (!runs.empty()) subspace_names = runs.front().report.subspace_names;

    for (auto name_view : kMethods) {
        const std::string name(name_view);
        std::map<std::string, std::vector<double>> series;
        for (const auto& r : runs) {
            const MethodReport& m = r.report.method(name);
            series["n_assigned"].push_back(static_cast<double>(m.n_assigned));
            for (const auto& p : m.pairs) {
                const std::string key = subspace_names[p.first] + "~" + subspace_names[p.second];
                if (p.mi) series["mi/" + key].push_back(*p.mi);
                if (p.p_value) series["p_value/" + key].push_back(*p.p_value);
            }
            if (m.silhouette_joint) series["silhouette/joint"].push_back(*m.silhouette_joint);
            for (std::size_t k = 0; k < m.silhouette_subspace.size(); ++k) {
                if (m.silhouette_subspace[k]) series["silhouette/" + subspace_names[k]].push_back(*m.silhouette_subspace[k]);
                if (m.overlap[k]) series["overlap/" + subspace_names[k]].push_back(*m.overlap[k]);
            }
        }
        json mj = json::object();
        for (const auto& [key, xs] : series) mj[key] = stats_json(xs);
        methods[name] = mj;
    }

    std::vector<double> qs;
    json per_seed = json::array();
    for (const auto& r : runs) {
        qs.push_back(r.model.q);
        json row{{"seed", r.seed},
                 {"q", r.model.q},
                 {"concept_sizes", r.model.labeling.counts()},
                 {"degenerate", r.model.degenerate},
                 {"restart", r.model.restart}};
        json arch = json::array();
        for (const auto& a : r.archetypes) arch.push_back(a ? json(*a) : json(nullptr));
        row["archetypes"] = arch;
        json mi = json::object();
        for (auto name_view : kMethods) {
            const auto v = pair_mi(r.report.method(std::string(name_view)));
            mi[std::string(name_view)] = v ? json(*v) : json(nullptr);
        }
        row["mi"] = mi;
        per_seed.push_back(row);
    }

    json asserts = json::array();
    bool all_passed = true;
    for (const auto& a : assertions) {
        asserts.push_back({{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
        all_passed = all_passed && a.passed;
    }
    std::vector<std::uint64_t> seeds;
    for (const auto& r : runs) seeds.push_back(r.seed);

    return json{{"kind", "summary"},
                {"experiment", setup.name},
                {"seeds", seeds},
                {"config_hash", config_hash(cfg)},
                {"config", cfg},
                {"q", stats_json(qs)},
                {"methods", methods},
                {"per_seed", per_seed},
                {"assertions", asserts},
                {"passed", all_passed}};
}

void write_seed_artifacts(const ExperimentSetup& setup, const SeedRun& run,
                          const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const json cfg = to_json(setup);
    const std::string hash = config_hash(cfg);
    const auto& names = run.dataset.column_names();

    write_csv(run.dataset, dir / "dataset.csv");

    json model = to_json(run.model, names);
    model["experiment_config_hash"] = hash;
    write_json(model, dir / "model.json");

    for (const auto& [name, labeling] : run.labelings) {
        write_labeling_csv(labeling, dir / ("labels_" + name + ".csv"));
    }
    json km = to_json(run.kmeans);
    km["seed"] = run.seed;
    km["config_hash"] = hash;
    write_json(km, dir / "kmeans.json");
    json gm = to_json(run.gmm);
    gm["seed"] = run.seed;
    gm["config_hash"] = hash;
    write_json(gm, dir / "gmm.json");

    json report = to_json(run.report);
    report["seed"] = run.seed;
    report["config_hash"] = hash;
    write_json(report, dir / "report.json");
    {
        std::ofstream out(dir / "report.csv");
        if (!out) throw Error("cannot write " + (dir / "report.csv").string());
        write_report_csv(run.report, out);
    }

    // one row per sample with every method's label: enough to redraw the
    // scatter and projection figures
    {
        std::ofstream out(dir / "projection.csv");
        if (!out) throw Error("cannot write " + (dir / "projection.csv").string());
        out << "sample_index";
        for (const auto& c : names) out << ',' << c;
        for (const auto& [name, _] : run.labelings) out << ',' << name;
        out << '\n';
        const Matrix& v = run.dataset.values();
        for (Eigen::Index i = 0; i < v.rows(); ++i) {
            out << i;
            for (Eigen::Index c = 0; c < v.cols(); ++c) out << ',' << fmt(v(i, c));
            for (const auto& [_, labeling] : run.labelings) out << ',' << labeling.labels[static_cast<std::size_t>(i)];
            out << '\n';
        }
    }

    if (!run.archetypes.empty()) {
        std::ofstream out(dir / "archetypes.csv");
        if (!out) throw Error("cannot write " + (dir / "archetypes.csv").string());
        out << "concept,sample_index";
        for (const auto& c : names) out << ',' << c;
        out << '\n';
        const Matrix& v = run.dataset.values();
        for (std::size_t a = 0; a < run.archetypes.size(); ++a) {
            if (!run.archetypes[a]) continue;
            const auto i = static_cast<Eigen::Index>(*run.archetypes[a]);
            out << a << ',' << i;
            for (Eigen::Index c = 0; c < v.cols(); ++c) out << ',' << fmt(v(i, c));
            out << '\n';
        }
    }
}

void write_summary_artifacts(const json& summary, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_json(summary, dir / "summary.json");
    std::ofstream out(dir / "bars.csv");
    if (!out) throw Error("cannot write " + (dir / "bars.csv").string());
    out << "method,metric,subspace,mean,std,n\n";
    for (const auto& [method, metrics] : summary.at("methods").items()) {
        for (const auto& [key, st] : metrics.items()) {
            const auto slash = key.find('/');
            const std::string metric = key.substr(0, slash);
            const std::string sub = slash == std::string::npos ? "" : key.substr(slash + 1);
            out << method << ',' << metric << ',' << sub << ',';
            if (st.at("mean").is_null()) out << ",,0\n";
            else out << fmt(st.at("mean").get<double>()) << ',' << fmt(st.at("std").get<double>()) << ','
                     << st.at("n").get<std::size_t>() << '\n';
        }
    }
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
    auto parse_one = [&](std::string_view s) {
        std::uint64_t v = 0;
        const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) {
            throw ConfigError("invalid seed '" + std::string(s) + "' in '" + std::string(text) + "'");
        }
        return v;
    };
    std::vector<std::uint64_t> seeds;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = std::min(text.find(',', start), text.size());
        const std::string_view part = text.substr(start, comma - start);
        if (const auto dots = part.find(".."); dots != std::string_view::npos) {
            const std::uint64_t lo = parse_one(part.substr(0, dots));
            const std::uint64_t hi = parse_one(part.substr(dots + 2));
            if (hi < lo) throw ConfigError("empty seed range '" + std::string(part) + "'");
            if (hi - lo >= 100000) throw ConfigError("seed range too large");
            for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
        } else {
            seeds.push_back(parse_one(part));
        }
        start = comma + 1;
    }
    if (seeds.empty()) throw ConfigError("no seeds given");
    return seeds;
}

} // namespace conceptid
