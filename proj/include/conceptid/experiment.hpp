#ifndef CONCEPTID_EXPERIMENT_HPP
#define CONCEPTID_EXPERIMENT_HPP

// The three reference experiments (2-D uniform, 4-D Gaussian, energy
// surrogate) as reusable pipelines: generate, identify, cluster, evaluate,
// then check the structural claims each experiment is meant to show.

#include "conceptid/baselines.hpp"
#include "conceptid/datagen.hpp"
#include "conceptid/identify.hpp"
#include "conceptid/metrics.hpp"
#include "conceptid/serialize.hpp"

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace conceptid {

enum class Scale { Desk, Paper };
Scale parse_scale(std::string_view text);

struct Truncation {
    enum class Mode { Radius, Responsibility };
    Mode mode = Mode::Radius;
    double value = 0.2; ///< radius fraction or responsibility threshold
};

struct ExperimentSetup {
    std::string name;
    GeneratorSpec generator; ///< seed is replaced per run
    SubspaceSpec subspaces;
    std::size_t n_concepts = 3;
    CqmConfig cqm;
    CmaesConfig cmaes; ///< seed is replaced per run
    IdentifyOptions identify;
    std::size_t n_clusters = 3;
    Truncation kmeans_truncation;
    Truncation gmm_truncation;
    ReportOptions report; ///< seed is replaced per run
};

/// "2d", "4d" or "energy".
ExperimentSetup experiment_setup(std::string_view name, Scale scale = Scale::Desk);

/// Overrides from a JSON object with optional keys "generator", "cmaes", "cqm",
/// "identify" and "report". Unknown keys are a ConfigError.
void apply_overrides(ExperimentSetup& setup, const json& overrides);

json to_json(const ExperimentSetup& setup);

/// Method names in report order.
inline constexpr std::array<std::string_view, 5> kMethods{"concept", "kmeans", "gmm",
                                                          "kmeans_trunc", "gmm_trunc"};

struct SeedRun {
    std::uint64_t seed = 0;
    Dataset dataset;
    SubspaceConfig subspaces;
    ConceptModel model;
    KmeansResult kmeans;
    GmmResult gmm;
    NamedLabelings labelings;
    ConsistencyReport report;
    std::vector<std::optional<std::size_t>> archetypes;
};

SeedRun run_seed(const ExperimentSetup& setup, std::uint64_t seed);

struct Assertion {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Min/max of column `column` over each concept's members; nullopt for
/// empty concepts.
std::vector<std::optional<std::pair<double, double>>>
concept_intervals(const Labeling& labeling, const Matrix& values, std::size_t column);

/// Strictly separated closed intervals (touching endpoints count as overlap).
bool pairwise_disjoint(std::span<const std::optional<std::pair<double, double>>> intervals);

std::vector<Assertion> check_assertions(const ExperimentSetup& setup,
                                        std::span<const SeedRun> runs);

/// Mean/std per method and metric across seeds, plus the assertion outcomes.
json summarize(const ExperimentSetup& setup, std::span<const SeedRun> runs,
               std::span<const Assertion> assertions);

/// dataset.csv, model.json, labels_<method>.csv, report.json, report.csv,
/// projection.csv and (when archetypes exist) archetypes.csv under `dir`.
void write_seed_artifacts(const ExperimentSetup& setup, const SeedRun& run,
                          const std::filesystem::path& dir);

/// summary.json plus bars.csv (method, metric, subspace, mean, std, n).
void write_summary_artifacts(const json& summary, const std::filesystem::path& dir);

/// "1..10", "3", "1,4,7" or a mix ("1..3,9").
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

} // namespace conceptid

#endif
