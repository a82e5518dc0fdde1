#ifndef CONCEPTID_METRICS_HPP
#define CONCEPTID_METRICS_HPP

#include "conceptid/concept.hpp"
#include "conceptid/dataset.hpp"
#include "conceptid/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace conceptid {

inline constexpr std::size_t kDefaultKsgNeighbors = 4;
inline constexpr std::size_t kDefaultPermutations = 200;
inline constexpr double kDefaultAlpha = 0.05;
/// Tie-breaking noise amplitude relative to each column's standard deviation.
inline constexpr double kJitterAmplitude = 1e-10;

struct MiEstimate {
    double value = 0.0; ///< nats
    std::size_t k_neighbors = 0;
    std::size_t n_samples = 0;
};

struct PermutationTestResult {
    MiEstimate observed;
    std::vector<double> null_values;
    double p_value = 1.0;
};

/// Adds seeded uniform noise of amplitude kJitterAmplitude * std to every
/// column. The noise stream depends only on the seed and the block's content.
Matrix jitter(const Matrix& block, std::uint64_t seed);

/// KSG estimator (variant 1) on already-jittered blocks, max-norm throughout.
double ksg_mi_raw(const Matrix& x, const Matrix& y, std::size_t k, bool parallel = true);

/// KSG mutual information in nats; both blocks are jittered first.
MiEstimate ksg_mi(const Matrix& x, const Matrix& y, std::size_t k = kDefaultKsgNeighbors,
                  std::uint64_t jitter_seed = 0, bool parallel = true);

/**
 * Null distribution from row-wise shuffles of y. Surrogate j uses RNG stream j
 * of `seed`, so the result does not depend on execution order.
 * p = (#{null >= observed} + 1) / (n_perm + 1).
 */
PermutationTestResult mi_permutation_test(const Matrix& x, const Matrix& y, std::size_t k,
                                          std::size_t n_perm, std::uint64_t seed,
                                          bool parallel = true);

/// Mean silhouette over assigned samples; singletons contribute 0.
double silhouette(const Matrix& points, const Labeling& labeling, bool parallel = true);

/// Fraction of assigned samples whose nearest assigned neighbour has another label.
double overlap_score(const Matrix& points, const Labeling& labeling, bool parallel = true);

struct SubspacePairResult {
    std::size_t first = 0;
    std::size_t second = 0;
    std::optional<double> mi;
    std::optional<double> p_value;
};

struct MethodReport {
    std::string method;
    std::size_t n_assigned = 0;
    std::size_t n_clusters = 0;
    bool insufficient_data = false;
    std::vector<SubspacePairResult> pairs;
    std::optional<double> silhouette_joint;
    std::vector<std::optional<double>> silhouette_subspace;
    std::vector<std::optional<double>> overlap;
};

struct ReportOptions {
    std::size_t k = kDefaultKsgNeighbors;
    std::size_t n_perm = kDefaultPermutations;
    double alpha = kDefaultAlpha;
    std::uint64_t seed = 0;
    bool parallel = true;
};

struct ConsistencyReport {
    std::vector<std::string> subspace_names;
    ReportOptions options;
    std::vector<MethodReport> methods;

    const MethodReport& method(const std::string& name) const;
};

using NamedLabelings = std::vector<std::pair<std::string, Labeling>>;

ConsistencyReport consistency_report(const Dataset& dataset, const SubspaceConfig& subspaces,
                                     const NamedLabelings& labelings,
                                     const ReportOptions& options = {});

/// Digamma at positive integers.
double digamma_int(std::size_t n);

} // namespace conceptid

#endif
