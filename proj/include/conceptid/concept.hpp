#ifndef CONCEPTID_CONCEPT_HPP
#define CONCEPTID_CONCEPT_HPP

#include "conceptid/dataset.hpp"
#include "conceptid/geometry.hpp"
#include "conceptid/types.hpp"

#include <optional>
#include <vector>

namespace conceptid {

inline constexpr int kUnassigned = -1;

/// Per-sample group assignment; kUnassigned marks samples in no group.
struct Labeling {
    std::vector<int> labels;
    std::size_t n_concepts = 0;

    std::size_t size() const noexcept { return labels.size(); }
    std::vector<std::size_t> counts() const;
    std::size_t n_assigned() const;
    /// Indices carrying a label, ascending.
    std::vector<std::size_t> assigned_indices() const;
};

/**
 * Candidate membership of every sample in every region:
 * mask(a, k)[i] != 0 iff sample i lies in region (a, k).
 */
class CandidateSets {
public:
    CandidateSets(std::size_t n_concepts, std::size_t n_subspaces, std::size_t n_samples);

    std::size_t n_concepts() const noexcept { return n_concepts_; }
    std::size_t n_subspaces() const noexcept { return n_subspaces_; }
    std::size_t n_samples() const noexcept { return n_samples_; }

    Mask& mask(std::size_t concept_index, std::size_t subspace);
    const Mask& mask(std::size_t concept_index, std::size_t subspace) const;

    std::size_t count(std::size_t concept_index, std::size_t subspace) const;

private:
    std::size_t n_concepts_;
    std::size_t n_subspaces_;
    std::size_t n_samples_;
    std::vector<Mask> masks_;
};

struct CqmConfig {
    double s = 0.1; ///< size band of the concept fraction
    double p = 0.1; ///< band of the preference-set fraction
    std::optional<std::vector<std::size_t>> preference;

    /// Throws ConfigError unless 0 < s, p < 0.5 and indices < n_data.
    void validate(std::size_t n_data) const;
};

struct Quality {
    std::vector<double> q_alpha;
    double q = 0.0;
};

CandidateSets candidate_sets(const EllipsoidSet& regions, const Dataset& dataset,
                             const SubspaceConfig& config);

/// Same, on pre-projected subspace matrices.
CandidateSets candidate_sets(const EllipsoidSet& regions, std::span<const Matrix> projections);

/// A sample joins concept a iff it is in every region of a and in no region of
/// any other concept.
Labeling assign_concepts(const CandidateSets& cands);

/// Window that is 1 on [y, 1-y] and falls to 0 at x = 0 and x = 1.
double scaling_f(double x, double y);

Quality concept_quality(const Labeling& labeling, const CandidateSets& cands,
                        std::size_t n_data, const CqmConfig& cfg);

} // namespace conceptid

#endif
