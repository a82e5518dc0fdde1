#ifndef CONCEPTID_IDENTIFY_HPP
#define CONCEPTID_IDENTIFY_HPP

#include "conceptid/cmaes.hpp"
#include "conceptid/concept.hpp"
#include "conceptid/dataset.hpp"
#include "conceptid/geometry.hpp"

#include <optional>
#include <vector>

namespace conceptid {

/// Everything derived from one genotype.
struct Evaluation {
    EllipsoidSet regions;
    CandidateSets candidates;
    Labeling labeling;
    Quality quality;
    double fitness = 0.0;
};

/// Fitness for a given quality: Q when Q > 0, otherwise -1 + mean(Q_alpha).
double fitness_from_quality(const Quality& quality);

enum class InitStrategy {
    /// Region centers at the k-means centers of the box-scaled projections.
    KmeansCenters,
    /// All regions centered on the box midpoints.
    BoxMidpoint,
};

/**
 * Fitness landscape of one identification problem. Holds the subspace
 * projections, boxes and codec; evaluate() is const and thread safe.
 */
class ConceptProblem {
public:
    ConceptProblem(const Dataset& dataset, const SubspaceConfig& subspaces,
                   std::size_t n_concepts, const CqmConfig& cqm);

    const GenotypeCodec& codec() const noexcept { return codec_; }
    std::size_t dimension() const noexcept { return codec_.size(); }
    std::size_t n_concepts() const noexcept { return n_concepts_; }
    const std::vector<Matrix>& projections() const noexcept { return projections_; }

    Evaluation evaluate(const Genotype& genotype) const;
    double fitness(const Genotype& genotype) const;

    /// Starting genotype. Every semi-axis is `radius_fraction` times the
    /// subspace range and all angles are pi/2; the centers follow `strategy`.
    /// `seed` drives the k-means placement and is ignored for midpoints.
    Genotype initial_genotype(double radius_fraction,
                              InitStrategy strategy = InitStrategy::KmeansCenters,
                              std::uint64_t seed = 0) const;

private:
    std::size_t n_concepts_;
    CqmConfig cqm_;
    std::vector<Matrix> projections_;
    GenotypeCodec codec_;
};

double fitness(const Genotype& genotype, const Dataset& dataset, const SubspaceConfig& subspaces,
               std::size_t n_concepts, const CqmConfig& cqm);

struct IdentifyOptions {
    /// Initial common radius of all regions relative to the subspace range.
    double initial_radius_fraction = 0.15;
    InitStrategy init = InitStrategy::KmeansCenters;
    /// Independent CMA-ES runs; the one with the highest fitness is kept.
    std::size_t restarts = 1;
    bool parallel = true;
    std::ostream* progress = nullptr;
};

struct ConceptModel {
    EllipsoidSet regions;
    Genotype genotype;
    Labeling labeling;
    double q = 0.0;
    std::vector<double> q_alpha;
    double fitness = 0.0;
    bool degenerate = false;

    SubspaceConfig subspaces;
    CqmConfig cqm;
    CmaesConfig cmaes;
    std::uint64_t seed = 0;
    std::vector<double> history;
    std::size_t restart = 0; ///< which run produced this model
};

ConceptModel identify_concepts(const Dataset& dataset, const SubspaceConfig& subspaces,
                               std::size_t n_concepts, const CqmConfig& cqm,
                               const CmaesConfig& cmaes, const IdentifyOptions& options = {});

/**
 * For each concept, the assigned sample nearest (Euclidean, all columns) to
 * the concept mean; lowest index wins ties. Empty concepts yield nullopt.
 */
std::vector<std::optional<std::size_t>> select_archetypes(const Labeling& labeling,
                                                          const Dataset& dataset);
std::vector<std::optional<std::size_t>> select_archetypes(const ConceptModel& model,
                                                          const Dataset& dataset);

} // namespace conceptid

#endif
