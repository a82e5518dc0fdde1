#include "conceptid/identify.hpp"

#include "conceptid/baselines.hpp"
#include "conceptid/error.hpp"
#include "conceptid/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace conceptid {

double fitness_from_quality(const Quality& quality) {
    if (quality.q > 0.0) return quality.q;
    if (quality.q_alpha.empty()) return -1.0;
    const double sum = std::accumulate(quality.q_alpha.begin(), quality.q_alpha.end(), 0.0);
    return -1.0 + sum / static_cast<double>(quality.q_alpha.size());
}

ConceptProblem::ConceptProblem(const Dataset& dataset, const SubspaceConfig& subspaces,
                               std::size_t n_concepts, const CqmConfig& cqm)
    : n_concepts_(n_concepts),
      cqm_(cqm),
      codec_(subspaces.dims(), n_concepts, subspace_boxes(dataset, subspaces)) {
    if (n_concepts < 2) {
        throw ConfigError("concept identification needs at least two concepts");
    }
    if (subspaces.n_columns() != dataset.cols()) {
        throw DimensionError("subspace configuration was resolved against a different header");
    }
    cqm_.validate(dataset.rows());
    projections_.reserve(subspaces.size());
    for (std::size_t k = 0; k < subspaces.size(); ++k) {
        projections_.push_back(project(dataset, subspaces, k));
    }
}

Evaluation ConceptProblem::evaluate(const Genotype& genotype) const {
    EllipsoidSet regions = codec_.decode(genotype);
    CandidateSets cands = candidate_sets(regions, projections_);
    Labeling labeling = assign_concepts(cands);
    Quality quality = concept_quality(labeling, cands, cands.n_samples(), cqm_);
    const double f = fitness_from_quality(quality);
    return Evaluation{std::move(regions), std::move(cands), std::move(labeling), std::move(quality), f};
}

double ConceptProblem::fitness(const Genotype& genotype) const { return evaluate(genotype).fitness; }

Genotype ConceptProblem::initial_genotype(double radius_fraction, InitStrategy strategy,
                                          std::uint64_t seed) const {
    if (!(radius_fraction > 0.0 && radius_fraction <= 1.0)) {
        throw ConfigError("initial radius fraction must lie in (0, 1]");
    }
    const auto& dims = codec_.dims();
    const std::size_t total = std::accumulate(dims.begin(), dims.end(), std::size_t{0});

    // Centers in box-scaled coordinates, one row per concept.
    Matrix centers = Matrix::Constant(static_cast<Eigen::Index>(n_concepts_),
                                      static_cast<Eigen::Index>(total), 0.5);
    if (strategy == InitStrategy::KmeansCenters) {
        const Eigen::Index n = projections_.front().rows();
        Matrix scaled(n, static_cast<Eigen::Index>(total));
        Eigen::Index col = 0;
        for (std::size_t k = 0; k < dims.size(); ++k) {
            const BoundingBox& box = codec_.boxes()[k];
            for (std::size_t d = 0; d < dims[k]; ++d, ++col) {
                const auto i = static_cast<Eigen::Index>(d);
                scaled.col(col) = (projections_[k].col(i).array() - box.lo[d]) / codec_.range(k, d);
            }
        }
        centers = kmeans(scaled, n_concepts_, derive_seed(seed, "init")).centers;
    }

    EllipsoidSet set(n_concepts_, dims);
    for (std::size_t a = 0; a < n_concepts_; ++a) {
        Eigen::Index col = 0;
        for (std::size_t k = 0; k < dims.size(); ++k) {
            Ellipsoid& e = set.region(a, k);
            const BoundingBox& box = codec_.boxes()[k];
            for (std::size_t d = 0; d < dims[k]; ++d, ++col) {
                const auto i = static_cast<Eigen::Index>(d);
                const double r = codec_.range(k, d);
                e.center[i] = box.lo[d] + centers(static_cast<Eigen::Index>(a), col) * r;
                e.semi_axes[i] = radius_fraction * r;
            }
            e.angles.setConstant(std::numbers::pi / 2.0);
        }
    }
    return codec_.encode(set);
}

double fitness(const Genotype& genotype, const Dataset& dataset, const SubspaceConfig& subspaces,
               std::size_t n_concepts, const CqmConfig& cqm) {
    return ConceptProblem(dataset, subspaces, n_concepts, cqm).fitness(genotype);
}

ConceptModel identify_concepts(const Dataset& dataset, const SubspaceConfig& subspaces,
                               std::size_t n_concepts, const CqmConfig& cqm,
                               const CmaesConfig& cmaes, const IdentifyOptions& options) {
    cmaes.validate();
    const ConceptProblem problem(dataset, subspaces, n_concepts, cqm);

    if (options.restarts == 0) throw ConfigError("restarts must be at least 1");

    CmaesResult result;
    std::size_t best_run = 0;
    for (std::size_t run = 0; run < options.restarts; ++run) {
        // run 0 uses the configured seed verbatim so a single run is reproducible by hand
        const std::uint64_t seed = run == 0 ? cmaes.seed : derive_seed(cmaes.seed, run);
        CmaesConfig cfg = cmaes;
        cfg.seed = seed;
        CmaesRunOptions run_options;
        run_options.initial_mean =
            problem.initial_genotype(options.initial_radius_fraction, options.init, seed);
        run_options.parallel = options.parallel;
        run_options.progress = options.progress;
        CmaesResult r = run_cmaes([&problem](const Vector& g) { return problem.fitness(g); },
                                  problem.dimension(), cfg, run_options);
        if (run == 0 || r.best_fitness > result.best_fitness) {
            result = std::move(r);
            best_run = run;
        }
    }

    Evaluation best = problem.evaluate(result.best_genotype);
    ConceptModel model{std::move(best.regions),
                       result.best_genotype,
                       std::move(best.labeling),
                       best.quality.q,
                       std::move(best.quality.q_alpha),
                       best.fitness,
                       best.quality.q <= 0.0,
                       subspaces,
                       cqm,
                       cmaes,
                       cmaes.seed,
                       result.history,
                       best_run};
    return model;
}

std::vector<std::optional<std::size_t>> select_archetypes(const Labeling& labeling,
                                                          const Dataset& dataset) {
    if (labeling.size() != dataset.rows()) {
        throw DimensionError("labeling length does not match the dataset");
    }
    const Matrix& v = dataset.values();
    const Eigen::Index d = v.cols();
    std::vector<Vector> means(labeling.n_concepts, Vector::Zero(d));
    const auto counts = labeling.counts();
    for (std::size_t i = 0; i < labeling.size(); ++i) {
        const int l = labeling.labels[i];
        if (l != kUnassigned) means[static_cast<std::size_t>(l)] += v.row(static_cast<Eigen::Index>(i)).transpose();
    }
    std::vector<std::optional<std::size_t>> out(labeling.n_concepts);
    std::vector<double> best(labeling.n_concepts, std::numeric_limits<double>::infinity());
    for (std::size_t a = 0; a < labeling.n_concepts; ++a) {
        if (counts[a] > 0) means[a] /= static_cast<double>(counts[a]);
    }
    for (std::size_t i = 0; i < labeling.size(); ++i) {
        const int l = labeling.labels[i];
        if (l == kUnassigned) continue;
        const auto a = static_cast<std::size_t>(l);
        const double dist = (v.row(static_cast<Eigen::Index>(i)).transpose() - means[a]).squaredNorm();
        if (dist < best[a]) {
            best[a] = dist;
            out[a] = i;
        }
    }
    return out;
}

std::vector<std::optional<std::size_t>> select_archetypes(const ConceptModel& model,
                                                          const Dataset& dataset) {
    return select_archetypes(model.labeling, dataset);
}

} // namespace conceptid
