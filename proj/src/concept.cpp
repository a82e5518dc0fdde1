#include "conceptid/concept.hpp"

#include "conceptid/error.hpp"
#include "conceptid/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace conceptid {

std::vector<std::size_t> Labeling::counts() const {
    std::vector<std::size_t> c(n_concepts, 0);
    for (int l : labels) {
        if (l >= 0 && static_cast<std::size_t>(l) < n_concepts) ++c[static_cast<std::size_t>(l)];
    }
    return c;
}

std::size_t Labeling::n_assigned() const {
    std::size_t n = 0;
    for (int l : labels) n += l != kUnassigned;
    return n;
}

std::vector<std::size_t> Labeling::assigned_indices() const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != kUnassigned) idx.push_back(i);
    }
    return idx;
}

CandidateSets::CandidateSets(std::size_t n_concepts, std::size_t n_subspaces,
                             std::size_t n_samples)
    : n_concepts_(n_concepts), n_subspaces_(n_subspaces), n_samples_(n_samples),
      masks_(n_concepts * n_subspaces, Mask(n_samples, 0)) {}

Mask& CandidateSets::mask(std::size_t concept_index, std::size_t subspace) {
    return masks_.at(concept_index * n_subspaces_ + subspace);
}

const Mask& CandidateSets::mask(std::size_t concept_index, std::size_t subspace) const {
    return masks_.at(concept_index * n_subspaces_ + subspace);
}

std::size_t CandidateSets::count(std::size_t concept_index, std::size_t subspace) const {
    std::size_t n = 0;
    for (auto v : mask(concept_index, subspace)) n += v != 0;
    return n;
}

void CqmConfig::validate(std::size_t n_data) const {
    if (!(s > 0.0 && s < 0.5)) throw ConfigError("s must lie in (0, 0.5)");
    if (!(p > 0.0 && p < 0.5)) throw ConfigError("p must lie in (0, 0.5)");
    if (preference) {
        for (std::size_t i : *preference) {
            if (i >= n_data) {
                throw ConfigError("preference index " + std::to_string(i) + " out of range");
            }
        }
    }
}

CandidateSets candidate_sets(const EllipsoidSet& regions, std::span<const Matrix> projections) {
    if (projections.size() != regions.n_subspaces()) {
        throw DimensionError("region set has " + std::to_string(regions.n_subspaces()) +
                             " subspaces, data has " + std::to_string(projections.size()));
    }
    const std::size_t n = projections.empty() ? 0 : static_cast<std::size_t>(projections[0].rows());
    CandidateSets cands(regions.n_concepts(), regions.n_subspaces(), n);
    for (std::size_t a = 0; a < regions.n_concepts(); ++a) {
        for (std::size_t k = 0; k < regions.n_subspaces(); ++k) {
            cands.mask(a, k) = membership_mask(regions.region(a, k), projections[k]);
        }
    }
    return cands;
}

CandidateSets candidate_sets(const EllipsoidSet& regions, const Dataset& dataset,
                             const SubspaceConfig& config) {
    std::vector<Matrix> projections;
    projections.reserve(config.size());
    for (std::size_t k = 0; k < config.size(); ++k) projections.push_back(project(dataset, config, k));
    return candidate_sets(regions, projections);
}

Labeling assign_concepts(const CandidateSets& cands) {
    const std::size_t nc = cands.n_concepts();
    const std::size_t ns = cands.n_subspaces();
    Labeling out{std::vector<int>(cands.n_samples(), kUnassigned), nc};
    for (std::size_t i = 0; i < cands.n_samples(); ++i) {
        int inside_all = kUnassigned;
        std::size_t touched = 0; // concepts with at least one region containing i
        for (std::size_t a = 0; a < nc; ++a) {
            bool all = true;
            bool any = false;
            for (std::size_t k = 0; k < ns; ++k) {
                const bool in = cands.mask(a, k)[i] != 0;
                all = all && in;
                any = any || in;
            }
            touched += any;
            if (all) inside_all = static_cast<int>(a);
        }
        // inside every region of one concept and no region of any other
        if (inside_all != kUnassigned && touched == 1) out.labels[i] = inside_all;
    }
    return out;
}

double scaling_f(double x, double y) {
    if (!(y > 0.0 && y < 0.5)) {
        throw ConfigError("scaling band y must lie in (0, 0.5)");
    }
    if (x < y) {
        const double t = (x - y) / y;
        return std::sqrt(std::max(0.0, 1.0 - t * t));
    }
    if (x > 1.0 - y) {
        const double t = (x - 1.0 + y) / y;
        return std::sqrt(std::max(0.0, 1.0 - t * t));
    }
    return 1.0;
}

Quality concept_quality(const Labeling& labeling, const CandidateSets& cands, std::size_t n_data,
                        const CqmConfig& cfg) {
    const std::size_t nc = cands.n_concepts();
    const std::size_t ns = cands.n_subspaces();
    if (labeling.size() != cands.n_samples() || n_data != cands.n_samples()) {
        throw DimensionError("labeling, candidate sets and n_data disagree on the sample count");
    }
    const auto sizes = labeling.counts();

    std::vector<std::size_t> pref_hits(nc, 0);
    std::size_t pref_total = 0;
    if (cfg.preference && !cfg.preference->empty()) {
        pref_total = cfg.preference->size();
        for (std::size_t i : *cfg.preference) {
            const int l = labeling.labels.at(i);
            if (l != kUnassigned) ++pref_hits[static_cast<std::size_t>(l)];
        }
    }

    Quality q{std::vector<double>(nc, 0.0), 1.0};
    for (std::size_t a = 0; a < nc; ++a) {
        double capture = 1.0;
        for (std::size_t k = 0; k < ns; ++k) {
            const std::size_t cand = cands.count(a, k);
            if (cand == 0) {
                capture = 0.0;
                break;
            }
            capture *= std::pow(static_cast<double>(sizes[a]) / static_cast<double>(cand),
                                1.0 / static_cast<double>(ns));
        }
        double qa = capture * scaling_f(static_cast<double>(sizes[a]) / static_cast<double>(n_data), cfg.s);
        if (pref_total > 0) {
            qa *= scaling_f(static_cast<double>(pref_hits[a]) / static_cast<double>(pref_total), cfg.p);
        }
        q.q_alpha[a] = qa;
        q.q *= qa;
    }
    if (nc == 0) q.q = 0.0;
    return q;
}

} // namespace conceptid
