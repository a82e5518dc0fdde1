#ifndef CONCEPTID_BASELINES_HPP
#define CONCEPTID_BASELINES_HPP

#include "conceptid/concept.hpp"
#include "conceptid/dataset.hpp"
#include "conceptid/types.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace conceptid {

struct KmeansResult {
    Matrix centers; // k x D
    Labeling labeling;
    double inertia = 0.0;
    std::size_t iterations = 0;
    std::size_t empty_cluster_repairs = 0;
    /// Inertia after every assignment step.
    std::vector<double> inertia_history;
};

struct KmeansOptions {
    std::size_t max_iter = 300;
    bool parallel = true;
};

/// k-means++ seeding followed by Lloyd iterations until the assignment is a fixpoint.
KmeansResult kmeans(const Dataset& dataset, std::size_t k, std::uint64_t seed,
                    const KmeansOptions& options = {});
KmeansResult kmeans(const Matrix& points, std::size_t k, std::uint64_t seed,
                    const KmeansOptions& options = {});

/// k-means++ seeding only (D^2 sampling); exposed for GMM initialisation.
Matrix kmeanspp_seed(const Matrix& points, std::size_t k, std::uint64_t seed);

/**
 * Keep sample i iff ||x_i - center(label_i)|| <= fraction * d_max, with d_max the
 * largest sample-to-own-center distance over all clusters.
 */
Labeling truncate_by_radius(const Labeling& labeling, const Matrix& centers,
                            const Matrix& points, double fraction);
Labeling truncate_by_radius(const KmeansResult& result, const Dataset& dataset, double fraction);

struct GmmResult {
    Vector weights;
    Matrix means; // k x D
    std::vector<Eigen::MatrixXd> covariances;
    Matrix responsibilities; // N x k
    Labeling labeling;       // argmax responsibility
    double log_likelihood = 0.0;
    std::vector<double> log_likelihood_history;
    std::size_t iterations = 0;
};

struct GmmOptions {
    std::size_t max_iter = 500;
    double tol = 1e-8;
    /// Diagonal ridge, relative to each feature's variance.
    double reg_fraction = 1e-6;
    bool parallel = true;
};

/// Full-covariance EM from k-means++ seeded means.
GmmResult gmm_em(const Dataset& dataset, std::size_t k, std::uint64_t seed,
                 const GmmOptions& options = {});
GmmResult gmm_em(const Matrix& points, std::size_t k, std::uint64_t seed,
                 const GmmOptions& options = {});

/// Keep the argmax assignment iff the largest responsibility exceeds threshold.
Labeling truncate_by_responsibility(const GmmResult& result, double threshold);

/// Distance-based truncation against the component means (hard labels).
Labeling truncate_by_radius(const GmmResult& result, const Dataset& dataset, double fraction);

} // namespace conceptid

#endif
