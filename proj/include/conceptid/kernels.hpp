#ifndef CONCEPTID_KERNELS_HPP
#define CONCEPTID_KERNELS_HPP

#include "conceptid/types.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <vector>

/*
 * Data-parallel inner loops.
 *
 * Every kernel exists twice with the same signature: `serial` is the
 * straightforward reference (brute force where a search is involved) and
 * `omp` is the OpenMP version used by the library. Both write per-element
 * outputs only; any reduction happens afterwards in index order, so the two
 * agree bit for bit.
 */
namespace conceptid::kernels {

/// Per-sample marginal neighbour counts of the KSG estimator.
struct KsgCounts {
    std::vector<std::size_t> nx;
    std::vector<std::size_t> ny;
};

struct GaussianComponent {
    double log_weight = 0.0;
    Vector mean;
    Eigen::MatrixXd chol_lower; ///< L with L L^T = covariance
    double log_det = 0.0;
};

// Kernel contracts (identical in both namespaces):
//   membership            out[i] = ||T (p_i - c)||^2 <= 1
//   ksg_counts            k-th neighbour distance in the joint max-norm space,
//                         then strictly-closer neighbour counts per marginal
//   silhouette_values     per-row silhouette; labels dense in [0, n_clusters)
//   nearest_neighbors     Euclidean nearest other row, lowest index on ties
//   assign_nearest        nearest center (lowest index on ties), squared distance
//   log_weighted_densities  log(w_j N(x_i | mu_j, S_j))

namespace serial {
void membership(const Matrix& points, const Vector& center, const Eigen::MatrixXd& transform,
                Mask& out);
KsgCounts ksg_counts(const Matrix& x, const Matrix& y, std::size_t k);
std::vector<double> silhouette_values(const Matrix& points, std::span<const int> labels,
                                      std::size_t n_clusters);
std::vector<std::size_t> nearest_neighbors(const Matrix& points);
void assign_nearest(const Matrix& points, const Matrix& centers, std::span<int> labels,
                    std::span<double> sq_dist);
Matrix log_weighted_densities(const Matrix& points, std::span<const GaussianComponent> components);
} // namespace serial

namespace omp {
void membership(const Matrix& points, const Vector& center, const Eigen::MatrixXd& transform,
                Mask& out);
KsgCounts ksg_counts(const Matrix& x, const Matrix& y, std::size_t k);
std::vector<double> silhouette_values(const Matrix& points, std::span<const int> labels,
                                      std::size_t n_clusters);
std::vector<std::size_t> nearest_neighbors(const Matrix& points);
void assign_nearest(const Matrix& points, const Matrix& centers, std::span<int> labels,
                    std::span<double> sq_dist);
Matrix log_weighted_densities(const Matrix& points, std::span<const GaussianComponent> components);
} // namespace omp

} // namespace conceptid::kernels

#endif
