#include "conceptid/kernels.hpp"

#include "conceptid/error.hpp"
#include "kernels_common.hpp"

namespace conceptid::kernels::omp {

void membership(const Matrix& points, const Vector& center, const Eigen::MatrixXd& transform,
                Mask& out) {
    const auto n = static_cast<std::ptrdiff_t>(points.rows());
    const auto d = static_cast<std::size_t>(points.cols());
    out.assign(static_cast<std::size_t>(n), 0);
#pragma omp parallel for schedule(static) if (n > 4096)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] =
            detail::inside(points.data() + static_cast<std::size_t>(i) * d, center, transform);
    }
}

KsgCounts ksg_counts(const Matrix& x, const Matrix& y, std::size_t k) {
    const auto n = static_cast<std::ptrdiff_t>(x.rows());
    const KdTree joint_tree(detail::joint(x, y));
    const KdTree x_tree(x);
    const KdTree y_tree(y);
    KsgCounts out{std::vector<std::size_t>(static_cast<std::size_t>(n)),
                  std::vector<std::size_t>(static_cast<std::size_t>(n))};
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t s = 0; s < n; ++s) {
        const auto i = static_cast<std::size_t>(s);
        const double eps = joint_tree.kth_neighbor_distance(i, k, Metric::Chebyshev);
        out.nx[i] = x_tree.count_within(i, eps, Metric::Chebyshev);
        out.ny[i] = y_tree.count_within(i, eps, Metric::Chebyshev);
    }
    return out;
}

std::vector<double> silhouette_values(const Matrix& points, std::span<const int> labels,
                                      std::size_t n_clusters) {
    const auto sizes = detail::cluster_sizes(labels, n_clusters);
    const auto n = static_cast<std::ptrdiff_t>(labels.size());
    std::vector<double> out(labels.size());
#pragma omp parallel for schedule(dynamic, 32)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = detail::silhouette_value(
            points, labels, n_clusters, sizes, static_cast<std::size_t>(i));
    }
    return out;
}

std::vector<std::size_t> nearest_neighbors(const Matrix& points) {
    const auto n = static_cast<std::ptrdiff_t>(points.rows());
    if (n < 2) throw RangeError("nearest neighbour needs at least two rows");
    const KdTree tree(points);
    std::vector<std::size_t> out(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] =
            tree.nearest_neighbor(static_cast<std::size_t>(i), Metric::Euclidean);
    }
    return out;
}

void assign_nearest(const Matrix& points, const Matrix& centers, std::span<int> labels,
                    std::span<double> sq_dist) {
    const auto n = static_cast<std::ptrdiff_t>(labels.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        detail::nearest_center(points, centers, idx, labels[idx], sq_dist[idx]);
    }
}

Matrix log_weighted_densities(const Matrix& points, std::span<const GaussianComponent> components) {
    const auto n = static_cast<std::ptrdiff_t>(points.rows());
    const auto d = static_cast<std::size_t>(points.cols());
    Matrix out(points.rows(), static_cast<Eigen::Index>(components.size()));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < components.size(); ++c) {
            out(i, static_cast<Eigen::Index>(c)) = detail::log_weighted_density(
                points.data() + static_cast<std::size_t>(i) * d, components[c]);
        }
    }
    return out;
}

} // namespace conceptid::kernels::omp
