#include "conceptid/kernels.hpp"

#include "conceptid/error.hpp"
#include "kernels_common.hpp"

#include <algorithm>

namespace conceptid::kernels::serial {

void membership(const Matrix& points, const Vector& center, const Eigen::MatrixXd& transform,
                Mask& out) {
    const auto n = static_cast<std::size_t>(points.rows());
    const auto d = static_cast<std::size_t>(points.cols());
    out.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = detail::inside(points.data() + i * d, center, transform);
    }
}

KsgCounts ksg_counts(const Matrix& x, const Matrix& y, std::size_t k) {
    const auto n = static_cast<std::size_t>(x.rows());
    const auto dx = static_cast<std::size_t>(x.cols());
    const auto dy = static_cast<std::size_t>(y.cols());
    KsgCounts out{std::vector<std::size_t>(n), std::vector<std::size_t>(n)};
    std::vector<double> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* xi = x.data() + i * dx;
        const double* yi = y.data() + i * dy;
        std::size_t m = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            dist[m++] = std::max(distance(xi, x.data() + j * dx, dx, Metric::Chebyshev),
                                 distance(yi, y.data() + j * dy, dy, Metric::Chebyshev));
        }
        std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k - 1),
                         dist.begin() + static_cast<std::ptrdiff_t>(m));
        const double eps = dist[k - 1];
        std::size_t nx = 0, ny = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            nx += distance(xi, x.data() + j * dx, dx, Metric::Chebyshev) < eps;
            ny += distance(yi, y.data() + j * dy, dy, Metric::Chebyshev) < eps;
        }
        out.nx[i] = nx;
        out.ny[i] = ny;
    }
    return out;
}

std::vector<double> silhouette_values(const Matrix& points, std::span<const int> labels,
                                      std::size_t n_clusters) {
    const auto sizes = detail::cluster_sizes(labels, n_clusters);
    std::vector<double> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        out[i] = detail::silhouette_value(points, labels, n_clusters, sizes, i);
    }
    return out;
}

std::vector<std::size_t> nearest_neighbors(const Matrix& points) {
    const auto n = static_cast<std::size_t>(points.rows());
    const auto d = static_cast<std::size_t>(points.cols());
    if (n < 2) throw RangeError("nearest neighbour needs at least two rows");
    std::vector<std::size_t> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_j = n;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double dist = distance(points.data() + i * d, points.data() + j * d, d,
                                         Metric::Euclidean);
            if (dist < best) {
                best = dist;
                best_j = j;
            }
        }
        out[i] = best_j;
    }
    return out;
}

void assign_nearest(const Matrix& points, const Matrix& centers, std::span<int> labels,
                    std::span<double> sq_dist) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        detail::nearest_center(points, centers, i, labels[i], sq_dist[i]);
    }
}

Matrix log_weighted_densities(const Matrix& points, std::span<const GaussianComponent> components) {
    const auto n = static_cast<std::size_t>(points.rows());
    const auto d = static_cast<std::size_t>(points.cols());
    Matrix out(points.rows(), static_cast<Eigen::Index>(components.size()));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < components.size(); ++c) {
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
                detail::log_weighted_density(points.data() + i * d, components[c]);
        }
    }
    return out;
}

} // namespace conceptid::kernels::serial
