#ifndef CONCEPTID_SRC_KERNELS_COMMON_HPP
#define CONCEPTID_SRC_KERNELS_COMMON_HPP

// Per-element bodies shared by the serial and OpenMP kernels so that both
// perform exactly the same floating-point operations.

#include "conceptid/kdtree.hpp"
#include "conceptid/kernels.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace conceptid::kernels::detail {

inline bool inside(const double* p, const Vector& center, const Eigen::MatrixXd& t) {
    const Eigen::Index n = center.size();
    double acc = 0.0;
    for (Eigen::Index r = 0; r < n; ++r) {
        double v = 0.0;
        for (Eigen::Index c = 0; c < n; ++c) v += t(r, c) * (p[c] - center[c]);
        acc += v * v;
    }
    return acc <= 1.0;
}

inline Matrix joint(const Matrix& x, const Matrix& y) {
    Matrix xy(x.rows(), x.cols() + y.cols());
    xy.leftCols(x.cols()) = x;
    xy.rightCols(y.cols()) = y;
    return xy;
}

inline double silhouette_value(const Matrix& points, std::span<const int> labels,
                               std::size_t n_clusters, std::span<const std::size_t> sizes,
                               std::size_t i) {
    const auto own = static_cast<std::size_t>(labels[i]);
    if (sizes[own] <= 1) return 0.0;
    const auto d = static_cast<std::size_t>(points.cols());
    const double* pi = points.data() + i * d;
    std::vector<double> sums(n_clusters, 0.0);
    for (std::size_t j = 0; j < labels.size(); ++j) {
        if (j == i) continue;
        sums[static_cast<std::size_t>(labels[j])] +=
            std::sqrt(distance(pi, points.data() + j * d, d, Metric::Euclidean));
    }
    const double a = sums[own] / static_cast<double>(sizes[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < n_clusters; ++c) {
        if (c == own || sizes[c] == 0) continue;
        b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
    }
    const double m = std::max(a, b);
    return m > 0.0 ? (b - a) / m : 0.0;
}

inline std::vector<std::size_t> cluster_sizes(std::span<const int> labels, std::size_t n_clusters) {
    std::vector<std::size_t> sizes(n_clusters, 0);
    for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
    return sizes;
}

inline void nearest_center(const Matrix& points, const Matrix& centers, std::size_t i,
                           int& label, double& sq_dist) {
    const auto d = static_cast<std::size_t>(points.cols());
    const double* p = points.data() + i * d;
    double best = std::numeric_limits<double>::infinity();
    int best_c = 0;
    for (Eigen::Index c = 0; c < centers.rows(); ++c) {
        const double dist = distance(p, centers.data() + c * centers.cols(), d, Metric::Euclidean);
        if (dist < best) {
            best = dist;
            best_c = static_cast<int>(c);
        }
    }
    label = best_c;
    sq_dist = best;
}

inline double log_weighted_density(const double* p, const GaussianComponent& c) {
    const Eigen::Index d = c.mean.size();
    // forward substitution L z = (p - mean)
    double maha = 0.0;
    std::vector<double> z(static_cast<std::size_t>(d));
    for (Eigen::Index r = 0; r < d; ++r) {
        double v = p[r] - c.mean[r];
        for (Eigen::Index q = 0; q < r; ++q) v -= c.chol_lower(r, q) * z[static_cast<std::size_t>(q)];
        v /= c.chol_lower(r, r);
        z[static_cast<std::size_t>(r)] = v;
        maha += v * v;
    }
    return c.log_weight - 0.5 * (static_cast<double>(d) * std::log(2.0 * std::numbers::pi) +
                                 c.log_det + maha);
}

} // namespace conceptid::kernels::detail

#endif
