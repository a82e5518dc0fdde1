#ifndef CONCEPTID_KDTREE_HPP
#define CONCEPTID_KDTREE_HPP

#include "conceptid/types.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace conceptid {

enum class Metric { Chebyshev, Euclidean };

/**
 * Static k-d tree over the rows of a matrix. Queries are exact and const, so
 * one tree can serve many threads. Distances are computed with the same
 * arithmetic as the brute-force kernels, which keeps results bit-identical.
 */
class KdTree {
public:
    explicit KdTree(const Matrix& points, std::size_t leaf_size = 16);

    std::size_t size() const noexcept { return n_; }
    std::size_t dim() const noexcept { return dim_; }

    // Distances and radii are in comparable units: plain for Chebyshev,
    // squared for Euclidean.

    /// Distance from row i to its k-th nearest other row.
    double kth_neighbor_distance(std::size_t i, std::size_t k, Metric metric) const;

    /// Number of rows j != i with distance(i, j) < radius.
    std::size_t count_within(std::size_t i, double radius, Metric metric) const;

    /// Nearest other row to row i; ties go to the lowest index.
    std::size_t nearest_neighbor(std::size_t i, Metric metric) const;

private:
    struct Node {
        std::size_t begin = 0, end = 0; // range in order_
        std::size_t left = 0, right = 0;
        std::size_t split_dim = 0;
        double split_value = 0.0;
        bool leaf = true;
        std::vector<double> lo, hi; // bounding box
    };

    std::size_t build(std::size_t begin, std::size_t end);
    const double* row(std::size_t i) const noexcept { return data_.data() + i * dim_; }
    double box_distance(const Node& node, const double* q, Metric metric) const;

    std::size_t n_;
    std::size_t dim_;
    std::size_t leaf_size_;
    std::vector<double> data_;
    std::vector<std::size_t> order_;
    std::vector<Node> nodes_;
};

/// Chebyshev or Euclidean distance between two rows of length d.
inline double distance(const double* a, const double* b, std::size_t d, Metric metric) noexcept {
    double acc = 0.0;
    if (metric == Metric::Chebyshev) {
        for (std::size_t j = 0; j < d; ++j) {
            const double v = a[j] > b[j] ? a[j] - b[j] : b[j] - a[j];
            if (v > acc) acc = v;
        }
        return acc;
    }
    for (std::size_t j = 0; j < d; ++j) {
        const double v = a[j] - b[j];
        acc += v * v;
    }
    return acc; // squared; callers compare squared radii
}

} // namespace conceptid

#endif
