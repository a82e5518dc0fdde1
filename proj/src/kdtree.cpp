#include "conceptid/kdtree.hpp"

#include "conceptid/error.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>

namespace conceptid {

KdTree::KdTree(const Matrix& points, std::size_t leaf_size)
    : n_(static_cast<std::size_t>(points.rows())),
      dim_(static_cast<std::size_t>(points.cols())),
      leaf_size_(std::max<std::size_t>(leaf_size, 1)),
      data_(points.data(), points.data() + points.size()),
      order_(n_) {
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    if (n_ > 0) {
        nodes_.reserve(2 * (n_ / leaf_size_ + 1));
        build(0, n_);
    }
}

std::size_t KdTree::build(std::size_t begin, std::size_t end) {
    const std::size_t id = nodes_.size();
    Node node;
    node.begin = begin;
    node.end = end;
    nodes_.push_back(std::move(node));
    std::vector<double> lo(dim_, std::numeric_limits<double>::infinity());
    std::vector<double> hi(dim_, -std::numeric_limits<double>::infinity());
    for (std::size_t p = begin; p < end; ++p) {
        const double* r = row(order_[p]);
        for (std::size_t d = 0; d < dim_; ++d) {
            lo[d] = std::min(lo[d], r[d]);
            hi[d] = std::max(hi[d], r[d]);
        }
    }
    std::size_t split_dim = 0;
    double spread = -1.0;
    for (std::size_t d = 0; d < dim_; ++d) {
        if (hi[d] - lo[d] > spread) {
            spread = hi[d] - lo[d];
            split_dim = d;
        }
    }
    nodes_[id].lo = std::move(lo);
    nodes_[id].hi = std::move(hi);
    if (end - begin <= leaf_size_ || spread <= 0.0) return id;

    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                     order_.begin() + static_cast<std::ptrdiff_t>(mid),
                     order_.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](std::size_t a, std::size_t b) {
                         return row(a)[split_dim] < row(b)[split_dim];
                     });
    const std::size_t left = build(begin, mid);
    const std::size_t right = build(mid, end);
    nodes_[id].leaf = false;
    nodes_[id].split_dim = split_dim;
    nodes_[id].split_value = row(order_[mid])[split_dim];
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
}

double KdTree::box_distance(const Node& node, const double* q, Metric metric) const {
    double acc = 0.0;
    for (std::size_t d = 0; d < dim_; ++d) {
        double v = 0.0;
        if (q[d] < node.lo[d]) {
            v = node.lo[d] - q[d];
        } else if (q[d] > node.hi[d]) {
            v = q[d] - node.hi[d];
        }
        if (metric == Metric::Chebyshev) {
            acc = std::max(acc, v);
        } else {
            acc += v * v;
        }
    }
    return acc;
}

double KdTree::kth_neighbor_distance(std::size_t i, std::size_t k, Metric metric) const {
    if (k == 0 || k >= n_) {
        throw RangeError("k-th neighbour query needs 0 < k < n");
    }
    const double* q = row(i);
    std::priority_queue<double> best; // max-heap of the k smallest distances
    std::vector<std::size_t> stack{0};
    while (!stack.empty()) {
        const Node& node = nodes_[stack.back()];
        stack.pop_back();
        if (best.size() == k && box_distance(node, q, metric) > best.top()) continue;
        if (node.leaf) {
            for (std::size_t p = node.begin; p < node.end; ++p) {
                const std::size_t j = order_[p];
                if (j == i) continue;
                const double dist = distance(q, row(j), dim_, metric);
                if (best.size() < k) {
                    best.push(dist);
                } else if (dist < best.top()) {
                    best.pop();
                    best.push(dist);
                }
            }
            continue;
        }
        // push the farther child first so the nearer one is explored next
        const bool go_left = q[node.split_dim] < node.split_value;
        stack.push_back(go_left ? node.right : node.left);
        stack.push_back(go_left ? node.left : node.right);
    }
    return best.top();
}

std::size_t KdTree::count_within(std::size_t i, double radius, Metric metric) const {
    const double* q = row(i);
    std::size_t count = 0;
    std::vector<std::size_t> stack{0};
    while (!stack.empty()) {
        const Node& node = nodes_[stack.back()];
        stack.pop_back();
        if (box_distance(node, q, metric) >= radius) continue;
        // whole box strictly inside the radius
        double far = 0.0;
        for (std::size_t d = 0; d < dim_; ++d) {
            const double a = q[d] > node.lo[d] ? q[d] - node.lo[d] : node.lo[d] - q[d];
            const double b = q[d] > node.hi[d] ? q[d] - node.hi[d] : node.hi[d] - q[d];
            const double v = std::max(a, b);
            far = metric == Metric::Chebyshev ? std::max(far, v) : far + v * v;
        }
        if (far < radius) {
            count += node.end - node.begin;
            continue;
        }
        if (node.leaf) {
            for (std::size_t p = node.begin; p < node.end; ++p) {
                if (distance(q, row(order_[p]), dim_, metric) < radius) ++count;
            }
            continue;
        }
        stack.push_back(node.left);
        stack.push_back(node.right);
    }
    // the query row itself is at distance 0
    return radius > 0.0 ? count - 1 : count;
}

std::size_t KdTree::nearest_neighbor(std::size_t i, Metric metric) const {
    if (n_ < 2) throw RangeError("nearest neighbour needs at least two rows");
    const double* q = row(i);
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_index = n_;
    std::vector<std::size_t> stack{0};
    while (!stack.empty()) {
        const Node& node = nodes_[stack.back()];
        stack.pop_back();
        if (box_distance(node, q, metric) > best) continue;
        if (node.leaf) {
            for (std::size_t p = node.begin; p < node.end; ++p) {
                const std::size_t j = order_[p];
                if (j == i) continue;
                const double dist = distance(q, row(j), dim_, metric);
                if (dist < best || (dist == best && j < best_index)) {
                    best = dist;
                    best_index = j;
                }
            }
            continue;
        }
        const bool go_left = q[node.split_dim] < node.split_value;
        stack.push_back(go_left ? node.right : node.left);
        stack.push_back(go_left ? node.left : node.right);
    }
    return best_index;
}

} // namespace conceptid
