#include "conceptid/geometry.hpp"

#include "conceptid/error.hpp"
#include "conceptid/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace conceptid {

namespace {

double logistic(double g) {
    // split to avoid overflow of exp for large |g|
    if (g >= 0.0) return 1.0 / (1.0 + std::exp(-g));
    const double e = std::exp(g);
    return e / (1.0 + e);
}

double logit(double u) { return std::log(u) - std::log1p(-u); }

} // namespace

std::size_t num_params(std::span<const std::size_t> subspace_dims, std::size_t n_concepts) {
    std::size_t per_concept = 0;
    for (std::size_t n : subspace_dims) per_concept += params_per_region(n);
    return n_concepts * per_concept;
}

Eigen::MatrixXd rotation_matrix(const Vector& angles, std::size_t n) {
    if (static_cast<std::size_t>(angles.size()) != n_angles(n)) {
        throw DimensionError("rotation in " + std::to_string(n) + " dimensions needs " +
                             std::to_string(n_angles(n)) + " angles, got " +
                             std::to_string(angles.size()));
    }
    const auto dim = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd r = Eigen::MatrixXd::Identity(dim, dim);
    Eigen::Index a = 0;
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = i + 1; j < dim; ++j, ++a) {
            const double c = std::cos(angles[a]);
            const double s = std::sin(angles[a]);
            // r <- r * G(i, j): only columns i and j change
            for (Eigen::Index row = 0; row < dim; ++row) {
                const double ri = r(row, i);
                const double rj = r(row, j);
                r(row, i) = c * ri + s * rj;
                r(row, j) = -s * ri + c * rj;
            }
        }
    }
    return r;
}

Eigen::MatrixXd membership_transform(const Ellipsoid& e) {
    const std::size_t n = e.dim();
    if (static_cast<std::size_t>(e.semi_axes.size()) != n) {
        throw DimensionError("ellipsoid semi-axis count does not match its center");
    }
    return e.semi_axes.cwiseInverse().asDiagonal() * rotation_matrix(e.angles, n);
}

bool contains(const Ellipsoid& e, std::span<const double> point) {
    if (point.size() != e.dim()) {
        throw DimensionError("point has " + std::to_string(point.size()) +
                             " coordinates, ellipsoid has " + std::to_string(e.dim()));
    }
    const Eigen::MatrixXd t = membership_transform(e);
    const Eigen::Map<const Vector> p(point.data(), static_cast<Eigen::Index>(point.size()));
    return (t * (p - e.center)).squaredNorm() <= 1.0;
}

Mask membership_mask(const Ellipsoid& e, const Matrix& points) {
    if (points.rows() > 0 && static_cast<std::size_t>(points.cols()) != e.dim()) {
        throw DimensionError("points have " + std::to_string(points.cols()) +
                             " columns, ellipsoid has " + std::to_string(e.dim()));
    }
    Mask out;
    kernels::omp::membership(points, e.center, membership_transform(e), out);
    return out;
}

EllipsoidSet::EllipsoidSet(std::size_t n_concepts, std::vector<std::size_t> dims)
    : n_concepts_(n_concepts), dims_(std::move(dims)) {
    regions_.reserve(n_concepts_ * dims_.size());
    for (std::size_t a = 0; a < n_concepts_; ++a) {
        for (std::size_t n : dims_) {
            const auto d = static_cast<Eigen::Index>(n);
            regions_.push_back(Ellipsoid{Vector::Zero(d), Vector::Ones(d),
                                         Vector::Zero(static_cast<Eigen::Index>(n_angles(n)))});
        }
    }
}

EllipsoidSet::EllipsoidSet(std::size_t n_concepts, std::vector<std::size_t> dims,
                           std::vector<Ellipsoid> regions)
    : n_concepts_(n_concepts), dims_(std::move(dims)), regions_(std::move(regions)) {
    if (regions_.size() != n_concepts_ * dims_.size()) {
        throw DimensionError("expected " + std::to_string(n_concepts_ * dims_.size()) +
                             " regions, got " + std::to_string(regions_.size()));
    }
    for (std::size_t a = 0; a < n_concepts_; ++a) {
        for (std::size_t k = 0; k < dims_.size(); ++k) {
            const Ellipsoid& e = region(a, k);
            if (e.dim() != dims_[k] || static_cast<std::size_t>(e.semi_axes.size()) != dims_[k] ||
                static_cast<std::size_t>(e.angles.size()) != n_angles(dims_[k])) {
                throw DimensionError("region (" + std::to_string(a) + ", " + std::to_string(k) +
                                     ") does not match subspace dimension " +
                                     std::to_string(dims_[k]));
            }
        }
    }
}

Ellipsoid& EllipsoidSet::region(std::size_t concept_index, std::size_t subspace) {
    return regions_.at(concept_index * dims_.size() + subspace);
}

const Ellipsoid& EllipsoidSet::region(std::size_t concept_index, std::size_t subspace) const {
    return regions_.at(concept_index * dims_.size() + subspace);
}

std::size_t EllipsoidSet::num_params() const { return conceptid::num_params(dims_, n_concepts_); }

GenotypeCodec::GenotypeCodec(std::vector<std::size_t> dims, std::size_t n_concepts,
                             std::vector<BoundingBox> boxes)
    : dims_(std::move(dims)), n_concepts_(n_concepts), boxes_(std::move(boxes)) {
    if (boxes_.size() != dims_.size()) {
        throw DimensionError("one bounding box per subspace is required");
    }
    for (std::size_t k = 0; k < dims_.size(); ++k) {
        if (boxes_[k].size() != dims_[k]) {
            throw DimensionError("bounding box of subspace " + std::to_string(k) +
                                 " has wrong dimension");
        }
    }
    size_ = conceptid::num_params(dims_, n_concepts_);
}

double GenotypeCodec::range(std::size_t k, std::size_t d) const {
    const double r = boxes_[k].range(d);
    return r > 0.0 ? r : 1.0;
}

double GenotypeCodec::min_semi_axis(std::size_t k, std::size_t d) const {
    return kMinSemiAxisFraction * range(k, d);
}

EllipsoidSet GenotypeCodec::decode(const Genotype& genes) const {
    if (static_cast<std::size_t>(genes.size()) != size_) {
        throw DimensionError("genotype has " + std::to_string(genes.size()) + " genes, expected " +
                             std::to_string(size_));
    }
    std::vector<Ellipsoid> regions;
    regions.reserve(n_concepts_ * dims_.size());
    Eigen::Index g = 0;
    for (std::size_t a = 0; a < n_concepts_; ++a) {
        for (std::size_t k = 0; k < dims_.size(); ++k) {
            const std::size_t n = dims_[k];
            const auto dim = static_cast<Eigen::Index>(n);
            Ellipsoid e{Vector(dim), Vector(dim), Vector(static_cast<Eigen::Index>(n_angles(n)))};
            for (std::size_t d = 0; d < n; ++d) {
                const double r = range(k, d);
                const double lo = boxes_[k].lo[d] - kCenterMargin * r;
                e.center[static_cast<Eigen::Index>(d)] =
                    lo + (1.0 + 2.0 * kCenterMargin) * r * logistic(genes[g++]);
            }
            for (std::size_t d = 0; d < n; ++d) {
                const double eps = min_semi_axis(k, d);
                const double log_span = std::log(range(k, d) / eps);
                const double axis = eps * std::exp(log_span * logistic(genes[g++]));
                e.semi_axes[static_cast<Eigen::Index>(d)] = std::clamp(axis, eps, range(k, d));
            }
            for (Eigen::Index m = 0; m < e.angles.size(); ++m) {
                const double angle = std::numbers::pi * logistic(genes[g++]);
                // pi itself is excluded from the angle interval
                e.angles[m] = angle < std::numbers::pi ? angle
                                                        : std::nextafter(std::numbers::pi, 0.0);
            }
            regions.push_back(std::move(e));
        }
    }
    return EllipsoidSet(n_concepts_, dims_, std::move(regions));
}

Genotype GenotypeCodec::encode(const EllipsoidSet& set) const {
    if (set.n_concepts() != n_concepts_ || set.dims() != dims_) {
        throw DimensionError("ellipsoid set shape does not match the codec");
    }
    Genotype genes(static_cast<Eigen::Index>(size_));
    Eigen::Index g = 0;
    for (std::size_t a = 0; a < n_concepts_; ++a) {
        for (std::size_t k = 0; k < dims_.size(); ++k) {
            const Ellipsoid& e = set.region(a, k);
            for (std::size_t d = 0; d < dims_[k]; ++d) {
                const double r = range(k, d);
                const double lo = boxes_[k].lo[d] - kCenterMargin * r;
                const double u =
                    (e.center[static_cast<Eigen::Index>(d)] - lo) / ((1.0 + 2.0 * kCenterMargin) * r);
                genes[g++] = logit(u);
            }
            for (std::size_t d = 0; d < dims_[k]; ++d) {
                const double eps = min_semi_axis(k, d);
                const double u = std::log(e.semi_axes[static_cast<Eigen::Index>(d)] / eps) /
                                 std::log(range(k, d) / eps);
                genes[g++] = logit(u);
            }
            for (Eigen::Index m = 0; m < e.angles.size(); ++m) {
                genes[g++] = logit(e.angles[m] / std::numbers::pi);
            }
        }
    }
    return genes;
}

std::vector<BoundingBox> subspace_boxes(const Dataset& dataset, const SubspaceConfig& config) {
    std::vector<BoundingBox> boxes;
    boxes.reserve(config.size());
    for (const auto& s : config.subspaces()) boxes.push_back(bounding_box(dataset, s.columns));
    return boxes;
}

} // namespace conceptid
