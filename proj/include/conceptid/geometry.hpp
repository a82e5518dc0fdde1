#ifndef CONCEPTID_GEOMETRY_HPP
#define CONCEPTID_GEOMETRY_HPP

#include "conceptid/dataset.hpp"
#include "conceptid/types.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace conceptid {

/// Minimum semi-axis, relative to the subspace range.
inline constexpr double kMinSemiAxisFraction = 1e-9;

/// Extra margin around the bounding box that region centers may reach.
inline constexpr double kCenterMargin = 0.1;

/**
 * Rotated hyper-ellipsoid in an n-dimensional subspace.
 *
 * A point p lies inside iff || diag(1/semi_axes) * R * (p - center) ||^2 <= 1,
 * where R = rotation_matrix(angles, n). The boundary is inside.
 */
struct Ellipsoid {
    Vector center;
    Vector semi_axes;
    Vector angles; ///< n(n-1)/2 plane angles in [0, pi)

    std::size_t dim() const noexcept { return static_cast<std::size_t>(center.size()); }
};

/// Number of parameters of one n-dimensional region: n(n+3)/2.
constexpr std::size_t params_per_region(std::size_t n) noexcept { return n * (n + 3) / 2; }

constexpr std::size_t n_angles(std::size_t n) noexcept { return n * (n - 1) / 2; }

/// Total genotype length for n_concepts regions per subspace.
std::size_t num_params(std::span<const std::size_t> subspace_dims, std::size_t n_concepts);

/**
 * Orthonormal rotation composed of n(n-1)/2 Givens rotations.
 *
 * The planes are visited in lexicographic order (0,1), (0,2), ..., (n-2,n-1)
 * and R = G(0,1) * G(0,2) * ... * G(n-2,n-1). G(i,j) maps e_i to
 * cos * e_i + sin * e_j.
 */
Eigen::MatrixXd rotation_matrix(const Vector& angles, std::size_t n);

/// diag(1/semi_axes) * R; a point is inside iff ||T (p - c)||^2 <= 1.
Eigen::MatrixXd membership_transform(const Ellipsoid& e);

bool contains(const Ellipsoid& e, std::span<const double> point);

/// Row i of the result is contains(e, points.row(i)).
Mask membership_mask(const Ellipsoid& e, const Matrix& points);

/**
 * N_C x N_S grid of regions; region(a, k) lives in subspace k.
 */
class EllipsoidSet {
public:
    EllipsoidSet(std::size_t n_concepts, std::vector<std::size_t> dims);
    EllipsoidSet(std::size_t n_concepts, std::vector<std::size_t> dims,
                 std::vector<Ellipsoid> regions);

    std::size_t n_concepts() const noexcept { return n_concepts_; }
    std::size_t n_subspaces() const noexcept { return dims_.size(); }
    const std::vector<std::size_t>& dims() const noexcept { return dims_; }

    Ellipsoid& region(std::size_t concept_index, std::size_t subspace);
    const Ellipsoid& region(std::size_t concept_index, std::size_t subspace) const;

    std::size_t num_params() const;

private:
    std::size_t n_concepts_;
    std::vector<std::size_t> dims_;
    std::vector<Ellipsoid> regions_; // concept-major
};

using Genotype = Vector;

/**
 * Maps between unconstrained genotypes and bounded ellipsoid parameters.
 *
 * Per subspace box [lo, hi] with range r, each gene g maps to
 *   center    lo - 0.1 r + 1.2 r * logistic(g)
 *   semi-axis eps * (r / eps)^logistic(g),  eps = 1e-9 r
 *   angle     pi * logistic(g)
 * Genes are laid out concept-major, then subspace, then center, semi-axes,
 * angles. Degenerate boxes (r = 0) use r = 1.
 */
class GenotypeCodec {
public:
    GenotypeCodec(std::vector<std::size_t> dims, std::size_t n_concepts,
                  std::vector<BoundingBox> boxes);

    std::size_t size() const noexcept { return size_; }
    std::size_t n_concepts() const noexcept { return n_concepts_; }
    const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    const std::vector<BoundingBox>& boxes() const noexcept { return boxes_; }

    EllipsoidSet decode(const Genotype& genes) const;
    Genotype encode(const EllipsoidSet& set) const;

    /// Box range used for subspace k, dimension d (never zero).
    double range(std::size_t k, std::size_t d) const;
    double min_semi_axis(std::size_t k, std::size_t d) const;

private:
    std::vector<std::size_t> dims_;
    std::size_t n_concepts_;
    std::vector<BoundingBox> boxes_;
    std::size_t size_;
};

/// Boxes of every subspace of `config` over `dataset`.
std::vector<BoundingBox> subspace_boxes(const Dataset& dataset, const SubspaceConfig& config);

} // namespace conceptid

#endif
