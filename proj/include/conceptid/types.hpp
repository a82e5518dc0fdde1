#ifndef CONCEPTID_TYPES_HPP
#define CONCEPTID_TYPES_HPP

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace conceptid {

/// Row-major sample matrix: one sample per row.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Boolean mask stored as bytes so that it can be written from parallel loops.
using Mask = std::vector<std::uint8_t>;

} // namespace conceptid

#endif
