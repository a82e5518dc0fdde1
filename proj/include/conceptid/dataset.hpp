#ifndef CONCEPTID_DATASET_HPP
#define CONCEPTID_DATASET_HPP

#include "conceptid/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace conceptid {

/**
 * Immutable numeric sample table with named columns.
 *
 * Construction validates that the table is non-empty, that every value is
 * finite and that column names are unique. Once built, a Dataset is never
 * mutated and may be shared between threads.
 */
class Dataset {
public:
    Dataset(Matrix values, std::vector<std::string> column_names);

    std::size_t rows() const noexcept { return static_cast<std::size_t>(values_.rows()); }
    std::size_t cols() const noexcept { return static_cast<std::size_t>(values_.cols()); }

    const Matrix& values() const noexcept { return values_; }
    const std::vector<std::string>& column_names() const noexcept { return names_; }

    /// Index of the named column; throws SchemaError if absent.
    std::size_t column_index(const std::string& name) const;

    /// Copy with every column min-max scaled onto [0, 1]. Constant columns map to 0.
    Dataset standardized() const;

    /// Subset of rows, in the given order.
    Dataset select_rows(std::span<const std::size_t> rows) const;

private:
    Matrix values_;
    std::vector<std::string> names_;
};

struct Subspace {
    std::string name;
    std::vector<std::size_t> columns;
};

/// Subspace declaration by column name, as read from JSON.
struct SubspaceSpec {
    struct Entry {
        std::string name;
        std::vector<std::string> columns;
    };
    std::vector<Entry> subspaces;
};

/**
 * Partition of the feature columns into named, disjoint subspaces.
 * Columns not claimed by any subspace form the leftover set.
 */
class SubspaceConfig {
public:
    SubspaceConfig(std::vector<Subspace> subspaces, std::size_t n_columns);

    /// Resolve a name-based declaration against a column header.
    static SubspaceConfig resolve(const SubspaceSpec& spec,
                                  const std::vector<std::string>& column_names);

    std::size_t size() const noexcept { return subspaces_.size(); }
    std::size_t n_columns() const noexcept { return n_columns_; }
    const Subspace& subspace(std::size_t k) const;
    const std::vector<Subspace>& subspaces() const noexcept { return subspaces_; }
    const std::vector<std::size_t>& leftover() const noexcept { return leftover_; }

    /// Dimension n_k of every subspace, in declaration order.
    std::vector<std::size_t> dims() const;

    SubspaceSpec to_spec(const std::vector<std::string>& column_names) const;

private:
    std::vector<Subspace> subspaces_;
    std::vector<std::size_t> leftover_;
    std::size_t n_columns_;
};

struct BoundingBox {
    std::vector<double> lo;
    std::vector<double> hi;

    std::size_t size() const noexcept { return lo.size(); }
    double range(std::size_t i) const noexcept { return hi[i] - lo[i]; }
};

/// Columns of subspace k, in declaration order (copy).
Matrix project(const Dataset& dataset, const SubspaceConfig& config, std::size_t subspace_index);

/// Projection of the given columns (copy).
Matrix select_columns(const Matrix& values, std::span<const std::size_t> columns);

BoundingBox bounding_box(const Dataset& dataset, std::span<const std::size_t> columns);

struct CsvOptions {
    /// Per-column min-max scaling onto [0, 1] after load.
    bool standardize = false;
};

Dataset read_csv(std::istream& in, const CsvOptions& options = {});
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

/// Load and verify that every column referenced by `spec` exists.
Dataset load_csv(const std::filesystem::path& path, const SubspaceSpec& spec,
                 const CsvOptions& options = {});

/// Writes with 17 significant digits so values round-trip exactly.
void write_csv(const Dataset& dataset, std::ostream& out);
void write_csv(const Dataset& dataset, const std::filesystem::path& path);

} // namespace conceptid

#endif
