#include "conceptid/dataset.hpp"

#include "conceptid/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_set>

namespace conceptid {

Dataset::Dataset(Matrix values, std::vector<std::string> column_names)
    : values_(std::move(values)), names_(std::move(column_names)) {
    if (values_.rows() == 0 || values_.cols() == 0) {
        throw EmptyDatasetError("dataset has no rows or no columns");
    }
    if (names_.size() != cols()) {
        throw SchemaError("column name count " + std::to_string(names_.size()) +
                          " does not match column count " + std::to_string(cols()));
    }
    std::unordered_set<std::string> seen;
    for (const auto& name : names_) {
        if (!seen.insert(name).second) {
            throw SchemaError("duplicate column name '" + name + "'");
        }
    }
    for (Eigen::Index i = 0; i < values_.rows(); ++i) {
        for (Eigen::Index j = 0; j < values_.cols(); ++j) {
            if (!std::isfinite(values_(i, j))) {
                throw ParseError("non-finite value at row " + std::to_string(i) + ", column '" +
                                     names_[static_cast<std::size_t>(j)] + "'",
                                 static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            }
        }
    }
}

std::size_t Dataset::column_index(const std::string& name) const {
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) {
        throw SchemaError("no column named '" + name + "'");
    }
    return static_cast<std::size_t>(it - names_.begin());
}

Dataset Dataset::standardized() const {
    Matrix scaled = values_;
    for (Eigen::Index j = 0; j < scaled.cols(); ++j) {
        const double lo = scaled.col(j).minCoeff();
        const double hi = scaled.col(j).maxCoeff();
        const double range = hi - lo;
        for (Eigen::Index i = 0; i < scaled.rows(); ++i) {
            scaled(i, j) = range > 0.0 ? (scaled(i, j) - lo) / range : 0.0;
        }
    }
    return Dataset(std::move(scaled), names_);
}

Dataset Dataset::select_rows(std::span<const std::size_t> rows) const {
    Matrix out(static_cast<Eigen::Index>(rows.size()), values_.cols());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r] >= this->rows()) {
            throw RangeError("row index " + std::to_string(rows[r]) + " out of range");
        }
        out.row(static_cast<Eigen::Index>(r)) = values_.row(static_cast<Eigen::Index>(rows[r]));
    }
    return Dataset(std::move(out), names_);
}

SubspaceConfig::SubspaceConfig(std::vector<Subspace> subspaces, std::size_t n_columns)
    : subspaces_(std::move(subspaces)), n_columns_(n_columns) {
    if (subspaces_.empty()) {
        throw ConfigError("at least one subspace is required");
    }
    std::vector<bool> used(n_columns_, false);
    std::set<std::string> names;
    for (const auto& s : subspaces_) {
        if (s.columns.empty()) {
            throw ConfigError("subspace '" + s.name + "' has no columns");
        }
        if (!names.insert(s.name).second) {
            throw ConfigError("duplicate subspace name '" + s.name + "'");
        }
        for (std::size_t c : s.columns) {
            if (c >= n_columns_) {
                throw SchemaError("subspace '" + s.name + "' references column " +
                                  std::to_string(c) + " of " + std::to_string(n_columns_));
            }
            if (used[c]) {
                throw ConfigError("column " + std::to_string(c) +
                                  " appears in more than one subspace");
            }
            used[c] = true;
        }
    }
    for (std::size_t c = 0; c < n_columns_; ++c) {
        if (!used[c]) leftover_.push_back(c);
    }
}

SubspaceConfig SubspaceConfig::resolve(const SubspaceSpec& spec,
                                       const std::vector<std::string>& column_names) {
    std::vector<Subspace> subspaces;
    for (const auto& entry : spec.subspaces) {
        Subspace s{entry.name, {}};
        for (const auto& col : entry.columns) {
            const auto it = std::find(column_names.begin(), column_names.end(), col);
            if (it == column_names.end()) {
                throw SchemaError("subspace '" + entry.name + "' references missing column '" +
                                  col + "'");
            }
            s.columns.push_back(static_cast<std::size_t>(it - column_names.begin()));
        }
        subspaces.push_back(std::move(s));
    }
    return SubspaceConfig(std::move(subspaces), column_names.size());
}

const Subspace& SubspaceConfig::subspace(std::size_t k) const {
    if (k >= subspaces_.size()) {
        throw RangeError("subspace index " + std::to_string(k) + " out of range [0, " +
                         std::to_string(subspaces_.size()) + ")");
    }
    return subspaces_[k];
}

std::vector<std::size_t> SubspaceConfig::dims() const {
    std::vector<std::size_t> d;
    d.reserve(subspaces_.size());
    for (const auto& s : subspaces_) d.push_back(s.columns.size());
    return d;
}

SubspaceSpec SubspaceConfig::to_spec(const std::vector<std::string>& column_names) const {
    SubspaceSpec spec;
    for (const auto& s : subspaces_) {
        SubspaceSpec::Entry e{s.name, {}};
        for (std::size_t c : s.columns) e.columns.push_back(column_names.at(c));
        spec.subspaces.push_back(std::move(e));
    }
    return spec;
}

Matrix select_columns(const Matrix& values, std::span<const std::size_t> columns) {
    Matrix out(values.rows(), static_cast<Eigen::Index>(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j) {
        out.col(static_cast<Eigen::Index>(j)) = values.col(static_cast<Eigen::Index>(columns[j]));
    }
    return out;
}

Matrix project(const Dataset& dataset, const SubspaceConfig& config, std::size_t subspace_index) {
    return select_columns(dataset.values(), config.subspace(subspace_index).columns);
}

BoundingBox bounding_box(const Dataset& dataset, std::span<const std::size_t> columns) {
    if (columns.empty()) {
        throw ConfigError("bounding box needs at least one column");
    }
    BoundingBox box;
    for (std::size_t c : columns) {
        if (c >= dataset.cols()) {
            throw RangeError("column " + std::to_string(c) + " out of range");
        }
        const auto col = dataset.values().col(static_cast<Eigen::Index>(c));
        box.lo.push_back(col.minCoeff());
        box.hi.push_back(col.maxCoeff());
    }
    return box;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

double parse_cell(const std::string& raw, std::size_t row, std::size_t col,
                  const std::string& column_name) {
    const std::string cell = trim(raw);
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (!cell.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (cell.empty() || ec != std::errc() || ptr != last) {
        throw ParseError("cannot parse '" + cell + "' at row " + std::to_string(row) +
                             ", column '" + column_name + "'",
                         row, col);
    }
    if (!std::isfinite(value)) {
        throw ParseError("non-finite value '" + cell + "' at row " + std::to_string(row) +
                             ", column '" + column_name + "'",
                         row, col);
    }
    return value;
}

} // namespace

Dataset read_csv(std::istream& in, const CsvOptions& options) {
    std::string line;
    if (!std::getline(in, line)) {
        throw EmptyDatasetError("empty CSV: no header row");
    }
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> header;
    for (auto& h : split_line(line)) header.push_back(trim(h));
    if (header.empty() || (header.size() == 1 && header[0].empty())) {
        throw EmptyDatasetError("empty CSV header");
    }
    {
        std::unordered_set<std::string> seen;
        for (const auto& h : header) {
            if (h.empty()) throw SchemaError("empty column name in CSV header");
            if (!seen.insert(h).second) throw SchemaError("duplicate column name '" + h + "'");
        }
    }

    std::vector<double> flat;
    std::size_t rows = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto cells = split_line(line);
        if (cells.size() != header.size()) {
            throw ParseError("row " + std::to_string(rows) + " (line " + std::to_string(line_no) +
                                 ") has " + std::to_string(cells.size()) + " cells, expected " +
                                 std::to_string(header.size()),
                             rows, cells.size());
        }
        for (std::size_t j = 0; j < cells.size(); ++j) {
            flat.push_back(parse_cell(cells[j], rows, j, header[j]));
        }
        ++rows;
    }
    if (rows == 0) {
        throw EmptyDatasetError("CSV has a header but no data rows");
    }
    Matrix values = Eigen::Map<Matrix>(flat.data(), static_cast<Eigen::Index>(rows),
                                       static_cast<Eigen::Index>(header.size()));
    Dataset dataset(std::move(values), std::move(header));
    return options.standardize ? dataset.standardized() : dataset;
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open '" + path.string() + "'");
    }
    return read_csv(in, options);
}

Dataset load_csv(const std::filesystem::path& path, const SubspaceSpec& spec,
                 const CsvOptions& options) {
    Dataset dataset = load_csv(path, options);
    // throws SchemaError on a missing column
    SubspaceConfig::resolve(spec, dataset.column_names());
    return dataset;
}

void write_csv(const Dataset& dataset, std::ostream& out) {
    const auto& names = dataset.column_names();
    for (std::size_t j = 0; j < names.size(); ++j) {
        out << (j ? "," : "") << names[j];
    }
    out << '\n';
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    const Matrix& v = dataset.values();
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
        for (Eigen::Index j = 0; j < v.cols(); ++j) {
            out << (j ? "," : "") << v(i, j);
        }
        out << '\n';
    }
}

void write_csv(const Dataset& dataset, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write '" + path.string() + "'");
    }
    write_csv(dataset, out);
}

} // namespace conceptid
