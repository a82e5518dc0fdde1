#ifndef CONCEPTID_ERROR_HPP
#define CONCEPTID_ERROR_HPP

#include <stdexcept>
#include <string>

namespace conceptid {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Header or column layout does not match what was asked for.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// A cell could not be read as a finite number.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t row, std::size_t column)
        : Error(what), row_(row), column_(column) {}

    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

class EmptyDatasetError : public Error {
public:
    using Error::Error;
};

/// Invalid parameters (population size, scaling band, k, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

class RangeError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// A metric that is undefined for the given labeling (e.g. one cluster).
class UndefinedMetricError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Objective evaluation failed inside the optimizer.
class OptimizerAbort : public Error {
public:
    OptimizerAbort(const std::string& what, std::size_t generation)
        : Error(what), generation_(generation) {}

    std::size_t generation() const noexcept { return generation_; }

private:
    std::size_t generation_;
};

} // namespace conceptid

#endif
