#pragma once

#include <stdexcept>
#include <string>

namespace tsrc {

/// Inconsistent tensor/dictionary shapes (bad axis, partition mismatch, ...).
class ShapeError : public std::invalid_argument {
public:
    explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

/// Invalid configuration values (non-positive lambda, empty grids, ...).
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Broken or missing input data (files, manifests, degenerate folds, ...).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure (solver divergence, zero dictionary, ...).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace tsrc
