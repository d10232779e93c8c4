#pragma once

#include <stdexcept>
#include <string>

namespace cbrec {

// Bad user input: invalid configs, inconsistent file contents. CLI maps to exit 2.
class ValidationError : public std::invalid_argument {
public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Degenerate projection geometry (ray parallel to detector, point behind source).
class GeometryError : public std::domain_error {
public:
  explicit GeometryError(const std::string& what) : std::domain_error(what) {}
};

// Tensor shape mismatch; message names the operation and offending shapes.
class DimensionError : public std::invalid_argument {
public:
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

// Filesystem / format failures. CLI maps to exit 3.
class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace cbrec
