#pragma once

#include <stdexcept>
#include <string>

namespace edfcap {

/// File could not be opened, read, or written.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// File content does not match the expected format. The message names the
/// byte offset or line where decoding failed.
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

/// A computation exceeded its configured resource budget (voxel count,
/// query count).
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

/// A collision check exceeded its query budget without converging; happens
/// only for degenerate near-tangent clearances.
class QueryBudgetError : public ResourceError {
public:
    explicit QueryBudgetError(const std::string& what) : ResourceError(what) {}
};

} // namespace edfcap
