#pragma once

#include <stdexcept>
#include <string>

namespace cg {

/// Base class for every error thrown by this library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: unknown nodes, sets that are not disjoint, files that
/// do not parse.
class input_error : public error {
 public:
  using error::error;
};

/// Structurally valid input outside an operation's domain, e.g. a hybrid
/// graph that is not a chain graph where one is required.
class domain_error : public error {
 public:
  using error::error;
};

/// Exhaustive enumeration refused because the instance is too large.
class resource_error : public error {
 public:
  using error::error;
};

/// A violated internal invariant. Indicates a bug, not bad input.
class internal_error : public error {
 public:
  using error::error;
};

}  // namespace cg
