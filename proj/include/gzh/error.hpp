#pragma once

#include <stdexcept>
#include <string>

namespace gzh {

// Bad user input or a violated precondition. The CLI maps this to exit code 2.
class InvalidArgument : public std::invalid_argument {
 public:
  explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical procedure did not reach its tolerance. The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// An internal consistency check failed (a bug, not bad input).
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace gzh
