#pragma once

#include <stdexcept>
#include <string>

namespace vton {

using Real = double;

/// Dimension/shape violations (indivisible sizes, mismatched operands).
class ShapeError : public std::invalid_argument {
 public:
  explicit ShapeError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Malformed structured input (annotation records, checkpoints, manifests).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A required prior step is missing (e.g. finetuning without a checkpoint).
class PreconditionError : public std::runtime_error {
 public:
  explicit PreconditionError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace vton
