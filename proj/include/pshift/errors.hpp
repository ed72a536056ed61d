#pragma once

#include <stdexcept>
#include <string>

namespace pshift {

/// A general inducing map whose inverse rule disagrees with its forward rule.
class InconsistentMapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotInvertibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid construction parameters; the message names the violated condition.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed JSON/CSV document.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OrbitMemoryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ModeMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pshift
