#pragma once

#include <stdexcept>
#include <string>

namespace lorentz_ops {

/// Some atom's k-fold preimage is an infinite tail of positive mass.
class InfiniteAtomMass : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotAbsolutelyContinuous : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operator application left the class of simple functions.
class NonSimpleResult : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Violated invariant of a space, map, weight or index.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lorentz_ops
