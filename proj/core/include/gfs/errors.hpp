#pragma once

#include <stdexcept>
#include <string>

namespace gfs {

/// Input outside an operation's domain (empty sets, bad indices, shapes).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A factorization or iteration failed to converge.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A theorem hypothesis required by a certificate does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace gfs
