#pragma once

#include <stdexcept>
#include <string>

namespace wsq {

/// Input outside the mathematical domain of an operation (c < 1, p <= 1, point outside D_c, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Caller misuse: bad block index, leaf count not a power of two, unknown flag.
class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// A finite-difference stencil left the region or domain; retry with a smaller step.
class StencilError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace wsq
