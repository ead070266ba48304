#pragma once

#include <stdexcept>
#include <string>

namespace scaledyn {

/// Base of every exception thrown by the numerics core.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation
/// (r <= 0, alpha outside (0,1], a vanishing psi, a stencil leaving the field domain).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Structurally invalid input: wrong dimensions, out-of-range indices, malformed text.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A configuration the library deliberately does not handle (eta = +-i in the
/// real/imaginary splits, correction orders above 4).
class Unsupported : public Error {
 public:
  using Error::Error;
};

}  // namespace scaledyn
