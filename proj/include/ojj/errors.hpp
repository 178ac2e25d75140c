#pragma once

#include <stdexcept>
#include <string>

namespace ojj {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller violated an operation's precondition (odd N, zero detuning, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// State and operator live in different Hilbert spaces.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A numerical invariant broke: non-Hermitian generator, norm drift, complex
// residue on a quantity that must be real.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// A fit could not resolve the feature it was asked to measure.
class FitError : public Error {
 public:
  using Error::Error;
};

}  // namespace ojj
