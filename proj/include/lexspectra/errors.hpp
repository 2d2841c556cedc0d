#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lexspectra {

// Base of every error thrown by the library. The CLI maps subclasses onto
// exit codes, so new failure modes should derive from one of these.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed graph spec, edge list, JSON document or command argument.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A brute-force routine or dense solver was asked to exceed its size cap.
class SizeError : public Error {
 public:
  using Error::Error;
};

// Iterative solver failed to converge, or a matrix was not symmetric.
class NumericError : public Error {
 public:
  using Error::Error;
};

// No exact closed form is registered for the requested graph.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// A closed form was applied to inputs outside its hypotheses
// (irregular factor, disconnected graph, complete graph, ...).
class HypothesisError : public Error {
 public:
  using Error::Error;
};

// An expansion (offset convolution, numeric multiset) exceeded its cap.
// `reached` carries the exact size at the point the cap was crossed.
class CapacityError : public Error {
 public:
  CapacityError(const std::string& what, std::size_t reached)
      : Error(what), reached_(reached) {}
  std::size_t reached() const noexcept { return reached_; }

 private:
  std::size_t reached_;
};

// The requested number of decimal digits is not supported by the error
// bound of an approximate value.
class PrecisionError : public Error {
 public:
  PrecisionError(const std::string& what, std::size_t achievable)
      : Error(what), achievable_(achievable) {}
  std::size_t achievable_digits() const noexcept { return achievable_; }

 private:
  std::size_t achievable_;
};

// Broken internal invariant (multiplicity sums, non-integral offsets).
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace lexspectra
