#pragma once

#include <stdexcept>
#include <string>

namespace cmp {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed document (bad JSON, unknown direction letter, bad index).
struct ParseError : Error {
  using Error::Error;
};

/// A domain invariant is violated (duplicate start, start on obstacle, ...).
struct ValidationError : Error {
  using Error::Error;
};

/// Requested layout does not fit (instance generation, storage capacity).
struct CapacityError : Error {
  using Error::Error;
};

/// Strategy precondition not met by the instance (e.g. obstacles for Dichotomy).
struct UnsupportedInstance : Error {
  using Error::Error;
};

/// Some target cannot be reached at all.
struct InfeasibleError : Error {
  using Error::Error;
};

/// Escape layering left robots without a layer.
struct DecompositionError : Error {
  using Error::Error;
};

/// A heuristic solver gave up (stall, exhausted budget).
struct SolverFailure : Error {
  using Error::Error;
};

/// A guaranteed step failed; indicates a bug rather than a hard instance.
struct InternalError : Error {
  using Error::Error;
};

}  // namespace cmp
