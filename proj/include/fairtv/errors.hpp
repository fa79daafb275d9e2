#ifndef FAIRTV_ERRORS_HPP
#define FAIRTV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fairtv {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Shapes or alphabets of the operands do not line up.
struct DimensionError : Error {
  explicit DimensionError(const std::string& msg) : Error(msg) {}
};

// A distribution was requested from data with zero total mass.
struct EmptySupport : Error {
  explicit EmptySupport(const std::string& msg) : Error(msg) {}
};

// A scalar parameter is outside its admissible range.
struct InvalidParameter : Error {
  explicit InvalidParameter(const std::string& msg) : Error(msg) {}
};

// An LP was handed non-finite data.
struct InvalidProblem : Error {
  explicit InvalidProblem(const std::string& msg) : Error(msg) {}
};

// A contract that should hold by construction was violated at runtime.
struct InternalError : Error {
  explicit InternalError(const std::string& msg) : Error(msg) {}
};

struct IoError : Error {
  explicit IoError(const std::string& msg) : Error(msg) {}
};

struct SchemaError : Error {
  explicit SchemaError(const std::string& msg) : Error(msg) {}
};

struct BinningError : Error {
  explicit BinningError(const std::string& msg) : Error(msg) {}
};

struct EmptyGroup : Error {
  explicit EmptyGroup(const std::string& msg) : Error(msg) {}
};

// Exhaustive enumeration was requested over an alphabet too large for it.
struct AlphabetTooLarge : Error {
  explicit AlphabetTooLarge(const std::string& msg) : Error(msg) {}
};

}  // namespace fairtv

#endif  // FAIRTV_ERRORS_HPP
