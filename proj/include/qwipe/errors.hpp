#pragma once

#include <stdexcept>
#include <string>

namespace qwipe {

// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

// Shape or size mismatch between operands.
class DimensionError : public Error {
  public:
    explicit DimensionError(const std::string &msg) : Error(msg) {}
};

// A quantum-state invariant failed. Subclasses name the violated invariant.
class ValidationError : public Error {
  public:
    explicit ValidationError(const std::string &msg) : Error(msg) {}
};

class HermiticityError : public ValidationError {
  public:
    explicit HermiticityError(const std::string &msg) : ValidationError(msg) {}
};

class TraceError : public ValidationError {
  public:
    explicit TraceError(const std::string &msg) : ValidationError(msg) {}
};

class PositivityError : public ValidationError {
  public:
    explicit PositivityError(const std::string &msg) : ValidationError(msg) {}
};

// Parameter outside its admissible range.
class DomainError : public Error {
  public:
    explicit DomainError(const std::string &msg) : Error(msg) {}
};

// Non-finite values appeared during a numeric computation.
class NumericError : public Error {
  public:
    explicit NumericError(const std::string &msg) : Error(msg) {}
};

// Double-root degeneracy of the decoherence factors; callers must switch
// to the confluent solution path.
class ConfluenceError : public Error {
  public:
    explicit ConfluenceError(const std::string &msg) : Error(msg) {}
};

// Bad command line, config file, or experiment specification.
class UsageError : public Error {
  public:
    explicit UsageError(const std::string &msg) : Error(msg) {}
};

} // namespace qwipe
