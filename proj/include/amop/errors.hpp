// Exception hierarchy. Undecidable outcomes are verdict values, not
// exceptions; these types cover genuine misuse and bad input only.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace amop {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed formula or spec-file text. Offset is a byte index into the
// offending source when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_ = 0;
};

// Structure tag does not match the entries, or an operation's structural
// precondition fails (e.g. square root of a non-positive operator).
class StructureError : public Error {
 public:
  using Error::Error;
};

// Mixing real and complex scalar fields in a composition.
class FieldError : public Error {
 public:
  using Error::Error;
};

// Composition not representable in the model types (e.g. the direct sum of
// two formula-defined diagonal operators).
class CompositionError : public Error {
 public:
  using Error::Error;
};

// Resolvent point too close to (or inside) the spectrum.
class SpectrumError : public Error {
 public:
  using Error::Error;
};

// Vector outside the operator domain (divergent coefficient series).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Truncation size exceeds what the model can supply.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Unknown check identifier or invalid plan.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace amop
