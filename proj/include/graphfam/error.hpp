#pragma once

#include <stdexcept>
#include <string>

namespace graphfam {

// Base class for all domain errors. The CLI turns these into one-line
// diagnostics and a nonzero exit code.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an input file cannot be parsed. Messages carry line or field
// positions where available.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace graphfam
