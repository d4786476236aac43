#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace corex {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments or violated preconditions.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Malformed input file. `location` is a 1-based line number for text
// corpora and a byte offset for model files.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t location)
      : Error(what), location_(location) {}
  std::size_t location() const noexcept { return location_; }

 private:
  std::size_t location_;
};

class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, int iteration)
      : Error(what), iteration_(iteration) {}
  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

class CorruptFile : public Error {
 public:
  using Error::Error;
};

class UnsupportedVersion : public Error {
 public:
  using Error::Error;
};

}  // namespace corex
