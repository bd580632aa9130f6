#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace coverlab {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or decimal string.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// An enumeration or search would exceed its configured budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Two residue classes have an empty intersection.
class CrtConflict : public Error {
 public:
  CrtConflict(std::size_t first, std::size_t second, const std::string& what)
      : Error(what), first_(first), second_(second) {}

  std::size_t first() const noexcept { return first_; }
  std::size_t second() const noexcept { return second_; }

 private:
  std::size_t first_;
  std::size_t second_;
};

/// Required per-class data (a prime or companion prime) is absent.
class MissingDataError : public Error {
 public:
  MissingDataError(std::vector<std::size_t> indices, const std::string& what)
      : Error(what), indices_(std::move(indices)) {}

  const std::vector<std::size_t>& indices() const noexcept { return indices_; }

 private:
  std::vector<std::size_t> indices_;
};

}  // namespace coverlab
