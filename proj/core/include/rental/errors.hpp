#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rental {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the function (e.g. k < 1).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed input: wrong dimensions, bad parameters, unsorted knots.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A speedup function fails one of the axioms the solver relies on.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Total load is not below the budget, so no policy can keep up.
class InstabilityError : public Error {
 public:
  InstabilityError(const std::string& what, double load, double budget)
      : Error(what), load_(load), budget_(budget) {}

  double load() const noexcept { return load_; }
  double budget() const noexcept { return budget_; }

 private:
  double load_;
  double budget_;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Text input (CSV or JSON) could not be parsed. line() is 1-based, 0 if unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace rental
