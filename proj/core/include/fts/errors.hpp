#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fts {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Expression source did not match the grammar or used an unknown name.
class ParseError : public Error {
public:
  ParseError(std::size_t offset, std::string message)
      : Error("offset " + std::to_string(offset) + ": " + message),
        offset_(offset), detail_(std::move(message)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& detail() const noexcept { return detail_; }

private:
  std::size_t offset_;
  std::string detail_;
};

class EvalError : public Error {
public:
  using Error::Error;
};

// Shape problems and violated standing assumptions of the hyperbolic system.
class ModelError : public Error {
public:
  using Error::Error;
};

class DimensionError : public Error {
public:
  using Error::Error;
};

class QuadratureError : public Error {
public:
  using Error::Error;
};

class NotNilpotentError : public Error {
public:
  using Error::Error;
};

// Independent criteria disagreed. Never expected; indicates a bug.
class InconsistencyError : public Error {
public:
  using Error::Error;
};

class SimulationError : public Error {
public:
  using Error::Error;
};

class RootFindingError : public Error {
public:
  using Error::Error;
};

} // namespace fts
