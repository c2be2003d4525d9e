#pragma once

#include <stdexcept>
#include <string>

namespace greedylab {

/// Vector lengths or ambient spaces that do not match.
class DimensionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// NaN or infinite values reaching a numerical routine.
class NumericError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// A constructor or algorithm parameter outside its admissible range.
class ParameterError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Target not representable in the span of the given atoms.
class ResidualTooLarge : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
  IoError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

} // namespace greedylab
