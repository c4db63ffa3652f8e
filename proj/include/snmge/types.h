#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace snmge {

using Vec = std::vector<double>;

/// Half-open range of global energy-group indices [begin, end).
struct GroupRange {
  int begin = 0;
  int end = 0;

  int size() const { return end - begin; }
  bool empty() const { return end <= begin; }
  bool contains(int g) const { return g >= begin && g < end; }
  bool operator==(const GroupRange&) const = default;
};

/// Raised for malformed problem input or inconsistent configuration.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when an iterative kernel fails in a way that has no recovery path.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace snmge
