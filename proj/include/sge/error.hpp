#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sge {

/// Precondition violation by the caller (bad sizes, out-of-range parameters).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A fit was requested with fewer points than the spline degree allows.
class InsufficientPoints : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. `line()` is 1-based; 0 when the error is not tied to a line.
class ParseError : public IoError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : IoError(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Singular systems, non-finite coefficients, or a failed parameter search.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest path requested between nodes in different components.
class NoPathError : public std::runtime_error {
 public:
  NoPathError(std::size_t i, std::size_t j, std::size_t component_i, std::size_t component_j)
      : std::runtime_error("no path between " + std::to_string(i) + " and " + std::to_string(j) +
                           " (components rooted at " + std::to_string(component_i) + " and " +
                           std::to_string(component_j) + ")"),
        i_(i), j_(j), component_i_(component_i), component_j_(component_j) {}

  std::size_t from() const noexcept { return i_; }
  std::size_t to() const noexcept { return j_; }
  /// Smallest node index of the component containing `from()`.
  std::size_t from_component() const noexcept { return component_i_; }
  std::size_t to_component() const noexcept { return component_j_; }

 private:
  std::size_t i_, j_, component_i_, component_j_;
};

/// The neighbor graph splits into several components; geodesics are undefined across them.
class DisconnectedGraphError : public std::runtime_error {
 public:
  explicit DisconnectedGraphError(std::vector<std::size_t> component_sizes)
      : std::runtime_error(describe(component_sizes)), sizes_(std::move(component_sizes)) {}

  const std::vector<std::size_t>& component_sizes() const noexcept { return sizes_; }

 private:
  static std::string describe(const std::vector<std::size_t>& sizes) {
    std::string msg = "neighbor graph is disconnected: " + std::to_string(sizes.size()) +
                      " components of sizes [";
    for (std::size_t k = 0; k < sizes.size(); ++k) {
      if (k) msg += ", ";
      msg += std::to_string(sizes[k]);
    }
    msg += "]";
    return msg;
  }

  std::vector<std::size_t> sizes_;
};

}  // namespace sge
