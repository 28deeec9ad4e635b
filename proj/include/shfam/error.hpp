#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace shfam {

/// Base class for every error raised by the library.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An input violated an operation's documented precondition.
struct precondition_error : error {
  using error::error;
};

/// An exhaustive search or enumeration would exceed its configured budget.
struct cap_exceeded : error {
  cap_exceeded(const std::string& what, std::uint64_t required_)
      : error(what + " (requires " + std::to_string(required_) + ")"),
        required(required_) {}

  std::uint64_t required;
};

/// A multi-step construction failed at a specific (1-based) step.
struct step_failure : error {
  step_failure(std::size_t step_, const std::string& what)
      : error("step " + std::to_string(step_) + ": " + what), step(step_) {}

  std::size_t step;
};

}  // namespace shfam
