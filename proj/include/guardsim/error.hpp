#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace guardsim {

enum class ErrorKind {
  degenerate_input,
  degenerate_polygon,
  too_small,
  not_a_nonagon,
  not_reflex,
  unsupported,
  speed_too_low,
  infeasible,
  not_orthogonal,
  quadrilateralization_failed,
  config_invalid,
  deployment_failed,
  io,
};

std::string_view to_string(ErrorKind kind);

// Every failure carries a kind and a short machine tag ("not-simple",
// "collinear", ...) which the CLI prints after its "E:" prefix.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string tag, const std::string& message)
      : std::runtime_error(message), kind_(kind), tag_(std::move(tag)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& tag() const noexcept { return tag_; }

 private:
  ErrorKind kind_;
  std::string tag_;
};

}  // namespace guardsim
