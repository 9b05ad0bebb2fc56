#pragma once

#include <stdexcept>
#include <string>

namespace wasn {

enum class ErrorKind {
  InvalidArgument,
  DegenerateGeometry,
  GeometryConstraints,
  IllConditioned,
  Singular,
  Disconnected,
  ConnectivityUndefined,
  ConnectivityUnreachable,
  ShapeMismatch,
  NonPositive,
  Config,
  Io,
};

const char* to_string(ErrorKind kind);

// Every failure surfaced by the library carries a kind so callers (the
// experiment runner in particular) can record it instead of aborting.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace wasn
