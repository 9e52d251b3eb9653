#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pencil {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

enum class ErrorKind {
  DuplicateIndex,
  SignConflict,
  IndexMismatch,
  OrderTooHigh,
  NonFiniteInput,
  RootNotConverged,
  RootCountMismatch,
  WindingAmbiguous,
  PoleTooClose,
  SingularSystem,
  DegenerateEps1,
  NegativeDelta,
  GridMismatch,
  ContourTouchesPole,
  Omega0Mismatch,
  Parse,
  Io,
};

const char* to_string(ErrorKind kind);

/// Coarse failure class used by the command-line front end for exit codes.
enum class ErrorClass { Validation, Numerical, Io };

ErrorClass classify(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace pencil
