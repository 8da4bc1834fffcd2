#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sfwm {

enum class ErrorKind {
  OutOfRange,
  ModeCutoff,
  TableGap,
  UnsupportedForTabulated,
  ParseError,
  NonMonotonic,
  NonPhysical,
  MissingGamma,
  EmptyContour,
  NotPhasematched,
  DegenerateTerms,
  QuadratureNonConvergence,
  FaddeevaOverflow,
  ZeroGrid,
  AxisMismatch,
  NotConverged,
  SinglePolarization,
  NotAntisymmetric,
  NonNegativeProduct,
  NoRoot,
  NoLoop,
  NyquistViolation,
  IoError,
  ConfigError,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace sfwm
