#pragma once

#include <stdexcept>
#include <string>

namespace holofact {

// Domain error codes, serialized verbatim by the CLI error records.
enum class Errc {
  CenterMismatch,
  ConstantTermMismatch,
  LogOfZeroConstantTerm,
  InsufficientOrder,
  UnsupportedVariant,
  QuadratureNonConvergence,
  RayDivergence,
  SeedAtExceptionalValue,
  NonElhSpec,
  BoxHitsExceptionalValue,
  NotRegularDirection,
  OverlapMismatch,
  GIncomplete,
  NotOmittedOnProbe,
  BranchObstruction,
  ZeroValueOnProbe,
  HPrimeZeroOnBox,
  IncompleteInput,
  SubadditivityViolation,
  GNotZeroAtOrigin,
  DegenerateModulus,
  OutsideValidatedDisk,
  UnderflowAtStage,
  SchemaError,
  StrictFieldError,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }
  const char* code_name() const { return errc_name(code_); }

 private:
  Errc code_;
};

}  // namespace holofact
