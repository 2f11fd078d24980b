#pragma once

#include <stdexcept>
#include <string>

namespace c60 {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failures map to exit code 2, structural ones to 3.
struct NumericalError : Error {
  using Error::Error;
};
struct StructuralError : Error {
  using Error::Error;
};

struct DegenerateGeometry : NumericalError {
  using NumericalError::NumericalError;
};
struct DomainViolation : StructuralError {
  using StructuralError::StructuralError;
};
struct DuplicateOrbitPoint : StructuralError {
  using StructuralError::StructuralError;
};
struct NoConvergence : NumericalError {
  using NumericalError::NumericalError;
};
struct ClusterAmbiguity : StructuralError {
  using StructuralError::StructuralError;
};
struct UnsupportedPair : StructuralError {
  using StructuralError::StructuralError;
};
struct ResonanceDetected : StructuralError {
  using StructuralError::StructuralError;
};
struct EmptyFixedSpace : StructuralError {
  using StructuralError::StructuralError;
};
struct SingularJacobian : NumericalError {
  using NumericalError::NumericalError;
};
struct StepSizeUnderflow : NumericalError {
  using NumericalError::NumericalError;
};
struct StepFailure : NumericalError {
  using NumericalError::NumericalError;
};
struct SymmetryViolation : StructuralError {
  using StructuralError::StructuralError;
};
struct MissingStage : StructuralError {
  using StructuralError::StructuralError;
};
struct ParseError : StructuralError {
  using StructuralError::StructuralError;
};

}  // namespace c60
