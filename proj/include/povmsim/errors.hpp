#pragma once

#include <stdexcept>
#include <string>

namespace povmsim {

/// Base class for all library errors. The `code()` string is stable and
/// machine-readable; the what() message carries details.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

struct NonHermitianInput : Error {
  explicit NonHermitianInput(const std::string& m) : Error("NonHermitianInput", m) {}
};

struct ColumnsNotOrthonormal : Error {
  explicit ColumnsNotOrthonormal(const std::string& m) : Error("ColumnsNotOrthonormal", m) {}
};

struct NotNormalized : Error {
  explicit NotNormalized(const std::string& m) : Error("NotNormalized", m) {}
};

struct EffectNotPsd : Error {
  EffectNotPsd(int index, double min_eigenvalue, const std::string& m)
      : Error("EffectNotPsd", m), index(index), min_eigenvalue(min_eigenvalue) {}
  int index;
  double min_eigenvalue;
};

struct EffectNotRankOne : Error {
  explicit EffectNotRankOne(const std::string& m) : Error("EffectNotRankOne", m) {}
};

struct InvalidSeed : Error {
  explicit InvalidSeed(const std::string& m) : Error("InvalidSeed", m) {}
};

struct ShapeMismatch : Error {
  explicit ShapeMismatch(const std::string& m) : Error("ShapeMismatch", m) {}
};

struct InvalidArgument : Error {
  explicit InvalidArgument(const std::string& m) : Error("InvalidArgument", m) {}
};

struct IllFormedProblem : Error {
  explicit IllFormedProblem(const std::string& m) : Error("IllFormedProblem", m) {}
};

struct SolverFailure : Error {
  explicit SolverFailure(const std::string& m) : Error("SolverFailure", m) {}
};

struct CertificateInconsistent : Error {
  explicit CertificateInconsistent(const std::string& m) : Error("CertificateInconsistent", m) {}
};

struct NotTraceOne : Error {
  explicit NotTraceOne(const std::string& m) : Error("NotTraceOne", m) {}
};

struct ImpossibleRankClass : Error {
  explicit ImpossibleRankClass(const std::string& m) : Error("ImpossibleRankClass", m) {}
};

struct DepthExceeded : Error {
  explicit DepthExceeded(const std::string& m) : Error("DepthExceeded", m) {}
};

struct DegenerateDirections : Error {
  explicit DegenerateDirections(const std::string& m) : Error("DegenerateDirections", m) {}
};

struct Unbounded : Error {
  explicit Unbounded(const std::string& m) : Error("Unbounded", m) {}
};

struct DimensionTooLarge : Error {
  explicit DimensionTooLarge(const std::string& m) : Error("DimensionTooLarge", m) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& m) : Error("ParseError", m) {}
};

}  // namespace povmsim
