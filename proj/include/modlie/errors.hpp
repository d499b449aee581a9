#pragma once

#include <stdexcept>
#include <string>

namespace modlie {

// Base for every library failure. `kind()` is the short error name used in
// CLI reports and tests.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define MODLIE_ERROR(Name)                                              \
  class Name : public Error {                                           \
   public:                                                              \
    explicit Name(const std::string& what = "") : Error(#Name, what) {} \
  };

// gf
MODLIE_ERROR(NonPrime)
MODLIE_ERROR(DivisionByZero)
MODLIE_ERROR(FieldMismatch)
MODLIE_ERROR(NoEmbedding)
MODLIE_ERROR(CharacteristicGate)
// linalg
MODLIE_ERROR(DimensionMismatch)
MODLIE_ERROR(NotCommuting)
MODLIE_ERROR(NotToral)
MODLIE_ERROR(SearchLimitExceeded)
// liealg
MODLIE_ERROR(AntisymmetryViolation)
MODLIE_ERROR(ParentMismatch)
MODLIE_ERROR(DimensionLimitExceeded)
MODLIE_ERROR(NotAnIdeal)
MODLIE_ERROR(PreconditionFailed)
MODLIE_ERROR(MalformedInput)
// restricted
MODLIE_ERROR(NotRestrictable)
MODLIE_ERROR(NotCentreless)
MODLIE_ERROR(NotAbelian)
MODLIE_ERROR(DependentRoots)
MODLIE_ERROR(NotRootVector)
MODLIE_ERROR(TorusNotMaximal)
MODLIE_ERROR(NotSplit)
// dpalg
MODLIE_ERROR(NonzeroConstantTerm)
MODLIE_ERROR(SBeyondCharacteristic)
MODLIE_ERROR(WrongDegree)
MODLIE_ERROR(NotClosed)
// cartan
MODLIE_ERROR(DegenerateForm)
MODLIE_ERROR(InvalidDecomposition)
MODLIE_ERROR(BadBlockShape)
// exceptional
MODLIE_ERROR(WrongCharacteristic)
MODLIE_ERROR(UnsupportedType)

#undef MODLIE_ERROR

class JacobiViolation : public Error {
 public:
  JacobiViolation(int i, int j, int k)
      : Error("JacobiViolation", "basis triple (" + std::to_string(i) + "," +
                                     std::to_string(j) + "," + std::to_string(k) + ")"),
        i(i), j(j), k(k) {}
  int i, j, k;
};

}  // namespace modlie
