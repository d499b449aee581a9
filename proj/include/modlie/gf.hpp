#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "modlie/zp.hpp"

namespace modlie {

// Default seed for every randomized search in the library.
inline constexpr uint64_t kDefaultSeed = 0x5eed2024ULL;

// GF(p^k) presented as GF(p)[T]/(modulus). Immutable once built; obtain
// instances through make_field so each (p, k) has one shared descriptor.
struct FieldDescriptor {
  uint32_t p = 0;
  int k = 0;
  poly::Poly modulus;  // monic, degree k; T for the prime field
  int id = -1;         // registry index
  std::string name() const;
};
using FieldPtr = std::shared_ptr<const FieldDescriptor>;

// Characteristics 2 and 3 are refused unless `allow_small_char` is set; only
// the char-2 constructor passes it.
FieldPtr make_field(uint32_t p, int k = 1, bool allow_small_char = false);

class FieldElement {
 public:
  FieldElement() = default;
  explicit FieldElement(FieldPtr f);  // zero
  FieldElement(FieldPtr f, int64_t v);
  FieldElement(FieldPtr f, std::vector<uint32_t> coeffs);

  const FieldPtr& field() const { return f_; }
  const std::vector<uint32_t>& coeffs() const { return c_; }
  uint32_t p() const { return f_->p; }
  bool is_zero() const;
  // True when the element lies in the prime subfield; then `prime_value` is it.
  bool in_prime_field() const;
  uint32_t prime_value() const { return c_.empty() ? 0 : c_[0]; }

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator-() const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator/(const FieldElement& o) const { return *this * o.inv(); }
  FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
  FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
  FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }
  bool operator==(const FieldElement& o) const;
  bool operator!=(const FieldElement& o) const { return !(*this == o); }

  FieldElement inv() const;
  FieldElement pow(uint64_t e) const;
  FieldElement frobenius() const { return pow(f_->p); }
  std::string to_string() const;

 private:
  FieldPtr f_;
  std::vector<uint32_t> c_;
};

enum class FieldOp { add, mul, inv, pow };
// Single dispatching entry point; for pow the exponent is b's prime-field value.
FieldElement field_arithmetic(const FieldElement& a, const FieldElement& b, FieldOp op);

// Absolute trace to GF(p).
uint32_t absolute_trace(const FieldElement& a);

// A root of T^p - T - a. Lives in a's field when the absolute trace of a is
// zero, otherwise in the degree-p extension, which is created on demand.
FieldElement artin_schreier_root(const FieldElement& a);

// Image of a under the registered embedding into `target`.
FieldElement embed_element(const FieldElement& a, const FieldPtr& target);

// All roots in `target` of a polynomial with GF(p) coefficients.
std::vector<FieldElement> roots_in(const poly::Poly& f, const FieldPtr& target, uint64_t seed = kDefaultSeed);

}  // namespace modlie
