#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "modlie/linalg.hpp"

namespace modlie {

using Exponent = std::vector<uint32_t>;

// Truncated divided power algebra O(m;n) over GF(p): basis x^a with
// 0 ≤ a_i < p^{n_i}, product x^a x^b = binom(a+b, b) x^{a+b}.
// Monomials are indexed in mixed radix with the first variable fastest.
class DividedPowers {
 public:
  DividedPowers(std::vector<unsigned> n, uint32_t p);
  size_t m() const { return n_.size(); }
  const std::vector<unsigned>& n() const { return n_; }
  uint32_t p() const { return p_; }
  size_t dim() const { return exps_.size(); }
  uint32_t bound(size_t i) const { return bound_[i]; }
  const Exponent& exponent(size_t idx) const { return exps_[idx]; }
  std::optional<size_t> index(const Exponent& a) const;
  // Σ r_i a_i; r defaults to all ones.
  int degree(size_t idx, const std::vector<int>& r = {}) const;
  // x^a x^b = c x^{a+b}; c = 0 when a+b leaves the truncation.
  std::pair<size_t, uint32_t> mono_mul(size_t a, size_t b) const;
  // Monomial exponent (p^{n_1}-1, ..., p^{n_m}-1).
  Exponent top() const;

 private:
  std::vector<unsigned> n_;
  uint32_t p_;
  std::vector<uint32_t> bound_;
  std::vector<Exponent> exps_;
};
using OPtr = std::shared_ptr<const DividedPowers>;
OPtr make_divided_powers(std::vector<unsigned> n, uint32_t p);

class DPElement {
 public:
  DPElement() = default;
  explicit DPElement(OPtr O) : O_(std::move(O)) {}
  DPElement(OPtr O, SparseVec terms);
  static DPElement constant(OPtr O, uint32_t c);
  static DPElement monomial(OPtr O, const Exponent& a, uint32_t c = 1);
  static DPElement variable(OPtr O, size_t i);  // x_i, 0-based

  const OPtr& parent() const { return O_; }
  const SparseVec& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  uint32_t constant_term() const;
  uint32_t coefficient(size_t idx) const;

  DPElement operator+(const DPElement& o) const;
  DPElement operator-(const DPElement& o) const;
  DPElement operator-() const;
  DPElement operator*(const DPElement& o) const;  // ParentMismatch
  DPElement scaled(uint32_t c) const;
  bool operator==(const DPElement& o) const { return O_ == o.O_ && t_ == o.t_; }
  bool operator!=(const DPElement& o) const { return !(*this == o); }
  std::string to_string() const;

 private:
  void check(const DPElement& o) const;
  OPtr O_;
  SparseVec t_;
};

DPElement dp_multiply(const DPElement& f, const DPElement& g);
// f^{(s)} for f without constant term; NonzeroConstantTerm otherwise.
DPElement divided_power(const DPElement& f, unsigned s);
// Σ_i f^{(i)}, truncated to O(m;n).
DPElement exp_truncated(const DPElement& f);
DPElement partial_derivative(size_t i, const DPElement& f);  // ∂_i, 0-based

// Σ f_i ∂_i in W(m;n).
struct SpecialDerivation {
  std::vector<DPElement> f;
  static SpecialDerivation zero(const OPtr& O);
  static SpecialDerivation basis(const OPtr& O, const Exponent& a, size_t i);  // x^a ∂_i
  const OPtr& parent() const { return f.front().parent(); }
  DPElement apply(const DPElement& g) const;
  SpecialDerivation operator+(const SpecialDerivation& o) const;
  SpecialDerivation operator-(const SpecialDerivation& o) const;
  SpecialDerivation scaled(uint32_t c) const;
  SpecialDerivation times(const DPElement& g) const;  // g·D
  bool operator==(const SpecialDerivation& o) const { return f == o.f; }
};
SpecialDerivation bracket(const SpecialDerivation& D, const SpecialDerivation& E);
DPElement divergence(const SpecialDerivation& D);  // Σ ∂_i f_i

// Differential form of fixed degree: coefficient per increasing index set
// (bit mask over the m variables).
class DifferentialForm {
 public:
  DifferentialForm() = default;
  DifferentialForm(OPtr O, unsigned degree) : O_(std::move(O)), deg_(degree) {}
  static DifferentialForm function(const DPElement& f);
  static DifferentialForm dx(const OPtr& O, size_t i);
  static DifferentialForm dx(const OPtr& O, const std::vector<size_t>& idx);  // dx_{i1}∧...; signs sorted out

  const OPtr& parent() const { return O_; }
  unsigned degree() const { return deg_; }
  const std::map<uint32_t, DPElement>& coefficients() const { return c_; }
  DPElement coefficient(uint32_t mask) const;
  void add_term(uint32_t mask, const DPElement& f);
  bool is_zero() const;

  DifferentialForm operator+(const DifferentialForm& o) const;
  DifferentialForm operator-(const DifferentialForm& o) const;
  DifferentialForm scaled(uint32_t c) const;
  DifferentialForm times(const DPElement& f) const;
  bool operator==(const DifferentialForm& o) const;
  std::string to_string() const;

 private:
  OPtr O_;
  unsigned deg_ = 0;
  std::map<uint32_t, DPElement> c_;
};

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b);
DifferentialForm exterior_d(const DifferentialForm& w);
DifferentialForm exterior_d(const DPElement& f);
// Lie derivative of a form along a special derivation.
DifferentialForm derivation_action_on_form(const SpecialDerivation& D, const DifferentialForm& w);
// w^{(s)} = w^{∧s}/s! for even w without constant part; s < p.
DifferentialForm form_divided_power(const DifferentialForm& w, unsigned s);
// Nondegeneracy for degree m, 2 and 1 forms.
bool nondegenerate(const DifferentialForm& w);

// (exp u)·base with u in O(m;n)_(1); exp u itself may lie outside O(m;n).
struct TwistedForm {
  DPElement u;  // zero for an untwisted form
  DifferentialForm base;
  static TwistedForm plain(const DifferentialForm& w);
  bool twisted() const { return !u.is_zero(); }
  // D((exp u) w') = (exp u)(D(u) w' + D w'); returns the bracketed part.
  DifferentialForm action_stripped(const SpecialDerivation& D) const;
};
bool nondegenerate(const TwistedForm& w);

}  // namespace modlie
