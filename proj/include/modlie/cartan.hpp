#pragma once

#include <optional>
#include <string>
#include <vector>

#include "modlie/dpalg.hpp"
#include "modlie/liealg.hpp"

namespace modlie {

enum class CartanFamily { W, S, CS, H, CH, K };
std::string family_name(CartanFamily f);

// Degrees of the variables: all ones, with the last one doubled for K.
std::vector<int> grading_type(CartanFamily f, size_t m);

struct CartanDescriptor {
  CartanFamily family = CartanFamily::W;
  size_t m = 1;
  std::vector<unsigned> n;
  std::optional<TwistedForm> form;  // absent for W
  std::vector<int> r;
};

// Basis x^a d_i of W(m;n), sorted by (degree, a, i) for the grading of type r.
class WittBasis {
 public:
  explicit WittBasis(OPtr O, std::vector<int> r = {});
  const OPtr& divided_powers() const { return O_; }
  size_t dim() const { return elems_.size(); }
  size_t monomial(size_t k) const { return elems_[k].first; }
  size_t direction(size_t k) const { return elems_[k].second; }
  int degree(size_t k) const { return deg_[k]; }
  const std::vector<int>& r() const { return r_; }
  size_t index(size_t mono, size_t i) const { return pos_[mono * O_->m() + i]; }
  // First basis index of degree ≥ d.
  size_t degree_start(int d) const;
  SparseVec bracket(size_t a, size_t b) const;
  SpecialDerivation derivation(const Vec& v) const;
  SpecialDerivation derivation(size_t k) const;
  Vec coordinates(const SpecialDerivation& D) const;
  std::string label(size_t k) const;

 private:
  OPtr O_;
  std::vector<int> r_;
  std::vector<std::pair<size_t, size_t>> elems_;
  std::vector<int> deg_;
  std::vector<size_t> pos_;
};

// W(m;n) with its grading of type r (all ones by default) and the
// corresponding filtration. p < 5 is allowed and noted in meta["warning"].
LieAlgebra build_witt(size_t m, std::vector<unsigned> n, uint32_t p, std::vector<int> r = {});

OPtr divided_powers_of(const LieAlgebra& witt_like);

// The three standard forms on O(m;n).
DifferentialForm volume_form(const OPtr& O);      // dx_1 ∧ ... ∧ dx_m
DifferentialForm hamiltonian_form(const OPtr& O); // Σ dx_i ∧ dx_{i+r}, m = 2r
DifferentialForm contact_form(const OPtr& O);     // dx_m + Σ (x_{i+r} dx_i − x_i dx_{i+r}), m = 2r+1

enum class FormMode { annihilate, scale_by_F, scale_by_O };

// {D ∈ W(m;n) : Dω = 0}, {Dω ∈ Fω} or {Dω ∈ O(m;n)ω}, solved as one linear
// system over the W(m;n) basis. The result keeps its embedding into W(m;n)
// (ambient), the natural filtration L ∩ W_(i), and the grading when every
// basis vector is homogeneous. Throws DegenerateForm and WrongDegree.
LieAlgebra build_from_form(const TwistedForm& w, FormMode mode);
LieAlgebra build_from_form(const DifferentialForm& w, FormMode mode);

// X(m;n) for the standard form of the family.
LieAlgebra build_cartan(CartanFamily f, size_t m, std::vector<unsigned> n, uint32_t p);

// Subalgebra keeping grading (when homogeneous), filtration and the
// embedding into the outermost ambient algebra.
LieAlgebra structured_subalgebra(const LieAlgebra& L, const SubspaceBasis& S);

// L, L^(1), ... until the series stops shrinking; each term structured.
std::vector<LieAlgebra> derived_to_stability(const LieAlgebra& L);

struct MaximalSubalgebraReport {
  SubspaceBasis space;  // L_(0) in L coordinates
  bool maximal = false;
  bool certified = false;
};
MaximalSubalgebraReport standard_maximal_subalgebra(const LieAlgebra& L, uint64_t seed = kDefaultSeed);

enum class NormalFormFamily { volume_exp_i, volume_delta, contact_I, hamiltonian_exp_iI, hamiltonian_AB };

// One block of a pair (A,B): A is the standard symplectic block of order
// 2r, and B has upper-right corner X as below.
struct HamiltonianBlock {
  enum class Kind { zero, jordan_nilpotent, block_cyclic, cyclic } kind = Kind::zero;
  size_t r = 1;
  size_t d = 0, s = 0;  // block_cyclic: X = C_{d,s}(lambda), r = d*s
  uint32_t lambda = 0;
};

struct NormalFormSpec {
  NormalFormFamily family = NormalFormFamily::volume_delta;
  size_t i = 0;  // distinguished variable, 0-based
  std::vector<std::pair<size_t, size_t>> pairs;  // decomposition pairs (i_k, i'_k), 0-based
  std::vector<HamiltonianBlock> blocks;
};

// The literal normal-form representative; exp twists are kept as the
// TwistedForm exponent. Throws InvalidDecomposition, BadBlockShape and
// DegenerateForm.
TwistedForm normal_form(const NormalFormSpec& spec, size_t m, std::vector<unsigned> n, uint32_t p);
Matrix hamiltonian_block_matrix(const HamiltonianBlock& b, bool upper_corner_only, uint32_t p);

// Whether the form lies in dΩ(O(m;n)). Twisted forms never do.
bool is_exact_form(const TwistedForm& w);
bool form_has_coefficients_in_O(const TwistedForm& w);

struct RestrictabilityProfile {
  bool n_is_one = false;
  bool form_in_omega = false;
  bool form_exact = false;
  std::vector<size_t> dims;          // L, L^(1), L^(2)
  std::vector<bool> restrictable;    // same order
  std::vector<std::optional<bool>> predicted;  // from the structure theorem clauses, when one applies
  bool consistent = false;
};
RestrictabilityProfile restrictability_profile(const LieAlgebra& L, const TwistedForm& w, FormMode mode);

// W(1;1) against the truncated polynomial ring F[x]/(x^p) with
// {f,g} = f g' − g f'.
struct WittPolynomialCheck {
  bool e_table_matches = false;   // W(1;1) constants equal those of x^{i+1}
  bool u_relation_holds = false;  // {u_i,u_j} = (j−i) u_{i+j}, u_i = (1+x)^{i+1}
  std::string detail;
};
WittPolynomialCheck witt_polynomial_check(uint32_t p);

}  // namespace modlie
