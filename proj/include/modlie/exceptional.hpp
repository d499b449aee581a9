#pragma once

#include <optional>
#include <string>
#include <vector>

#include "modlie/cartan.hpp"
#include "modlie/dpalg.hpp"
#include "modlie/liealg.hpp"

namespace modlie {

// ---------------------------------------------------------------- Melikian

// D + f + Ẽ in W(2;n) ⊕ O(2;n) ⊕ W̃(2;n); the three parts sit in the
// Z/3 degrees 0, 1 and 2.
struct MelikianElement {
  SpecialDerivation D;
  DPElement f;
  SpecialDerivation E;  // coefficients of the tilde copy
  static MelikianElement zero(const OPtr& O);
};
MelikianElement melikian_bracket(const MelikianElement& a, const MelikianElement& b);
// ∂_1(h)∂_2 − ∂_2(h)∂_1
SpecialDerivation hamiltonian_derivation(const DPElement& h);

// M(m,n) on the basis W block, O block, W̃ block. Each block follows the
// (degree, exponent, direction) order of WittBasis and the monomial order of
// O(2;(m,n)). L.grading is the depth-3 grading, extra_gradings["z3"] the
// Z/3 grading. Throws WrongCharacteristic unless p = 5.
LieAlgebra build_melikian(unsigned m, unsigned n, uint32_t p = 5);
MelikianElement melikian_element(const LieAlgebra& M, const Vec& v);
Vec melikian_coordinates(const LieAlgebra& M, const MelikianElement& x);

struct MelikianTorusAnalysis {
  SubspaceBasis torus;             // span{(1+x1)∂1, (1+x2)∂2}
  std::vector<Vec> torus_basis;
  SubspaceBasis cartan;            // centralizer of the torus
  bool torus_toral = false;        // t^{[p]} = t on the basis, computed in W(2;1̄)
  bool self_normalizing = false;
  bool nonabelian = false;
  bool triple_bracket_is_torus = false;  // [h,[h,h]] = t
  bool triangulable = true;        // ad [h,h] generates a nilpotent associative algebra
};
MelikianTorusAnalysis melikian_t0_analysis(const LieAlgebra& M);

// Subalgebra generated by the graded components of degree ±1.
SubspaceBasis melikian_pm1_subalgebra(const LieAlgebra& M);

// ------------------------------------------------------------------ Brown

struct BrownResult {
  LieAlgebra algebra;           // (𝓛/z(𝓛))^(1), graded
  LieAlgebra cover;             // 𝓛 = W(2;n) ⊕ O u ⊕ O
  SubspaceBasis center;         // z(𝓛)
  bool center_is_bottom = false;  // z(𝓛) equals the lowest graded component
};
// G₂(2;n) in characteristic 2. Throws WrongCharacteristic unless p = 2.
BrownResult build_brown(std::pair<unsigned, unsigned> n, uint32_t p = 2);
LieAlgebra build_brown_g2(std::pair<unsigned, unsigned> n, uint32_t p = 2);

// ------------------------------------------------------------- Chevalley

struct RootSystemData {
  char type = 'A';
  size_t rank = 0;
  std::vector<std::vector<long long>> gram;       // (α_i|α_j), integer scaled
  std::vector<std::vector<long long>> cartan;     // ⟨α_i, α_j^∨⟩
  std::vector<std::vector<int>> positive;         // simple-root coordinates, by height
  std::vector<std::vector<long long>> structure;  // N(α,β) on positive pairs, row/col in `positive`
  long long inner(const std::vector<int>& a, const std::vector<int>& b) const;
  // ⟨β, α^∨⟩
  long long pairing(const std::vector<int>& beta, const std::vector<int>& alpha) const;
  std::optional<size_t> find(const std::vector<int>& root) const;  // index into roots()
  // Positive roots followed by their negatives.
  std::vector<std::vector<int>> roots() const;
  // Largest q with β − qα a root.
  int string_below(const std::vector<int>& beta, const std::vector<int>& alpha) const;
};
// Throws UnsupportedType for an invalid (type, rank).
RootSystemData root_system(char type, size_t rank);

// Basis h_1..h_l, e_α for positive α in RootSystemData order, then e_{−α}.
// Structure constants come from the extraspecial-pair recursion over Z with
// N(α,β) = +(q+1) on extraspecial pairs, reduced mod p. The classical p-map
// (e_α ↦ 0, h_i ↦ h_i) is attached. Throws UnsupportedType and
// WrongCharacteristic (p ≤ 3).
LieAlgebra build_chevalley(char type, size_t rank, uint32_t p);

struct ChevalleyCheck {
  bool cartan_abelian = false;      // [h_i,h_j] = 0
  bool cartan_action = false;       // [h_i,e_β] = ⟨β,α_i^∨⟩ e_β
  bool coroots = false;             // [e_α,e_{−α}] = h_α, integral in the h_i
  bool root_brackets = false;       // ±(q+1) e_{α+β} or 0
  int max_string = 0;               // largest q met with α+β a root
  bool all() const { return cartan_abelian && cartan_action && coroots && root_brackets && max_string <= 2; }
};
ChevalleyCheck verify_chevalley(const LieAlgebra& L, const RootSystemData& R);

// L/z(L) when the center is nonzero, L itself otherwise.
LieAlgebra central_quotient(const LieAlgebra& L);

enum class MatrixKind { gl, sl, pgl, psl };
// Throws PreconditionFailed for n < 2.
LieAlgebra build_matrix_classical(MatrixKind kind, size_t n, uint32_t p);
std::optional<MatrixKind> matrix_kind_from_string(const std::string& s);

struct ClassicalInvariants {
  bool perfect = false;
  size_t center_dim = 0;
  size_t derived_codim = 0;
};
ClassicalInvariants classical_invariants(const LieAlgebra& L);

}  // namespace modlie
