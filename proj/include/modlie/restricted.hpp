#pragma once

#include <optional>
#include <string>
#include <vector>

#include "modlie/gf.hpp"
#include "modlie/liealg.hpp"

namespace modlie {

// x ↦ x^{[p]} on a restricted algebra. With L.realization set, the span of
// the realization must be closed under p-th powers and x^{[p]} is read off
// from (R x)^p. Otherwise ad is used: x^{[p]} solves ad y = (ad x)^p, unique
// when the center is zero and a fixed particular solution otherwise.
class PMap {
 public:
  explicit PMap(const LieAlgebra& L, bool use_realization = true);
  const LieAlgebra& algebra() const { return *L_; }
  uint32_t p() const { return L_->p(); }
  bool uses_realization() const { return real_; }
  bool unique() const { return unique_; }
  // Operator of x in the realization (or ad x).
  Matrix op(const Vec& x) const;
  // Element whose operator is m, or nullopt.
  std::optional<Vec> element_of(const Matrix& m) const;
  Vec operator()(const Vec& x) const;  // NotRestrictable
  Vec iterate(const Vec& x, unsigned k) const;

 private:
  const LieAlgebra* L_;
  bool real_ = false;
  bool unique_ = true;
  std::shared_ptr<MatrixSpan> span_;
  std::vector<uint32_t> span_index_;  // basis index behind each span element
};

struct PPower {
  Vec value;
  bool unique = true;  // false: defined up to the center
};
PPower p_power(const LieAlgebra& L, const Vec& x);
bool is_restrictable(const LieAlgebra& L);
// Attaches b_i^{[p]} as L.pmap; throws NotRestrictable.
void attach_pmap(LieAlgebra& L);

// Linear Lie algebra spanned by the ad b_i and all their p^k-th powers.
// Its realization is those matrices, so it is restricted.
LieAlgebra adjoint_p_closure(const LieAlgebra& L);
// The semisimple p-envelope inside Der L; L sits in the first dim L
// coordinates. Throws NotCentreless.
LieAlgebra p_envelope(const LieAlgebra& L);

struct JordanParts {
  Vec semisimple, nilpotent;
};
JordanParts jordan_decomposition(const LieAlgebra& Lp, const Vec& x);

// Fixed points of the p-map on an abelian p-closed subspace; NotAbelian.
std::vector<Vec> toral_elements(const LieAlgebra& Lp, const SubspaceBasis& A);
// span{x^{[p]^i} : i ≥ e} with p^e ≥ dim: the torus generated by the semisimple part of x.
SubspaceBasis semisimple_torus(const LieAlgebra& Lp, const Vec& x);

struct Torus {
  SubspaceBasis space;
  std::vector<Vec> toral_basis;  // t^{[p]} = t
  size_t dim() const { return space.dim(); }
};

struct TorusSearch {
  Torus torus;
  size_t mt_estimate = 0;  // best over restarts
  bool maximal_certified = false;  // centralizer nilpotent and no sampled semisimple part escapes
  bool exact = false;              // estimate meets a registered upper bound
  std::optional<size_t> known_bound;
};
TorusSearch maximal_torus(const LieAlgebra& Lp, unsigned restarts = 3, uint64_t seed = kDefaultSeed);

// Known toral rank of a named family (meta["toral_rank"] set by constructors).
std::optional<size_t> registered_toral_rank(const LieAlgebra& L);

struct ToralRank {
  size_t value = 0;
  bool exact = false;
  TorusSearch search;
};
// MT of the p-envelope; NotCentreless.
ToralRank absolute_toral_rank(const LieAlgebra& L, unsigned restarts = 3, uint64_t seed = kDefaultSeed);
// MT of the p-closure of ad L; works for any L.
ToralRank toral_rank_via_adjoint(const LieAlgebra& L, unsigned restarts = 3, uint64_t seed = kDefaultSeed);

// Common eigenspaces of a toral basis acting on the algebra (V = L).
struct RootDatum {
  std::vector<Vec> toral_basis;
  std::vector<Vec> weights;            // values on the toral basis
  std::vector<SubspaceBasis> spaces;   // same order as weights
  std::optional<size_t> zero;          // index of the zero weight
  const SubspaceBasis* space_of(const Vec& w) const;
};
// Throws NotSplit when the toral basis is not diagonalizable over GF(p).
RootDatum root_decomposition(const LieAlgebra& Lp, const std::vector<Vec>& toral_basis);
// Whether [L_a, L_b] ⊆ L_{a+b} for every pair of weights.
bool root_grading_holds(const LieAlgebra& L, const RootDatum& R);

// Sum of the weight spaces over the GF(p)-span of k independent weights;
// DependentRoots.
LieAlgebra k_section(const LieAlgebra& L, const RootDatum& R, const std::vector<Vec>& roots);

struct JacobsonCheck {
  std::vector<Vec> s;          // s_1 .. s_{p-1}
  bool operator_identity = false;  // (X+Y)^p = X^p + Y^p + Σ op(s_i)
  bool pmap_identity = false;      // (x+y)^{[p]} = x^{[p]} + y^{[p]} + Σ s_i
};
JacobsonCheck jacobson_terms(const LieAlgebra& L, const Vec& x, const Vec& y);

// ξ on GF(p) values: ξ(a) = a·θ with θ^p − θ = 1.
FieldElement winter_xi(uint32_t a, uint32_t p);

struct WinterData {
  Vec x;
  Vec gamma;             // root of x
  unsigned m = 0;        // least k with x^{[p]^k} in the torus
  Vec q;                 // Σ_{i=1}^{m-1} x^{[p]^i}
  bool over_prime_field = true;  // every ξ value is 0, so E has GF(p) entries
  Matrix E;              // valid when over_prime_field
  std::vector<std::vector<FieldElement>> E_extended;  // otherwise, dense, row-major
  std::vector<Vec> new_toral_basis;   // t_x for t in the toral basis
  std::vector<Vec> transformed_weights;  // α_{x,ξ}, per root space, on the new basis
  bool invertible = false;
  bool cartan_validated = false;  // E(h) nilpotent and self-normalizing
  bool roots_match = false;       // recomputed datum of t_x matches
  bool is_exp_ad = false;         // E = exp ad x termwise (x^{[p]} = 0)
  std::string detail;
};
WinterData winter_exponential(const LieAlgebra& G, const RootDatum& R, const Vec& x);

struct WeightComparison {
  bool found = false;
  bool checked = true;  // false when the spans are too large to search
  std::vector<std::pair<Vec, Vec>> basis_images;  // ψ on a basis of the first span, when found
  bool zero_in_first = false, zero_in_second = false;
  bool full_line_first = false, full_line_second = false;
};
WeightComparison weight_set_compare(const RootDatum& R1, const RootDatum& R2);

// K_α = {x ∈ G_α : α([x, G_{−α}]) = 0}.
SubspaceBasis K_alpha(const LieAlgebra& G, const RootDatum& R, const Vec& alpha);
struct KPrime {
  SubspaceBasis space;      // subalgebra generated by the K_{iα}
  bool triangulable = false;  // derived subalgebra acts nilpotently on G
};
KPrime K_prime(const LieAlgebra& G, const RootDatum& R, const Vec& alpha);

bool is_sandwich(const LieAlgebra& L, const Vec& x);
struct SandwichComponent {
  std::string name;
  SubspaceBasis space;
  SubspaceBasis sandwich_span;
  bool searched = false;
};
struct SandwichReport {
  std::vector<SandwichComponent> components;
  SubspaceBasis span;        // sum over the searched components
  bool strongly_degenerate = false;
  bool within_killing_radical = false;
  std::vector<std::string> skipped;
};
// Components are the root spaces of R when given, else the graded
// components, else the whole algebra.
SandwichReport sandwich_search(const LieAlgebra& L, const RootDatum* R = nullptr, size_t max_component_dim = 6);

}  // namespace modlie
