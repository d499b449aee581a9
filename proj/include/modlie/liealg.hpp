#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "modlie/linalg.hpp"

namespace modlie {

// Descending chain L_(lo) ⊇ L_(lo+1) ⊇ ... ; spaces.back() is the limit of the
// chain, the zero space when the filtration is separating.
struct Filtration {
  int lo = 0;
  std::vector<SubspaceBasis> spaces;
  // L_(i); the top space below lo and the zero space past the end.
  const SubspaceBasis& at(int i) const;
  int hi() const { return lo + static_cast<int>(spaces.size()) - 1; }  // index of the last stored space
  int depth() const { return -lo; }                                    // s1 in L = L_(-s1)
  int height() const { return hi() - 1; }                              // s2 with L_(s2) ≠ 0
  bool exhaustive = true;
  bool separating = true;
};

struct BracketEntry {
  uint32_t i, j;
  SparseVec value;
};

enum class Validation { full, spot_check, none };

class LieAlgebra;
using LiePtr = std::shared_ptr<const LieAlgebra>;

// Finite-dimensional Lie algebra over GF(p) given by structure constants on
// a basis b_0..b_{n-1}. Immutable once built, apart from attachments that
// are set by constructors before the algebra is shared.
class LieAlgebra {
 public:
  LieAlgebra() = default;
  // Entries may list (i,j) and/or (j,i); missing ones follow from
  // antisymmetry. Throws AntisymmetryViolation or JacobiViolation.
  static LieAlgebra from_structure_constants(size_t dim, uint32_t p, const std::vector<BracketEntry>& entries,
                                             std::vector<std::string> labels = {},
                                             Validation validation = Validation::full, uint64_t seed = kDefaultSeed);
  // Table given for every ordered pair, row-major (i*dim + j).
  static LieAlgebra from_full_table(size_t dim, uint32_t p, std::vector<SparseVec> table,
                                    std::vector<std::string> labels = {}, Validation validation = Validation::full,
                                    uint64_t seed = kDefaultSeed);

  size_t dim() const { return n_; }
  uint32_t p() const { return p_; }
  FieldPtr field() const;
  const std::vector<std::string>& labels() const { return labels_; }
  const SparseVec& bracket_basis(size_t i, size_t j) const { return table_[i * n_ + j]; }
  Vec bracket(const Vec& x, const Vec& y) const;
  Vec bracket_basis_vec(size_t i, const Vec& y) const;  // [b_i, y]
  const Matrix& ad_basis(size_t i) const;
  Matrix ad(const Vec& x) const;
  Vec basis_vector(size_t i) const { return unit_vector(n_, i); }

  // Exhaustive Jacobi check; throws JacobiViolation.
  void validate_jacobi() const;
  // Jacobi on `samples` random triples; throws JacobiViolation.
  void spot_check_jacobi(size_t samples, uint64_t seed) const;

  // Attachments.
  std::optional<std::vector<int>> grading;            // degree of each basis vector
  std::map<std::string, std::vector<int>> extra_gradings;
  std::optional<Filtration> filtration;
  std::optional<std::vector<Vec>> pmap;               // b_i^{[p]}
  std::optional<std::vector<Matrix>> realization;     // faithful matrix representation
  LiePtr ambient;                                      // algebra this one is embedded in
  std::vector<Vec> embedding;                          // image of b_i in ambient coordinates
  std::map<std::string, std::string> meta;

 private:
  size_t n_ = 0;
  uint32_t p_ = 0;
  std::vector<std::string> labels_;
  std::vector<SparseVec> table_;
  mutable std::shared_ptr<std::once_flag> ad_once_ = std::make_shared<std::once_flag>();
  mutable std::shared_ptr<std::vector<Matrix>> ad_ = std::make_shared<std::vector<Matrix>>();
};

struct LieElement {
  const LieAlgebra* parent = nullptr;
  Vec coords;
};
LieElement bracket(const LieElement& x, const LieElement& y);  // ParentMismatch

enum class ClosureMode { subalgebra, ideal };
SubspaceBasis closure(const LieAlgebra& L, const std::vector<Vec>& seed, ClosureMode mode);
// span{[a,b] : a ∈ A, b ∈ B}
SubspaceBasis bracket_space(const LieAlgebra& L, const SubspaceBasis& A, const SubspaceBasis& B);
bool is_subalgebra(const LieAlgebra& L, const SubspaceBasis& S);
bool is_ideal(const LieAlgebra& L, const SubspaceBasis& I);

SubspaceBasis center(const LieAlgebra& L);
SubspaceBasis centralizer(const LieAlgebra& L, const SubspaceBasis& S);
SubspaceBasis normalizer(const LieAlgebra& L, const SubspaceBasis& S);
SubspaceBasis derived_algebra(const LieAlgebra& L);
std::vector<SubspaceBasis> derived_series(const LieAlgebra& L);
std::vector<SubspaceBasis> lower_central_series(const LieAlgebra& L);
bool is_abelian(const LieAlgebra& L);
bool is_perfect(const LieAlgebra& L);

struct InvariantSubspaces {
  SubspaceBasis center;
  std::vector<SubspaceBasis> derived_series;        // L, L^(1), ... until stable
  std::vector<SubspaceBasis> lower_central_series;  // L, L^2, ... until stable
  bool is_solvable = false;
  bool is_nilpotent = false;
};
InvariantSubspaces invariant_subspaces(const LieAlgebra& L);
// Subspace-level versions on a subalgebra S of L.
bool is_nilpotent_subalgebra(const LieAlgebra& L, const SubspaceBasis& S);
bool is_solvable_subalgebra(const LieAlgebra& L, const SubspaceBasis& S);

// Dimension gate for dim^2-unknown solves; MODLIE_DIM_LIMIT overrides.
size_t dimension_limit();

struct DerivationAlgebra {
  LieAlgebra algebra;           // commutator bracket on the basis below
  std::vector<Matrix> basis;    // derivations as matrices on L
};
DerivationAlgebra derivation_algebra(const LieAlgebra& L);

// Linear Lie algebra on linearly independent matrices closed under the
// commutator; realization is set to the matrices. Throws NotClosed.
LieAlgebra from_matrix_basis(const std::vector<Matrix>& basis, std::vector<std::string> labels = {});

// Gram matrix of the Killing form.
Matrix killing_form(const LieAlgebra& L);
SubspaceBasis radical_of_form(const Matrix& gram);

// Elements whose ad generate the associative algebra generated by ad L.
std::vector<Vec> lie_generating_set(const LieAlgebra& L, uint64_t seed = kDefaultSeed);
// ad of the generating set restricted to an invariant subspace, in the
// coordinates of that subspace.
std::vector<Matrix> restricted_action(const std::vector<Matrix>& ops, const SubspaceBasis& S);

bool is_simple(const LieAlgebra& L, uint64_t seed = kDefaultSeed);
// A minimal nonzero ideal contained in the ideal I.
SubspaceBasis minimal_ideal(const LieAlgebra& L, const SubspaceBasis& I, uint64_t seed = kDefaultSeed);
SubspaceBasis solvable_radical(const LieAlgebra& L, uint64_t seed = kDefaultSeed);

// Subalgebra spanned by S with basis S.vectors(); embedding is kept.
LieAlgebra subalgebra(const LieAlgebra& L, const SubspaceBasis& S, std::vector<std::string> labels = {});

struct Quotient {
  LieAlgebra algebra;
  SubspaceBasis ideal;
  std::vector<uint32_t> transversal;  // basis indices of L lifting the quotient basis
  Vec project(const Vec& x) const;
  Vec lift(const Vec& y) const;
};
Quotient quotient(const LieAlgebra& L, const SubspaceBasis& I);  // NotAnIdeal

// Filtration L_(i) = sum of graded components of degree ≥ i.
Filtration filtration_from_grading(const LieAlgebra& L);
std::vector<int> grading_degrees(const LieAlgebra& L);  // sorted distinct degrees
SubspaceBasis graded_component(const LieAlgebra& L, int degree);

struct StandardFiltrationResult {
  Filtration filtration;
  bool maximality_certified = false;  // false: maximality passed screening only
};
StandardFiltrationResult standard_filtration(const LieAlgebra& L, const SubspaceBasis& L0,
                                             const SubspaceBasis& Lminus1, uint64_t seed = kDefaultSeed);
// Whether L0 is a maximal subalgebra; `certified` false means screening only.
bool is_maximal_subalgebra(const LieAlgebra& L, const SubspaceBasis& L0, bool* certified = nullptr,
                           uint64_t seed = kDefaultSeed);

struct GradedResult {
  LieAlgebra algebra;            // graded, homogeneous basis
  std::vector<Vec> lifts;        // basis vectors of gr as elements of L
};
GradedResult associated_graded(const LieAlgebra& L, const Filtration& f);
SubspaceBasis weisfeiler_ideal(const LieAlgebra& G);

struct GradedConditions {
  bool g1 = false, g2 = false, g3 = false, g4 = false;
  std::string detail;
};
GradedConditions check_graded_conditions(const LieAlgebra& G, uint64_t seed = kDefaultSeed);

struct Verdict {
  bool pass = false;
  std::vector<std::string> failing;  // clause labels
  std::vector<std::string> notes;
  std::string summary() const;
};
Verdict seligman_mills_check(const LieAlgebra& L, const SubspaceBasis& H);

struct QuotientFingerprint {
  bool recognized = false;
  std::vector<std::string> components;  // e.g. "abelian(1)", "classical(3)", "gl(5)"
};
QuotientFingerprint fingerprint_reductive(const LieAlgebra& Q, uint64_t seed = kDefaultSeed);
Verdict recognition_check(const LieAlgebra& L, const Filtration& f, uint64_t seed = kDefaultSeed);

// JSON structure-constant interchange.
std::string to_json(const LieAlgebra& L);
LieAlgebra from_json(const std::string& text, Validation validation = Validation::full);

}  // namespace modlie
