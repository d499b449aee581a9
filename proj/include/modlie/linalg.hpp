#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "modlie/gf.hpp"
#include "modlie/zp.hpp"

namespace modlie {

// Dense coordinate vector over GF(p).
using Vec = std::vector<uint32_t>;
// Sparse vector: (index, nonzero value), sorted by index.
using SparseVec = std::vector<std::pair<uint32_t, uint32_t>>;

SparseVec to_sparse(const Vec& v);
Vec to_dense(const SparseVec& v, size_t n);
bool is_zero(const Vec& v);
// y += a*x
void axpy(Vec& y, uint32_t a, const Vec& x, uint32_t p);
void axpy(Vec& y, uint32_t a, const SparseVec& x, uint32_t p);
Vec scaled(const Vec& x, uint32_t a, uint32_t p);
Vec vadd(const Vec& a, const Vec& b, uint32_t p);
Vec vsub(const Vec& a, const Vec& b, uint32_t p);
Vec unit_vector(size_t n, size_t i);
uint32_t dot(const Vec& a, const Vec& b, uint32_t p);
SparseVec sparse_axpy(const SparseVec& y, uint32_t a, const SparseVec& x, uint32_t p);

// Matrices over GF(p). Storage is row-sparse, switching to dense once more
// than a fifth of the entries are nonzero.
class Matrix {
 public:
  static constexpr double kDenseFill = 0.2;

  Matrix() = default;
  Matrix(size_t rows, size_t cols, uint32_t p);
  static Matrix identity(size_t n, uint32_t p);
  static Matrix from_dense_rows(const std::vector<Vec>& rows, size_t cols, uint32_t p);
  static Matrix from_sparse_rows(std::vector<SparseVec> rows, size_t cols, uint32_t p);
  // Matrix whose j-th column is cols[j].
  static Matrix from_columns(const std::vector<Vec>& cols, size_t rows, uint32_t p);

  size_t rows() const { return r_; }
  size_t cols() const { return c_; }
  uint32_t p() const { return p_; }
  bool is_dense() const { return dense_; }
  size_t nnz() const;
  uint32_t get(size_t i, size_t j) const;

  // Calls f(col, value) for each nonzero entry of row i.
  template <class F>
  void for_row(size_t i, F&& f) const {
    if (dense_) {
      const uint32_t* row = dn_.data() + i * c_;
      for (size_t j = 0; j < c_; ++j)
        if (row[j]) f(static_cast<uint32_t>(j), row[j]);
    } else {
      for (auto [j, v] : sp_[i]) f(j, v);
    }
  }
  SparseVec row_sparse(size_t i) const;
  Vec row_dense(size_t i) const;
  Vec column(size_t j) const;
  std::vector<Vec> columns() const;

  Vec apply(const Vec& x) const;       // M x
  Vec apply_left(const Vec& x) const;  // x^T M
  Matrix operator*(const Matrix& o) const;
  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix scaled(uint32_t a) const;
  Matrix transpose() const;
  Matrix pow(uint64_t e) const;
  bool is_zero() const;
  bool operator==(const Matrix& o) const;
  bool operator!=(const Matrix& o) const { return !(*this == o); }
  uint32_t trace() const;
  // Row-major flattening as a sparse vector of length rows*cols.
  SparseVec flatten() const;
  static Matrix unflatten(const SparseVec& v, size_t rows, size_t cols, uint32_t p);

 private:
  void set_rows(std::vector<SparseVec> rows);
  size_t r_ = 0, c_ = 0;
  uint32_t p_ = 0;
  bool dense_ = false;
  std::vector<SparseVec> sp_;
  Vec dn_;
};

Matrix commutator(const Matrix& a, const Matrix& b);
// Evaluate a polynomial (low degree first) at a square matrix.
Matrix poly_eval(const poly::Poly& f, const Matrix& m);
poly::Poly charpoly(const Matrix& m);

// Incremental row echelon form over GF(p) for sparse rows. Rows are kept
// with a leading 1 but only reduced at their leading column; `rref` produces
// the fully reduced form.
class SparseEchelon {
 public:
  SparseEchelon(size_t ncols, uint32_t p);
  size_t ncols() const { return n_; }
  size_t rank() const { return rows_.size(); }
  uint32_t p() const { return p_; }
  // Returns true when v was independent of the rows so far.
  bool add(const SparseVec& v);
  bool add_dense(const Vec& v) { return add(to_sparse(v)); }
  // v reduced against the current rows (zero iff v is in the span).
  SparseVec reduce(const SparseVec& v) const;
  bool contains(const SparseVec& v) const { return reduce(v).empty(); }
  // Fully reduced rows sorted by pivot column.
  std::vector<SparseVec> rref() const;
  std::vector<uint32_t> pivots() const;
  // Basis of {x : row . x = 0 for every row}.
  std::vector<Vec> nullspace() const;

 private:
  size_t n_;
  uint32_t p_;
  std::vector<SparseVec> rows_;
  std::vector<int> piv_row_;
  mutable std::vector<uint32_t> acc_;
  mutable std::vector<char> mark_;
};

// A subspace of GF(p)^n held as reduced row echelon rows.
class SubspaceBasis {
 public:
  SubspaceBasis() = default;
  SubspaceBasis(size_t ambient, uint32_t p) : n_(ambient), p_(p) {}
  static SubspaceBasis span(const std::vector<Vec>& vs, size_t ambient, uint32_t p);
  static SubspaceBasis span_sparse(const std::vector<SparseVec>& vs, size_t ambient, uint32_t p);
  static SubspaceBasis whole(size_t n, uint32_t p);

  size_t ambient() const { return n_; }
  size_t dim() const { return rows_.size(); }
  uint32_t p() const { return p_; }
  const std::vector<Vec>& vectors() const { return rows_; }
  const std::vector<uint32_t>& pivots() const { return piv_; }

  bool add(const Vec& v);
  Vec reduce(const Vec& v) const;
  bool contains(const Vec& v) const;
  bool contains(const SubspaceBasis& o) const;
  // Coordinates of v (assumed in the span) against vectors().
  Vec coordinates(const Vec& v) const;
  SubspaceBasis sum(const SubspaceBasis& o) const;
  SubspaceBasis intersect(const SubspaceBasis& o) const;
  // Unit vectors on the non-pivot columns: a deterministic complement.
  std::vector<Vec> complement() const;
  std::vector<uint32_t> non_pivots() const;
  bool operator==(const SubspaceBasis& o) const { return n_ == o.n_ && rows_ == o.rows_; }

 private:
  size_t n_ = 0;
  uint32_t p_ = 0;
  std::vector<Vec> rows_;
  std::vector<uint32_t> piv_;
};

SubspaceBasis nullspace(const Matrix& m);
size_t rank(const Matrix& m);

// Particular solution of M x = b (free variables zero), or nullopt when the
// system is inconsistent.
std::optional<Vec> solve_linear(const Matrix& m, const Vec& b);

// Inverse of a square matrix, or nullopt when singular.
std::optional<Matrix> inverse(const Matrix& m);

// Span of a list of equally-shaped matrices with membership and coordinates.
// Coordinates come from a set of pivot entries on which the basis is
// invertible.
class MatrixSpan {
 public:
  MatrixSpan(size_t rows, size_t cols, uint32_t p);
  // Adds m when it is independent of the current span; returns that.
  bool add(const Matrix& m);
  size_t dim() const { return basis_.size(); }
  const std::vector<Matrix>& basis() const { return basis_; }
  bool contains(const Matrix& m) const;
  // Coordinates against basis(), or nullopt when m is outside the span.
  std::optional<Vec> coordinates(const Matrix& m) const;

 private:
  void refresh() const;
  size_t r_, c_;
  uint32_t p_;
  std::vector<Matrix> basis_;
  SparseEchelon ech_;
  mutable bool stale_ = true;
  mutable std::vector<uint32_t> piv_;
  mutable Matrix pinv_;  // inverse of the basis restricted to the pivot entries
};

struct WeightSpace {
  Vec weight;  // eigenvalue of each operator
  SubspaceBasis space;
};

// Common eigenspaces with eigenvalues in GF(p). `complete` is false when the
// operators are not simultaneously diagonalizable over GF(p); the returned
// spaces then cover only part of the module.
struct WeightDecomposition {
  std::vector<WeightSpace> spaces;
  bool complete = true;
};
WeightDecomposition weight_decomposition(const std::vector<Matrix>& ops, size_t n, uint32_t p);

// Requires pairwise commuting operators with x^p = x.
std::vector<WeightSpace> simultaneous_eigenspaces(const std::vector<Matrix>& ops);

// Cyclic submodule generated by v.
SubspaceBasis spin(const Vec& v, const std::vector<Matrix>& gens, uint32_t p);

struct IrreducibilityResult {
  bool irreducible = false;
  SubspaceBasis invariant;  // proper nonzero invariant subspace when reducible
};
// Norton-style test: a singular element of the enveloping algebra is found,
// and every vector of its kernel (and of the transposed kernel) is spun.
// Complete, deterministic for a fixed seed.
IrreducibilityResult module_irreducible(const std::vector<Matrix>& gens, size_t n, uint32_t p,
                                        uint64_t seed = kDefaultSeed);

struct JordanChevalley {
  Matrix semisimple, nilpotent;
};
JordanChevalley jordan_chevalley_matrix(const Matrix& m);

// Projective points of GF(p)^d: one representative per line, first nonzero
// coordinate equal to 1. Calls f(vec); stops early when f returns false.
template <class F>
void for_each_projective_point(size_t d, uint32_t p, F&& f) {
  for (size_t lead = 0; lead < d; ++lead) {
    Vec v(d, 0);
    v[lead] = 1;
    size_t free = d - lead - 1;
    for (;;) {
      if (!f(v)) return;
      size_t i = 0;
      for (; i < free; ++i) {
        uint32_t& c = v[lead + 1 + i];
        if (++c < p) break;
        c = 0;
      }
      if (i == free) break;
    }
  }
}

}  // namespace modlie
