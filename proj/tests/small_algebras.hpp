#pragma once
// Hand-built small algebras used as independent references in tests.

#include "modlie/liealg.hpp"

namespace testalg {

using namespace modlie;

// Witt algebra on e_{-1}..e_{p-2} with [e_i,e_j] = (j-i) e_{i+j}.
inline LieAlgebra witt_table(uint32_t p) {
  std::vector<BracketEntry> e;
  int lo = -1, hi = static_cast<int>(p) - 2;
  for (int i = lo; i <= hi; ++i)
    for (int j = i + 1; j <= hi; ++j) {
      int k = i + j;
      if (k < lo || k > hi) continue;
      uint32_t c = static_cast<uint32_t>(((j - i) % static_cast<int>(p) + static_cast<int>(p)) % static_cast<int>(p));
      if (c) e.push_back({static_cast<uint32_t>(i - lo), static_cast<uint32_t>(j - lo), {{static_cast<uint32_t>(k - lo), c}}});
    }
  LieAlgebra L = LieAlgebra::from_structure_constants(p, p, e);
  std::vector<int> g;
  for (int i = lo; i <= hi; ++i) g.push_back(i);
  L.grading = g;
  return L;
}

inline Matrix elementary(size_t n, size_t i, size_t j, uint32_t p, uint32_t v = 1) {
  std::vector<SparseVec> rows(n);
  rows[i].push_back({static_cast<uint32_t>(j), v});
  return Matrix::from_sparse_rows(rows, n, p);
}

inline LieAlgebra gl(size_t n, uint32_t p) {
  std::vector<Matrix> b;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) b.push_back(elementary(n, i, j, p));
  return from_matrix_basis(b);
}

// sl(n): E_ij (i != j) and E_ii - E_{i+1,i+1}; the diagonal ones come first.
inline LieAlgebra sl(size_t n, uint32_t p) {
  std::vector<Matrix> b;
  for (size_t i = 0; i + 1 < n; ++i) b.push_back(elementary(n, i, i, p) - elementary(n, i + 1, i + 1, p));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (i != j) b.push_back(elementary(n, i, j, p));
  return from_matrix_basis(b);
}

inline LieAlgebra heisenberg(uint32_t p) {
  return LieAlgebra::from_structure_constants(3, p, {{0, 1, {{2, 1}}}});
}

inline LieAlgebra abelian(size_t n, uint32_t p) { return LieAlgebra::from_structure_constants(n, p, {}); }

// Borel subalgebra of sl(2): [h,e] = 2e.
inline LieAlgebra borel2(uint32_t p) { return LieAlgebra::from_structure_constants(2, p, {{0, 1, {{1, 2}}}}); }

}  // namespace testalg
