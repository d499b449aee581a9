#include "modlie/liealg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <set>
#include <sstream>

namespace modlie {

namespace {

// Accumulates a*v into a dense uint64 buffer, reducing lazily.
struct DenseAcc {
  uint32_t p;
  std::vector<uint64_t> v;
  DenseAcc(size_t n, uint32_t p_) : p(p_), v(n, 0) {}
  void add(uint64_t a, const SparseVec& s) {
    for (auto [k, c] : s) {
      v[k] += a * c;
      if (v[k] >= (uint64_t{1} << 62)) v[k] %= p;
    }
  }
  Vec take() {
    Vec out(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
      out[i] = static_cast<uint32_t>(v[i] % p);
      v[i] = 0;
    }
    return out;
  }
};

SparseVec negated(const SparseVec& v, uint32_t p) {
  SparseVec out;
  out.reserve(v.size());
  for (auto [k, c] : v) out.emplace_back(k, zneg(c, p));
  return out;
}

// Closure of span(start) under the given operators.
SubspaceBasis operator_closure(const std::vector<Vec>& start, const std::vector<Matrix>& ops, size_t n, uint32_t p) {
  SparseEchelon ech(n, p);
  std::vector<Vec> found;
  for (const auto& v : start)
    if (ech.add_dense(v)) found.push_back(v);
  for (size_t k = 0; k < found.size() && ech.rank() < n; ++k)
    for (const auto& op : ops) {
      Vec w = op.apply(found[k]);
      if (ech.add_dense(w)) found.push_back(std::move(w));
      if (ech.rank() == n) break;
    }
  if (ech.rank() == n) return SubspaceBasis::whole(n, p);
  return SubspaceBasis::span(found, n, p);
}

// Operators whose associative closure contains ad L.
std::vector<Matrix> adjoint_generators(const LieAlgebra& L) {
  std::vector<Matrix> ops;
  if (L.dim() <= 64) {
    for (size_t i = 0; i < L.dim(); ++i) ops.push_back(L.ad_basis(i));
  } else {
    for (const auto& g : lie_generating_set(L)) ops.push_back(L.ad(g));
  }
  return ops;
}

// Complement of `lower` inside `upper` with coordinates of upper/lower.
struct RelativeBasis {
  SubspaceBasis lower, comp;
  RelativeBasis(const SubspaceBasis& lo, const SubspaceBasis& up) : lower(lo), comp(lo.ambient(), lo.p()) {
    for (const auto& v : up.vectors()) {
      Vec r = lower.reduce(v);
      if (!is_zero(r)) comp.add(r);
    }
  }
  Vec coords(const Vec& w) const { return comp.coordinates(lower.reduce(w)); }
  size_t dim() const { return comp.dim(); }
  const std::vector<Vec>& reps() const { return comp.vectors(); }
};

// Matrices of ad(y), y in `actors`, on upper/lower.
std::vector<Matrix> quotient_action(const LieAlgebra& L, const std::vector<Vec>& actors, const RelativeBasis& rb) {
  std::vector<Matrix> out;
  out.reserve(actors.size());
  for (const auto& y : actors) {
    Matrix ady = L.ad(y);
    std::vector<Vec> cols;
    for (const auto& t : rb.reps()) cols.push_back(rb.coords(ady.apply(t)));
    out.push_back(Matrix::from_columns(cols, rb.dim(), L.p()));
  }
  return out;
}

// Subalgebra generated by the subalgebra S together with v.
SubspaceBasis extend_subalgebra(const LieAlgebra& L, const SubspaceBasis& S, const Vec& v) {
  const size_t n = L.dim();
  const uint32_t p = L.p();
  SparseEchelon ech(n, p);
  for (const auto& s : S.vectors()) ech.add_dense(s);
  std::vector<Matrix> ops;
  for (const auto& s : S.vectors()) ops.push_back(L.ad(s));
  Matrix adv = L.ad(v);
  std::vector<Vec> fresh;
  if (ech.add_dense(v)) fresh.push_back(v);
  std::vector<Vec> all = S.vectors();
  for (const auto& s : S.vectors()) {
    Vec w = adv.apply(s);
    if (ech.add_dense(w)) fresh.push_back(std::move(w));
  }
  for (size_t k = 0; k < fresh.size() && ech.rank() < n; ++k) {
    Vec cur = fresh[k];
    Vec w = adv.apply(cur);
    if (ech.add_dense(w)) fresh.push_back(std::move(w));
    for (const auto& op : ops) {
      Vec u = op.apply(cur);
      if (ech.add_dense(u)) fresh.push_back(std::move(u));
    }
  }
  if (ech.rank() == n) return SubspaceBasis::whole(n, p);
  all.insert(all.end(), fresh.begin(), fresh.end());
  return SubspaceBasis::span(all, n, p);
}

std::set<size_t> classical_dims(uint32_t p, size_t bound) {
  std::set<size_t> out;
  for (size_t l = 1; l * l < bound; ++l) {
    size_t a = l * (l + 2);
    out.insert((l + 1) % p == 0 ? a - 1 : a);
    if (l >= 2) out.insert(l * (2 * l + 1));
    if (l >= 4) out.insert(l * (2 * l - 1));
  }
  for (size_t d : {14, 52, 78, 133, 248}) out.insert(p == 3 && d == 78 ? 77 : d);
  return out;
}

}  // namespace

// ------------------------------------------------------------ Filtration

const SubspaceBasis& Filtration::at(int i) const {
  if (i <= lo) return spaces.front();
  size_t k = static_cast<size_t>(i - lo);
  return k < spaces.size() ? spaces[k] : spaces.back();
}

// ------------------------------------------------------------ LieAlgebra

FieldPtr LieAlgebra::field() const { return make_field(p_, 1, true); }

LieAlgebra LieAlgebra::from_structure_constants(size_t dim, uint32_t p, const std::vector<BracketEntry>& entries,
                                                std::vector<std::string> labels, Validation validation,
                                                uint64_t seed) {
  std::vector<SparseVec> table(dim * dim);
  std::vector<char> given(dim * dim, 0);
  auto normalize = [&](SparseVec v) {
    std::sort(v.begin(), v.end());
    SparseVec out;
    for (auto [k, c] : v) {
      if (k >= dim) throw DimensionMismatch("structure constant index out of range");
      c %= p;
      if (!out.empty() && out.back().first == k) {
        out.back().second = zadd(out.back().second, c, p);
        if (!out.back().second) out.pop_back();
      } else if (c) {
        out.emplace_back(k, c);
      }
    }
    return out;
  };
  for (const auto& e : entries) {
    if (e.i >= dim || e.j >= dim) throw DimensionMismatch("bracket index out of range");
    SparseVec v = normalize(e.value);
    if (e.i == e.j) {
      if (!v.empty())
        throw AntisymmetryViolation("[b" + std::to_string(e.i) + ",b" + std::to_string(e.i) + "] is nonzero");
      continue;
    }
    size_t idx = e.i * dim + e.j;
    if (given[idx]) throw MalformedInput("bracket (" + std::to_string(e.i) + "," + std::to_string(e.j) + ") given twice");
    given[idx] = 1;
    table[idx] = std::move(v);
  }
  for (size_t i = 0; i < dim; ++i)
    for (size_t j = i + 1; j < dim; ++j) {
      size_t a = i * dim + j, b = j * dim + i;
      if (given[a] && given[b]) {
        if (table[b] != negated(table[a], p))
          throw AntisymmetryViolation("c_{" + std::to_string(i) + std::to_string(j) + "} != -c_{" +
                                      std::to_string(j) + std::to_string(i) + "}");
      } else if (given[a]) {
        table[b] = negated(table[a], p);
      } else if (given[b]) {
        table[a] = negated(table[b], p);
      }
    }
  return from_full_table(dim, p, std::move(table), std::move(labels), validation, seed);
}

LieAlgebra LieAlgebra::from_full_table(size_t dim, uint32_t p, std::vector<SparseVec> table,
                                       std::vector<std::string> labels, Validation validation, uint64_t seed) {
  if (table.size() != dim * dim) throw DimensionMismatch("structure table size");
  LieAlgebra L;
  L.n_ = dim;
  L.p_ = p;
  if (labels.empty())
    for (size_t i = 0; i < dim; ++i) labels.push_back("b" + std::to_string(i));
  if (labels.size() != dim) throw DimensionMismatch("label count differs from dimension");
  L.labels_ = std::move(labels);
  for (size_t i = 0; i < dim; ++i) {
    if (!table[i * dim + i].empty())
      throw AntisymmetryViolation("[b" + std::to_string(i) + ",b" + std::to_string(i) + "] is nonzero");
    for (size_t j = i + 1; j < dim; ++j)
      if (table[j * dim + i] != negated(table[i * dim + j], p))
        throw AntisymmetryViolation("pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
  }
  L.table_ = std::move(table);
  if (validation == Validation::full) L.validate_jacobi();
  if (validation == Validation::spot_check) L.spot_check_jacobi(2000, seed);
  return L;
}

const Matrix& LieAlgebra::ad_basis(size_t i) const {
  std::call_once(*ad_once_, [this] {
    ad_->reserve(n_);
    for (size_t a = 0; a < n_; ++a) {
      std::vector<SparseVec> rows(n_);
      for (size_t j = 0; j < n_; ++j)
        for (auto [k, c] : table_[a * n_ + j]) rows[k].emplace_back(static_cast<uint32_t>(j), c);
      ad_->push_back(Matrix::from_sparse_rows(std::move(rows), n_, p_));
    }
  });
  return (*ad_)[i];
}

Matrix LieAlgebra::ad(const Vec& x) const {
  std::vector<SparseVec> rows(n_);
  std::vector<size_t> nz;
  for (size_t i = 0; i < n_; ++i)
    if (x[i]) nz.push_back(i);
  if (nz.size() == 1 && x[nz[0]] == 1) return ad_basis(nz[0]);
  // ad(x)_{kj} = sum_i x_i c_{ij}^k
  std::vector<std::vector<std::pair<uint32_t, uint64_t>>> cols(n_);
  std::vector<uint64_t> buf(n_, 0);
  std::vector<uint32_t> touched;
  std::vector<char> on(n_, 0);
  for (size_t j = 0; j < n_; ++j) {
    for (size_t i : nz)
      for (auto [k, c] : table_[i * n_ + j]) {
        if (!on[k]) {
          on[k] = 1;
          touched.push_back(k);
        }
        buf[k] += static_cast<uint64_t>(x[i]) * c;
        if (buf[k] >= (uint64_t{1} << 62)) buf[k] %= p_;
      }
    for (uint32_t k : touched) {
      uint32_t v = static_cast<uint32_t>(buf[k] % p_);
      if (v) rows[k].emplace_back(static_cast<uint32_t>(j), v);
      buf[k] = 0;
      on[k] = 0;
    }
    touched.clear();
  }
  return Matrix::from_sparse_rows(std::move(rows), n_, p_);
}

Vec LieAlgebra::bracket(const Vec& x, const Vec& y) const {
  if (x.size() != n_ || y.size() != n_) throw DimensionMismatch("bracket: coordinate length");
  DenseAcc acc(n_, p_);
  std::vector<size_t> ny;
  for (size_t j = 0; j < n_; ++j)
    if (y[j]) ny.push_back(j);
  for (size_t i = 0; i < n_; ++i) {
    if (!x[i]) continue;
    for (size_t j : ny) acc.add(static_cast<uint64_t>(x[i]) * y[j] % p_, table_[i * n_ + j]);
  }
  return acc.take();
}

Vec LieAlgebra::bracket_basis_vec(size_t i, const Vec& y) const {
  DenseAcc acc(n_, p_);
  for (size_t j = 0; j < n_; ++j)
    if (y[j]) acc.add(y[j], table_[i * n_ + j]);
  return acc.take();
}

void LieAlgebra::validate_jacobi() const {
  DenseAcc acc(n_, p_);
  for (size_t i = 0; i < n_; ++i)
    for (size_t j = i + 1; j < n_; ++j)
      for (size_t k = j + 1; k < n_; ++k) {
        // [b_i,[b_j,b_k]] + [b_j,[b_k,b_i]] + [b_k,[b_i,b_j]]
        for (auto [l, c] : table_[j * n_ + k]) acc.add(c, table_[i * n_ + l]);
        for (auto [l, c] : table_[k * n_ + i]) acc.add(c, table_[j * n_ + l]);
        for (auto [l, c] : table_[i * n_ + j]) acc.add(c, table_[k * n_ + l]);
        bool bad = false;
        for (auto& v : acc.v) {
          if (v % p_) bad = true;
          v = 0;
        }
        if (bad) throw JacobiViolation(static_cast<int>(i), static_cast<int>(j), static_cast<int>(k));
      }
}

void LieAlgebra::spot_check_jacobi(size_t samples, uint64_t seed) const {
  if (n_ < 3) return;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<size_t> d(0, n_ - 1);
  DenseAcc acc(n_, p_);
  for (size_t s = 0; s < samples; ++s) {
    size_t i = d(rng), j = d(rng), k = d(rng);
    for (auto [l, c] : table_[j * n_ + k]) acc.add(c, table_[i * n_ + l]);
    for (auto [l, c] : table_[k * n_ + i]) acc.add(c, table_[j * n_ + l]);
    for (auto [l, c] : table_[i * n_ + j]) acc.add(c, table_[k * n_ + l]);
    Vec r = acc.take();
    if (!is_zero(r)) throw JacobiViolation(static_cast<int>(i), static_cast<int>(j), static_cast<int>(k));
  }
}

LieElement bracket(const LieElement& x, const LieElement& y) {
  if (!x.parent || x.parent != y.parent) throw ParentMismatch("elements of different algebras");
  return {x.parent, x.parent->bracket(x.coords, y.coords)};
}

// ------------------------------------------------------------ subspaces

SubspaceBasis closure(const LieAlgebra& L, const std::vector<Vec>& seed, ClosureMode mode) {
  if (mode == ClosureMode::subalgebra) {
    std::vector<Matrix> ops;
    for (const auto& s : seed) ops.push_back(L.ad(s));
    return operator_closure(seed, ops, L.dim(), L.p());
  }
  return operator_closure(seed, adjoint_generators(L), L.dim(), L.p());
}

SubspaceBasis bracket_space(const LieAlgebra& L, const SubspaceBasis& A, const SubspaceBasis& B) {
  const size_t n = L.dim();
  SparseEchelon ech(n, L.p());
  bool same = A == B;
  for (size_t a = 0; a < A.dim() && ech.rank() < n; ++a) {
    Matrix ada = L.ad(A.vectors()[a]);
    for (size_t b = same ? a + 1 : 0; b < B.dim(); ++b) {
      ech.add_dense(ada.apply(B.vectors()[b]));
      if (ech.rank() == n) break;
    }
  }
  std::vector<SparseVec> rows = ech.rref();
  return SubspaceBasis::span_sparse(rows, n, L.p());
}

bool is_subalgebra(const LieAlgebra& L, const SubspaceBasis& S) {
  for (size_t a = 0; a < S.dim(); ++a) {
    Matrix ada = L.ad(S.vectors()[a]);
    for (size_t b = a + 1; b < S.dim(); ++b)
      if (!S.contains(ada.apply(S.vectors()[b]))) return false;
  }
  return true;
}

bool is_ideal(const LieAlgebra& L, const SubspaceBasis& I) {
  for (const auto& op : adjoint_generators(L))
    for (const auto& v : I.vectors())
      if (!I.contains(op.apply(v))) return false;
  return true;
}

SubspaceBasis center(const LieAlgebra& L) { return centralizer(L, SubspaceBasis::whole(L.dim(), L.p())); }

SubspaceBasis centralizer(const LieAlgebra& L, const SubspaceBasis& S) {
  const size_t n = L.dim();
  SparseEchelon ech(n, L.p());
  for (const auto& s : S.vectors()) {
    Matrix ads = L.ad(s);
    for (size_t r = 0; r < n && ech.rank() < n; ++r) ech.add(ads.row_sparse(r));
    if (ech.rank() == n) break;
  }
  return SubspaceBasis::span(ech.nullspace(), n, L.p());
}

SubspaceBasis normalizer(const LieAlgebra& L, const SubspaceBasis& S) {
  const size_t n = L.dim();
  const uint32_t p = L.p();
  SparseEchelon ech(n, p);
  std::vector<uint32_t> free_cols = S.non_pivots();
  for (const auto& s : S.vectors()) {
    // Row c of (reduce ∘ ad s) for each non-pivot column c.
    std::vector<Vec> cols = L.ad(s).columns();  // cols[j] = [s, b_j]
    std::vector<SparseVec> rows(free_cols.size());
    for (size_t j = 0; j < n; ++j) {
      Vec r = S.reduce(cols[j]);
      for (size_t f = 0; f < free_cols.size(); ++f)
        if (r[free_cols[f]]) rows[f].emplace_back(static_cast<uint32_t>(j), r[free_cols[f]]);
    }
    for (const auto& row : rows) ech.add(row);
    if (ech.rank() == n) break;
  }
  return SubspaceBasis::span(ech.nullspace(), n, p);
}

SubspaceBasis derived_algebra(const LieAlgebra& L) {
  const size_t n = L.dim();
  SparseEchelon ech(n, L.p());
  for (size_t i = 0; i < n && ech.rank() < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      const SparseVec& v = L.bracket_basis(i, j);
      if (!v.empty()) ech.add(v);
      if (ech.rank() == n) break;
    }
  return SubspaceBasis::span_sparse(ech.rref(), n, L.p());
}

std::vector<SubspaceBasis> derived_series(const LieAlgebra& L) {
  std::vector<SubspaceBasis> out{SubspaceBasis::whole(L.dim(), L.p())};
  SubspaceBasis next = derived_algebra(L);
  while (next.dim() < out.back().dim()) {
    out.push_back(next);
    if (next.dim() == 0) break;
    next = bracket_space(L, next, next);
  }
  return out;
}

std::vector<SubspaceBasis> lower_central_series(const LieAlgebra& L) {
  SubspaceBasis whole = SubspaceBasis::whole(L.dim(), L.p());
  std::vector<SubspaceBasis> out{whole};
  SubspaceBasis next = derived_algebra(L);
  while (next.dim() < out.back().dim()) {
    out.push_back(next);
    if (next.dim() == 0) break;
    next = bracket_space(L, whole, next);
  }
  return out;
}

bool is_abelian(const LieAlgebra& L) {
  for (size_t i = 0; i < L.dim(); ++i)
    for (size_t j = i + 1; j < L.dim(); ++j)
      if (!L.bracket_basis(i, j).empty()) return false;
  return true;
}

bool is_perfect(const LieAlgebra& L) { return derived_algebra(L).dim() == L.dim(); }

InvariantSubspaces invariant_subspaces(const LieAlgebra& L) {
  InvariantSubspaces out;
  out.center = center(L);
  out.derived_series = derived_series(L);
  out.lower_central_series = lower_central_series(L);
  out.is_solvable = out.derived_series.back().dim() == 0;
  out.is_nilpotent = out.lower_central_series.back().dim() == 0;
  return out;
}

bool is_nilpotent_subalgebra(const LieAlgebra& L, const SubspaceBasis& S) {
  SubspaceBasis cur = S;
  while (cur.dim() > 0) {
    SubspaceBasis next = bracket_space(L, S, cur);
    if (next.dim() == cur.dim()) return false;
    cur = next;
  }
  return true;
}

bool is_solvable_subalgebra(const LieAlgebra& L, const SubspaceBasis& S) {
  SubspaceBasis cur = S;
  while (cur.dim() > 0) {
    SubspaceBasis next = bracket_space(L, cur, cur);
    if (next.dim() == cur.dim()) return false;
    cur = next;
  }
  return true;
}

size_t dimension_limit() {
  if (const char* env = std::getenv("MODLIE_DIM_LIMIT")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && v > 0) return v;
  }
  return 60;
}

// ------------------------------------------------------------ derivations

DerivationAlgebra derivation_algebra(const LieAlgebra& L) {
  const size_t n = L.dim();
  const uint32_t p = L.p();
  if (n > dimension_limit())
    throw DimensionLimitExceeded("derivation algebra needs " + std::to_string(n * n) + " unknowns; dim " +
                                 std::to_string(n) + " exceeds the limit " + std::to_string(dimension_limit()));
  // Unknown d_{kl} (D b_l = sum_k d_{kl} b_k) sits at column k*n + l.
  SparseEchelon ech(n * n, p);
  struct Term {
    uint32_t m, col, c;
  };
  std::vector<Term> terms;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      terms.clear();
      for (auto [l, c] : L.bracket_basis(i, j))
        for (size_t m = 0; m < n; ++m) terms.push_back({static_cast<uint32_t>(m), static_cast<uint32_t>(m * n + l), c});
      for (size_t k = 0; k < n; ++k) {
        for (auto [m, c] : L.bracket_basis(k, j)) terms.push_back({m, static_cast<uint32_t>(k * n + i), zneg(c, p)});
        for (auto [m, c] : L.bracket_basis(i, k)) terms.push_back({m, static_cast<uint32_t>(k * n + j), zneg(c, p)});
      }
      std::sort(terms.begin(), terms.end(),
                [](const Term& a, const Term& b) { return a.m != b.m ? a.m < b.m : a.col < b.col; });
      size_t t = 0;
      while (t < terms.size()) {
        uint32_t m = terms[t].m;
        SparseVec row;
        while (t < terms.size() && terms[t].m == m) {
          uint32_t col = terms[t].col, c = 0;
          while (t < terms.size() && terms[t].m == m && terms[t].col == col) c = zadd(c, terms[t++].c, p);
          if (c) row.emplace_back(col, c);
        }
        if (!row.empty()) ech.add(row);
      }
    }
  DerivationAlgebra out;
  for (const auto& v : ech.nullspace()) out.basis.push_back(Matrix::unflatten(to_sparse(v), n, n, p));
  out.algebra = from_matrix_basis(out.basis);
  return out;
}

LieAlgebra from_matrix_basis(const std::vector<Matrix>& basis, std::vector<std::string> labels) {
  if (basis.empty()) return LieAlgebra::from_structure_constants(0, 2, {}, std::move(labels));
  const size_t rows = basis[0].rows(), cols = basis[0].cols();
  const uint32_t p = basis[0].p();
  MatrixSpan span(rows, cols, p);
  for (const auto& m : basis)
    if (!span.add(m)) throw PreconditionFailed("matrix basis is linearly dependent");
  const size_t r = basis.size();
  std::vector<BracketEntry> entries;
  for (size_t a = 0; a < r; ++a)
    for (size_t b = a + 1; b < r; ++b) {
      Matrix c = commutator(basis[a], basis[b]);
      if (c.is_zero()) continue;
      auto coords = span.coordinates(c);
      if (!coords) throw NotClosed("commutator left the span of the matrices");
      entries.push_back({static_cast<uint32_t>(a), static_cast<uint32_t>(b), to_sparse(*coords)});
    }
  LieAlgebra L = LieAlgebra::from_structure_constants(r, p, entries, std::move(labels), Validation::none);
  L.realization = basis;
  return L;
}

// ------------------------------------------------------------ Killing form

Matrix killing_form(const LieAlgebra& L) {
  const size_t n = L.dim();
  const uint32_t p = L.p();
  std::vector<SparseVec> flat(n), flat_t(n);
  for (size_t i = 0; i < n; ++i) {
    flat[i] = L.ad_basis(i).flatten();
    flat_t[i] = L.ad_basis(i).transpose().flatten();
  }
  std::vector<Vec> gram(n, Vec(n, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i; j < n; ++j) {
      const auto& a = flat[i];
      const auto& b = flat_t[j];
      uint64_t s = 0;
      size_t x = 0, y = 0;
      while (x < a.size() && y < b.size()) {
        if (a[x].first < b[y].first) ++x;
        else if (b[y].first < a[x].first) ++y;
        else {
          s += static_cast<uint64_t>(a[x].second) * b[y].second;
          if (s >= (uint64_t{1} << 62)) s %= p;
          ++x, ++y;
        }
      }
      gram[i][j] = gram[j][i] = static_cast<uint32_t>(s % p);
    }
  return Matrix::from_dense_rows(gram, n, p);
}

SubspaceBasis radical_of_form(const Matrix& gram) { return nullspace(gram); }

// ------------------------------------------------------------ simplicity

std::vector<Vec> lie_generating_set(const LieAlgebra& L, uint64_t seed) {
  const size_t n = L.dim();
  const uint32_t p = L.p();
  if (n == 0) return {};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<size_t> pick(0, n - 1);
  std::uniform_int_distribution<uint32_t> coef(1, p - 1);
  auto generated = [&](const std::vector<Vec>& gens) {
    std::vector<Matrix> ops;
    for (const auto& g : gens) ops.push_back(L.ad(g));
    return operator_closure(gens, ops, n, p).dim();
  };
  for (int attempt = 0; attempt < 10; ++attempt) {
    size_t support = attempt < 6 ? std::min<size_t>(n, 4) : n;
    std::vector<Vec> gens(2, Vec(n, 0));
    for (auto& g : gens) {
      if (support == n) {
        for (auto& x : g) x = static_cast<uint32_t>(rng() % p);
      } else {
        for (size_t s = 0; s < support; ++s) g[pick(rng)] = coef(rng);
      }
    }
    if (generated(gens) == n) return gens;
  }
  // Greedy fallback over the basis.
  std::vector<Vec> gens;
  SubspaceBasis cur(n, p);
  for (size_t i = 0; i < n && cur.dim() < n; ++i) {
    Vec b = unit_vector(n, i);
    if (cur.contains(b)) continue;
    gens.push_back(b);
    std::vector<Matrix> ops;
    for (const auto& g : gens) ops.push_back(L.ad(g));
    cur = operator_closure(gens, ops, n, p);
  }
  return gens;
}

std::vector<Matrix> restricted_action(const std::vector<Matrix>& ops, const SubspaceBasis& S) {
  std::vector<Matrix> out;
  out.reserve(ops.size());
  for (const auto& op : ops) {
    std::vector<Vec> cols;
    cols.reserve(S.dim());
    for (const auto& v : S.vectors()) cols.push_back(S.coordinates(op.apply(v)));
    out.push_back(Matrix::from_columns(cols, S.dim(), S.p()));
  }
  return out;
}

bool is_simple(const LieAlgebra& L, uint64_t seed) {
  if (L.dim() <= 1) return false;
  if (!is_perfect(L)) return false;
  std::vector<Matrix> ops;
  for (const auto& g : lie_generating_set(L, seed)) ops.push_back(L.ad(g));
  return module_irreducible(ops, L.dim(), L.p(), seed).irreducible;
}

SubspaceBasis minimal_ideal(const LieAlgebra& L, const SubspaceBasis& I, uint64_t seed) {
  std::vector<Matrix> ops = adjoint_generators(L);
  SubspaceBasis cur = I;
  while (cur.dim() > 1) {
    auto res = module_irreducible(restricted_action(ops, cur), cur.dim(), L.p(), seed);
    if (res.irreducible) break;
    std::vector<Vec> vs;
    for (const auto& c : res.invariant.vectors()) {
      Vec v(L.dim(), 0);
      for (size_t a = 0; a < c.size(); ++a) axpy(v, c[a], cur.vectors()[a], L.p());
      vs.push_back(std::move(v));
    }
    cur = SubspaceBasis::span(vs, L.dim(), L.p());
  }
  return cur;
}

SubspaceBasis solvable_radical(const LieAlgebra& L, uint64_t seed) {
  const size_t n = L.dim();
  const uint32_t p = L.p();
  if (n > dimension_limit())
    throw DimensionLimitExceeded("solvable radical: dim " + std::to_string(n) + " exceeds the limit " +
                                 std::to_string(dimension_limit()));
  if (n == 0) return SubspaceBasis(0, p);
  if (derived_series(L).back().dim() == 0) return SubspaceBasis::whole(n, p);
  SubspaceBasis I = minimal_ideal(L, SubspaceBasis::whole(n, p), seed);
  Quotient q = quotient(L, I);
  SubspaceBasis rq = solvable_radical(q.algebra, seed);
  std::vector<Vec> pre = I.vectors();
  for (const auto& v : rq.vectors()) pre.push_back(q.lift(v));
  SubspaceBasis preimage = SubspaceBasis::span(pre, n, p);
  if (bracket_space(L, I, I).dim() == 0) return preimage;
  // A nonabelian minimal ideal meets the radical trivially, so the radical
  // centralizes it.
  return preimage.intersect(centralizer(L, I));
}

// ------------------------------------------------------------ sub/quotients

LieAlgebra subalgebra(const LieAlgebra& L, const SubspaceBasis& S, std::vector<std::string> labels) {
  const size_t d = S.dim();
  std::vector<BracketEntry> entries;
  for (size_t a = 0; a < d; ++a) {
    Matrix ada = L.ad(S.vectors()[a]);
    for (size_t b = a + 1; b < d; ++b) {
      Vec v = ada.apply(S.vectors()[b]);
      if (is_zero(v)) continue;
      if (!S.contains(v)) throw NotClosed("subspace is not closed under the bracket");
      entries.push_back({static_cast<uint32_t>(a), static_cast<uint32_t>(b), to_sparse(S.coordinates(v))});
    }
  }
  LieAlgebra out = LieAlgebra::from_structure_constants(d, L.p(), entries, std::move(labels), Validation::none);
  out.embedding = S.vectors();
  return out;
}

Vec Quotient::project(const Vec& x) const {
  Vec r = ideal.reduce(x);
  Vec out(transversal.size());
  for (size_t a = 0; a < transversal.size(); ++a) out[a] = r[transversal[a]];
  return out;
}

Vec Quotient::lift(const Vec& y) const {
  Vec out(ideal.ambient(), 0);
  for (size_t a = 0; a < transversal.size(); ++a) out[transversal[a]] = y[a];
  return out;
}

Quotient quotient(const LieAlgebra& L, const SubspaceBasis& I) {
  if (!is_ideal(L, I)) throw NotAnIdeal("subspace is not invariant under ad L");
  Quotient q;
  q.ideal = I;
  q.transversal = I.non_pivots();
  const size_t d = q.transversal.size();
  std::vector<BracketEntry> entries;
  std::vector<std::string> labels;
  for (uint32_t t : q.transversal) labels.push_back(L.labels()[t]);
  for (size_t a = 0; a < d; ++a)
    for (size_t b = a + 1; b < d; ++b) {
      const SparseVec& v = L.bracket_basis(q.transversal[a], q.transversal[b]);
      if (v.empty()) continue;
      Vec pr = q.project(to_dense(v, L.dim()));
      if (!is_zero(pr)) entries.push_back({static_cast<uint32_t>(a), static_cast<uint32_t>(b), to_sparse(pr)});
    }
  q.algebra = LieAlgebra::from_structure_constants(d, L.p(), entries, labels, Validation::none);
  if (L.grading) {
    // Homogeneous ideals keep the grading on the transversal.
    bool homogeneous = true;
    for (const auto& v : I.vectors()) {
      int deg = 0;
      bool first = true;
      for (size_t k = 0; k < v.size(); ++k)
        if (v[k]) {
          if (first) deg = (*L.grading)[k], first = false;
          else if ((*L.grading)[k] != deg) homogeneous = false;
        }
    }
    if (homogeneous) {
      std::vector<int> g;
      for (uint32_t t : q.transversal) g.push_back((*L.grading)[t]);
      q.algebra.grading = g;
    }
  }
  return q;
}

// ------------------------------------------------------------ gradings

std::vector<int> grading_degrees(const LieAlgebra& L) {
  if (!L.grading) throw PreconditionFailed("no grading attached");
  std::set<int> s(L.grading->begin(), L.grading->end());
  return {s.begin(), s.end()};
}

SubspaceBasis graded_component(const LieAlgebra& L, int degree) {
  if (!L.grading) throw PreconditionFailed("no grading attached");
  std::vector<Vec> vs;
  for (size_t i = 0; i < L.dim(); ++i)
    if ((*L.grading)[i] == degree) vs.push_back(unit_vector(L.dim(), i));
  return SubspaceBasis::span(vs, L.dim(), L.p());
}

Filtration filtration_from_grading(const LieAlgebra& L) {
  std::vector<int> degs = grading_degrees(L);
  Filtration f;
  const size_t n = L.dim();
  if (degs.empty()) {
    f.spaces = {SubspaceBasis(n, L.p())};
    return f;
  }
  f.lo = degs.front();
  for (int i = degs.front(); i <= degs.back() + 1; ++i) {
    std::vector<Vec> vs;
    for (size_t k = 0; k < n; ++k)
      if ((*L.grading)[k] >= i) vs.push_back(unit_vector(n, k));
    f.spaces.push_back(SubspaceBasis::span(vs, n, L.p()));
  }
  return f;
}

bool is_maximal_subalgebra(const LieAlgebra& L, const SubspaceBasis& L0, bool* certified, uint64_t seed) {
  if (certified) *certified = true;
  const size_t n = L.dim();
  if (L0.dim() >= n || !is_subalgebra(L, L0)) return false;
  SubspaceBasis whole = SubspaceBasis::whole(n, L.p());
  RelativeBasis rb(L0, whole);
  auto action = quotient_action(L, L0.vectors(), rb);
  if (module_irreducible(action, rb.dim(), L.p(), seed).irreducible) return true;
  // Every intermediate subalgebra contains L0 plus one line of L/L0.
  double points = (std::pow(static_cast<double>(L.p()), static_cast<double>(rb.dim())) - 1) / (L.p() - 1);
  if (points <= 4000) {
    bool maximal = true;
    for_each_projective_point(rb.dim(), L.p(), [&](const Vec& c) {
      Vec v(n, 0);
      for (size_t a = 0; a < c.size(); ++a) axpy(v, c[a], rb.reps()[a], L.p());
      if (extend_subalgebra(L, L0, v).dim() < n) maximal = false;
      return maximal;
    });
    return maximal;
  }
  if (certified) *certified = false;
  for (const auto& t : rb.reps())
    if (extend_subalgebra(L, L0, t).dim() < n) {
      if (certified) *certified = true;
      return false;
    }
  return true;
}

StandardFiltrationResult standard_filtration(const LieAlgebra& L, const SubspaceBasis& L0,
                                             const SubspaceBasis& Lm1, uint64_t seed) {
  const size_t n = L.dim();
  const uint32_t p = L.p();
  if (!(Lm1.contains(L0) && L0.dim() < Lm1.dim()))
    throw PreconditionFailed("L_(0) must be a proper subspace of L_(-1)");
  if (!is_subalgebra(L, L0)) throw PreconditionFailed("L_(0) is not a subalgebra");
  for (const auto& y : L0.vectors()) {
    Matrix ady = L.ad(y);
    for (const auto& v : Lm1.vectors())
      if (!Lm1.contains(ady.apply(v))) throw PreconditionFailed("[L_(0), L_(-1)] is not contained in L_(-1)");
  }
  RelativeBasis rb(L0, Lm1);
  if (!module_irreducible(quotient_action(L, L0.vectors(), rb), rb.dim(), p, seed).irreducible)
    throw PreconditionFailed("L_(-1)/L_(0) is not an irreducible L_(0)-module");
  StandardFiltrationResult res;
  bool certified = false;
  if (!is_maximal_subalgebra(L, L0, &certified, seed)) throw PreconditionFailed("L_(0) is not a maximal subalgebra");
  res.maximality_certified = certified;

  std::vector<SubspaceBasis> neg{Lm1};
  for (;;) {
    SubspaceBasis next = bracket_space(L, neg.back(), Lm1).sum(neg.back());
    if (next.dim() == neg.back().dim()) break;
    neg.push_back(next);
  }
  std::vector<SubspaceBasis> pos{L0};
  while (pos.back().dim() > 0) {
    const SubspaceBasis& cur = pos.back();
    // {x ∈ cur : [x, L_(-1)] ⊆ cur}
    std::vector<Vec> cols;
    for (const auto& v : cur.vectors()) {
      Matrix adv = L.ad(v);
      Vec col;
      col.reserve(Lm1.dim() * n);
      for (const auto& u : Lm1.vectors()) {
        Vec r = cur.reduce(adv.apply(u));
        col.insert(col.end(), r.begin(), r.end());
      }
      cols.push_back(std::move(col));
    }
    SubspaceBasis ker = nullspace(Matrix::from_columns(cols, Lm1.dim() * n, p));
    std::vector<Vec> vs;
    for (const auto& c : ker.vectors()) {
      Vec x(n, 0);
      for (size_t a = 0; a < c.size(); ++a) axpy(x, c[a], cur.vectors()[a], p);
      vs.push_back(std::move(x));
    }
    SubspaceBasis next = SubspaceBasis::span(vs, n, p);
    if (next.dim() == cur.dim()) break;
    pos.push_back(next);
  }
  Filtration& f = res.filtration;
  f.lo = -static_cast<int>(neg.size());
  for (auto it = neg.rbegin(); it != neg.rend(); ++it) f.spaces.push_back(*it);
  for (auto& s : pos) f.spaces.push_back(s);
  f.exhaustive = f.spaces.front().dim() == n;
  f.separating = f.spaces.back().dim() == 0;
  return res;
}

GradedResult associated_graded(const LieAlgebra& L, const Filtration& f) {
  const size_t n = L.dim();
  const uint32_t p = L.p();
  const int lo = f.lo, top = f.hi();
  // Transversals per degree.
  std::vector<RelativeBasis> levels;
  std::vector<int> level_deg;
  GradedResult out;
  std::vector<int> degree;
  std::vector<size_t> offset;
  bool unit = true;
  for (int i = lo; i < top; ++i) {
    levels.emplace_back(f.at(i + 1), f.at(i));
    level_deg.push_back(i);
    offset.push_back(out.lifts.size());
    for (const auto& v : levels.back().reps()) {
      out.lifts.push_back(v);
      degree.push_back(i);
      size_t nz = 0;
      for (auto x : v) nz += x != 0;
      if (nz != 1) unit = false;
    }
  }
  const size_t d = out.lifts.size();
  std::vector<size_t> unit_pos(n, SIZE_MAX);
  if (unit)
    for (size_t a = 0; a < d; ++a)
      for (size_t k = 0; k < n; ++k)
        if (out.lifts[a][k]) unit_pos[k] = a;
  std::vector<BracketEntry> entries;
  for (size_t a = 0; a < d; ++a) {
    Matrix ada = L.ad(out.lifts[a]);
    for (size_t b = a + 1; b < d; ++b) {
      int target = degree[a] + degree[b];
      if (target >= top) continue;
      Vec v = ada.apply(out.lifts[b]);
      if (is_zero(v)) continue;
      SparseVec val;
      if (target < lo) continue;
      size_t lvl = static_cast<size_t>(target - lo);
      if (unit) {
        for (size_t k = 0; k < n; ++k)
          if (v[k] && unit_pos[k] != SIZE_MAX && degree[unit_pos[k]] == target)
            val.emplace_back(static_cast<uint32_t>(unit_pos[k]), zmul(v[k], zinv(out.lifts[unit_pos[k]][k], p), p));
        std::sort(val.begin(), val.end());
      } else {
        Vec c = levels[lvl].coords(v);
        for (size_t t = 0; t < c.size(); ++t)
          if (c[t]) val.emplace_back(static_cast<uint32_t>(offset[lvl] + t), c[t]);
      }
      if (!val.empty()) entries.push_back({static_cast<uint32_t>(a), static_cast<uint32_t>(b), std::move(val)});
    }
  }
  out.algebra = LieAlgebra::from_structure_constants(d, p, entries, {}, Validation::none);
  out.algebra.grading = degree;
  return out;
}

SubspaceBasis weisfeiler_ideal(const LieAlgebra& G) {
  if (!G.grading) throw PreconditionFailed("no grading attached");
  const size_t n = G.dim();
  const uint32_t p = G.p();
  std::vector<Vec> tail;
  for (size_t k = 0; k < n; ++k)
    if ((*G.grading)[k] < -1) tail.push_back(unit_vector(n, k));
  SubspaceBasis M = SubspaceBasis::span(tail, n, p);
  while (M.dim() > 0) {
    std::vector<Vec> cols;
    for (const auto& v : M.vectors()) {
      Vec col;
      for (size_t i = 0; i < n; ++i) {
        Vec r = M.reduce(G.bracket_basis_vec(i, v));
        col.insert(col.end(), r.begin(), r.end());
      }
      cols.push_back(std::move(col));
    }
    SubspaceBasis ker = nullspace(Matrix::from_columns(cols, n * n, p));
    if (ker.dim() == M.dim()) break;
    std::vector<Vec> vs;
    for (const auto& c : ker.vectors()) {
      Vec x(n, 0);
      for (size_t a = 0; a < c.size(); ++a) axpy(x, c[a], M.vectors()[a], p);
      vs.push_back(std::move(x));
    }
    M = SubspaceBasis::span(vs, n, p);
  }
  return M;
}

GradedConditions check_graded_conditions(const LieAlgebra& G, uint64_t seed) {
  if (!G.grading) throw PreconditionFailed("no grading attached");
  const size_t n = G.dim();
  const uint32_t p = G.p();
  std::vector<int> degs = grading_degrees(G);
  GradedConditions out;
  std::ostringstream detail;
  auto comp = [&](int d) { return graded_component(G, d); };
  SubspaceBasis gm1 = comp(-1), g0 = comp(0);

  // (g1)
  if (gm1.dim() == 0) {
    detail << "g1: G_-1 = 0; ";
  } else {
    std::vector<Matrix> action;
    MatrixSpan images(gm1.dim(), gm1.dim(), p);
    for (const auto& y : g0.vectors()) {
      Matrix ady = G.ad(y);
      std::vector<Vec> cols;
      for (const auto& u : gm1.vectors()) cols.push_back(gm1.coordinates(ady.apply(u)));
      action.push_back(Matrix::from_columns(cols, gm1.dim(), p));
      images.add(action.back());
    }
    bool irreducible = module_irreducible(action, gm1.dim(), p, seed).irreducible;
    bool faithful = images.dim() == g0.dim();
    out.g1 = irreducible && faithful;
    if (!irreducible) detail << "g1: G_-1 reducible; ";
    if (!faithful) detail << "g1: G_0 acts unfaithfully; ";
  }
  // (g2): G_{-i} = [G_{-i+1}, G_{-1}] for i ≥ 1, through one step past the depth.
  out.g2 = true;
  for (int i = 1; i <= -degs.front() + 1; ++i) {
    SubspaceBasis lhs = comp(-i);
    SubspaceBasis rhs = bracket_space(G, comp(-i + 1), gm1);
    if (!(lhs == rhs)) {
      out.g2 = false;
      detail << "g2: fails at i=" << i << "; ";
      break;
    }
  }
  auto kernel_dim = [&](const SubspaceBasis& src, const std::vector<Vec>& against) {
    std::vector<Vec> cols;
    for (const auto& x : src.vectors()) {
      Matrix adx = G.ad(x);
      Vec col;
      for (const auto& u : against) {
        Vec r = adx.apply(u);
        col.insert(col.end(), r.begin(), r.end());
      }
      cols.push_back(std::move(col));
    }
    if (against.empty()) return src.dim();
    return nullspace(Matrix::from_columns(cols, against.size() * n, p)).dim();
  };
  // (g3)
  out.g3 = true;
  for (int d : degs) {
    if (d <= 0) continue;
    if (kernel_dim(comp(d), gm1.vectors()) != 0) {
      out.g3 = false;
      detail << "g3: fails in degree " << d << "; ";
      break;
    }
  }
  // (g4)
  std::vector<Vec> positive;
  for (size_t k = 0; k < n; ++k)
    if ((*G.grading)[k] > 0) positive.push_back(unit_vector(n, k));
  out.g4 = true;
  for (int d : degs) {
    if (d >= 0) continue;
    if (kernel_dim(comp(d), positive) != 0) {
      out.g4 = false;
      detail << "g4: fails in degree " << d << "; ";
      break;
    }
  }
  out.detail = detail.str();
  return out;
}

// ------------------------------------------------------------ checkers

std::string Verdict::summary() const {
  std::string s = pass ? "pass" : "fail";
  if (!failing.empty()) {
    s += " [";
    for (size_t i = 0; i < failing.size(); ++i) s += (i ? "," : "") + failing[i];
    s += "]";
  }
  return s;
}

Verdict seligman_mills_check(const LieAlgebra& L, const SubspaceBasis& H) {
  Verdict v;
  const size_t n = L.dim();
  const uint32_t p = L.p();
  if (!is_perfect(L) || center(L).dim() != 0) {
    v.failing.push_back("1");
    v.notes.push_back("L is not perfect or has a nonzero center");
  }
  if (bracket_space(L, H, H).dim() != 0) {
    v.failing.push_back("2");
    v.notes.push_back("H is not abelian");
    return v;
  }
  if (!(normalizer(L, H) == H)) {
    v.failing.push_back("2");
    v.notes.push_back("H is not self-normalizing, so not a Cartan subalgebra");
    return v;
  }
  std::vector<Matrix> ops;
  for (const auto& h : H.vectors()) ops.push_back(L.ad(h));
  WeightDecomposition wd = weight_decomposition(ops, n, p);
  std::map<Vec, SubspaceBasis> spaces;
  for (auto& ws : wd.spaces) spaces.emplace(ws.weight, ws.space);
  Vec zero(H.dim(), 0);
  if (!wd.complete || !spaces.count(zero) || !(spaces.at(zero) == H)) {
    v.failing.push_back("2a");
    v.notes.push_back(wd.complete ? "zero weight space differs from H"
                                  : "ad H is not diagonalizable with eigenvalues in the prime field");
    v.pass = false;
    return v;
  }
  auto neg = [&](const Vec& a) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = zneg(a[i], p);
    return r;
  };
  bool b_ok = true, c_ok = true;
  for (const auto& [alpha, space] : spaces) {
    if (alpha == zero) continue;
    auto it = spaces.find(neg(alpha));
    size_t d = it == spaces.end() ? 0 : bracket_space(L, space, it->second).dim();
    if (d != 1 && b_ok) {
      b_ok = false;
      std::ostringstream os;
      os << "dim [L_a, L_-a] = " << d << " for a root a";
      v.notes.push_back(os.str());
    }
  }
  for (const auto& [alpha, sa] : spaces) {
    if (alpha == zero) continue;
    for (const auto& [beta, sb] : spaces) {
      if (beta == zero) continue;
      bool some_empty = false;
      for (uint32_t k = 0; k < p && !some_empty; ++k) {
        Vec w(alpha.size());
        for (size_t i = 0; i < w.size(); ++i) w[i] = zadd(alpha[i], zmul(k, beta[i], p), p);
        if (!spaces.count(w)) some_empty = true;
      }
      if (!some_empty && c_ok) {
        c_ok = false;
        v.notes.push_back("a root string alpha + F_p beta meets no zero space");
      }
    }
  }
  if (!b_ok) v.failing.push_back("2b");
  if (!c_ok) v.failing.push_back("2c");
  v.pass = v.failing.empty();
  return v;
}

namespace {

bool recognize(const LieAlgebra& R, uint64_t seed, std::vector<std::string>& comps, int budget) {
  const size_t d = R.dim();
  const uint32_t p = R.p();
  if (d == 0) return true;
  if (is_abelian(R)) {
    comps.push_back("abelian(" + std::to_string(d) + ")");
    return true;
  }
  bool perfect = is_perfect(R);
  if (perfect && is_simple(R, seed)) {
    if (classical_dims(p, 4096).count(d)) {
      comps.push_back("classical(" + std::to_string(d) + ")");
      return true;
    }
    return false;
  }
  SubspaceBasis z = center(R);
  SubspaceBasis der = derived_algebra(R);
  size_t nn = static_cast<size_t>(std::llround(std::sqrt(static_cast<double>(d))));
  size_t nm = static_cast<size_t>(std::llround(std::sqrt(static_cast<double>(d + 1))));
  // gl(n), p | n: center of dim 1 inside the derived algebra of codim 1.
  if (nn * nn == d && nn % p == 0 && z.dim() == 1 && der.dim() == d - 1 && der.contains(z)) {
    comps.push_back("gl(" + std::to_string(nn) + ")");
    return true;
  }
  // sl(n), p | n: perfect with a 1-dim center and simple quotient.
  if (nm * nm == d + 1 && nm % p == 0 && perfect && z.dim() == 1 && is_simple(quotient(R, z).algebra, seed)) {
    comps.push_back("sl(" + std::to_string(nm) + ")");
    return true;
  }
  // pgl(n), p | n: centerless, derived algebra simple of codim 1.
  if (nm * nm == d + 1 && nm % p == 0 && z.dim() == 0 && der.dim() == d - 1 &&
      is_simple(subalgebra(R, der), seed)) {
    comps.push_back("pgl(" + std::to_string(nm) + ")");
    return true;
  }
  if (budget <= 0) return false;
  SubspaceBasis whole = SubspaceBasis::whole(d, p);
  // Split off the center when it is a direct summand.
  if (z.dim() > 0 && z.intersect(der).dim() == 0 && z.dim() + der.dim() == d) {
    return recognize(subalgebra(R, z), seed, comps, budget - 1) &&
           recognize(subalgebra(R, der), seed, comps, budget - 1);
  }
  SubspaceBasis I = minimal_ideal(R, whole, seed);
  if (I.dim() == d) return false;
  SubspaceBasis c = centralizer(R, I);
  if (I.intersect(c).dim() == 0 && I.dim() + c.dim() == d)
    return recognize(subalgebra(R, I), seed, comps, budget - 1) && recognize(subalgebra(R, c), seed, comps, budget - 1);
  return false;
}

}  // namespace

QuotientFingerprint fingerprint_reductive(const LieAlgebra& Q, uint64_t seed) {
  QuotientFingerprint fp;
  fp.recognized = recognize(Q, seed, fp.components, 8);
  return fp;
}

Verdict recognition_check(const LieAlgebra& L, const Filtration& f, uint64_t seed) {
  Verdict v;
  const size_t n = L.dim();
  const uint32_t p = L.p();
  int s_prime = f.depth();
  int s = f.height();
  // (a)
  if (!(s >= 1 && s_prime >= 1 && s_prime <= s)) {
    v.failing.push_back("a");
    v.notes.push_back("depth " + std::to_string(s_prime) + ", height " + std::to_string(s));
  }
  const SubspaceBasis& L0 = f.at(0);
  const SubspaceBasis& L1 = f.at(1);
  // (b): fingerprint screening of L_(0)/L_(1).
  {
    LieAlgebra sub0 = subalgebra(L, L0);
    std::vector<Vec> l1_coords;
    for (const auto& x : L1.vectors()) l1_coords.push_back(L0.coordinates(x));
    SubspaceBasis l1_in = SubspaceBasis::span(l1_coords, L0.dim(), p);
    Quotient q = quotient(sub0, l1_in);
    QuotientFingerprint fp = fingerprint_reductive(q.algebra, seed);
    std::string comps;
    for (const auto& c : fp.components) comps += c + " ";
    if (!fp.recognized) {
      v.failing.push_back("b");
      v.notes.push_back("UnrecognizedQuotient: L_(0)/L_(1) of dim " + std::to_string(q.algebra.dim()) +
                        " matched no fingerprint");
    } else {
      v.notes.push_back("b (fingerprint screening, not an isomorphism test): " + comps);
    }
  }
  // (c)
  {
    RelativeBasis rb(L0, f.at(-1));
    if (rb.dim() == 0 || !module_irreducible(quotient_action(L, L0.vectors(), rb), rb.dim(), p, seed).irreducible)
      v.failing.push_back("c");
  }
  // Solve {x ∈ L_(j) : [x, U] ⊆ target} and test containment in L_(j+1).
  auto clause = [&](int j, const SubspaceBasis& U, const SubspaceBasis& target) {
    const SubspaceBasis& Lj = f.at(j);
    std::vector<Vec> cols;
    for (const auto& x : Lj.vectors()) {
      Matrix adx = L.ad(x);
      Vec col;
      for (const auto& u : U.vectors()) {
        Vec r = target.reduce(adx.apply(u));
        col.insert(col.end(), r.begin(), r.end());
      }
      cols.push_back(std::move(col));
    }
    if (U.dim() == 0) return Lj.dim() == 0 || f.at(j + 1).contains(Lj);
    SubspaceBasis ker = nullspace(Matrix::from_columns(cols, U.dim() * n, p));
    for (const auto& c : ker.vectors()) {
      Vec x(n, 0);
      for (size_t a = 0; a < c.size(); ++a) axpy(x, c[a], Lj.vectors()[a], p);
      if (!f.at(j + 1).contains(x)) return false;
    }
    return true;
  };
  // (d)
  for (int j = -s_prime; j <= 0; ++j)
    if (!clause(j, L1, f.at(j + 2))) {
      v.failing.push_back("d");
      v.notes.push_back("d fails at j=" + std::to_string(j));
      break;
    }
  // (e)
  for (int j = 0; j <= s; ++j)
    if (!clause(j, f.at(-1), f.at(j))) {
      v.failing.push_back("e");
      v.notes.push_back("e fails at j=" + std::to_string(j));
      break;
    }
  v.pass = v.failing.empty();
  return v;
}

}  // namespace modlie
