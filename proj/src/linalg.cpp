#include "modlie/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <random>

namespace modlie {

namespace {

// Dense row accumulator with a touched list, producing sparse rows.
struct RowAcc {
  uint32_t p;
  std::vector<uint64_t> v;
  std::vector<uint32_t> touched;
  std::vector<char> on;
  RowAcc(size_t n, uint32_t p_) : p(p_), v(n, 0), on(n, 0) {}
  void add(uint32_t j, uint64_t x) {
    if (!on[j]) {
      on[j] = 1;
      touched.push_back(j);
    }
    v[j] += x;
    if (v[j] >= (uint64_t{1} << 62)) v[j] %= p;
  }
  SparseVec take() {
    std::sort(touched.begin(), touched.end());
    SparseVec out;
    out.reserve(touched.size());
    for (uint32_t j : touched) {
      uint32_t r = static_cast<uint32_t>(v[j] % p);
      if (r) out.emplace_back(j, r);
      v[j] = 0;
      on[j] = 0;
    }
    touched.clear();
    return out;
  }
};

using MinHeap = std::priority_queue<uint32_t, std::vector<uint32_t>, std::greater<uint32_t>>;

}  // namespace

SparseVec to_sparse(const Vec& v) {
  SparseVec out;
  for (size_t i = 0; i < v.size(); ++i)
    if (v[i]) out.emplace_back(static_cast<uint32_t>(i), v[i]);
  return out;
}

Vec to_dense(const SparseVec& v, size_t n) {
  Vec out(n, 0);
  for (auto [i, x] : v) out[i] = x;
  return out;
}

bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](uint32_t x) { return x == 0; });
}

void axpy(Vec& y, uint32_t a, const Vec& x, uint32_t p) {
  if (a == 0) return;
  for (size_t i = 0; i < y.size(); ++i)
    if (x[i]) y[i] = zadd(y[i], zmul(a, x[i], p), p);
}

void axpy(Vec& y, uint32_t a, const SparseVec& x, uint32_t p) {
  if (a == 0) return;
  for (auto [i, v] : x) y[i] = zadd(y[i], zmul(a, v, p), p);
}

Vec scaled(const Vec& x, uint32_t a, uint32_t p) {
  Vec out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = zmul(a, x[i], p);
  return out;
}

Vec vadd(const Vec& a, const Vec& b, uint32_t p) {
  Vec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = zadd(a[i], b[i], p);
  return out;
}

Vec vsub(const Vec& a, const Vec& b, uint32_t p) {
  Vec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = zsub(a[i], b[i], p);
  return out;
}

Vec unit_vector(size_t n, size_t i) {
  Vec v(n, 0);
  v[i] = 1;
  return v;
}

uint32_t dot(const Vec& a, const Vec& b, uint32_t p) {
  uint64_t s = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    s += static_cast<uint64_t>(a[i]) * b[i];
    if (s >= (uint64_t{1} << 62)) s %= p;
  }
  return static_cast<uint32_t>(s % p);
}

SparseVec sparse_axpy(const SparseVec& y, uint32_t a, const SparseVec& x, uint32_t p) {
  SparseVec out;
  out.reserve(y.size() + x.size());
  size_t i = 0, j = 0;
  while (i < y.size() || j < x.size()) {
    if (j == x.size() || (i < y.size() && y[i].first < x[j].first)) {
      out.push_back(y[i++]);
    } else if (i == y.size() || x[j].first < y[i].first) {
      uint32_t v = zmul(a, x[j].second, p);
      if (v) out.emplace_back(x[j].first, v);
      ++j;
    } else {
      uint32_t v = zadd(y[i].second, zmul(a, x[j].second, p), p);
      if (v) out.emplace_back(y[i].first, v);
      ++i, ++j;
    }
  }
  return out;
}

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(size_t rows, size_t cols, uint32_t p) : r_(rows), c_(cols), p_(p), sp_(rows) {}

Matrix Matrix::identity(size_t n, uint32_t p) {
  std::vector<SparseVec> rows(n);
  for (size_t i = 0; i < n; ++i) rows[i] = {{static_cast<uint32_t>(i), 1u}};
  return from_sparse_rows(std::move(rows), n, p);
}

Matrix Matrix::from_dense_rows(const std::vector<Vec>& rows, size_t cols, uint32_t p) {
  std::vector<SparseVec> sp;
  sp.reserve(rows.size());
  for (const auto& r : rows) sp.push_back(to_sparse(r));
  return from_sparse_rows(std::move(sp), cols, p);
}

Matrix Matrix::from_sparse_rows(std::vector<SparseVec> rows, size_t cols, uint32_t p) {
  Matrix m;
  m.r_ = rows.size();
  m.c_ = cols;
  m.p_ = p;
  m.set_rows(std::move(rows));
  return m;
}

Matrix Matrix::from_columns(const std::vector<Vec>& cols, size_t rows, uint32_t p) {
  std::vector<SparseVec> sp(rows);
  for (size_t j = 0; j < cols.size(); ++j)
    for (size_t i = 0; i < rows; ++i)
      if (cols[j][i]) sp[i].emplace_back(static_cast<uint32_t>(j), cols[j][i]);
  return from_sparse_rows(std::move(sp), cols.size(), p);
}

void Matrix::set_rows(std::vector<SparseVec> rows) {
  size_t nz = 0;
  for (const auto& r : rows) nz += r.size();
  double cells = static_cast<double>(r_) * static_cast<double>(c_);
  if (cells > 0 && static_cast<double>(nz) > kDenseFill * cells) {
    dense_ = true;
    dn_.assign(r_ * c_, 0);
    for (size_t i = 0; i < r_; ++i)
      for (auto [j, v] : rows[i]) dn_[i * c_ + j] = v;
    sp_.clear();
  } else {
    dense_ = false;
    sp_ = std::move(rows);
    dn_.clear();
  }
}

size_t Matrix::nnz() const {
  if (dense_) return static_cast<size_t>(std::count_if(dn_.begin(), dn_.end(), [](uint32_t x) { return x != 0; }));
  size_t n = 0;
  for (const auto& r : sp_) n += r.size();
  return n;
}

uint32_t Matrix::get(size_t i, size_t j) const {
  if (dense_) return dn_[i * c_ + j];
  const auto& row = sp_[i];
  auto it = std::lower_bound(row.begin(), row.end(), std::make_pair(static_cast<uint32_t>(j), 0u));
  return (it != row.end() && it->first == j) ? it->second : 0;
}

SparseVec Matrix::row_sparse(size_t i) const {
  if (!dense_) return sp_[i];
  SparseVec out;
  for_row(i, [&](uint32_t j, uint32_t v) { out.emplace_back(j, v); });
  return out;
}

Vec Matrix::row_dense(size_t i) const {
  if (dense_) return Vec(dn_.begin() + static_cast<long>(i * c_), dn_.begin() + static_cast<long>((i + 1) * c_));
  return to_dense(sp_[i], c_);
}

Vec Matrix::column(size_t j) const {
  Vec out(r_, 0);
  for (size_t i = 0; i < r_; ++i) out[i] = get(i, j);
  return out;
}

std::vector<Vec> Matrix::columns() const {
  std::vector<Vec> out(c_, Vec(r_, 0));
  for (size_t i = 0; i < r_; ++i) for_row(i, [&](uint32_t j, uint32_t v) { out[j][i] = v; });
  return out;
}

Vec Matrix::apply(const Vec& x) const {
  Vec y(r_, 0);
  for (size_t i = 0; i < r_; ++i) {
    uint64_t s = 0;
    for_row(i, [&](uint32_t j, uint32_t v) {
      s += static_cast<uint64_t>(v) * x[j];
      if (s >= (uint64_t{1} << 62)) s %= p_;
    });
    y[i] = static_cast<uint32_t>(s % p_);
  }
  return y;
}

Vec Matrix::apply_left(const Vec& x) const {
  std::vector<uint64_t> acc(c_, 0);
  for (size_t i = 0; i < r_; ++i) {
    if (!x[i]) continue;
    uint64_t a = x[i];
    for_row(i, [&](uint32_t j, uint32_t v) {
      acc[j] += a * v;
      if (acc[j] >= (uint64_t{1} << 62)) acc[j] %= p_;
    });
  }
  Vec y(c_);
  for (size_t j = 0; j < c_; ++j) y[j] = static_cast<uint32_t>(acc[j] % p_);
  return y;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (c_ != o.r_) throw DimensionMismatch("matrix product: inner dimensions differ");
  if (dense_ && o.dense_) {
    std::vector<SparseVec> rows(r_);
    std::vector<uint64_t> acc(o.c_);
    for (size_t i = 0; i < r_; ++i) {
      std::fill(acc.begin(), acc.end(), 0);
      const uint32_t* a = dn_.data() + i * c_;
      for (size_t k = 0; k < c_; ++k) {
        if (!a[k]) continue;
        uint64_t ak = a[k];
        const uint32_t* b = o.dn_.data() + k * o.c_;
        for (size_t j = 0; j < o.c_; ++j) acc[j] += ak * b[j];
        if ((k & 1023) == 1023)
          for (auto& x : acc) x %= p_;
      }
      for (size_t j = 0; j < o.c_; ++j) {
        uint32_t v = static_cast<uint32_t>(acc[j] % p_);
        if (v) rows[i].emplace_back(static_cast<uint32_t>(j), v);
      }
    }
    return from_sparse_rows(std::move(rows), o.c_, p_);
  }
  std::vector<SparseVec> rows(r_);
  RowAcc acc(o.c_, p_);
  for (size_t i = 0; i < r_; ++i) {
    for_row(i, [&](uint32_t k, uint32_t a) {
      o.for_row(k, [&](uint32_t j, uint32_t b) { acc.add(j, static_cast<uint64_t>(a) * b); });
    });
    rows[i] = acc.take();
  }
  return from_sparse_rows(std::move(rows), o.c_, p_);
}

Matrix Matrix::operator+(const Matrix& o) const {
  if (r_ != o.r_ || c_ != o.c_) throw DimensionMismatch("matrix sum: shapes differ");
  std::vector<SparseVec> rows(r_);
  for (size_t i = 0; i < r_; ++i) rows[i] = sparse_axpy(row_sparse(i), 1, o.row_sparse(i), p_);
  return from_sparse_rows(std::move(rows), c_, p_);
}

Matrix Matrix::operator-(const Matrix& o) const {
  if (r_ != o.r_ || c_ != o.c_) throw DimensionMismatch("matrix difference: shapes differ");
  std::vector<SparseVec> rows(r_);
  for (size_t i = 0; i < r_; ++i) rows[i] = sparse_axpy(row_sparse(i), p_ - 1, o.row_sparse(i), p_);
  return from_sparse_rows(std::move(rows), c_, p_);
}

Matrix Matrix::scaled(uint32_t a) const {
  a %= p_;
  std::vector<SparseVec> rows(r_);
  if (a)
    for (size_t i = 0; i < r_; ++i) for_row(i, [&](uint32_t j, uint32_t v) { rows[i].emplace_back(j, zmul(a, v, p_)); });
  return from_sparse_rows(std::move(rows), c_, p_);
}

Matrix Matrix::transpose() const {
  std::vector<SparseVec> rows(c_);
  for (size_t i = 0; i < r_; ++i) for_row(i, [&](uint32_t j, uint32_t v) { rows[j].emplace_back(static_cast<uint32_t>(i), v); });
  return from_sparse_rows(std::move(rows), r_, p_);
}

Matrix Matrix::pow(uint64_t e) const {
  if (r_ != c_) throw DimensionMismatch("matrix power of a non-square matrix");
  Matrix result = identity(r_, p_), base = *this;
  while (e) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

bool Matrix::is_zero() const {
  if (dense_) return std::all_of(dn_.begin(), dn_.end(), [](uint32_t x) { return x == 0; });
  return std::all_of(sp_.begin(), sp_.end(), [](const SparseVec& r) { return r.empty(); });
}

bool Matrix::operator==(const Matrix& o) const {
  if (r_ != o.r_ || c_ != o.c_ || p_ != o.p_) return false;
  for (size_t i = 0; i < r_; ++i)
    if (row_sparse(i) != o.row_sparse(i)) return false;
  return true;
}

uint32_t Matrix::trace() const {
  uint32_t t = 0;
  for (size_t i = 0; i < std::min(r_, c_); ++i) t = zadd(t, get(i, i), p_);
  return t;
}

SparseVec Matrix::flatten() const {
  SparseVec out;
  for (size_t i = 0; i < r_; ++i)
    for_row(i, [&](uint32_t j, uint32_t v) { out.emplace_back(static_cast<uint32_t>(i * c_ + j), v); });
  return out;
}

Matrix Matrix::unflatten(const SparseVec& v, size_t rows, size_t cols, uint32_t p) {
  std::vector<SparseVec> sp(rows);
  for (auto [k, x] : v) sp[k / cols].emplace_back(static_cast<uint32_t>(k % cols), x);
  return from_sparse_rows(std::move(sp), cols, p);
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

Matrix poly_eval(const poly::Poly& f, const Matrix& m) {
  uint32_t p = m.p();
  size_t n = m.rows();
  Matrix id = Matrix::identity(n, p);
  int d = poly::degree(f);
  if (d < 0) return Matrix(n, n, p);
  Matrix r = id.scaled(f[static_cast<size_t>(d)]);
  for (int i = d - 1; i >= 0; --i) {
    r = r * m;
    if (f[static_cast<size_t>(i)]) r = r + id.scaled(f[static_cast<size_t>(i)]);
  }
  return r;
}

poly::Poly charpoly(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("characteristic polynomial of a non-square matrix");
  const uint32_t p = m.p();
  const size_t n = m.rows();
  std::vector<Vec> h(n);
  for (size_t i = 0; i < n; ++i) h[i] = m.row_dense(i);
  // Similarity reduction to upper Hessenberg form.
  for (size_t c = 0; c + 2 < n; ++c) {
    size_t piv = c + 1;
    while (piv < n && h[piv][c] == 0) ++piv;
    if (piv == n) continue;
    if (piv != c + 1) {
      std::swap(h[piv], h[c + 1]);
      for (size_t r = 0; r < n; ++r) std::swap(h[r][piv], h[r][c + 1]);
    }
    uint32_t inv = zinv(h[c + 1][c], p);
    for (size_t i = c + 2; i < n; ++i) {
      uint32_t u = zmul(h[i][c], inv, p);
      if (!u) continue;
      for (size_t j = 0; j < n; ++j) h[i][j] = zsub(h[i][j], zmul(u, h[c + 1][j], p), p);
      for (size_t j = 0; j < n; ++j) h[j][c + 1] = zadd(h[j][c + 1], zmul(u, h[j][i], p), p);
    }
  }
  // Recurrence on leading principal minors (1-based k).
  std::vector<poly::Poly> pk(n + 1);
  pk[0] = {1};
  for (size_t k = 1; k <= n; ++k) {
    poly::Poly cur = poly::mul({zneg(h[k - 1][k - 1], p), 1}, pk[k - 1], p);
    uint32_t prod = 1;
    for (size_t i = 1; i < k; ++i) {
      prod = zmul(prod, h[k - i][k - i - 1], p);
      if (!prod) break;
      uint32_t coef = zmul(h[k - i - 1][k - 1], prod, p);
      if (coef) cur = poly::sub(cur, poly::scale(pk[k - i - 1], coef, p), p);
    }
    pk[k] = std::move(cur);
  }
  return pk[n];
}

// ---------------------------------------------------------- SparseEchelon

SparseEchelon::SparseEchelon(size_t ncols, uint32_t p)
    : n_(ncols), p_(p), piv_row_(ncols, -1), acc_(ncols, 0), mark_(ncols, 0) {}

bool SparseEchelon::add(const SparseVec& v) {
  MinHeap heap;
  for (auto [i, x] : v) {
    if (i >= n_) throw DimensionMismatch("echelon: vector longer than the column count");
    if (x % p_ == 0) continue;
    acc_[i] = x % p_;
    mark_[i] = 1;
    heap.push(i);
  }
  while (!heap.empty()) {
    uint32_t c = heap.top();
    heap.pop();
    mark_[c] = 0;
    uint32_t f = acc_[c];
    if (!f) continue;
    int r = piv_row_[c];
    if (r < 0) {
      SparseVec row;
      uint32_t inv = zinv(f, p_);
      row.emplace_back(c, 1);
      acc_[c] = 0;
      while (!heap.empty()) {
        uint32_t j = heap.top();
        heap.pop();
        mark_[j] = 0;
        if (acc_[j]) row.emplace_back(j, zmul(acc_[j], inv, p_));
        acc_[j] = 0;
      }
      piv_row_[c] = static_cast<int>(rows_.size());
      rows_.push_back(std::move(row));
      return true;
    }
    for (auto [j, x] : rows_[static_cast<size_t>(r)]) {
      if (j == c) continue;
      if (!mark_[j]) {
        mark_[j] = 1;
        heap.push(j);
      }
      acc_[j] = zsub(acc_[j], zmul(f, x, p_), p_);
    }
    acc_[c] = 0;
  }
  return false;
}

SparseVec SparseEchelon::reduce(const SparseVec& v) const {
  MinHeap heap;
  for (auto [i, x] : v) {
    if (x % p_ == 0) continue;
    acc_[i] = x % p_;
    mark_[i] = 1;
    heap.push(i);
  }
  SparseVec out;
  while (!heap.empty()) {
    uint32_t c = heap.top();
    heap.pop();
    mark_[c] = 0;
    uint32_t f = acc_[c];
    acc_[c] = 0;
    if (!f) continue;
    int r = piv_row_[c];
    if (r < 0) {
      out.emplace_back(c, f);
      continue;
    }
    for (auto [j, x] : rows_[static_cast<size_t>(r)]) {
      if (j == c) continue;
      if (!mark_[j]) {
        mark_[j] = 1;
        heap.push(j);
      }
      acc_[j] = zsub(acc_[j], zmul(f, x, p_), p_);
    }
  }
  return out;
}

std::vector<uint32_t> SparseEchelon::pivots() const {
  std::vector<uint32_t> out;
  for (size_t c = 0; c < n_; ++c)
    if (piv_row_[c] >= 0) out.push_back(static_cast<uint32_t>(c));
  return out;
}

std::vector<SparseVec> SparseEchelon::rref() const {
  std::vector<uint32_t> piv = pivots();
  std::vector<SparseVec> reduced(rows_.size());
  std::vector<int> done(n_, -1);  // pivot column -> index into reduced
  for (size_t k = piv.size(); k-- > 0;) {
    uint32_t c = piv[k];
    const SparseVec& row = rows_[static_cast<size_t>(piv_row_[c])];
    SparseVec cur = row;
    bool needs = false;
    for (auto [j, x] : row)
      if (j != c && piv_row_[j] >= 0) needs = true;
    if (needs) {
      std::vector<uint32_t> dense(n_ - c, 0);
      for (auto [j, x] : row) dense[j - c] = x;
      for (auto [j, x] : row) {
        if (j == c || piv_row_[j] < 0) continue;
        uint32_t f = dense[j - c];
        if (!f) continue;
        for (auto [jj, y] : reduced[static_cast<size_t>(done[j])])
          dense[jj - c] = zsub(dense[jj - c], zmul(f, y, p_), p_);
      }
      cur.clear();
      for (size_t t = 0; t < dense.size(); ++t)
        if (dense[t]) cur.emplace_back(static_cast<uint32_t>(t + c), dense[t]);
    }
    done[c] = static_cast<int>(k);
    reduced[k] = std::move(cur);
  }
  return reduced;
}

std::vector<Vec> SparseEchelon::nullspace() const {
  std::vector<SparseVec> rr = rref();
  std::vector<int> free_index(n_, -1);
  std::vector<uint32_t> free_cols;
  for (size_t c = 0; c < n_; ++c)
    if (piv_row_[c] < 0) {
      free_index[c] = static_cast<int>(free_cols.size());
      free_cols.push_back(static_cast<uint32_t>(c));
    }
  std::vector<Vec> out(free_cols.size(), Vec(n_, 0));
  for (size_t f = 0; f < free_cols.size(); ++f) out[f][free_cols[f]] = 1;
  for (const auto& row : rr) {
    uint32_t c = row.front().first;
    for (auto [j, x] : row)
      if (j != c) out[static_cast<size_t>(free_index[j])][c] = zneg(x, p_);
  }
  return out;
}

// ---------------------------------------------------------- SubspaceBasis

SubspaceBasis SubspaceBasis::span(const std::vector<Vec>& vs, size_t ambient, uint32_t p) {
  std::vector<SparseVec> sp;
  sp.reserve(vs.size());
  for (const auto& v : vs) sp.push_back(to_sparse(v));
  return span_sparse(sp, ambient, p);
}

SubspaceBasis SubspaceBasis::span_sparse(const std::vector<SparseVec>& vs, size_t ambient, uint32_t p) {
  SparseEchelon ech(ambient, p);
  for (const auto& v : vs) {
    ech.add(v);
    if (ech.rank() == ambient) break;
  }
  SubspaceBasis out(ambient, p);
  for (const auto& row : ech.rref()) {
    out.piv_.push_back(row.front().first);
    out.rows_.push_back(to_dense(row, ambient));
  }
  return out;
}

SubspaceBasis SubspaceBasis::whole(size_t n, uint32_t p) {
  SubspaceBasis out(n, p);
  for (size_t i = 0; i < n; ++i) {
    out.rows_.push_back(unit_vector(n, i));
    out.piv_.push_back(static_cast<uint32_t>(i));
  }
  return out;
}

Vec SubspaceBasis::reduce(const Vec& v) const {
  Vec r = v;
  for (size_t k = 0; k < rows_.size(); ++k) {
    uint32_t f = r[piv_[k]];
    if (f) axpy(r, p_ - f, rows_[k], p_);
  }
  return r;
}

bool SubspaceBasis::contains(const Vec& v) const { return is_zero(reduce(v)); }

bool SubspaceBasis::contains(const SubspaceBasis& o) const {
  return std::all_of(o.rows_.begin(), o.rows_.end(), [&](const Vec& v) { return contains(v); });
}

bool SubspaceBasis::add(const Vec& v) {
  Vec r = reduce(v);
  size_t c = 0;
  while (c < n_ && r[c] == 0) ++c;
  if (c == n_) return false;
  uint32_t inv = zinv(r[c], p_);
  for (auto& x : r) x = zmul(x, inv, p_);
  for (auto& row : rows_)
    if (row[c]) axpy(row, p_ - row[c], r, p_);
  auto pos = std::lower_bound(piv_.begin(), piv_.end(), static_cast<uint32_t>(c));
  size_t k = static_cast<size_t>(pos - piv_.begin());
  piv_.insert(pos, static_cast<uint32_t>(c));
  rows_.insert(rows_.begin() + static_cast<long>(k), std::move(r));
  return true;
}

Vec SubspaceBasis::coordinates(const Vec& v) const {
  Vec out(rows_.size());
  for (size_t k = 0; k < rows_.size(); ++k) out[k] = v[piv_[k]];
  return out;
}

SubspaceBasis SubspaceBasis::sum(const SubspaceBasis& o) const {
  std::vector<Vec> all = rows_;
  all.insert(all.end(), o.rows_.begin(), o.rows_.end());
  return span(all, n_, p_);
}

SubspaceBasis SubspaceBasis::intersect(const SubspaceBasis& o) const {
  if (dim() == 0 || o.dim() == 0) return SubspaceBasis(n_, p_);
  std::vector<Vec> residues;
  residues.reserve(rows_.size());
  for (const auto& v : rows_) residues.push_back(o.reduce(v));
  Matrix m = Matrix::from_columns(residues, n_, p_);
  SubspaceBasis ker = nullspace(m);
  std::vector<Vec> vs;
  for (const auto& c : ker.vectors()) {
    Vec x(n_, 0);
    for (size_t k = 0; k < c.size(); ++k) axpy(x, c[k], rows_[k], p_);
    vs.push_back(std::move(x));
  }
  return span(vs, n_, p_);
}

std::vector<uint32_t> SubspaceBasis::non_pivots() const {
  std::vector<uint32_t> out;
  size_t k = 0;
  for (size_t c = 0; c < n_; ++c) {
    if (k < piv_.size() && piv_[k] == c) {
      ++k;
      continue;
    }
    out.push_back(static_cast<uint32_t>(c));
  }
  return out;
}

std::vector<Vec> SubspaceBasis::complement() const {
  std::vector<Vec> out;
  for (uint32_t c : non_pivots()) out.push_back(unit_vector(n_, c));
  return out;
}

// ------------------------------------------------------------ solving

SubspaceBasis nullspace(const Matrix& m) {
  SparseEchelon ech(m.cols(), m.p());
  for (size_t i = 0; i < m.rows(); ++i) {
    ech.add(m.row_sparse(i));
    if (ech.rank() == m.cols()) break;
  }
  return SubspaceBasis::span(ech.nullspace(), m.cols(), m.p());
}

size_t rank(const Matrix& m) {
  SparseEchelon ech(m.cols(), m.p());
  for (size_t i = 0; i < m.rows(); ++i) ech.add(m.row_sparse(i));
  return ech.rank();
}

std::optional<Vec> solve_linear(const Matrix& m, const Vec& b) {
  if (b.size() != m.rows()) throw DimensionMismatch("solve_linear: right-hand side length");
  const size_t n = m.cols();
  SparseEchelon ech(n + 1, m.p());
  for (size_t i = 0; i < m.rows(); ++i) {
    SparseVec row = m.row_sparse(i);
    if (b[i]) row.emplace_back(static_cast<uint32_t>(n), b[i]);
    ech.add(row);
  }
  Vec x(n, 0);
  for (const auto& row : ech.rref()) {
    uint32_t c = row.front().first;
    if (c == n) return std::nullopt;
    if (row.back().first == n) x[c] = row.back().second;
  }
  return x;
}

std::optional<Matrix> inverse(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("inverse of a non-square matrix");
  const size_t n = m.rows();
  const uint32_t p = m.p();
  std::vector<Vec> a(n);
  for (size_t i = 0; i < n; ++i) {
    a[i] = m.row_dense(i);
    a[i].resize(2 * n, 0);
    a[i][n + i] = 1;
  }
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(a[piv], a[c]);
    uint32_t inv = zinv(a[c][c], p);
    for (auto& x : a[c]) x = zmul(x, inv, p);
    for (size_t r = 0; r < n; ++r)
      if (r != c && a[r][c]) axpy(a[r], p - a[r][c], a[c], p);
  }
  std::vector<Vec> rows(n);
  for (size_t i = 0; i < n; ++i) rows[i].assign(a[i].begin() + static_cast<long>(n), a[i].end());
  return Matrix::from_dense_rows(rows, n, p);
}

MatrixSpan::MatrixSpan(size_t rows, size_t cols, uint32_t p) : r_(rows), c_(cols), p_(p), ech_(rows * cols, p) {}

bool MatrixSpan::add(const Matrix& m) {
  if (!ech_.add(m.flatten())) return false;
  basis_.push_back(m);
  stale_ = true;
  return true;
}

bool MatrixSpan::contains(const Matrix& m) const { return ech_.contains(m.flatten()); }

void MatrixSpan::refresh() const {
  if (!stale_) return;
  piv_ = ech_.pivots();
  const size_t d = basis_.size();
  std::vector<Vec> rows(d, Vec(d, 0));
  for (size_t i = 0; i < d; ++i) {
    SparseVec f = basis_[i].flatten();
    size_t q = 0;
    for (auto [k, v] : f) {
      while (q < d && piv_[q] < k) ++q;
      if (q < d && piv_[q] == k) rows[q][i] = v;
    }
  }
  pinv_ = *inverse(Matrix::from_dense_rows(rows, d, p_));
  stale_ = false;
}

std::optional<Vec> MatrixSpan::coordinates(const Matrix& m) const {
  if (!contains(m)) return std::nullopt;
  refresh();
  const size_t d = basis_.size();
  Vec at(d, 0);
  for (size_t q = 0; q < d; ++q) at[q] = m.get(piv_[q] / c_, piv_[q] % c_);
  return pinv_.apply(at);
}

// ------------------------------------------------------- eigenspaces

WeightDecomposition weight_decomposition(const std::vector<Matrix>& ops, size_t n, uint32_t p) {
  WeightDecomposition out;
  struct Block {
    Vec weight;
    std::vector<Vec> basis;
  };
  std::vector<Block> blocks;
  {
    Block whole;
    for (size_t i = 0; i < n; ++i) whole.basis.push_back(unit_vector(n, i));
    if (n) blocks.push_back(std::move(whole));
  }
  for (const auto& op : ops) {
    std::vector<Block> next;
    for (const auto& blk : blocks) {
      std::vector<Vec> images;
      images.reserve(blk.basis.size());
      for (const auto& b : blk.basis) images.push_back(op.apply(b));
      size_t found = 0;
      for (uint32_t lam = 0; lam < p && found < blk.basis.size(); ++lam) {
        std::vector<Vec> cols;
        cols.reserve(blk.basis.size());
        for (size_t i = 0; i < blk.basis.size(); ++i) {
          Vec c = images[i];
          axpy(c, zneg(lam, p), blk.basis[i], p);
          cols.push_back(std::move(c));
        }
        SubspaceBasis ker = nullspace(Matrix::from_columns(cols, n, p));
        if (ker.dim() == 0) continue;
        Block nb;
        nb.weight = blk.weight;
        nb.weight.push_back(lam);
        for (const auto& c : ker.vectors()) {
          Vec v(n, 0);
          for (size_t i = 0; i < c.size(); ++i) axpy(v, c[i], blk.basis[i], p);
          nb.basis.push_back(std::move(v));
        }
        found += ker.dim();
        next.push_back(std::move(nb));
      }
      if (found < blk.basis.size()) out.complete = false;
    }
    blocks = std::move(next);
  }
  for (auto& b : blocks) out.spaces.push_back({b.weight, SubspaceBasis::span(b.basis, n, p)});
  std::sort(out.spaces.begin(), out.spaces.end(),
            [](const WeightSpace& a, const WeightSpace& b) { return a.weight < b.weight; });
  return out;
}

std::vector<WeightSpace> simultaneous_eigenspaces(const std::vector<Matrix>& ops) {
  if (ops.empty()) return {};
  for (size_t i = 0; i < ops.size(); ++i) {
    if (ops[i].pow(ops[i].p()) != ops[i]) throw NotToral("operator " + std::to_string(i) + " does not satisfy x^p = x");
    for (size_t j = i + 1; j < ops.size(); ++j)
      if (!commutator(ops[i], ops[j]).is_zero())
        throw NotCommuting("operators " + std::to_string(i) + " and " + std::to_string(j) + " do not commute");
  }
  return weight_decomposition(ops, ops[0].rows(), ops[0].p()).spaces;
}

// -------------------------------------------------------- irreducibility

SubspaceBasis spin(const Vec& v, const std::vector<Matrix>& gens, uint32_t p) {
  const size_t n = v.size();
  SparseEchelon ech(n, p);
  std::vector<Vec> found;
  if (ech.add_dense(v)) found.push_back(v);
  for (size_t k = 0; k < found.size() && ech.rank() < n; ++k) {
    for (const auto& g : gens) {
      Vec w = g.apply(found[k]);
      if (ech.add_dense(w)) found.push_back(std::move(w));
      if (ech.rank() == n) break;
    }
  }
  if (ech.rank() == n) return SubspaceBasis::whole(n, p);
  return SubspaceBasis::span(found, n, p);
}

namespace {

constexpr size_t kMaxKernelPoints = 20000;

Matrix random_combination(const std::vector<Matrix>& pool, size_t n, uint32_t p, std::mt19937_64& rng) {
  Matrix acc(n, n, p);
  std::uniform_int_distribution<uint32_t> coef(0, p - 1);
  for (const auto& m : pool) {
    uint32_t c = coef(rng);
    if (c) acc = acc + m.scaled(c);
  }
  return acc;
}

}  // namespace

IrreducibilityResult module_irreducible(const std::vector<Matrix>& gens, size_t n, uint32_t p, uint64_t seed) {
  IrreducibilityResult res;
  if (n == 0) {
    res.invariant = SubspaceBasis(0, p);
    return res;
  }
  if (n == 1) {
    res.irreducible = true;
    return res;
  }
  std::mt19937_64 rng(seed);
  std::vector<Matrix> pool = gens;
  if (pool.empty()) pool.push_back(Matrix(n, n, p));
  const Matrix id = Matrix::identity(n, p);

  // Search for a singular algebra element of small nullity.
  std::optional<Matrix> best;
  size_t best_nullity = n + 1;
  for (int attempt = 0; attempt < 24 && best_nullity > 1; ++attempt) {
    Matrix a = random_combination(pool, n, p, rng);
    Matrix b = random_combination(pool, n, p, rng);
    Matrix theta = a * b + random_combination(pool, n, p, rng);
    if (attempt % 3 == 2) theta = theta * random_combination(pool, n, p, rng) + a;
    for (uint32_t lam = 0; lam < p; ++lam) {
      Matrix t = lam ? theta - id.scaled(lam) : theta;
      size_t r = rank(t);
      size_t nul = n - r;
      if (nul > 0 && nul < best_nullity) {
        best_nullity = nul;
        best = t;
        if (nul == 1) break;
      }
    }
  }
  if (!best) {
    best = Matrix(n, n, p);
    best_nullity = n;
  }
  double points = (std::pow(static_cast<double>(p), static_cast<double>(best_nullity)) - 1) / (p - 1);
  if (points > static_cast<double>(kMaxKernelPoints))
    throw SearchLimitExceeded("irreducibility test: kernel of the chosen singular element is too large");

  SubspaceBasis ker = nullspace(*best);
  std::optional<SubspaceBasis> witness;
  auto check = [&](const SubspaceBasis& kspace, const std::vector<Matrix>& g) {
    bool proper = false;
    for_each_projective_point(kspace.dim(), p, [&](const Vec& c) {
      Vec v(n, 0);
      for (size_t i = 0; i < c.size(); ++i) axpy(v, c[i], kspace.vectors()[i], p);
      SubspaceBasis s = spin(v, g, p);
      if (s.dim() < n) {
        witness = s;
        proper = true;
        return false;
      }
      return true;
    });
    return proper;
  };
  if (check(ker, gens)) {
    res.invariant = *witness;
    return res;
  }
  std::vector<Matrix> tgens;
  tgens.reserve(gens.size());
  for (const auto& g : gens) tgens.push_back(g.transpose());
  SubspaceBasis tker = nullspace(best->transpose());
  if (check(tker, tgens)) {
    // The annihilator of a proper submodule of the dual is a proper submodule.
    Matrix w = Matrix::from_dense_rows(witness->vectors(), n, p);
    res.invariant = nullspace(w);
    return res;
  }
  res.irreducible = true;
  return res;
}

JordanChevalley jordan_chevalley_matrix(const Matrix& m) {
  const uint32_t p = m.p();
  poly::Poly g = poly::radical(charpoly(m), p);
  poly::Poly dg = poly::derivative(g, p);
  poly::Poly h = poly::degree(g) > 0 ? poly::invmod(dg, g, p) : poly::Poly{};
  Matrix s = m;
  for (int it = 0; it < 64; ++it) {
    Matrix gs = poly_eval(g, s);
    if (gs.is_zero()) break;
    s = s - gs * poly_eval(h, s);
  }
  return {s, m - s};
}

}  // namespace modlie
