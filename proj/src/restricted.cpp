#include "modlie/restricted.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "modlie/errors.hpp"

namespace modlie {

namespace {

Matrix lincomb(const std::vector<Matrix>& mats, const Vec& c, size_t rows, size_t cols, uint32_t p) {
  std::vector<uint64_t> acc(rows * cols, 0);
  for (size_t k = 0; k < mats.size(); ++k) {
    if (!c[k]) continue;
    for (size_t i = 0; i < rows; ++i)
      mats[k].for_row(i, [&](uint32_t j, uint32_t v) {
        uint64_t& a = acc[i * cols + j];
        a = (a + static_cast<uint64_t>(v) * c[k]) % p;
      });
  }
  std::vector<Vec> r(rows, Vec(cols));
  for (size_t i = 0; i < rows; ++i)
    for (size_t j = 0; j < cols; ++j) r[i][j] = static_cast<uint32_t>(acc[i * cols + j]);
  return Matrix::from_dense_rows(r, cols, p);
}

Vec random_in(const SubspaceBasis& S, std::mt19937_64& rng) {
  Vec v(S.ambient(), 0);
  std::uniform_int_distribution<uint32_t> d(0, S.p() - 1);
  for (const Vec& b : S.vectors()) axpy(v, d(rng), b, S.p());
  return v;
}

unsigned stabilizing_exponent(size_t dim, uint32_t p) {
  unsigned e = 0;
  for (uint64_t q = 1; q < dim; q *= p) ++e;
  return std::max(e, 1u);
}

}  // namespace

// ------------------------------------------------------------ p-map

PMap::PMap(const LieAlgebra& L, bool use_realization) : L_(&L) {
  const uint32_t p = L.p();
  if (use_realization && L.realization && !L.realization->empty()) {
    real_ = true;
    const auto& R = *L.realization;
    span_ = std::make_shared<MatrixSpan>(R[0].rows(), R[0].cols(), p);
    for (size_t i = 0; i < R.size(); ++i)
      if (span_->add(R[i])) span_index_.push_back(static_cast<uint32_t>(i));
    if (span_index_.size() != L.dim()) throw PreconditionFailed("realization is not faithful");
    return;
  }
  const size_t n = L.dim();
  span_ = std::make_shared<MatrixSpan>(n, n, p);
  for (size_t i = 0; i < n; ++i)
    if (span_->add(L.ad_basis(i))) span_index_.push_back(static_cast<uint32_t>(i));
  unique_ = span_index_.size() == n;
}

Matrix PMap::op(const Vec& x) const {
  if (!real_) return L_->ad(x);
  const auto& R = *L_->realization;
  return lincomb(R, x, R[0].rows(), R[0].cols(), L_->p());
}

std::optional<Vec> PMap::element_of(const Matrix& m) const {
  auto c = span_->coordinates(m);
  if (!c) return std::nullopt;
  Vec v(L_->dim(), 0);
  for (size_t k = 0; k < c->size(); ++k) v[span_index_[k]] = (*c)[k];
  return v;
}

Vec PMap::operator()(const Vec& x) const {
  auto v = element_of(op(x).pow(L_->p()));
  if (!v) throw NotRestrictable("p-th power of the operator is not in the span");
  return *v;
}

Vec PMap::iterate(const Vec& x, unsigned k) const {
  Vec y = x;
  for (unsigned i = 0; i < k; ++i) y = (*this)(y);
  return y;
}

PPower p_power(const LieAlgebra& L, const Vec& x) {
  PMap pm(L);
  return {pm(x), pm.unique()};
}

bool is_restrictable(const LieAlgebra& L) {
  PMap pm(L, false);
  std::vector<size_t> order(L.dim());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  if (L.grading)
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return (*L.grading)[a] < (*L.grading)[b]; });
  for (size_t i : order)
    if (!pm.element_of(L.ad_basis(i).pow(L.p()))) return false;
  return true;
}

void attach_pmap(LieAlgebra& L) {
  PMap pm(L);
  std::vector<Vec> images;
  for (size_t i = 0; i < L.dim(); ++i) images.push_back(pm(L.basis_vector(i)));
  L.pmap = std::move(images);
}

LieAlgebra adjoint_p_closure(const LieAlgebra& L) {
  const size_t n = L.dim();
  const uint32_t p = L.p();
  MatrixSpan span(n, n, p);
  std::vector<std::string> labels;
  std::vector<std::pair<Matrix, std::string>> queue;
  for (size_t i = 0; i < n; ++i) {
    std::string name = i < L.labels().size() && !L.labels()[i].empty() ? L.labels()[i] : "b" + std::to_string(i);
    if (span.add(L.ad_basis(i))) {
      labels.push_back("ad " + name);
      queue.emplace_back(L.ad_basis(i), "ad " + name);
    }
  }
  for (size_t k = 0; k < queue.size(); ++k) {
    Matrix P = queue[k].first.pow(p);
    if (span.add(P)) {
      std::string name = "(" + queue[k].second + ")^" + std::to_string(p);
      labels.push_back(name);
      queue.emplace_back(P, name);
    }
  }
  LieAlgebra out = from_matrix_basis(span.basis(), labels);
  out.meta = L.meta;
  out.meta["closure_of"] = L.meta.count("family") ? L.meta.at("family") : "algebra";
  return out;
}

LieAlgebra p_envelope(const LieAlgebra& L) {
  if (center(L).dim() != 0) throw NotCentreless("the semisimple p-envelope needs a centerless algebra");
  return adjoint_p_closure(L);
}

JordanParts jordan_decomposition(const LieAlgebra& Lp, const Vec& x) {
  PMap pm(Lp);
  JordanChevalley jc = jordan_chevalley_matrix(pm.op(x));
  auto s = pm.element_of(jc.semisimple);
  if (!s) throw PreconditionFailed("semisimple part is outside the algebra; it is not p-closed");
  return {*s, vsub(x, *s, Lp.p())};
}

std::vector<Vec> toral_elements(const LieAlgebra& Lp, const SubspaceBasis& A) {
  const uint32_t p = Lp.p();
  const auto& vs = A.vectors();
  for (size_t a = 0; a < vs.size(); ++a)
    for (size_t b = a + 1; b < vs.size(); ++b)
      if (!is_zero(Lp.bracket(vs[a], vs[b]))) throw NotAbelian("toral elements need an abelian subalgebra");
  PMap pm(Lp);
  const size_t d = vs.size();
  std::vector<Vec> cols;
  for (size_t k = 0; k < d; ++k) {
    Vec img = pm(vs[k]);
    if (!A.contains(img)) throw PreconditionFailed("subalgebra is not closed under the p-map");
    Vec c = A.coordinates(img);
    c[k] = zsub(c[k], 1, p);
    cols.push_back(c);
  }
  std::vector<Vec> out;
  if (d == 0) return out;
  SubspaceBasis ker = nullspace(Matrix::from_columns(cols, d, p));
  for (const Vec& c : ker.vectors()) {
    Vec v(Lp.dim(), 0);
    for (size_t k = 0; k < d; ++k)
      if (c[k]) axpy(v, c[k], vs[k], p);
    out.push_back(v);
  }
  return out;
}

SubspaceBasis semisimple_torus(const LieAlgebra& Lp, const Vec& x) {
  PMap pm(Lp);
  Vec y = pm.iterate(x, stabilizing_exponent(Lp.dim(), Lp.p()));
  SubspaceBasis T(Lp.dim(), Lp.p());
  while (!is_zero(y) && T.add(y)) y = pm(y);
  return T;
}

// ------------------------------------------------------------ tori

std::optional<size_t> registered_toral_rank(const LieAlgebra& L) {
  auto it = L.meta.find("toral_rank");
  if (it == L.meta.end()) return std::nullopt;
  return static_cast<size_t>(std::stoul(it->second));
}

TorusSearch maximal_torus(const LieAlgebra& Lp, unsigned restarts, uint64_t seed) {
  const uint32_t p = Lp.p();
  const size_t n = Lp.dim();
  PMap pm(Lp);
  const unsigned e = stabilizing_exponent(n, p);
  auto torus_of = [&](const Vec& x) {
    Vec y = pm.iterate(x, e);
    SubspaceBasis T(n, p);
    while (!is_zero(y) && T.add(y)) y = pm(y);
    return T;
  };
  std::mt19937_64 rng(seed);
  TorusSearch best;
  best.torus.space = SubspaceBasis(n, p);
  bool have = false;
  for (unsigned r = 0; r < std::max(1u, restarts); ++r) {
    SubspaceBasis T(n, p);
    for (unsigned fails = 0; fails < 6;) {
      SubspaceBasis C = T.dim() ? centralizer(Lp, T) : SubspaceBasis::whole(n, p);
      SubspaceBasis grown = T.sum(torus_of(random_in(C, rng)));
      if (grown.dim() > T.dim()) {
        T = grown;
        fails = 0;
      } else {
        ++fails;
      }
    }
    if (!have || T.dim() > best.torus.space.dim()) {
      best.torus.space = T;
      have = true;
    }
  }
  const SubspaceBasis& T = best.torus.space;
  best.mt_estimate = T.dim();
  best.torus.toral_basis = toral_elements(Lp, T);
  // Certificate: C(T) nilpotent and every sampled semisimple part stays in T.
  SubspaceBasis C = T.dim() ? centralizer(Lp, T) : SubspaceBasis::whole(n, p);
  bool cert = is_nilpotent_subalgebra(Lp, C);
  if (cert) {
    std::vector<Vec> samples = C.vectors();
    for (int k = 0; k < 8; ++k) samples.push_back(random_in(C, rng));
    for (const Vec& c : samples)
      if (!T.contains(torus_of(c))) {
        cert = false;
        break;
      }
  }
  best.maximal_certified = cert;
  best.known_bound = registered_toral_rank(Lp);
  if (invariant_subspaces(Lp).is_nilpotent) best.known_bound = 0;
  best.exact = best.known_bound && *best.known_bound == best.mt_estimate;
  return best;
}

ToralRank absolute_toral_rank(const LieAlgebra& L, unsigned restarts, uint64_t seed) {
  if (center(L).dim() != 0) throw NotCentreless("absolute toral rank needs a centerless algebra here");
  ToralRank out;
  if (is_restrictable(L)) {
    out.search = maximal_torus(L, restarts, seed);
  } else {
    LieAlgebra Lp = p_envelope(L);
    out.search = maximal_torus(Lp, restarts, seed);
  }
  out.value = out.search.mt_estimate;
  out.exact = out.search.exact;
  return out;
}

ToralRank toral_rank_via_adjoint(const LieAlgebra& L, unsigned restarts, uint64_t seed) {
  LieAlgebra Lp = adjoint_p_closure(L);
  ToralRank out;
  out.search = maximal_torus(Lp, restarts, seed);
  out.value = out.search.mt_estimate;
  out.exact = out.search.exact;
  return out;
}

// ------------------------------------------------------------ roots

const SubspaceBasis* RootDatum::space_of(const Vec& w) const {
  for (size_t k = 0; k < weights.size(); ++k)
    if (weights[k] == w) return &spaces[k];
  return nullptr;
}

RootDatum root_decomposition(const LieAlgebra& Lp, const std::vector<Vec>& toral_basis) {
  RootDatum R;
  R.toral_basis = toral_basis;
  std::vector<Matrix> ops;
  for (const Vec& t : toral_basis) ops.push_back(Lp.ad(t));
  WeightDecomposition wd = weight_decomposition(ops, Lp.dim(), Lp.p());
  if (!wd.complete) throw NotSplit("torus is not split over GF(p)");
  for (auto& ws : wd.spaces) {
    if (std::all_of(ws.weight.begin(), ws.weight.end(), [](uint32_t v) { return v == 0; }))
      R.zero = R.weights.size();
    R.weights.push_back(ws.weight);
    R.spaces.push_back(ws.space);
  }
  if (toral_basis.empty()) {
    R.weights = {Vec{}};
    R.spaces = {SubspaceBasis::whole(Lp.dim(), Lp.p())};
    R.zero = 0;
  }
  return R;
}

bool root_grading_holds(const LieAlgebra& L, const RootDatum& R) {
  const uint32_t p = L.p();
  for (size_t a = 0; a < R.weights.size(); ++a)
    for (size_t b = a; b < R.weights.size(); ++b) {
      Vec sum = vadd(R.weights[a], R.weights[b], p);
      const SubspaceBasis* target = R.space_of(sum);
      SubspaceBasis br = bracket_space(L, R.spaces[a], R.spaces[b]);
      if (br.dim() == 0) continue;
      if (!target || !target->contains(br)) return false;
    }
  return true;
}

LieAlgebra k_section(const LieAlgebra& L, const RootDatum& R, const std::vector<Vec>& roots) {
  const uint32_t p = L.p();
  const size_t t = R.toral_basis.size();
  SubspaceBasis span(t, p);
  for (const Vec& r : roots)
    if (!span.add(r)) throw DependentRoots("section roots must be GF(p)-independent");
  SubspaceBasis sec(L.dim(), p);
  for (size_t a = 0; a < R.weights.size(); ++a)
    if (span.contains(R.weights[a]))
      for (const Vec& v : R.spaces[a].vectors()) sec.add(v);
  LieAlgebra out = subalgebra(L, sec);
  out.meta["section_rank"] = std::to_string(roots.size());
  return out;
}

// ------------------------------------------------------------ Jacobson

JacobsonCheck jacobson_terms(const LieAlgebra& L, const Vec& x, const Vec& y) {
  const uint32_t p = L.p();
  const size_t n = L.dim();
  // (ad(t x + y))^{p-1}(x) as a polynomial in t.
  std::vector<Vec> poly{x};
  for (uint32_t step = 0; step + 1 < p; ++step) {
    std::vector<Vec> next(poly.size() + 1, Vec(n, 0));
    for (size_t k = 0; k < poly.size(); ++k) {
      next[k + 1] = vadd(next[k + 1], L.bracket(x, poly[k]), p);
      next[k] = vadd(next[k], L.bracket(y, poly[k]), p);
    }
    poly = std::move(next);
  }
  JacobsonCheck out;
  for (uint32_t i = 1; i < p; ++i) out.s.push_back(scaled(poly[i - 1], zinv(i, p), p));
  Vec sum(n, 0);
  for (const Vec& s : out.s) sum = vadd(sum, s, p);
  PMap pm(L);
  Matrix X = pm.op(x), Y = pm.op(y);
  out.operator_identity = (X + Y).pow(p) == X.pow(p) + Y.pow(p) + pm.op(sum);
  Vec lhs = pm(vadd(x, y, p));
  Vec rhs = vadd(vadd(pm(x), pm(y), p), sum, p);
  if (pm.unique()) {
    out.pmap_identity = lhs == rhs;
  } else {
    out.pmap_identity = center(L).contains(vsub(lhs, rhs, p));
  }
  return out;
}

// ------------------------------------------------------------ Winter

FieldElement winter_xi(uint32_t a, uint32_t p) {
  FieldPtr F = make_field(p, 1);
  FieldElement theta = artin_schreier_root(FieldElement(F, 1));
  return theta * FieldElement(theta.field(), static_cast<int64_t>(a % p));
}

namespace {

using FEVec = std::vector<FieldElement>;

FEVec apply_prime(const Matrix& M, const FEVec& v, const FieldPtr& F) {
  FEVec out(M.rows(), FieldElement(F));
  for (size_t i = 0; i < M.rows(); ++i)
    M.for_row(i, [&](uint32_t j, uint32_t c) {
      if (!v[j].is_zero()) out[i] += v[j] * FieldElement(F, c);
    });
  return out;
}

size_t fe_rank(std::vector<FEVec> rows) {
  size_t rank = 0;
  const size_t cols = rows.empty() ? 0 : rows[0].size();
  for (size_t c = 0; c < cols && rank < rows.size(); ++c) {
    size_t piv = rank;
    while (piv < rows.size() && rows[piv][c].is_zero()) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    FieldElement inv = rows[rank][c].inv();
    for (size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][c].is_zero()) continue;
      FieldElement f = rows[r][c] * inv;
      for (size_t k = c; k < cols; ++k) rows[r][k] -= f * rows[rank][k];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

WinterData winter_exponential(const LieAlgebra& G, const RootDatum& R, const Vec& x) {
  const uint32_t p = G.p();
  const size_t n = G.dim();
  PMap pm(G);
  WinterData W;
  W.x = x;
  std::optional<size_t> gi;
  for (size_t a = 0; a < R.weights.size(); ++a)
    if (R.zero != a && !is_zero(x) && R.spaces[a].contains(x)) gi = a;
  if (!gi) throw NotRootVector("x is not a root vector for a nonzero root");
  W.gamma = R.weights[*gi];

  SubspaceBasis tspace = SubspaceBasis::span(R.toral_basis, n, p);
  Vec y = x;
  for (unsigned k = 1; k <= n + 1; ++k) {
    y = pm(y);
    if (tspace.contains(y)) {
      W.m = k;
      break;
    }
    if (k == n + 1) throw TorusNotMaximal("no p-power of x reaches the torus");
  }
  W.q = Vec(n, 0);
  {
    Vec z = x;
    for (unsigned i = 1; i < W.m; ++i) {
      z = pm(z);
      W.q = vadd(W.q, z, p);
    }
  }
  // coordinates of x^{[p]^m} on the toral basis
  auto tcoord = solve_linear(Matrix::from_columns(R.toral_basis, n, p), y);
  Vec c = tcoord ? *tcoord : Vec(R.toral_basis.size(), 0);
  std::vector<uint32_t> a_val(R.weights.size(), 0);
  for (size_t a = 0; a < R.weights.size(); ++a) {
    a_val[a] = dot(c, R.weights[a], p);
    if (a_val[a]) W.over_prime_field = false;
  }

  const Matrix adx = G.ad(x), adq = G.ad(W.q);
  // Root-space basis B (columns) and images E(B).
  std::vector<Vec> B;
  std::vector<size_t> owner;
  for (size_t a = 0; a < R.spaces.size(); ++a)
    for (const Vec& v : R.spaces[a].vectors()) {
      B.push_back(v);
      owner.push_back(a);
    }
  Matrix Bm = Matrix::from_columns(B, n, p);
  auto Binv = inverse(Bm);
  if (!Binv) throw PreconditionFailed("root spaces do not span the algebra");

  if (W.over_prime_field) {
    std::vector<Vec> img;
    for (const Vec& v : B) {
      Vec total(n, 0);
      Vec z = v;  // (ad x)^i v
      for (uint32_t i = 0; i < p; ++i) {
        Vec w = z;
        for (uint32_t j = i + 1; j < p; ++j) w = vsub(scaled(w, j, p), adq.apply(w), p);
        total = vsub(total, w, p);
        z = adx.apply(z);
      }
      img.push_back(total);
    }
    W.E = Matrix::from_columns(img, n, p) * *Binv;
    W.invertible = inverse(W.E).has_value();
    // exp ad x, term by term
    Matrix ex = Matrix::identity(n, p), term = Matrix::identity(n, p);
    for (uint32_t i = 1; i < p; ++i) {
      term = (term * adx).scaled(zinv(i, p));
      ex = ex + term;
    }
    W.is_exp_ad = W.E == ex;
    for (const Vec& t : R.toral_basis) {
      Vec tw = t;
      uint32_t g = 0;
      // γ(t) for t = toral basis vector k is gamma[k]
      size_t k = &t - R.toral_basis.data();
      g = W.gamma[k];
      tw = vsub(tw, scaled(vadd(x, W.q, p), g, p), p);
      W.new_toral_basis.push_back(tw);
    }
    W.transformed_weights = R.weights;  // ξ vanishes on every root
    // E(h) is a Cartan subalgebra
    if (R.zero) {
      std::vector<Vec> hx;
      for (const Vec& h : R.spaces[*R.zero].vectors()) hx.push_back(W.E.apply(h));
      SubspaceBasis H = SubspaceBasis::span(hx, n, p);
      W.cartan_validated = is_nilpotent_subalgebra(G, H) && normalizer(G, H) == H;
    }
    // recompute the root datum of t_x and compare with E(g_α)
    std::vector<Matrix> ops;
    for (const Vec& t : W.new_toral_basis) ops.push_back(G.ad(t));
    WeightDecomposition wd = weight_decomposition(ops, n, p);
    bool match = wd.complete && wd.spaces.size() == R.weights.size();
    for (size_t a = 0; a < R.weights.size() && match; ++a) {
      std::vector<Vec> img;
      for (const Vec& v : R.spaces[a].vectors()) img.push_back(W.E.apply(v));
      SubspaceBasis Ea = SubspaceBasis::span(img, n, p);
      bool found = false;
      for (const auto& ws : wd.spaces)
        if (ws.weight == W.transformed_weights[a]) found = ws.space == Ea;
      match = found;
    }
    W.roots_match = match;
  } else {
    // Scalar extension: ξ(a) = a·θ lives in GF(p^p).
    FieldPtr F = winter_xi(1, p).field();
    std::vector<FEVec> cols;
    for (size_t b = 0; b < B.size(); ++b) {
      FieldElement xi = winter_xi(a_val[owner[b]], p);
      FEVec z(n, FieldElement(F));
      for (size_t k = 0; k < n; ++k) z[k] = FieldElement(F, B[b][k]);
      FEVec total(n, FieldElement(F));
      for (uint32_t i = 0; i < p; ++i) {
        FEVec w = z;
        for (uint32_t j = i + 1; j < p; ++j) {
          FieldElement s = xi + FieldElement(F, j);
          FEVec qw = apply_prime(adq, w, F);
          for (size_t k = 0; k < n; ++k) w[k] = s * w[k] - qw[k];
        }
        for (size_t k = 0; k < n; ++k) total[k] -= w[k];
        z = apply_prime(adx, z, F);
      }
      cols.push_back(total);
    }
    // E = [E(B)] B^{-1}
    W.E_extended.assign(n, FEVec(n, FieldElement(F)));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        FieldElement s(F);
        for (size_t b = 0; b < B.size(); ++b) {
          uint32_t bij = Binv->get(b, j);
          if (bij) s += cols[b][i] * FieldElement(F, bij);
        }
        W.E_extended[i][j] = s;
      }
    W.invertible = fe_rank(W.E_extended) == n;
    W.detail = "E computed over " + F->name() + "; Cartan validation needs the extended algebra and was skipped";
  }
  return W;
}

// ------------------------------------------------------------ weight sets

WeightComparison weight_set_compare(const RootDatum& R1, const RootDatum& R2) {
  WeightComparison out;
  auto is_zero_w = [](const Vec& w) { return std::all_of(w.begin(), w.end(), [](uint32_t v) { return v == 0; }); };
  for (const Vec& w : R1.weights) out.zero_in_first |= is_zero_w(w);
  for (const Vec& w : R2.weights) out.zero_in_second |= is_zero_w(w);
  auto full_line = [](const RootDatum& R, uint32_t p) {
    for (const Vec& d : R.weights) {
      if (std::all_of(d.begin(), d.end(), [](uint32_t v) { return v == 0; })) continue;
      bool all = true;
      for (uint32_t c = 2; c < p && all; ++c) all = R.space_of(scaled(d, c, p)) != nullptr;
      if (all) return true;
    }
    return false;
  };
  if (R1.spaces.empty() || R2.spaces.empty()) return out;
  const uint32_t p = R1.spaces[0].p();
  out.full_line_first = full_line(R1, p);
  out.full_line_second = full_line(R2, p);
  if (R1.weights.size() != R2.weights.size()) return out;
  const size_t d1 = R1.toral_basis.size(), d2 = R2.toral_basis.size();
  // basis of the first span chosen among the weights
  SubspaceBasis span1(d1, p), span2(d2, p);
  std::vector<size_t> basis;
  for (size_t a = 0; a < R1.weights.size(); ++a)
    if (span1.add(R1.weights[a])) basis.push_back(a);
  for (const Vec& w : R2.weights) span2.add(w);
  if (span1.dim() != span2.dim()) return out;
  const size_t r = basis.size();
  const size_t N = R2.weights.size();
  if (std::pow(static_cast<double>(N), static_cast<double>(r)) > 2e6) {
    out.checked = false;
    return out;
  }
  std::vector<Vec> bvecs;
  for (size_t k : basis) bvecs.push_back(R1.weights[k]);
  Matrix Bm = Matrix::from_columns(bvecs, d1, p);
  std::vector<Vec> coords;
  for (const Vec& w : R1.weights) coords.push_back(*solve_linear(Bm, w));
  std::vector<size_t> pick(r, 0);
  for (;;) {
    SubspaceBasis img(d2, p);
    bool indep = true;
    for (size_t k = 0; k < r && indep; ++k) indep = img.add(R2.weights[pick[k]]);
    if (indep) {
      bool ok = true;
      for (size_t a = 0; a < R1.weights.size() && ok; ++a) {
        Vec w(d2, 0);
        for (size_t k = 0; k < r; ++k) axpy(w, coords[a][k], R2.weights[pick[k]], p);
        const SubspaceBasis* s = R2.space_of(w);
        ok = s && s->dim() == R1.spaces[a].dim();
      }
      if (ok) {
        out.found = true;
        for (size_t k = 0; k < r; ++k) out.basis_images.emplace_back(R1.weights[basis[k]], R2.weights[pick[k]]);
        return out;
      }
    }
    size_t k = 0;
    for (; k < r; ++k) {
      if (++pick[k] < N) break;
      pick[k] = 0;
    }
    if (k == r) break;
  }
  return out;
}

// ------------------------------------------------------------ K_α

namespace {

// Eigenvalue of ad h on the weight space S, when it has a single one.
std::optional<uint32_t> single_eigenvalue(const LieAlgebra& G, const Vec& h, const SubspaceBasis& S) {
  Matrix M = restricted_action({G.ad(h)}, S)[0];
  const uint32_t p = G.p();
  const size_t d = S.dim();
  for (uint32_t l = 0; l < p; ++l) {
    Matrix N = M - Matrix::identity(d, p).scaled(l);
    if (N.pow(d).is_zero()) return l;
  }
  return std::nullopt;
}

}  // namespace

SubspaceBasis K_alpha(const LieAlgebra& G, const RootDatum& R, const Vec& alpha) {
  const uint32_t p = G.p();
  const SubspaceBasis* Ga = R.space_of(alpha);
  if (!Ga) return SubspaceBasis(G.dim(), p);
  const SubspaceBasis* Gm = R.space_of(scaled(alpha, p - 1, p));
  if (!Gm) return *Ga;
  const size_t d = Ga->dim();
  if (d % p) {
    // α on h is trace/d, which is linear.
    uint32_t dinv = zinv(static_cast<uint32_t>(d % p), p);
    std::vector<Vec> rows;
    for (const Vec& y : Gm->vectors()) {
      Vec row(d);
      for (size_t k = 0; k < d; ++k) {
        Vec h = G.bracket(Ga->vectors()[k], y);
        row[k] = zmul(restricted_action({G.ad(h)}, *Ga)[0].trace(), dinv, p);
      }
      rows.push_back(row);
    }
    SubspaceBasis ker = nullspace(Matrix::from_dense_rows(rows, d, p));
    std::vector<Vec> out;
    for (const Vec& c : ker.vectors()) {
      Vec v(G.dim(), 0);
      for (size_t k = 0; k < d; ++k)
        if (c[k]) axpy(v, c[k], Ga->vectors()[k], p);
      out.push_back(v);
    }
    return SubspaceBasis::span(out, G.dim(), p);
  }
  if (d > 6) throw SearchLimitExceeded("K_alpha: weight space too large for enumeration");
  SubspaceBasis out(G.dim(), p);
  for_each_projective_point(d, p, [&](const Vec& c) {
    Vec x(G.dim(), 0);
    for (size_t k = 0; k < d; ++k)
      if (c[k]) axpy(x, c[k], Ga->vectors()[k], p);
    bool in = true;
    for (const Vec& y : Gm->vectors()) {
      auto l = single_eigenvalue(G, G.bracket(x, y), *Ga);
      if (!l || *l) {
        in = false;
        break;
      }
    }
    if (in) out.add(x);
    return true;
  });
  return out;
}

KPrime K_prime(const LieAlgebra& G, const RootDatum& R, const Vec& alpha) {
  const uint32_t p = G.p();
  std::vector<Vec> seed;
  for (uint32_t i = 1; i < p; ++i) {
    SubspaceBasis k = K_alpha(G, R, scaled(alpha, i, p));
    seed.insert(seed.end(), k.vectors().begin(), k.vectors().end());
  }
  KPrime out;
  out.space = seed.empty() ? SubspaceBasis(G.dim(), p) : closure(G, seed, ClosureMode::subalgebra);
  SubspaceBasis D = bracket_space(G, out.space, out.space);
  // ad D generates a nilpotent associative algebra iff this flag reaches 0
  SubspaceBasis V = SubspaceBasis::whole(G.dim(), p);
  for (size_t step = 0; step <= G.dim(); ++step) {
    if (V.dim() == 0 || D.dim() == 0) {
      out.triangulable = true;
      break;
    }
    std::vector<Vec> img;
    for (const Vec& d : D.vectors()) {
      Matrix ad = G.ad(d);
      for (const Vec& v : V.vectors()) img.push_back(ad.apply(v));
    }
    SubspaceBasis next = SubspaceBasis::span(img, G.dim(), p);
    if (next.dim() == V.dim()) break;
    V = next;
  }
  return out;
}

// ------------------------------------------------------------ sandwiches

bool is_sandwich(const LieAlgebra& L, const Vec& x) {
  Matrix a = L.ad(x);
  return (a * a).is_zero();
}

SandwichReport sandwich_search(const LieAlgebra& L, const RootDatum* R, size_t max_component_dim) {
  const uint32_t p = L.p();
  const size_t n = L.dim();
  SandwichReport rep;
  std::vector<std::pair<std::string, SubspaceBasis>> comps;
  if (R) {
    for (size_t a = 0; a < R->weights.size(); ++a) {
      std::string name = "weight(";
      for (size_t k = 0; k < R->weights[a].size(); ++k) name += (k ? "," : "") + std::to_string(R->weights[a][k]);
      comps.emplace_back(name + ")", R->spaces[a]);
    }
  } else if (L.grading) {
    for (int d : grading_degrees(L)) comps.emplace_back("degree " + std::to_string(d), graded_component(L, d));
  } else {
    comps.emplace_back("whole", SubspaceBasis::whole(n, p));
  }
  rep.span = SubspaceBasis(n, p);
  for (auto& [name, S] : comps) {
    SandwichComponent c{name, S, SubspaceBasis(n, p), false};
    if (S.dim() <= max_component_dim) {
      c.searched = true;
      for_each_projective_point(S.dim(), p, [&](const Vec& coeff) {
        Vec x(n, 0);
        for (size_t k = 0; k < coeff.size(); ++k)
          if (coeff[k]) axpy(x, coeff[k], S.vectors()[k], p);
        if (is_sandwich(L, x)) c.sandwich_span.add(x);
        return true;
      });
      for (const Vec& v : c.sandwich_span.vectors()) rep.span.add(v);
    } else {
      rep.skipped.push_back(name + " (dim " + std::to_string(S.dim()) + ")");
    }
    rep.components.push_back(std::move(c));
  }
  rep.strongly_degenerate = rep.span.dim() > 0;
  rep.within_killing_radical = radical_of_form(killing_form(L)).contains(rep.span);
  return rep;
}

}  // namespace modlie
