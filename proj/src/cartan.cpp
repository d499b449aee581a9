#include "modlie/cartan.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "modlie/errors.hpp"
#include "modlie/restricted.hpp"

namespace modlie {

std::string family_name(CartanFamily f) {
  switch (f) {
    case CartanFamily::W: return "W";
    case CartanFamily::S: return "S";
    case CartanFamily::CS: return "CS";
    case CartanFamily::H: return "H";
    case CartanFamily::CH: return "CH";
    case CartanFamily::K: return "K";
  }
  return "?";
}

std::vector<int> grading_type(CartanFamily f, size_t m) {
  std::vector<int> r(m, 1);
  if (f == CartanFamily::K) r.back() = 2;
  return r;
}

// ------------------------------------------------------------ W(m;n) basis

WittBasis::WittBasis(OPtr O, std::vector<int> r) : O_(std::move(O)), r_(std::move(r)) {
  const size_t m = O_->m();
  if (r_.empty()) r_.assign(m, 1);
  if (r_.size() != m) throw DimensionMismatch("grading type needs one degree per variable");
  for (size_t a = 0; a < O_->dim(); ++a)
    for (size_t i = 0; i < m; ++i) elems_.emplace_back(a, i);
  auto deg = [&](const std::pair<size_t, size_t>& e) { return O_->degree(e.first, r_) - r_[e.second]; };
  std::stable_sort(elems_.begin(), elems_.end(), [&](const auto& x, const auto& y) {
    int dx = deg(x), dy = deg(y);
    if (dx != dy) return dx < dy;
    const Exponent& ax = O_->exponent(x.first);
    const Exponent& ay = O_->exponent(y.first);
    if (ax != ay) return ax < ay;
    return x.second < y.second;
  });
  pos_.assign(O_->dim() * m, 0);
  for (size_t k = 0; k < elems_.size(); ++k) {
    deg_.push_back(deg(elems_[k]));
    pos_[elems_[k].first * m + elems_[k].second] = k;
  }
}

size_t WittBasis::degree_start(int d) const {
  return static_cast<size_t>(std::lower_bound(deg_.begin(), deg_.end(), d) - deg_.begin());
}

namespace {

std::optional<size_t> lowered(const DividedPowers& O, size_t mono, size_t i) {
  Exponent a = O.exponent(mono);
  if (!a[i]) return std::nullopt;
  --a[i];
  return O.index(a);
}

}  // namespace

SparseVec WittBasis::bracket(size_t a, size_t b) const {
  const auto [ma, i] = elems_[a];
  const auto [mb, j] = elems_[b];
  const uint32_t p = O_->p();
  SparseVec out;
  if (auto low = lowered(*O_, mb, i)) {
    auto [idx, c] = O_->mono_mul(ma, *low);
    if (c) out.emplace_back(static_cast<uint32_t>(index(idx, j)), c);
  }
  if (auto low = lowered(*O_, ma, j)) {
    auto [idx, c] = O_->mono_mul(mb, *low);
    if (c) {
      SparseVec t{{static_cast<uint32_t>(index(idx, i)), p - c}};
      std::sort(out.begin(), out.end());
      out = sparse_axpy(out, 1, t, p);
    }
  }
  return out;
}

SpecialDerivation WittBasis::derivation(const Vec& v) const {
  const size_t m = O_->m();
  std::vector<SparseVec> comps(m);
  for (size_t k = 0; k < v.size(); ++k)
    if (v[k]) comps[elems_[k].second].emplace_back(static_cast<uint32_t>(elems_[k].first), v[k]);
  SpecialDerivation D;
  for (size_t i = 0; i < m; ++i) D.f.emplace_back(O_, comps[i]);
  return D;
}

SpecialDerivation WittBasis::derivation(size_t k) const {
  return SpecialDerivation::basis(O_, O_->exponent(elems_[k].first), elems_[k].second);
}

Vec WittBasis::coordinates(const SpecialDerivation& D) const {
  Vec v(dim(), 0);
  for (size_t i = 0; i < D.f.size(); ++i)
    for (auto [mono, c] : D.f[i].terms()) v[index(mono, i)] = c;
  return v;
}

std::string WittBasis::label(size_t k) const {
  std::ostringstream os;
  const Exponent& a = O_->exponent(elems_[k].first);
  if (std::any_of(a.begin(), a.end(), [](uint32_t e) { return e != 0; })) {
    os << "x^(";
    for (size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << a[i];
    os << ")";
  }
  os << "d" << elems_[k].second + 1;
  return os.str();
}

namespace {

std::string n_string(const std::vector<unsigned>& n) {
  std::string s;
  for (size_t i = 0; i < n.size(); ++i) s += (i ? "," : "") + std::to_string(n[i]);
  return s;
}

std::string r_string(const std::vector<int>& r) {
  std::string s;
  for (size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + std::to_string(r[i]);
  return s;
}

Filtration suffix_filtration(const std::vector<int>& degree, uint32_t p) {
  // Basis sorted by degree: L_(i) is spanned by a suffix of the basis.
  const size_t n = degree.size();
  Filtration f;
  if (n == 0) {
    f.spaces = {SubspaceBasis(0, p)};
    return f;
  }
  f.lo = degree.front();
  for (int i = degree.front(); i <= degree.back() + 1; ++i) {
    std::vector<Vec> vs;
    for (size_t k = 0; k < n; ++k)
      if (degree[k] >= i) vs.push_back(unit_vector(n, k));
    f.spaces.push_back(SubspaceBasis::span(vs, n, p));
  }
  return f;
}

}  // namespace

LieAlgebra build_witt(size_t m, std::vector<unsigned> n, uint32_t p, std::vector<int> r) {
  if (n.size() != m) throw DimensionMismatch("n needs m entries");
  OPtr O = make_divided_powers(n, p);
  WittBasis WB(O, r);
  const size_t dim = WB.dim();
  std::vector<BracketEntry> entries;
  std::vector<std::string> labels;
  for (size_t a = 0; a < dim; ++a) {
    labels.push_back(WB.label(a));
    for (size_t b = a + 1; b < dim; ++b) {
      SparseVec v = WB.bracket(a, b);
      if (!v.empty()) entries.push_back({static_cast<uint32_t>(a), static_cast<uint32_t>(b), std::move(v)});
    }
  }
  LieAlgebra L = LieAlgebra::from_structure_constants(dim, p, entries, labels,
                                                      dim <= 150 ? Validation::full : Validation::spot_check);
  std::vector<int> deg(dim);
  for (size_t k = 0; k < dim; ++k) deg[k] = WB.degree(k);
  L.grading = deg;
  L.filtration = suffix_filtration(deg, p);
  L.meta["family"] = "W";
  L.meta["m"] = std::to_string(m);
  L.meta["n"] = n_string(n);
  L.meta["p"] = std::to_string(p);
  L.meta["grading_type"] = r_string(WB.r());
  if (p < 5) L.meta["warning"] = "characteristic below 5";
  if (std::all_of(n.begin(), n.end(), [](unsigned k) { return k == 1; })) L.meta["toral_rank"] = std::to_string(m);
  return L;
}

OPtr divided_powers_of(const LieAlgebra& L) {
  const LieAlgebra& W = L.ambient ? *L.ambient : L;
  if (!W.meta.count("family") || W.meta.at("family") != "W") throw PreconditionFailed("not built inside W(m;n)");
  std::vector<unsigned> n;
  std::stringstream ss(W.meta.at("n"));
  for (std::string tok; std::getline(ss, tok, ',');) n.push_back(static_cast<unsigned>(std::stoul(tok)));
  return make_divided_powers(n, W.p());
}

// ------------------------------------------------------------ forms

DifferentialForm volume_form(const OPtr& O) {
  std::vector<size_t> idx(O->m());
  std::iota(idx.begin(), idx.end(), size_t{0});
  return DifferentialForm::dx(O, idx);
}

DifferentialForm hamiltonian_form(const OPtr& O) {
  const size_t m = O->m();
  if (m % 2) throw WrongDegree("the Hamiltonian form needs an even number of variables");
  DifferentialForm w(O, 2);
  for (size_t i = 0; i < m / 2; ++i) w = w + wedge(DifferentialForm::dx(O, i), DifferentialForm::dx(O, i + m / 2));
  return w;
}

DifferentialForm contact_form(const OPtr& O) {
  const size_t m = O->m();
  if (m % 2 == 0 || m < 3) throw WrongDegree("the contact form needs an odd number m ≥ 3 of variables");
  const size_t r = m / 2;
  DifferentialForm w = DifferentialForm::dx(O, m - 1);
  for (size_t i = 0; i < r; ++i) {
    w = w + DifferentialForm::dx(O, i).times(DPElement::variable(O, i + r));
    w = w - DifferentialForm::dx(O, i + r).times(DPElement::variable(O, i));
  }
  return w;
}

namespace {

// Coordinates of a form: mask * dim O + monomial.
SparseVec form_vector(const DifferentialForm& w) {
  const size_t d = w.parent()->dim();
  SparseVec v;
  for (auto& [mask, f] : w.coefficients())
    for (auto [mono, c] : f.terms()) v.emplace_back(static_cast<uint32_t>(mask * d + mono), c);
  std::sort(v.begin(), v.end());
  return v;
}

CartanFamily family_of(unsigned degree, size_t m, FormMode mode) {
  if (degree == 1) return CartanFamily::K;
  if (degree == 2) return mode == FormMode::annihilate ? CartanFamily::H : CartanFamily::CH;
  (void)m;
  return mode == FormMode::annihilate ? CartanFamily::S : CartanFamily::CS;
}

bool homogeneous(const Vec& v, const std::vector<int>& deg, int* d) {
  bool seen = false;
  for (size_t k = 0; k < v.size(); ++k) {
    if (!v[k]) continue;
    if (!seen) {
      *d = deg[k];
      seen = true;
    } else if (deg[k] != *d) {
      return false;
    }
  }
  return seen;
}

}  // namespace

LieAlgebra build_from_form(const DifferentialForm& w, FormMode mode) { return build_from_form(TwistedForm::plain(w), mode); }

LieAlgebra build_from_form(const TwistedForm& tw, FormMode mode) {
  const DifferentialForm& w = tw.base;
  const OPtr& O = w.parent();
  if (!O) throw WrongDegree("empty form");
  const size_t m = O->m();
  const uint32_t p = O->p();
  const unsigned deg = w.degree();
  if (deg == 1) {
    if (mode != FormMode::scale_by_O) throw WrongDegree("1-forms define contact algebras (scale_by_O)");
  } else if (deg == 2 || deg == m) {
    if (mode == FormMode::scale_by_O) throw WrongDegree("scale_by_O needs a 1-form");
  } else {
    throw WrongDegree("forms of degree 1, 2 or m define Cartan-type algebras");
  }
  bool nondeg = false;
  try {
    nondeg = nondegenerate(tw);
  } catch (const NotClosed&) {
    throw DegenerateForm("2-form is not closed");
  }
  if (!nondeg) throw DegenerateForm("form is degenerate at the origin");

  const CartanFamily fam = family_of(deg, m, mode);
  const std::vector<int> r = grading_type(fam, m);
  auto W = std::make_shared<LieAlgebra>(build_witt(m, O->n(), p, r));
  WittBasis WB(O, r);
  const size_t N = WB.dim();

  // Columns: the stripped action of each basis derivation, then the extra
  // unknowns of the scaling modes.
  std::vector<SparseVec> cols;
  cols.reserve(N + O->dim());
  for (size_t k = 0; k < N; ++k) cols.push_back(form_vector(tw.action_stripped(WB.derivation(k))));
  if (mode == FormMode::scale_by_F) {
    cols.push_back(form_vector(w.scaled(p - 1)));
  } else if (mode == FormMode::scale_by_O) {
    for (size_t mono = 0; mono < O->dim(); ++mono)
      cols.push_back(form_vector(w.times(DPElement(O, SparseVec{{static_cast<uint32_t>(mono), p - 1}}))));
  }
  const size_t unknowns = cols.size();
  std::map<uint32_t, SparseVec> rows;
  for (size_t c = 0; c < unknowns; ++c)
    for (auto [row, v] : cols[c]) rows[row].emplace_back(static_cast<uint32_t>(c), v);
  SparseEchelon ech(unknowns, p);
  for (auto& [row, v] : rows) ech.add(v);
  std::vector<Vec> sol;
  for (Vec& v : ech.nullspace()) {
    v.resize(N);
    sol.push_back(std::move(v));
  }
  SubspaceBasis S = SubspaceBasis::span(sol, N, p);

  std::vector<std::string> labels;
  for (uint32_t piv : S.pivots()) labels.push_back(W->labels()[piv]);
  LieAlgebra out = subalgebra(*W, S, labels);
  out.ambient = W;
  out.embedding = S.vectors();

  std::vector<int> degs;
  bool graded = true;
  for (const Vec& v : S.vectors()) {
    int d = 0;
    if (!homogeneous(v, *W->grading, &d)) graded = false;
    degs.push_back(d);
  }
  if (graded) out.grading = degs;
  // L ∩ W_(i): the basis vectors whose leading W index has degree ≥ i.
  std::vector<int> lead;
  for (uint32_t piv : S.pivots()) lead.push_back(WB.degree(piv));
  out.filtration = suffix_filtration(lead, p);
  out.meta["family"] = family_name(fam);
  out.meta["m"] = std::to_string(m);
  out.meta["n"] = n_string(O->n());
  out.meta["p"] = std::to_string(p);
  out.meta["grading_type"] = r_string(r);
  out.meta["form"] = (tw.twisted() ? "(exp " + tw.u.to_string() + ") " : std::string()) + w.to_string();
  if (p < 5) out.meta["warning"] = "characteristic below 5";
  return out;
}

LieAlgebra build_cartan(CartanFamily f, size_t m, std::vector<unsigned> n, uint32_t p) {
  if (f == CartanFamily::W) return build_witt(m, std::move(n), p);
  if (n.size() != m) throw DimensionMismatch("n needs m entries");
  OPtr O = make_divided_powers(std::move(n), p);
  switch (f) {
    case CartanFamily::S:
    case CartanFamily::CS:
      if (m < 3) throw WrongDegree("S(m;n) needs m ≥ 3");
      return build_from_form(volume_form(O), f == CartanFamily::S ? FormMode::annihilate : FormMode::scale_by_F);
    case CartanFamily::H:
    case CartanFamily::CH:
      return build_from_form(hamiltonian_form(O), f == CartanFamily::H ? FormMode::annihilate : FormMode::scale_by_F);
    default: {
      LieAlgebra L = build_from_form(contact_form(O), FormMode::scale_by_O);
      bool restricted_type = std::all_of(O->n().begin(), O->n().end(), [](unsigned k) { return k == 1; });
      if (restricted_type && (m + 3) % p != 0) L.meta["toral_rank"] = std::to_string((m - 1) / 2 + 1);
      return L;
    }
  }
}

// ------------------------------------------------------------ subalgebras

LieAlgebra structured_subalgebra(const LieAlgebra& L, const SubspaceBasis& S) {
  std::vector<std::string> labels;
  for (uint32_t piv : S.pivots()) labels.push_back(piv < L.labels().size() ? L.labels()[piv] : "");
  LieAlgebra out = subalgebra(L, S, labels);
  if (L.ambient) {
    out.ambient = L.ambient;
    out.embedding.clear();
    for (const Vec& v : S.vectors()) {
      Vec w(L.ambient->dim(), 0);
      for (size_t k = 0; k < v.size(); ++k)
        if (v[k]) axpy(w, v[k], L.embedding[k], L.p());
      out.embedding.push_back(std::move(w));
    }
  } else {
    out.ambient = std::make_shared<LieAlgebra>(L);
    out.embedding = S.vectors();
  }
  if (L.grading) {
    std::vector<int> degs;
    bool graded = true;
    for (const Vec& v : S.vectors()) {
      int d = 0;
      if (!homogeneous(v, *L.grading, &d)) graded = false;
      degs.push_back(d);
    }
    if (graded) out.grading = degs;
  }
  if (L.filtration) {
    Filtration f;
    f.lo = L.filtration->lo;
    for (const SubspaceBasis& Li : L.filtration->spaces) {
      SubspaceBasis inter = S.intersect(Li);
      std::vector<Vec> coords;
      for (const Vec& v : inter.vectors()) coords.push_back(S.coordinates(v));
      f.spaces.push_back(SubspaceBasis::span(coords, S.dim(), L.p()));
    }
    // Trim repeated whole spaces at the top and repeated zero spaces at the end.
    while (f.spaces.size() > 1 && f.spaces[1].dim() == S.dim()) {
      f.spaces.erase(f.spaces.begin());
      ++f.lo;
    }
    while (f.spaces.size() > 1 && f.spaces[f.spaces.size() - 2].dim() == 0) f.spaces.pop_back();
    out.filtration = f;
  }
  out.meta = L.meta;
  return out;
}

std::vector<LieAlgebra> derived_to_stability(const LieAlgebra& L) {
  std::vector<LieAlgebra> chain{L};
  for (;;) {
    const LieAlgebra& cur = chain.back();
    SubspaceBasis d = derived_algebra(cur);
    if (d.dim() == cur.dim()) break;
    chain.push_back(structured_subalgebra(cur, d));
    if (d.dim() == 0) break;
  }
  return chain;
}

MaximalSubalgebraReport standard_maximal_subalgebra(const LieAlgebra& L, uint64_t seed) {
  if (!L.filtration) throw PreconditionFailed("algebra carries no natural filtration");
  MaximalSubalgebraReport rep;
  rep.space = L.filtration->at(0);
  rep.maximal = is_maximal_subalgebra(L, rep.space, &rep.certified, seed);
  return rep;
}

// ------------------------------------------------------------ normal forms

Matrix hamiltonian_block_matrix(const HamiltonianBlock& b, bool upper_corner_only, uint32_t p) {
  const size_t r = b.r;
  Matrix X(r, r, p);
  std::vector<Vec> rows(r, Vec(r, 0));
  switch (b.kind) {
    case HamiltonianBlock::Kind::zero:
      break;
    case HamiltonianBlock::Kind::jordan_nilpotent:
      for (size_t k = 0; k + 1 < r; ++k) rows[k][k + 1] = 1;
      break;
    case HamiltonianBlock::Kind::cyclic:
      for (size_t k = 0; k + 1 < r; ++k) rows[k][k + 1] = 1;
      rows[r - 1][0] = 1;
      break;
    case HamiltonianBlock::Kind::block_cyclic: {
      const size_t d = b.d, s = b.s;
      for (size_t blk = 0; blk + 1 < d; ++blk)
        for (size_t t = 0; t < s; ++t) rows[blk * s + t][(blk + 1) * s + t] = 1;
      // J_s(lambda) in the lower-left block
      for (size_t t = 0; t < s; ++t) {
        rows[(d - 1) * s + t][t] = b.lambda % p;
        if (t + 1 < s) rows[(d - 1) * s + t][t + 1] = 1;
      }
      break;
    }
  }
  X = Matrix::from_dense_rows(rows, r, p);
  if (upper_corner_only) return X;
  std::vector<Vec> full(2 * r, Vec(2 * r, 0));
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < r; ++j) {
      full[i][r + j] = X.get(i, j);
      full[r + i][j] = zneg(X.get(j, i), p);
    }
  return Matrix::from_dense_rows(full, 2 * r, p);
}

namespace {

void check_pairs(const std::vector<std::pair<size_t, size_t>>& pairs, size_t m, std::optional<size_t> single) {
  std::vector<int> seen(m, 0);
  auto mark = [&](size_t i) {
    if (i >= m) throw InvalidDecomposition("index out of range");
    if (seen[i]++) throw InvalidDecomposition("index used twice");
  };
  if (single) mark(*single);
  for (auto [a, b] : pairs) {
    if (a >= b) throw InvalidDecomposition("pairs must satisfy i_k < i'_k");
    mark(a);
    mark(b);
  }
  for (size_t i = 0; i < m; ++i)
    if (!seen[i]) throw InvalidDecomposition("decomposition does not cover every index");
}

}  // namespace

TwistedForm normal_form(const NormalFormSpec& spec, size_t m, std::vector<unsigned> n, uint32_t p) {
  if (n.size() != m) throw DimensionMismatch("n needs m entries");
  OPtr O = make_divided_powers(n, p);
  TwistedForm tw;
  switch (spec.family) {
    case NormalFormFamily::volume_exp_i:
      if (m < 3) throw InvalidDecomposition("volume forms need m ≥ 3");
      if (spec.i >= m) throw InvalidDecomposition("variable index out of range");
      tw = {DPElement::variable(O, spec.i), volume_form(O)};
      break;
    case NormalFormFamily::volume_delta: {
      if (m < 3) throw InvalidDecomposition("volume forms need m ≥ 3");
      DPElement f = DPElement::constant(O, 1) - DPElement::monomial(O, O->top());
      tw = TwistedForm::plain(volume_form(O).times(f));
      break;
    }
    case NormalFormFamily::contact_I: {
      if (m % 2 == 0) throw InvalidDecomposition("contact decompositions need odd m");
      check_pairs(spec.pairs, m, spec.i);
      DifferentialForm w = DifferentialForm::dx(O, spec.i);
      for (auto [a, b] : spec.pairs) w = w + DifferentialForm::dx(O, b).times(DPElement::variable(O, a));
      tw = TwistedForm::plain(w);
      break;
    }
    case NormalFormFamily::hamiltonian_exp_iI: {
      if (m % 2) throw InvalidDecomposition("Hamiltonian decompositions need even m");
      if (spec.i >= m) throw InvalidDecomposition("variable index out of range");
      check_pairs(spec.pairs, m, std::nullopt);
      // d((exp x_i) eta) = (exp x_i)(dx_i ∧ eta + d eta)
      DifferentialForm eta(O, 1);
      for (auto [a, b] : spec.pairs) eta = eta + DifferentialForm::dx(O, b).times(DPElement::variable(O, a));
      DPElement u = DPElement::variable(O, spec.i);
      tw = {u, wedge(exterior_d(u), eta) + exterior_d(eta)};
      break;
    }
    case NormalFormFamily::hamiltonian_AB: {
      size_t total = 0;
      for (const auto& b : spec.blocks) {
        if (b.r == 0) throw BadBlockShape("empty block");
        if (b.kind == HamiltonianBlock::Kind::block_cyclic && (b.d * b.s != b.r || b.d == 0 || b.lambda % p == 0))
          throw BadBlockShape("C_{d,s}(lambda) needs r = d*s and lambda ≠ 0");
        total += 2 * b.r;
      }
      if (total != m || m < 2) throw BadBlockShape("block orders must add up to m");
      // a_ij + b_ij x_i^(top) x_j^(top) on dx_i ∧ dx_j, i < j
      DifferentialForm w(O, 2);
      size_t off = 0;
      for (const auto& b : spec.blocks) {
        Matrix B = hamiltonian_block_matrix(b, false, p);
        for (size_t i = 0; i < 2 * b.r; ++i)
          for (size_t j = i + 1; j < 2 * b.r; ++j) {
            uint32_t a = (j == i + b.r) ? 1 : 0;
            uint32_t bij = B.get(i, j);
            if (!a && !bij) continue;
            size_t gi = off + i, gj = off + j;
            Exponent e(m, 0);
            e[gi] = O->bound(gi) - 1;
            e[gj] = O->bound(gj) - 1;
            DPElement coef = DPElement::constant(O, a) + DPElement::monomial(O, e, bij);
            w = w + wedge(DifferentialForm::dx(O, gi), DifferentialForm::dx(O, gj)).times(coef);
          }
        off += 2 * b.r;
      }
      tw = TwistedForm::plain(w);
      break;
    }
  }
  bool ok = false;
  try {
    ok = nondegenerate(tw);
  } catch (const NotClosed&) {
    ok = false;
  }
  if (!ok) throw DegenerateForm("normal form failed the nondegeneracy check");
  return tw;
}

// ------------------------------------------------------------ restrictability

bool form_has_coefficients_in_O(const TwistedForm& w) { return !w.twisted(); }

bool is_exact_form(const TwistedForm& tw) {
  if (tw.twisted()) return false;
  const DifferentialForm& w = tw.base;
  const OPtr& O = w.parent();
  const size_t m = O->m();
  if (w.degree() == 0) return w.is_zero();
  const size_t cols = (size_t{1} << m) * O->dim();
  SparseEchelon ech(cols, O->p());
  for (uint32_t mask = 0; mask < (1u << m); ++mask) {
    if (static_cast<unsigned>(std::popcount(mask)) != w.degree() - 1) continue;
    for (size_t mono = 0; mono < O->dim(); ++mono) {
      DifferentialForm eta(O, w.degree() - 1);
      eta.add_term(mask, DPElement(O, SparseVec{{static_cast<uint32_t>(mono), 1}}));
      ech.add(form_vector(exterior_d(eta)));
    }
  }
  return ech.contains(form_vector(w));
}

RestrictabilityProfile restrictability_profile(const LieAlgebra& L, const TwistedForm& w, FormMode mode) {
  RestrictabilityProfile rep;
  const OPtr& O = w.base.parent();
  rep.n_is_one = std::all_of(O->n().begin(), O->n().end(), [](unsigned k) { return k == 1; });
  rep.form_in_omega = form_has_coefficients_in_O(w);
  rep.form_exact = is_exact_form(w);
  std::vector<LieAlgebra> chain{L};
  for (int k = 0; k < 2; ++k) {
    SubspaceBasis d = derived_algebra(chain.back());
    chain.push_back(d.dim() == chain.back().dim() ? chain.back() : subalgebra(chain.back(), d));
  }
  for (const LieAlgebra& A : chain) {
    rep.dims.push_back(A.dim());
    rep.restrictable.push_back(is_restrictable(A));
  }
  rep.predicted.assign(3, std::nullopt);
  if (mode == FormMode::annihilate) {
    rep.predicted[0] = rep.n_is_one && rep.form_in_omega;
    rep.predicted[1] = rep.n_is_one && rep.form_exact;
    if (w.base.degree() == 2 && w.base.degree() != O->m()) rep.predicted[2] = rep.n_is_one && rep.form_exact;
  } else {
    rep.predicted[0] = rep.n_is_one;
    if (mode == FormMode::scale_by_O) rep.predicted[1] = rep.n_is_one;
  }
  // A term equal to its predecessor inherits the prediction.
  for (size_t k = 1; k < 3; ++k)
    if (!rep.predicted[k] && rep.dims[k] == rep.dims[k - 1]) rep.predicted[k] = rep.predicted[k - 1];
  rep.consistent = true;
  for (size_t k = 0; k < 3; ++k)
    if (rep.predicted[k] && *rep.predicted[k] != rep.restrictable[k]) rep.consistent = false;
  return rep;
}

// ------------------------------------------------------------ W(1;1) and F[x]/(x^p)

namespace {

using TruncPoly = std::vector<uint32_t>;  // coefficients of 1, x, ..., x^{p-1}

TruncPoly tp_mul(const TruncPoly& a, const TruncPoly& b, uint32_t p) {
  TruncPoly c(p, 0);
  for (uint32_t i = 0; i < p; ++i)
    for (uint32_t j = 0; i + j < p; ++j) c[i + j] = zadd(c[i + j], zmul(a[i], b[j], p), p);
  return c;
}

TruncPoly tp_deriv(const TruncPoly& a, uint32_t p) {
  TruncPoly d(p, 0);
  for (uint32_t i = 1; i < p; ++i) d[i - 1] = zmul(a[i], i % p, p);
  return d;
}

TruncPoly tp_bracket(const TruncPoly& f, const TruncPoly& g, uint32_t p) {
  TruncPoly a = tp_mul(f, tp_deriv(g, p), p), b = tp_mul(g, tp_deriv(f, p), p);
  for (uint32_t i = 0; i < p; ++i) a[i] = zsub(a[i], b[i], p);
  return a;
}

TruncPoly tp_pow(const TruncPoly& f, unsigned e, uint32_t p) {
  TruncPoly r(p, 0);
  r[0] = 1;
  for (unsigned k = 0; k < e; ++k) r = tp_mul(r, f, p);
  return r;
}

}  // namespace

WittPolynomialCheck witt_polynomial_check(uint32_t p) {
  WittPolynomialCheck out;
  LieAlgebra W = build_witt(1, {1}, p);
  // W basis k = x^(k) d, degree k-1; e_i ↦ (i+1)! x^(i+1) d.
  std::vector<uint32_t> scale(p);
  for (uint32_t k = 0; k < p; ++k) {
    uint32_t f = 1;
    for (uint32_t t = 2; t <= k; ++t) f = zmul(f, t, p);
    scale[k] = f;
  }
  auto mono = [&](uint32_t k) {
    TruncPoly t(p, 0);
    t[k] = 1;
    return t;
  };
  bool ok = true;
  for (uint32_t a = 0; a < p && ok; ++a)
    for (uint32_t b = 0; b < p && ok; ++b) {
      // [e_{a-1}, e_{b-1}] in W, rewritten in the e-basis
      Vec x = unit_vector(p, a), y = unit_vector(p, b);
      x[a] = scale[a];
      y[b] = scale[b];
      Vec v = W.bracket(x, y);
      TruncPoly viaW(p, 0);
      for (uint32_t k = 0; k < p; ++k)
        if (v[k]) viaW[k] = zmul(v[k], zinv(scale[k], p), p);
      if (viaW != tp_bracket(mono(a), mono(b), p)) {
        ok = false;
        out.detail = "mismatch at e_" + std::to_string(int(a) - 1) + ", e_" + std::to_string(int(b) - 1);
      }
    }
  out.e_table_matches = ok;
  TruncPoly one_plus_x(p, 0);
  one_plus_x[0] = one_plus_x[1] = 1;
  std::vector<TruncPoly> u(p);
  for (uint32_t i = 0; i < p; ++i) u[i] = tp_pow(one_plus_x, i + 1, p);
  bool uok = true;
  for (uint32_t i = 0; i < p && uok; ++i)
    for (uint32_t j = 0; j < p && uok; ++j) {
      TruncPoly rhs = u[(i + j) % p];
      uint32_t c = zsub(j, i, p);
      for (auto& t : rhs) t = zmul(t, c, p);
      if (tp_bracket(u[i], u[j], p) != rhs) {
        uok = false;
        out.detail += (out.detail.empty() ? "" : "; ") + std::string("u relation fails at ") + std::to_string(i) +
                      "," + std::to_string(j);
      }
    }
  out.u_relation_holds = uok;
  return out;
}

}  // namespace modlie
