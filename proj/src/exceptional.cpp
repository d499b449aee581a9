#include "modlie/exceptional.hpp"

#include <algorithm>
#include <boost/rational.hpp>
#include <functional>
#include <map>
#include <numeric>

#include "modlie/errors.hpp"
#include "modlie/restricted.hpp"

namespace modlie {

namespace {

uint32_t mod_p(long long v, uint32_t p) {
  long long r = v % static_cast<long long>(p);
  return static_cast<uint32_t>(r < 0 ? r + p : r);
}

DPElement dp_from_coords(const OPtr& O, const Vec& v, size_t offset) {
  SparseVec t;
  for (size_t k = 0; k < O->dim(); ++k)
    if (v[offset + k]) t.push_back({static_cast<uint32_t>(k), v[offset + k]});
  return DPElement(O, t);
}

void write_dp(Vec& out, const DPElement& f, size_t offset) {
  for (auto [k, c] : f.terms()) out[offset + k] = c;
}

void write_derivation(Vec& out, const WittBasis& WB, const SpecialDerivation& D, size_t offset) {
  Vec c = WB.coordinates(D);
  for (size_t k = 0; k < c.size(); ++k) out[offset + k] = c[k];
}

SpecialDerivation derivation_from_coords(const WittBasis& WB, const Vec& v, size_t offset) {
  Vec c(v.begin() + static_cast<long>(offset), v.begin() + static_cast<long>(offset + WB.dim()));
  return WB.derivation(c);
}

// (ad x restricted to the span of D) generates a nilpotent associative
// algebra: the images D·D·…·L shrink to zero.
bool acts_nilpotently(const LieAlgebra& L, const SubspaceBasis& D) {
  SubspaceBasis V = SubspaceBasis::whole(L.dim(), L.p());
  std::vector<Matrix> ads;
  for (const Vec& d : D.vectors()) ads.push_back(L.ad(d));
  for (size_t step = 0; step <= L.dim(); ++step) {
    if (V.dim() == 0 || ads.empty()) return true;
    std::vector<Vec> img;
    for (const Matrix& a : ads)
      for (const Vec& v : V.vectors()) img.push_back(a.apply(v));
    SubspaceBasis next = SubspaceBasis::span(img, L.dim(), L.p());
    if (next.dim() == V.dim()) return false;
    V = next;
  }
  return V.dim() == 0;
}

OPtr melikian_divided_powers(const LieAlgebra& M) {
  if (!M.meta.count("family") || M.meta.at("family") != "Melikian")
    throw PreconditionFailed("not a Melikian algebra from build_melikian");
  return make_divided_powers({static_cast<unsigned>(std::stoul(M.meta.at("m"))),
                              static_cast<unsigned>(std::stoul(M.meta.at("n")))},
                             M.p());
}

}  // namespace

// ---------------------------------------------------------------- Melikian

MelikianElement MelikianElement::zero(const OPtr& O) {
  return {SpecialDerivation::zero(O), DPElement(O), SpecialDerivation::zero(O)};
}

SpecialDerivation hamiltonian_derivation(const DPElement& h) {
  return SpecialDerivation{{-partial_derivative(1, h), partial_derivative(0, h)}};
}

MelikianElement melikian_bracket(const MelikianElement& a, const MelikianElement& b) {
  const OPtr& O = a.f.parent();
  const DPElement da = divergence(a.D), db = divergence(b.D);
  MelikianElement out = MelikianElement::zero(O);
  // W: [D,E] and [f,Ẽ] = fE
  out.D = bracket(a.D, b.D) + b.E.times(a.f) - a.E.times(b.f);
  // O: [D,f] = D(f) − 2div(D)f and [f1∂̃1+f2∂̃2, g1∂̃1+g2∂̃2] = f1g2 − f2g1
  out.f = a.D.apply(b.f) - (da * b.f).scaled(2) - b.D.apply(a.f) + (db * a.f).scaled(2) +
          a.E.f[0] * b.E.f[1] - a.E.f[1] * b.E.f[0];
  // W̃: [D,Ẽ] = [D,E]~ + 2div(D)Ẽ and [f,g] = 2(f𝒟_g − g𝒟_f)~
  out.E = bracket(a.D, b.E) + b.E.times(da).scaled(2) - bracket(b.D, a.E) - a.E.times(db).scaled(2) +
          (hamiltonian_derivation(b.f).times(a.f) - hamiltonian_derivation(a.f).times(b.f)).scaled(2);
  return out;
}

LieAlgebra build_melikian(unsigned m, unsigned n, uint32_t p) {
  if (p != 5) throw WrongCharacteristic("Melikian algebras exist in characteristic 5 only");
  OPtr O = make_divided_powers({m, n}, p);
  WittBasis WB(O);
  const size_t w = WB.dim(), o = O->dim(), dim = 2 * w + o;

  auto element = [&](size_t k) {
    MelikianElement x = MelikianElement::zero(O);
    if (k < w) x.D = WB.derivation(k);
    else if (k < w + o) x.f = DPElement::monomial(O, O->exponent(k - w));
    else x.E = WB.derivation(k - w - o);
    return x;
  };
  std::vector<MelikianElement> basis;
  for (size_t k = 0; k < dim; ++k) basis.push_back(element(k));

  auto coords = [&](const MelikianElement& x) {
    Vec v(dim, 0);
    write_derivation(v, WB, x.D, 0);
    write_dp(v, x.f, w);
    write_derivation(v, WB, x.E, w + o);
    return v;
  };

  std::vector<BracketEntry> entries;
  std::vector<std::string> labels;
  for (size_t k = 0; k < dim; ++k) {
    if (k < w) labels.push_back(WB.label(k));
    else if (k < w + o) labels.push_back(DPElement::monomial(O, O->exponent(k - w)).to_string());
    else labels.push_back("~" + WB.label(k - w - o));
  }
  for (size_t a = 0; a < dim; ++a)
    for (size_t b = a + 1; b < dim; ++b) {
      SparseVec v = to_sparse(coords(melikian_bracket(basis[a], basis[b])));
      if (!v.empty()) entries.push_back({static_cast<uint32_t>(a), static_cast<uint32_t>(b), std::move(v)});
    }
  LieAlgebra L = LieAlgebra::from_structure_constants(dim, p, entries, labels,
                                                      dim <= 150 ? Validation::full : Validation::spot_check);

  std::vector<int> deg(dim), z3(dim);
  for (size_t k = 0; k < dim; ++k) {
    if (k < w) deg[k] = 3 * WB.degree(k), z3[k] = 0;
    else if (k < w + o) deg[k] = 3 * O->degree(k - w) - 2, z3[k] = 1;
    else deg[k] = 3 * WB.degree(k - w - o) + 2, z3[k] = 2;
  }
  L.grading = deg;
  L.extra_gradings["z3"] = z3;
  L.filtration = filtration_from_grading(L);
  L.meta["family"] = "Melikian";
  L.meta["m"] = std::to_string(m);
  L.meta["n"] = std::to_string(n);
  L.meta["p"] = std::to_string(p);
  if (m == 1 && n == 1) L.meta["toral_rank"] = "2";
  return L;
}

MelikianElement melikian_element(const LieAlgebra& M, const Vec& v) {
  OPtr O = melikian_divided_powers(M);
  WittBasis WB(O);
  const size_t w = WB.dim(), o = O->dim();
  if (v.size() != 2 * w + o) throw DimensionMismatch("vector length differs from dim M");
  return {derivation_from_coords(WB, v, 0), dp_from_coords(O, v, w), derivation_from_coords(WB, v, w + o)};
}

Vec melikian_coordinates(const LieAlgebra& M, const MelikianElement& x) {
  OPtr O = melikian_divided_powers(M);
  WittBasis WB(O);
  const size_t w = WB.dim(), o = O->dim();
  Vec v(2 * w + o, 0);
  write_derivation(v, WB, x.D, 0);
  write_dp(v, x.f, w);
  write_derivation(v, WB, x.E, w + o);
  return v;
}

MelikianTorusAnalysis melikian_t0_analysis(const LieAlgebra& M) {
  OPtr O = melikian_divided_powers(M);
  if (O->n() != std::vector<unsigned>{1, 1}) throw PreconditionFailed("the torus analysis is for M(1,1)");
  const uint32_t p = M.p();
  MelikianTorusAnalysis out;
  for (size_t i = 0; i < 2; ++i) {
    MelikianElement t = MelikianElement::zero(O);
    DPElement one_plus = DPElement::constant(O, 1) + DPElement::variable(O, i);
    t.D.f[i] = one_plus;
    out.torus_basis.push_back(melikian_coordinates(M, t));
  }
  out.torus = SubspaceBasis::span(out.torus_basis, M.dim(), p);

  // The torus lives in the W(2;1̄) block, where the p-map is that of W.
  LieAlgebra W = build_witt(2, {1, 1}, p);
  PMap P(W);
  out.torus_toral = true;
  for (const Vec& t : out.torus_basis) {
    Vec tw(t.begin(), t.begin() + static_cast<long>(W.dim()));
    if (P(tw) != tw) out.torus_toral = false;
  }

  out.cartan = centralizer(M, out.torus);
  out.self_normalizing = normalizer(M, out.cartan) == out.cartan;
  SubspaceBasis hh = bracket_space(M, out.cartan, out.cartan);
  out.nonabelian = hh.dim() > 0;
  out.triple_bracket_is_torus = bracket_space(M, out.cartan, hh) == out.torus;
  out.triangulable = acts_nilpotently(M, hh);
  return out;
}

SubspaceBasis melikian_pm1_subalgebra(const LieAlgebra& M) {
  std::vector<Vec> seed;
  for (int d : {-1, 1}) {
    SubspaceBasis c = graded_component(M, d);
    seed.insert(seed.end(), c.vectors().begin(), c.vectors().end());
  }
  return closure(M, seed, ClosureMode::subalgebra);
}

// ------------------------------------------------------------------ Brown

namespace {

struct BrownElement {
  SpecialDerivation D;
  DPElement fu;  // coefficient of u
  DPElement f;
};

BrownElement brown_bracket(const BrownElement& a, const BrownElement& b) {
  BrownElement out{bracket(a.D, b.D), DPElement(a.f.parent()), DPElement(a.f.parent())};
  // [fu,g] = f𝒟_g
  out.D = out.D + hamiltonian_derivation(b.f).times(a.fu) - hamiltonian_derivation(a.f).times(b.fu);
  // [D,fu] = div(fD)u and [f,g] = 𝒟_g(f)u
  out.fu = divergence(a.D.times(b.fu)) - divergence(b.D.times(a.fu)) + hamiltonian_derivation(b.f).apply(a.f);
  // [D,f] = D(f)
  out.f = a.D.apply(b.f) - b.D.apply(a.f);
  return out;
}

}  // namespace

BrownResult build_brown(std::pair<unsigned, unsigned> n, uint32_t p) {
  if (p != 2) throw WrongCharacteristic("the Brown algebra G2(2;n) is built in characteristic 2");
  OPtr O = make_divided_powers({n.first, n.second}, p);
  WittBasis WB(O);
  const size_t w = WB.dim(), o = O->dim(), dim = w + 2 * o;

  std::vector<BrownElement> basis;
  std::vector<std::string> labels;
  for (size_t k = 0; k < dim; ++k) {
    BrownElement x{SpecialDerivation::zero(O), DPElement(O), DPElement(O)};
    if (k < w) {
      x.D = WB.derivation(k);
      labels.push_back(WB.label(k));
    } else if (k < w + o) {
      x.fu = DPElement::monomial(O, O->exponent(k - w));
      labels.push_back(x.fu.to_string() + "u");
    } else {
      x.f = DPElement::monomial(O, O->exponent(k - w - o));
      labels.push_back(x.f.to_string());
    }
    basis.push_back(std::move(x));
  }
  auto coords = [&](const BrownElement& x) {
    Vec v(dim, 0);
    write_derivation(v, WB, x.D, 0);
    write_dp(v, x.fu, w);
    write_dp(v, x.f, w + o);
    return v;
  };

  std::vector<BracketEntry> entries;
  for (size_t a = 0; a < dim; ++a) {
    // [x,x] = 0 needs [b,b] = 0 and a symmetric table (char 2)
    if (!is_zero(coords(brown_bracket(basis[a], basis[a]))))
      throw AntisymmetryViolation("[b,b] ≠ 0 for basis element " + labels[a]);
    for (size_t b = a + 1; b < dim; ++b) {
      Vec ab = coords(brown_bracket(basis[a], basis[b]));
      Vec ba = coords(brown_bracket(basis[b], basis[a]));
      if (vadd(ab, ba, p) != Vec(dim, 0)) throw AntisymmetryViolation("[a,b] ≠ −[b,a] for " + labels[a] + ", " + labels[b]);
      if (!is_zero(ab)) entries.push_back({static_cast<uint32_t>(a), static_cast<uint32_t>(b), to_sparse(ab)});
    }
  }
  BrownResult out;
  out.cover = LieAlgebra::from_structure_constants(dim, p, entries, labels, Validation::full);
  std::vector<int> deg(dim);
  for (size_t k = 0; k < dim; ++k) {
    if (k < w) deg[k] = 3 * WB.degree(k);
    else if (k < w + o) deg[k] = 3 * O->degree(k - w) - 2;
    else deg[k] = 3 * O->degree(k - w - o) - 4;
  }
  out.cover.grading = deg;
  out.cover.meta["family"] = "BrownCover";

  out.center = center(out.cover);
  out.center_is_bottom = out.center == graded_component(out.cover, grading_degrees(out.cover).front());
  Quotient q = quotient(out.cover, out.center);
  out.algebra = structured_subalgebra(q.algebra, derived_algebra(q.algebra));
  out.algebra.filtration = filtration_from_grading(out.algebra);
  out.algebra.meta["family"] = "BrownG2";
  out.algebra.meta["n"] = "(" + std::to_string(n.first) + "," + std::to_string(n.second) + ")";
  out.algebra.meta["p"] = std::to_string(p);
  return out;
}

LieAlgebra build_brown_g2(std::pair<unsigned, unsigned> n, uint32_t p) { return build_brown(n, p).algebra; }

// ------------------------------------------------------------- Chevalley

using Root = std::vector<int>;
using Q = boost::rational<long long>;

long long RootSystemData::inner(const Root& a, const Root& b) const {
  long long s = 0;
  for (size_t i = 0; i < rank; ++i)
    for (size_t j = 0; j < rank; ++j) s += static_cast<long long>(a[i]) * gram[i][j] * b[j];
  return s;
}

long long RootSystemData::pairing(const Root& beta, const Root& alpha) const {
  return 2 * inner(beta, alpha) / inner(alpha, alpha);
}

std::vector<Root> RootSystemData::roots() const {
  std::vector<Root> out = positive;
  for (const Root& r : positive) {
    Root neg(r.size());
    for (size_t i = 0; i < r.size(); ++i) neg[i] = -r[i];
    out.push_back(neg);
  }
  return out;
}

std::optional<size_t> RootSystemData::find(const Root& root) const {
  bool neg = std::any_of(root.begin(), root.end(), [](int c) { return c < 0; });
  Root r = root;
  if (neg)
    for (int& c : r) c = -c;
  auto it = std::find(positive.begin(), positive.end(), r);
  if (it == positive.end() || std::any_of(r.begin(), r.end(), [](int c) { return c < 0; })) return std::nullopt;
  size_t k = static_cast<size_t>(it - positive.begin());
  return neg ? k + positive.size() : k;
}

int RootSystemData::string_below(const Root& beta, const Root& alpha) const {
  int q = 0;
  Root r = beta;
  for (;;) {
    for (size_t i = 0; i < r.size(); ++i) r[i] -= alpha[i];
    if (!find(r)) return q;
    ++q;
  }
}

RootSystemData root_system(char type, size_t l) {
  RootSystemData R;
  R.type = type;
  R.rank = l;
  auto bad = [&] { throw UnsupportedType(std::string("no root system of type ") + type + std::to_string(l)); };
  if (l == 0) bad();
  std::vector<std::vector<long long>> g(l, std::vector<long long>(l, 0));
  auto chain = [&](long long len) {
    for (size_t i = 0; i < l; ++i) g[i][i] = len;
    for (size_t i = 0; i + 1 < l; ++i) g[i][i + 1] = g[i + 1][i] = -len / 2;
  };
  switch (type) {
    case 'A':
      chain(2);
      break;
    case 'B':  // last root short
      if (l < 2) bad();
      chain(4);
      g[l - 1][l - 1] = 2;
      break;
    case 'C':  // last root long
      if (l < 2) bad();
      chain(2);
      g[l - 1][l - 1] = 4;
      g[l - 2][l - 1] = g[l - 1][l - 2] = -2;
      break;
    case 'D':
      if (l < 4) bad();
      chain(2);
      g[l - 2][l - 1] = g[l - 1][l - 2] = 0;
      g[l - 3][l - 1] = g[l - 1][l - 3] = -1;
      break;
    case 'E': {
      if (l < 6 || l > 8) bad();
      for (size_t i = 0; i < l; ++i) g[i][i] = 2;
      // Bourbaki numbering: 1-3-4-5-6-7-8 with 2 attached to 4
      std::vector<std::pair<size_t, size_t>> edges = {{0, 2}, {2, 3}, {3, 4}, {1, 3}};
      for (size_t i = 4; i + 1 < l; ++i) edges.push_back({i, i + 1});
      for (auto [a, b] : edges) g[a][b] = g[b][a] = -1;
      break;
    }
    case 'F':
      if (l != 4) bad();
      g = {{4, -2, 0, 0}, {-2, 4, -2, 0}, {0, -2, 2, -1}, {0, 0, -1, 2}};
      break;
    case 'G':
      if (l != 2) bad();
      g = {{2, -3}, {-3, 6}};  // first root short
      break;
    default:
      bad();
  }
  R.gram = g;
  R.cartan.assign(l, std::vector<long long>(l));
  for (size_t i = 0; i < l; ++i)
    for (size_t j = 0; j < l; ++j) R.cartan[i][j] = 2 * g[i][j] / g[j][j];

  // Positive roots height by height; β + α_i is a root iff the α_i-string
  // through β continues upward.
  std::vector<Root> level;
  for (size_t i = 0; i < l; ++i) {
    Root r(l, 0);
    r[i] = 1;
    level.push_back(r);
  }
  while (!level.empty()) {
    std::sort(level.begin(), level.end(), std::greater<Root>());
    for (const Root& r : level) R.positive.push_back(r);
    std::vector<Root> next;
    for (const Root& b : level)
      for (size_t i = 0; i < l; ++i) {
        Root a(l, 0);
        a[i] = 1;
        if (b == a) continue;
        int q = R.string_below(b, a);
        if (q - R.pairing(b, a) <= 0) continue;
        Root s = b;
        ++s[i];
        if (std::find(next.begin(), next.end(), s) == next.end()) next.push_back(s);
      }
    level = std::move(next);
  }

  // Structure constants on positive pairs.
  const size_t P = R.positive.size();
  R.structure.assign(P, std::vector<long long>(P, 0));
  std::vector<std::vector<char>> known(P, std::vector<char>(P, 0));
  auto add = [](const Root& a, const Root& b, int s) {
    Root c(a.size());
    for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] + s * b[i];
    return c;
  };
  auto neg = [](Root a) {
    for (int& c : a) c = -c;
    return a;
  };
  auto is_pos = [](const Root& a) { return std::all_of(a.begin(), a.end(), [](int c) { return c >= 0; }); };
  // N(a,b) for arbitrary roots, reduced to positive pairs already known.
  std::function<Q(const Root&, const Root&)> N = [&](const Root& a, const Root& b) -> Q {
    Root s = add(a, b, 1);
    if (std::all_of(s.begin(), s.end(), [](int c) { return c == 0; }) || !R.find(s)) return 0;
    bool pa = is_pos(a), pb = is_pos(b);
    if (pa && pb) {
      size_t i = *R.find(a), j = *R.find(b);
      if (!known[i][j]) throw PreconditionFailed("structure constant needed before it was fixed");
      return R.structure[i][j];
    }
    if (!pa && !pb) return -N(neg(a), neg(b));
    if (!pa) return -N(b, a);
    Root bp = neg(b);  // b = −β'
    Root c = add(a, bp, -1);
    if (is_pos(c)) return Q(R.inner(c, c), R.inner(a, a)) * -N(bp, c);
    Root gp = neg(c);
    return Q(R.inner(gp, gp), R.inner(bp, bp)) * N(gp, a);
  };
  for (size_t x = 0; x < P; ++x) {
    const Root& xi = R.positive[x];
    std::vector<std::pair<size_t, size_t>> special;
    for (size_t a = 0; a < x; ++a) {
      Root rest = add(xi, R.positive[a], -1);
      auto b = R.find(rest);
      if (b && *b < P && a < *b) special.push_back({a, *b});
    }
    if (special.empty()) continue;
    auto [ea, eb] = special.front();
    const Root &al = R.positive[ea], &be = R.positive[eb];
    long long next = R.string_below(be, al) + 1;
    R.structure[ea][eb] = next, R.structure[eb][ea] = -next;
    known[ea][eb] = known[eb][ea] = 1;
    for (size_t k = 1; k < special.size(); ++k) {
      auto [ga, de] = special[k];
      const Root &gm = R.positive[ga], &dl = R.positive[de];
      Q sum = 0;
      Root dma = add(dl, al, -1), gma = add(gm, al, -1);
      if (R.find(dma)) sum += N(dl, neg(al)) * N(gm, neg(be)) / Q(R.inner(dma, dma));
      if (R.find(gma)) sum += N(neg(al), gm) * N(dl, neg(be)) / Q(R.inner(gma, gma));
      Q val = Q(R.inner(xi, xi)) / Q(next) * sum;
      if (val.denominator() != 1) throw PreconditionFailed("non-integral structure constant");
      R.structure[ga][de] = val.numerator(), R.structure[de][ga] = -val.numerator();
      known[ga][de] = known[de][ga] = 1;
    }
  }
  return R;
}

namespace {

// N(α,β) over Z for arbitrary roots using N(−α,−β) = −N(α,β) and the
// triangle relation.
long long chevalley_constant(const RootSystemData& R, const Root& a, const Root& b) {
  auto neg = [](Root x) {
    for (int& c : x) c = -c;
    return x;
  };
  auto is_pos = [](const Root& x) { return std::all_of(x.begin(), x.end(), [](int c) { return c >= 0; }); };
  Root s(a.size());
  for (size_t i = 0; i < a.size(); ++i) s[i] = a[i] + b[i];
  if (std::all_of(s.begin(), s.end(), [](int c) { return c == 0; }) || !R.find(s)) return 0;
  bool pa = is_pos(a), pb = is_pos(b);
  if (pa && pb) return R.structure[*R.find(a)][*R.find(b)];
  if (!pa && !pb) return -chevalley_constant(R, neg(a), neg(b));
  if (!pa) return -chevalley_constant(R, b, a);
  Root bp = neg(b), c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] - bp[i];
  Q v;
  if (is_pos(c)) {
    v = Q(R.inner(c, c), R.inner(a, a)) * -chevalley_constant(R, bp, c);
  } else {
    Root gp = neg(c);
    v = Q(R.inner(gp, gp), R.inner(bp, bp)) * chevalley_constant(R, gp, a);
  }
  if (v.denominator() != 1) throw PreconditionFailed("non-integral structure constant");
  return v.numerator();
}

std::string root_label(const Root& r) {
  bool neg = std::any_of(r.begin(), r.end(), [](int c) { return c < 0; });
  std::string s = neg ? "f(" : "e(";
  for (size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + std::to_string(neg ? -r[i] : r[i]);
  return s + ")";
}

// Coefficients of h_α in the simple coroots.
std::vector<long long> coroot(const RootSystemData& R, const Root& a) {
  std::vector<long long> c(R.rank);
  for (size_t i = 0; i < R.rank; ++i) c[i] = a[i] * R.gram[i][i] / R.inner(a, a);
  return c;
}

}  // namespace

LieAlgebra build_chevalley(char type, size_t rank, uint32_t p) {
  if (p <= 3) throw WrongCharacteristic("Chevalley reduction is provided for p > 3");
  RootSystemData R = root_system(type, rank);
  const std::vector<Root> roots = R.roots();
  const size_t l = rank, dim = l + roots.size();
  std::vector<std::string> labels;
  for (size_t i = 0; i < l; ++i) labels.push_back("h" + std::to_string(i + 1));
  for (const Root& r : roots) labels.push_back(root_label(r));

  std::vector<BracketEntry> entries;
  for (size_t i = 0; i < l; ++i) {
    Root ai(l, 0);
    ai[i] = 1;
    for (size_t k = 0; k < roots.size(); ++k) {
      uint32_t c = mod_p(R.pairing(roots[k], ai), p);
      if (c) entries.push_back({static_cast<uint32_t>(i), static_cast<uint32_t>(l + k), {{static_cast<uint32_t>(l + k), c}}});
    }
  }
  for (size_t a = 0; a < roots.size(); ++a)
    for (size_t b = a + 1; b < roots.size(); ++b) {
      Root s(l);
      for (size_t i = 0; i < l; ++i) s[i] = roots[a][i] + roots[b][i];
      if (std::all_of(s.begin(), s.end(), [](int c) { return c == 0; })) {
        // [e_α, e_{−α}] = h_α
        SparseVec h;
        std::vector<long long> c = coroot(R, roots[a]);
        for (size_t i = 0; i < l; ++i)
          if (uint32_t v = mod_p(c[i], p)) h.push_back({static_cast<uint32_t>(i), v});
        if (!h.empty()) entries.push_back({static_cast<uint32_t>(l + a), static_cast<uint32_t>(l + b), h});
        continue;
      }
      auto k = R.find(s);
      if (!k) continue;
      uint32_t v = mod_p(chevalley_constant(R, roots[a], roots[b]), p);
      if (v) entries.push_back({static_cast<uint32_t>(l + a), static_cast<uint32_t>(l + b), {{static_cast<uint32_t>(l + *k), v}}});
    }
  LieAlgebra L = LieAlgebra::from_structure_constants(dim, p, entries, labels,
                                                      dim <= 150 ? Validation::full : Validation::spot_check);
  std::vector<Vec> pm(dim, Vec(dim, 0));
  for (size_t i = 0; i < l; ++i) pm[i][i] = 1;
  L.pmap = pm;
  L.meta["family"] = std::string("Chevalley ") + type + std::to_string(rank);
  L.meta["type"] = std::string(1, type);
  L.meta["rank"] = std::to_string(rank);
  L.meta["p"] = std::to_string(p);
  L.meta["signs"] = "extraspecial pairs positive; roots ordered by height, then reverse lexicographic";
  L.meta["toral_rank"] = std::to_string(rank);
  return L;
}

ChevalleyCheck verify_chevalley(const LieAlgebra& L, const RootSystemData& R) {
  const uint32_t p = L.p();
  const size_t l = R.rank;
  const std::vector<Root> roots = R.roots();
  if (L.dim() != l + roots.size()) throw DimensionMismatch("algebra does not match the root system");
  ChevalleyCheck out;
  out.cartan_abelian = true;
  for (size_t i = 0; i < l; ++i)
    for (size_t j = 0; j < l; ++j)
      if (!L.bracket_basis(i, j).empty()) out.cartan_abelian = false;
  out.cartan_action = true;
  for (size_t i = 0; i < l; ++i) {
    Root ai(l, 0);
    ai[i] = 1;
    for (size_t k = 0; k < roots.size(); ++k) {
      uint32_t c = mod_p(R.pairing(roots[k], ai), p);
      SparseVec want;
      if (c) want.push_back({static_cast<uint32_t>(l + k), c});
      if (L.bracket_basis(i, l + k) != want) out.cartan_action = false;
    }
  }
  out.coroots = true;
  out.root_brackets = true;
  for (size_t a = 0; a < roots.size(); ++a)
    for (size_t b = 0; b < roots.size(); ++b) {
      if (a == b) continue;
      const SparseVec& v = L.bracket_basis(l + a, l + b);
      Root s(l);
      for (size_t i = 0; i < l; ++i) s[i] = roots[a][i] + roots[b][i];
      if (std::all_of(s.begin(), s.end(), [](int c) { return c == 0; })) {
        SparseVec want;
        // coroot coefficients: a_i (α_i|α_i)/(α|α), integral by construction
        for (size_t i = 0; i < l; ++i) {
          long long num = static_cast<long long>(roots[a][i]) * R.gram[i][i], den = R.inner(roots[a], roots[a]);
          if (num % den) out.coroots = false;
          if (uint32_t c = mod_p(num / den, p)) want.push_back({static_cast<uint32_t>(i), c});
        }
        if (v != want) out.coroots = false;
        continue;
      }
      auto k = R.find(s);
      if (!k) {
        if (!v.empty()) out.root_brackets = false;
        continue;
      }
      int q = R.string_below(roots[b], roots[a]);
      out.max_string = std::max(out.max_string, q);
      uint32_t plus = mod_p(q + 1, p), minus = mod_p(-(q + 1), p);
      if (v.size() != 1 || v[0].first != l + *k || (v[0].second != plus && v[0].second != minus))
        out.root_brackets = false;
    }
  return out;
}

LieAlgebra central_quotient(const LieAlgebra& L) {
  SubspaceBasis z = center(L);
  if (z.dim() == 0) return L;
  LieAlgebra Q = quotient(L, z).algebra;
  Q.meta = L.meta;
  Q.meta["quotient_by_center"] = std::to_string(z.dim());
  Q.meta.erase("toral_rank");
  return Q;
}

// ------------------------------------------------------- matrix families

namespace {

Matrix unit_matrix(size_t n, size_t i, size_t j, uint32_t p) {
  std::vector<SparseVec> rows(n);
  rows[i].push_back({static_cast<uint32_t>(j), 1});
  return Matrix::from_sparse_rows(rows, n, p);
}

std::string unit_label(size_t i, size_t j) { return "E" + std::to_string(i + 1) + "," + std::to_string(j + 1); }

}  // namespace

std::optional<MatrixKind> matrix_kind_from_string(const std::string& s) {
  if (s == "gl") return MatrixKind::gl;
  if (s == "sl") return MatrixKind::sl;
  if (s == "pgl") return MatrixKind::pgl;
  if (s == "psl") return MatrixKind::psl;
  return std::nullopt;
}

LieAlgebra build_matrix_classical(MatrixKind kind, size_t n, uint32_t p) {
  if (n < 2) throw PreconditionFailed("matrix size must be at least 2");
  std::vector<Matrix> basis;
  std::vector<std::string> labels;
  bool full = kind == MatrixKind::gl || kind == MatrixKind::pgl;
  if (full) {
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) basis.push_back(unit_matrix(n, i, j, p)), labels.push_back(unit_label(i, j));
  } else {
    for (size_t i = 0; i + 1 < n; ++i) {
      basis.push_back(unit_matrix(n, i, i, p) - unit_matrix(n, i + 1, i + 1, p));
      labels.push_back("H" + std::to_string(i + 1));
    }
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        if (i != j) basis.push_back(unit_matrix(n, i, j, p)), labels.push_back(unit_label(i, j));
  }
  LieAlgebra L = from_matrix_basis(basis, labels);
  static const char* names[] = {"gl", "sl", "pgl", "psl"};
  const char* name = names[static_cast<int>(kind)];
  if (kind == MatrixKind::pgl || kind == MatrixKind::psl) {
    SubspaceBasis z = center(L);
    if (z.dim() > 0) {
      L = quotient(L, z).algebra;
    }
  }
  L.meta["family"] = name;
  L.meta["size"] = std::to_string(n);
  L.meta["p"] = std::to_string(p);
  if (kind == MatrixKind::gl || kind == MatrixKind::sl) L.meta["toral_rank"] = std::to_string(kind == MatrixKind::gl ? n : n - 1);
  return L;
}

ClassicalInvariants classical_invariants(const LieAlgebra& L) {
  ClassicalInvariants out;
  SubspaceBasis d = derived_algebra(L);
  out.perfect = d.dim() == L.dim();
  out.derived_codim = L.dim() - d.dim();
  out.center_dim = center(L).dim();
  return out;
}

}  // namespace modlie
