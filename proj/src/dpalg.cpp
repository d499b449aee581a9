#include "modlie/dpalg.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "modlie/errors.hpp"

namespace modlie {

// ------------------------------------------------------------ O(m;n)

DividedPowers::DividedPowers(std::vector<unsigned> n, uint32_t p) : n_(std::move(n)), p_(p) {
  if (!is_prime(p)) throw NonPrime("p = " + std::to_string(p) + " is not prime");
  if (n_.empty() || n_.size() > 16) throw DimensionMismatch("O(m;n) needs 1 ≤ m ≤ 16");
  size_t total = 1;
  for (unsigned ni : n_) {
    if (ni == 0) throw DimensionMismatch("O(m;n) needs every n_i ≥ 1");
    uint32_t b = 1;
    for (unsigned k = 0; k < ni; ++k) b *= p;
    bound_.push_back(b);
    total *= b;
  }
  if (total > (size_t{1} << 20)) throw DimensionLimitExceeded("O(m;n) larger than 2^20");
  exps_.reserve(total);
  Exponent a(n_.size(), 0);
  for (size_t idx = 0; idx < total; ++idx) {
    exps_.push_back(a);
    for (size_t i = 0; i < a.size(); ++i) {
      if (++a[i] < bound_[i]) break;
      a[i] = 0;
    }
  }
}

std::optional<size_t> DividedPowers::index(const Exponent& a) const {
  if (a.size() != n_.size()) return std::nullopt;
  size_t idx = 0, stride = 1;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] >= bound_[i]) return std::nullopt;
    idx += a[i] * stride;
    stride *= bound_[i];
  }
  return idx;
}

int DividedPowers::degree(size_t idx, const std::vector<int>& r) const {
  int d = 0;
  for (size_t i = 0; i < n_.size(); ++i) d += static_cast<int>(exps_[idx][i]) * (r.empty() ? 1 : r[i]);
  return d;
}

std::pair<size_t, uint32_t> DividedPowers::mono_mul(size_t a, size_t b) const {
  const Exponent& x = exps_[a];
  const Exponent& y = exps_[b];
  size_t idx = 0, stride = 1;
  uint32_t c = 1;
  for (size_t i = 0; i < x.size(); ++i) {
    uint32_t s = x[i] + y[i];
    if (s >= bound_[i]) return {0, 0};
    c = zmul(c, binom_mod(s, y[i], p_), p_);
    if (!c) return {0, 0};
    idx += s * stride;
    stride *= bound_[i];
  }
  return {idx, c};
}

Exponent DividedPowers::top() const {
  Exponent t;
  for (uint32_t b : bound_) t.push_back(b - 1);
  return t;
}

OPtr make_divided_powers(std::vector<unsigned> n, uint32_t p) {
  return std::make_shared<const DividedPowers>(std::move(n), p);
}

// ------------------------------------------------------------ DPElement

namespace {

SparseVec collect(std::vector<std::pair<uint32_t, uint32_t>> v, uint32_t p) {
  std::sort(v.begin(), v.end());
  SparseVec out;
  for (auto [k, c] : v) {
    if (!out.empty() && out.back().first == k) {
      out.back().second = zadd(out.back().second, c, p);
      if (!out.back().second) out.pop_back();
    } else if (c % p) {
      out.emplace_back(k, c % p);
    }
  }
  return out;
}

}  // namespace

DPElement::DPElement(OPtr O, SparseVec terms) : O_(std::move(O)) { t_ = collect(std::move(terms), O_->p()); }

DPElement DPElement::constant(OPtr O, uint32_t c) { return DPElement(O, SparseVec{{0, c % O->p()}}); }

DPElement DPElement::monomial(OPtr O, const Exponent& a, uint32_t c) {
  auto idx = O->index(a);
  if (!idx) return DPElement(O);
  return DPElement(O, SparseVec{{static_cast<uint32_t>(*idx), c}});
}

DPElement DPElement::variable(OPtr O, size_t i) {
  Exponent a(O->m(), 0);
  a[i] = 1;
  return monomial(O, a);
}

uint32_t DPElement::constant_term() const { return coefficient(0); }

uint32_t DPElement::coefficient(size_t idx) const {
  auto it = std::lower_bound(t_.begin(), t_.end(), std::make_pair(static_cast<uint32_t>(idx), uint32_t{0}));
  return it != t_.end() && it->first == idx ? it->second : 0;
}

void DPElement::check(const DPElement& o) const {
  if (O_ != o.O_ && !(O_ && o.O_ && O_->n() == o.O_->n() && O_->p() == o.O_->p()))
    throw ParentMismatch("divided power elements from different algebras");
}

DPElement DPElement::operator+(const DPElement& o) const {
  if (!O_) return o;
  if (!o.O_) return *this;
  check(o);
  return DPElement(O_, sparse_axpy(t_, 1, o.t_, O_->p()));
}

DPElement DPElement::operator-(const DPElement& o) const {
  if (!o.O_) return *this;
  if (!O_) return -o;
  check(o);
  return DPElement(O_, sparse_axpy(t_, O_->p() - 1, o.t_, O_->p()));
}

DPElement DPElement::operator-() const { return scaled(O_ ? O_->p() - 1 : 0); }

DPElement DPElement::scaled(uint32_t c) const {
  DPElement out(O_);
  if (!O_) return out;
  c %= O_->p();
  if (!c) return out;
  for (auto [k, v] : t_) out.t_.emplace_back(k, zmul(v, c, O_->p()));
  return out;
}

DPElement DPElement::operator*(const DPElement& o) const {
  check(o);
  const uint32_t p = O_->p();
  std::vector<std::pair<uint32_t, uint32_t>> acc;
  acc.reserve(t_.size() * o.t_.size());
  for (auto [a, ca] : t_)
    for (auto [b, cb] : o.t_) {
      auto [idx, c] = O_->mono_mul(a, b);
      if (c) acc.emplace_back(static_cast<uint32_t>(idx), zmul(zmul(ca, cb, p), c, p));
    }
  DPElement out(O_);
  out.t_ = collect(std::move(acc), p);
  return out;
}

std::string DPElement::to_string() const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto [k, c] : t_) {
    if (!first) os << " + ";
    first = false;
    os << c;
    const Exponent& a = O_->exponent(k);
    bool any = false;
    for (auto e : a) any |= e != 0;
    if (any) {
      os << "*x^(";
      for (size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << a[i];
      os << ")";
    }
  }
  return os.str();
}

DPElement dp_multiply(const DPElement& f, const DPElement& g) { return f * g; }

namespace {

// (x^a)^{(s)} for a ≠ 0: x^{sa} times Π_{j=1}^{s} binom(ja_k - 1, a_k - 1) Π_{i≠k} binom(ja_i, a_i).
DPElement monomial_divided_power(const OPtr& O, size_t idx, unsigned s) {
  const Exponent& a = O->exponent(idx);
  const uint32_t p = O->p();
  size_t k = 0;
  while (a[k] == 0) ++k;
  uint32_t c = 1;
  for (unsigned j = 1; j <= s && c; ++j)
    for (size_t i = 0; i < a.size(); ++i) {
      if (!a[i]) continue;
      uint64_t ja = static_cast<uint64_t>(j) * a[i];
      c = zmul(c, i == k ? binom_mod(ja - 1, a[i] - 1, p) : binom_mod(ja, a[i], p), p);
    }
  Exponent sa(a.size());
  for (size_t i = 0; i < a.size(); ++i) sa[i] = static_cast<uint32_t>(std::min<uint64_t>(uint64_t{s} * a[i], UINT32_MAX));
  return DPElement::monomial(O, sa, c);
}

}  // namespace

DPElement divided_power(const DPElement& f, unsigned s) {
  const OPtr& O = f.parent();
  if (f.constant_term()) throw NonzeroConstantTerm("divided powers need f without constant term");
  if (s == 0) return DPElement::constant(O, 1);
  const uint32_t p = O->p();
  // powers[t] = (partial sum)^{(t)}, t = 0..s
  std::vector<DPElement> acc(s + 1, DPElement(O));
  acc[0] = DPElement::constant(O, 1);
  for (auto [idx, c] : f.terms()) {
    std::vector<DPElement> y(s + 1, DPElement(O));
    y[0] = DPElement::constant(O, 1);
    uint32_t cp = 1;
    for (unsigned t = 1; t <= s; ++t) {
      cp = zmul(cp, c, p);
      y[t] = monomial_divided_power(O, idx, t).scaled(cp);
    }
    std::vector<DPElement> next(s + 1, DPElement(O));
    for (unsigned t = 0; t <= s; ++t)
      for (unsigned u = 0; u <= t; ++u)
        if (!acc[t - u].is_zero() && !y[u].is_zero()) next[t] = next[t] + acc[t - u] * y[u];
    acc = std::move(next);
  }
  return acc[s];
}

DPElement exp_truncated(const DPElement& f) {
  const OPtr& O = f.parent();
  if (f.constant_term()) throw NonzeroConstantTerm("exp needs f without constant term");
  unsigned top = 0;
  for (size_t i = 0; i < O->m(); ++i) top += O->bound(i) - 1;
  DPElement out = DPElement::constant(O, 1);
  for (unsigned s = 1; s <= top; ++s) out = out + divided_power(f, s);
  return out;
}

DPElement partial_derivative(size_t i, const DPElement& f) {
  const OPtr& O = f.parent();
  if (i >= O->m()) throw DimensionMismatch("partial derivative index out of range");
  SparseVec out;
  for (auto [idx, c] : f.terms()) {
    Exponent a = O->exponent(idx);
    if (!a[i]) continue;
    --a[i];
    out.emplace_back(static_cast<uint32_t>(*O->index(a)), c);
  }
  return DPElement(O, out);
}

// ------------------------------------------------------------ W(m;n)

SpecialDerivation SpecialDerivation::zero(const OPtr& O) { return {std::vector<DPElement>(O->m(), DPElement(O))}; }

SpecialDerivation SpecialDerivation::basis(const OPtr& O, const Exponent& a, size_t i) {
  SpecialDerivation D = zero(O);
  D.f[i] = DPElement::monomial(O, a);
  return D;
}

DPElement SpecialDerivation::apply(const DPElement& g) const {
  DPElement out(g.parent());
  for (size_t i = 0; i < f.size(); ++i)
    if (!f[i].is_zero()) out = out + f[i] * partial_derivative(i, g);
  return out;
}

SpecialDerivation SpecialDerivation::operator+(const SpecialDerivation& o) const {
  SpecialDerivation r = *this;
  for (size_t i = 0; i < f.size(); ++i) r.f[i] = f[i] + o.f[i];
  return r;
}

SpecialDerivation SpecialDerivation::operator-(const SpecialDerivation& o) const {
  SpecialDerivation r = *this;
  for (size_t i = 0; i < f.size(); ++i) r.f[i] = f[i] - o.f[i];
  return r;
}

SpecialDerivation SpecialDerivation::scaled(uint32_t c) const {
  SpecialDerivation r = *this;
  for (auto& x : r.f) x = x.scaled(c);
  return r;
}

SpecialDerivation SpecialDerivation::times(const DPElement& g) const {
  SpecialDerivation r = *this;
  for (auto& x : r.f) x = g * x;
  return r;
}

SpecialDerivation bracket(const SpecialDerivation& D, const SpecialDerivation& E) {
  SpecialDerivation r = SpecialDerivation::zero(D.parent());
  for (size_t j = 0; j < r.f.size(); ++j) r.f[j] = D.apply(E.f[j]) - E.apply(D.f[j]);
  return r;
}

DPElement divergence(const SpecialDerivation& D) {
  DPElement out(D.parent());
  for (size_t i = 0; i < D.f.size(); ++i) out = out + partial_derivative(i, D.f[i]);
  return out;
}

// ------------------------------------------------------------ forms

namespace {

// Sign of dx_A ∧ dx_B as a multiple of dx_{A∪B}; 0 when they overlap.
int wedge_sign(uint32_t a, uint32_t b) {
  if (a & b) return 0;
  int swaps = 0;
  for (uint32_t bb = b; bb; bb &= bb - 1) {
    int j = std::countr_zero(bb);
    swaps += std::popcount(a >> (j + 1));
  }
  return swaps % 2 ? -1 : 1;
}

}  // namespace

DifferentialForm DifferentialForm::function(const DPElement& f) {
  DifferentialForm w(f.parent(), 0);
  w.add_term(0, f);
  return w;
}

DifferentialForm DifferentialForm::dx(const OPtr& O, size_t i) {
  DifferentialForm w(O, 1);
  w.add_term(1u << i, DPElement::constant(O, 1));
  return w;
}

DifferentialForm DifferentialForm::dx(const OPtr& O, const std::vector<size_t>& idx) {
  DifferentialForm w = function(DPElement::constant(O, 1));
  for (size_t i : idx) w = wedge(w, dx(O, i));
  return w;
}

DPElement DifferentialForm::coefficient(uint32_t mask) const {
  auto it = c_.find(mask);
  return it == c_.end() ? DPElement(O_) : it->second;
}

void DifferentialForm::add_term(uint32_t mask, const DPElement& f) {
  if (static_cast<unsigned>(std::popcount(mask)) != deg_) throw WrongDegree("form term of the wrong degree");
  if (f.is_zero()) return;
  auto it = c_.find(mask);
  if (it == c_.end()) {
    c_.emplace(mask, f);
  } else {
    it->second = it->second + f;
    if (it->second.is_zero()) c_.erase(it);
  }
}

bool DifferentialForm::is_zero() const { return c_.empty(); }

DifferentialForm DifferentialForm::operator+(const DifferentialForm& o) const {
  if (o.deg_ != deg_ && !o.is_zero() && !is_zero()) throw WrongDegree("adding forms of different degree");
  DifferentialForm r = is_zero() ? DifferentialForm(o.O_ ? o.O_ : O_, o.deg_) : *this;
  if (is_zero()) r.deg_ = o.deg_;
  for (auto& [m, f] : o.c_) r.add_term(m, f);
  return r;
}

DifferentialForm DifferentialForm::operator-(const DifferentialForm& o) const { return *this + o.scaled(O_ ? O_->p() - 1 : 0); }

DifferentialForm DifferentialForm::scaled(uint32_t c) const {
  DifferentialForm r(O_, deg_);
  for (auto& [m, f] : c_) r.add_term(m, f.scaled(c));
  return r;
}

DifferentialForm DifferentialForm::times(const DPElement& g) const {
  DifferentialForm r(O_, deg_);
  for (auto& [m, f] : c_) r.add_term(m, g * f);
  return r;
}

bool DifferentialForm::operator==(const DifferentialForm& o) const {
  if (is_zero() && o.is_zero()) return true;
  return deg_ == o.deg_ && c_ == o.c_;
}

std::string DifferentialForm::to_string() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [m, f] : c_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << f.to_string() << ")";
    for (uint32_t b = m; b; b &= b - 1) os << " dx" << std::countr_zero(b) + 1;
  }
  return os.str();
}

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b) {
  const OPtr& O = a.parent() ? a.parent() : b.parent();
  DifferentialForm r(O, a.degree() + b.degree());
  const uint32_t p = O->p();
  for (auto& [ma, fa] : a.coefficients())
    for (auto& [mb, fb] : b.coefficients()) {
      int s = wedge_sign(ma, mb);
      if (!s) continue;
      DPElement prod = fa * fb;
      r.add_term(ma | mb, s > 0 ? prod : prod.scaled(p - 1));
    }
  return r;
}

DifferentialForm exterior_d(const DPElement& f) {
  const OPtr& O = f.parent();
  DifferentialForm r(O, 1);
  for (size_t j = 0; j < O->m(); ++j) r.add_term(1u << j, partial_derivative(j, f));
  return r;
}

DifferentialForm exterior_d(const DifferentialForm& w) {
  const OPtr& O = w.parent();
  DifferentialForm r(O, w.degree() + 1);
  const uint32_t p = O->p();
  for (auto& [m, f] : w.coefficients())
    for (size_t j = 0; j < O->m(); ++j) {
      int s = wedge_sign(1u << j, m);
      if (!s) continue;
      DPElement g = partial_derivative(j, f);
      r.add_term(m | (1u << j), s > 0 ? g : g.scaled(p - 1));
    }
  return r;
}

DifferentialForm derivation_action_on_form(const SpecialDerivation& D, const DifferentialForm& w) {
  const OPtr& O = w.parent();
  DifferentialForm r(O, w.degree());
  for (auto& [m, g] : w.coefficients()) {
    r.add_term(m, D.apply(g));
    // g dx_{i1} ∧ ... ∧ d(D x_{ik}) ∧ ... ∧ dx_{i_deg}
    for (uint32_t b = m; b; b &= b - 1) {
      int k = std::countr_zero(b);
      uint32_t below = m & ((1u << k) - 1), above = m & ~((2u << k) - 1);
      DifferentialForm left(O, static_cast<unsigned>(std::popcount(below)));
      left.add_term(below, g);
      DifferentialForm right(O, static_cast<unsigned>(std::popcount(above)));
      right.add_term(above, DPElement::constant(O, 1));
      r = r + wedge(wedge(left, exterior_d(D.f[k])), right);
    }
  }
  return r;
}

DifferentialForm form_divided_power(const DifferentialForm& w, unsigned s) {
  const OPtr& O = w.parent();
  const uint32_t p = O->p();
  if (w.degree() % 2) throw WrongDegree("divided powers need an even form");
  if (w.degree() == 0) return DifferentialForm::function(divided_power(w.coefficient(0), s));
  if (s >= p) throw SBeyondCharacteristic("form divided powers are implemented for s < p");
  DifferentialForm r = DifferentialForm::function(DPElement::constant(O, 1));
  uint32_t fact = 1;
  for (unsigned k = 1; k <= s; ++k) {
    r = wedge(r, w);
    fact = zmul(fact, k, p);
  }
  return r.scaled(zinv(fact, p));
}

namespace {

bool top_nondegenerate(const DifferentialForm& w) {
  const size_t m = w.parent()->m();
  return m >= 2 && w.degree() == m && w.coefficient((1u << m) - 1).constant_term() != 0;
}

}  // namespace

bool nondegenerate(const DifferentialForm& w) { return nondegenerate(TwistedForm::plain(w)); }

TwistedForm TwistedForm::plain(const DifferentialForm& w) { return {DPElement(w.parent()), w}; }

DifferentialForm TwistedForm::action_stripped(const SpecialDerivation& D) const {
  DifferentialForm r = derivation_action_on_form(D, base);
  if (twisted()) r = r + base.times(D.apply(u));
  return r;
}

bool nondegenerate(const TwistedForm& tw) {
  const DifferentialForm& w = tw.base;
  const OPtr& O = w.parent();
  const size_t m = O->m();
  if (tw.twisted() && tw.u.constant_term()) throw NonzeroConstantTerm("twist exponent needs zero constant term");
  // d((exp u) w') = (exp u)(du ∧ w' + dw'); exp u is a unit.
  auto d_stripped = [&](const DifferentialForm& x) {
    DifferentialForm r = exterior_d(x);
    if (tw.twisted()) r = r + wedge(exterior_d(tw.u), x);
    return r;
  };
  if (w.degree() == m && m >= 2 && m != 2) return top_nondegenerate(w);
  if (w.degree() == 2) {
    if (m % 2) return false;
    if (!d_stripped(w).is_zero()) throw NotClosed("2-form is not closed");
    return top_nondegenerate(form_divided_power(w, static_cast<unsigned>(m / 2)));
  }
  if (w.degree() == 1) {
    if (m % 2 == 0 || m < 3) return false;
    DifferentialForm dw = d_stripped(w);
    return top_nondegenerate(wedge(form_divided_power(dw, static_cast<unsigned>(m / 2)), w));
  }
  throw WrongDegree("nondegeneracy is defined for forms of degree 1, 2 or m");
}

}  // namespace modlie
