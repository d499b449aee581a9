#include "modlie/gf.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <random>

namespace modlie {

namespace {

struct Registry {
  std::mutex mu;
  std::map<std::pair<uint32_t, int>, FieldPtr> fields;
  std::vector<FieldPtr> by_id;
  // (small id, big id) -> image of the small field's generator
  std::map<std::pair<int, int>, std::vector<uint32_t>> embeddings;
};

Registry& registry() {
  static Registry r;
  return r;
}

poly::Poly find_modulus(uint32_t p, int k) {
  if (k == 1) return poly::Poly{0, 1};
  std::mt19937_64 rng(kDefaultSeed ^ (uint64_t(p) << 32) ^ uint64_t(k));
  std::uniform_int_distribution<uint32_t> dist(0, p - 1);
  for (;;) {
    poly::Poly f(k + 1);
    for (int i = 0; i < k; ++i) f[i] = dist(rng);
    f[k] = 1;
    if (f[0] == 0) continue;
    if (poly::is_irreducible(f, p)) return f;
  }
}

// Multiply two coordinate vectors in GF(p)[T]/(m).
std::vector<uint32_t> mulmod_coeffs(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                                    const FieldDescriptor& f) {
  int k = f.k;
  uint32_t p = f.p;
  if (k == 1) return {zmul(a[0], b[0], p)};
  std::vector<uint64_t> acc(2 * k - 1, 0);
  for (int i = 0; i < k; ++i) {
    if (!a[i]) continue;
    for (int j = 0; j < k; ++j) acc[i + j] += uint64_t(a[i]) * b[j];
  }
  std::vector<uint32_t> r(2 * k - 1);
  for (size_t i = 0; i < acc.size(); ++i) r[i] = static_cast<uint32_t>(acc[i] % p);
  for (int d = 2 * k - 2; d >= k; --d) {
    uint32_t c = r[d];
    if (!c) continue;
    r[d] = 0;
    for (int i = 0; i < k; ++i) r[d - k + i] = zsub(r[d - k + i], zmul(c, f.modulus[i], p), p);
  }
  r.resize(k);
  return r;
}

// Small dense solver over GF(p): A (rows x cols, row-major) x = b.
bool solve_small(std::vector<std::vector<uint32_t>> A, std::vector<uint32_t> b, uint32_t p,
                 std::vector<uint32_t>& x) {
  size_t rows = A.size(), cols = rows ? A[0].size() : 0;
  std::vector<int> pivcol;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && A[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(A[piv], A[r]);
    std::swap(b[piv], b[r]);
    uint32_t inv = zinv(A[r][c], p);
    for (auto& v : A[r]) v = zmul(v, inv, p);
    b[r] = zmul(b[r], inv, p);
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || A[i][c] == 0) continue;
      uint32_t f = A[i][c];
      for (size_t j = 0; j < cols; ++j) A[i][j] = zsub(A[i][j], zmul(f, A[r][j], p), p);
      b[i] = zsub(b[i], zmul(f, b[r], p), p);
    }
    pivcol.push_back(static_cast<int>(c));
    ++r;
  }
  for (size_t i = r; i < rows; ++i)
    if (b[i]) return false;
  x.assign(cols, 0);
  for (size_t i = 0; i < r; ++i) x[pivcol[i]] = b[i];
  return true;
}

// Polynomials with coefficients in an extension field, low degree first.
using EPoly = std::vector<FieldElement>;

void etrim(EPoly& f) {
  while (!f.empty() && f.back().is_zero()) f.pop_back();
}

EPoly emod(EPoly a, const EPoly& m) {
  etrim(a);
  int dm = static_cast<int>(m.size()) - 1;
  FieldElement lead_inv = m.back().inv();
  for (int d = static_cast<int>(a.size()) - 1; d >= dm; --d) {
    FieldElement c = a[d] * lead_inv;
    if (c.is_zero()) continue;
    for (int i = 0; i <= dm; ++i) a[d - dm + i] -= c * m[i];
  }
  etrim(a);
  return a;
}

EPoly emul(const EPoly& a, const EPoly& b, const FieldPtr& F) {
  if (a.empty() || b.empty()) return {};
  EPoly r(a.size() + b.size() - 1, FieldElement(F));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  etrim(r);
  return r;
}

EPoly emonic(EPoly a) {
  etrim(a);
  if (a.empty()) return a;
  FieldElement inv = a.back().inv();
  for (auto& c : a) c *= inv;
  return a;
}

EPoly egcd(EPoly a, EPoly b) {
  etrim(a);
  etrim(b);
  while (!b.empty()) {
    EPoly r = emod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return emonic(a);
}

EPoly epowmod(EPoly base, uint64_t e, const EPoly& m, const FieldPtr& F) {
  EPoly r{FieldElement(F, 1)};
  r = emod(r, m);
  base = emod(base, m);
  while (e) {
    if (e & 1) r = emod(emul(r, base, F), m);
    base = emod(emul(base, base, F), m);
    e >>= 1;
  }
  return r;
}

EPoly ediv_exact(EPoly a, const EPoly& b, const FieldPtr& F) {
  etrim(a);
  int db = static_cast<int>(b.size()) - 1;
  int da = static_cast<int>(a.size()) - 1;
  if (da < db) return {};
  EPoly q(da - db + 1, FieldElement(F));
  FieldElement inv = b.back().inv();
  for (int d = da; d >= db; --d) {
    FieldElement c = a[d] * inv;
    q[d - db] = c;
    for (int i = 0; i <= db; ++i) a[d - db + i] -= c * b[i];
  }
  return q;
}

// Split a squarefree polynomial that is a product of distinct linear factors.
void split_linear(const EPoly& f, const FieldPtr& F, std::mt19937_64& rng, std::vector<FieldElement>& out) {
  int d = static_cast<int>(f.size()) - 1;
  if (d <= 0) return;
  if (d == 1) {
    out.push_back(-(f[0] / f[1]));
    return;
  }
  uint32_t p = F->p;
  std::uniform_int_distribution<uint32_t> dist(0, p - 1);
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::vector<uint32_t> dc(F->k);
    for (auto& v : dc) v = dist(rng);
    FieldElement delta(F, dc);
    if (delta.is_zero()) continue;
    // trace polynomial Tr(delta X) mod f, values lie in GF(p) at every root
    EPoly g{FieldElement(F), delta};
    g = emod(g, f);
    EPoly tr = g;
    for (int i = 1; i < F->k; ++i) {
      g = epowmod(g, p, f, F);
      tr.resize(std::max(tr.size(), g.size()), FieldElement(F));
      for (size_t j = 0; j < g.size(); ++j) tr[j] += g[j];
      etrim(tr);
    }
    for (uint32_t c = 0; c < p; ++c) {
      EPoly h = tr;
      if (h.empty()) h.push_back(FieldElement(F));
      h[0] -= FieldElement(F, c);
      EPoly gg = egcd(f, h);
      int dg = static_cast<int>(gg.size()) - 1;
      if (dg > 0 && dg < d) {
        split_linear(gg, F, rng, out);
        split_linear(emonic(ediv_exact(f, gg, F)), F, rng, out);
        return;
      }
    }
  }
  throw SearchLimitExceeded("root splitting did not converge");
}

const std::vector<uint32_t>& embedding_image(const FieldPtr& small, const FieldPtr& big, bool compute) {
  auto& reg = registry();
  {
    std::lock_guard<std::mutex> lock(reg.mu);
    auto it = reg.embeddings.find({small->id, big->id});
    if (it != reg.embeddings.end()) return it->second;
  }
  if (small->p != big->p || big->k % small->k != 0)
    throw NoEmbedding(small->name() + " -> " + big->name());
  if (!compute) throw FieldMismatch(small->name() + " vs " + big->name() + " (no registered embedding)");
  std::vector<uint32_t> img;
  if (small->k == 1) {
    img.assign(big->k, 0);  // prime field generator convention: T maps to 0
  } else {
    auto roots = roots_in(small->modulus, big);
    std::sort(roots.begin(), roots.end(), [](const FieldElement& a, const FieldElement& b) {
      return std::lexicographical_compare(a.coeffs().rbegin(), a.coeffs().rend(), b.coeffs().rbegin(),
                                          b.coeffs().rend());
    });
    img = roots.front().coeffs();
  }
  std::lock_guard<std::mutex> lock(reg.mu);
  auto [it, inserted] = reg.embeddings.emplace(std::make_pair(small->id, big->id), img);
  return it->second;
}

// Bring two elements into one field, embedding the smaller one when allowed.
std::pair<FieldElement, FieldElement> unify(const FieldElement& a, const FieldElement& b) {
  if (!a.field() || !b.field()) throw FieldMismatch("uninitialized field element");
  if (a.field() == b.field()) return {a, b};
  if (a.field()->p != b.field()->p) throw FieldMismatch(a.field()->name() + " vs " + b.field()->name());
  if (a.field()->k <= b.field()->k) {
    embedding_image(a.field(), b.field(), a.field()->k == 1);
    return {embed_element(a, b.field()), b};
  }
  embedding_image(b.field(), a.field(), b.field()->k == 1);
  return {a, embed_element(b, a.field())};
}

}  // namespace

std::string FieldDescriptor::name() const {
  return k == 1 ? "GF(" + std::to_string(p) + ")" : "GF(" + std::to_string(p) + "^" + std::to_string(k) + ")";
}

FieldPtr make_field(uint32_t p, int k, bool allow_small_char) {
  if (!is_prime(p)) throw NonPrime(std::to_string(p) + " is not prime");
  if (k < 1) throw PreconditionFailed("extension degree must be >= 1");
  if (p < 5 && !allow_small_char)
    throw CharacteristicGate("characteristic " + std::to_string(p) + " is reserved for the char-2 constructor");
  auto& reg = registry();
  {
    std::lock_guard<std::mutex> lock(reg.mu);
    auto it = reg.fields.find({p, k});
    if (it != reg.fields.end()) return it->second;
  }
  auto f = std::make_shared<FieldDescriptor>();
  f->p = p;
  f->k = k;
  f->modulus = find_modulus(p, k);
  std::lock_guard<std::mutex> lock(reg.mu);
  auto it = reg.fields.find({p, k});
  if (it != reg.fields.end()) return it->second;
  f->id = static_cast<int>(reg.by_id.size());
  reg.by_id.push_back(f);
  reg.fields[{p, k}] = f;
  return f;
}

FieldElement::FieldElement(FieldPtr f) : f_(std::move(f)), c_(f_->k, 0) {}

FieldElement::FieldElement(FieldPtr f, int64_t v) : f_(std::move(f)), c_(f_->k, 0) { c_[0] = zred(v, f_->p); }

FieldElement::FieldElement(FieldPtr f, std::vector<uint32_t> coeffs) : f_(std::move(f)), c_(std::move(coeffs)) {
  c_.resize(f_->k, 0);
  for (auto& v : c_) v %= f_->p;
}

bool FieldElement::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](uint32_t v) { return v == 0; });
}

bool FieldElement::in_prime_field() const {
  return std::all_of(c_.begin() + (c_.empty() ? 0 : 1), c_.end(), [](uint32_t v) { return v == 0; });
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
  if (f_ != o.f_) {
    auto [a, b] = unify(*this, o);
    return a + b;
  }
  FieldElement r(f_);
  for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = zadd(c_[i], o.c_[i], f_->p);
  return r;
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
  if (f_ != o.f_) {
    auto [a, b] = unify(*this, o);
    return a - b;
  }
  FieldElement r(f_);
  for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = zsub(c_[i], o.c_[i], f_->p);
  return r;
}

FieldElement FieldElement::operator-() const {
  FieldElement r(f_);
  for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = zneg(c_[i], f_->p);
  return r;
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
  if (f_ != o.f_) {
    auto [a, b] = unify(*this, o);
    return a * b;
  }
  FieldElement r(f_);
  r.c_ = mulmod_coeffs(c_, o.c_, *f_);
  return r;
}

bool FieldElement::operator==(const FieldElement& o) const {
  if (f_ != o.f_) {
    auto [a, b] = unify(*this, o);
    return a == b;
  }
  return c_ == o.c_;
}

FieldElement FieldElement::inv() const {
  if (is_zero()) throw DivisionByZero("inverse of zero in " + f_->name());
  if (f_->k == 1) return FieldElement(f_, static_cast<int64_t>(zinv(c_[0], f_->p)));
  poly::Poly a(c_.begin(), c_.end());
  poly::trim(a);
  poly::Poly r = poly::invmod(a, f_->modulus, f_->p);
  r.resize(f_->k, 0);
  return FieldElement(f_, r);
}

FieldElement FieldElement::pow(uint64_t e) const {
  FieldElement r(f_, 1), b = *this;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

std::string FieldElement::to_string() const {
  if (f_->k == 1) return std::to_string(c_[0]);
  std::string s = "[";
  for (size_t i = 0; i < c_.size(); ++i) s += (i ? "," : "") + std::to_string(c_[i]);
  return s + "]";
}

FieldElement field_arithmetic(const FieldElement& a, const FieldElement& b, FieldOp op) {
  switch (op) {
    case FieldOp::add: return a + b;
    case FieldOp::mul: return a * b;
    case FieldOp::inv: return a.inv();
    case FieldOp::pow: return a.pow(b.prime_value());
  }
  return a;
}

uint32_t absolute_trace(const FieldElement& a) {
  FieldElement s = a, t = a;
  for (int i = 1; i < a.field()->k; ++i) {
    t = t.frobenius();
    s += t;
  }
  return s.prime_value();
}

namespace {

// Solve beta^p - beta = a inside a's own field; false when no root there.
bool solve_as(const FieldElement& a, FieldElement& beta) {
  const FieldPtr& F = a.field();
  int k = F->k;
  uint32_t p = F->p;
  std::vector<std::vector<uint32_t>> A(k, std::vector<uint32_t>(k, 0));
  for (int j = 0; j < k; ++j) {
    std::vector<uint32_t> ej(k, 0);
    ej[j] = 1;
    FieldElement b(F, ej);
    FieldElement img = b.frobenius() - b;
    for (int i = 0; i < k; ++i) A[i][j] = img.coeffs()[i];
  }
  std::vector<uint32_t> x;
  if (!solve_small(A, a.coeffs(), p, x)) return false;
  beta = FieldElement(F, x);
  return true;
}

}  // namespace

FieldElement artin_schreier_root(const FieldElement& a) {
  FieldElement beta;
  if (absolute_trace(a) == 0) {
    if (!solve_as(a, beta)) throw SearchLimitExceeded("trace-zero Artin-Schreier system inconsistent");
    return beta;
  }
  const FieldPtr& F = a.field();
  FieldPtr big = make_field(F->p, F->k * static_cast<int>(F->p), true);
  embedding_image(F, big, true);
  FieldElement ab = embed_element(a, big);
  if (!solve_as(ab, beta)) throw SearchLimitExceeded("Artin-Schreier root missing in extension");
  return beta;
}

FieldElement embed_element(const FieldElement& a, const FieldPtr& target) {
  const FieldPtr& F = a.field();
  if (F == target) return a;
  const auto& img = embedding_image(F, target, true);
  if (F->k == 1) return FieldElement(target, static_cast<int64_t>(a.prime_value()));
  FieldElement r(target), g(target, img), pw(target, 1);
  for (int i = 0; i < F->k; ++i) {
    if (a.coeffs()[i]) r += FieldElement(target, static_cast<int64_t>(a.coeffs()[i])) * pw;
    pw *= g;
  }
  return r;
}

std::vector<FieldElement> roots_in(const poly::Poly& f, const FieldPtr& target, uint64_t seed) {
  uint32_t p = target->p;
  poly::Poly fm = poly::monic(f, p);
  if (poly::degree(fm) <= 0) return {};
  // keep only the part that splits over the target: gcd with X^q - X
  EPoly ef;
  for (auto c : fm) ef.push_back(FieldElement(target, static_cast<int64_t>(c)));
  // squarefree part over GF(p) first
  poly::Poly rad = poly::radical(fm, p);
  EPoly er;
  for (auto c : rad) er.push_back(FieldElement(target, static_cast<int64_t>(c)));
  EPoly x{FieldElement(target), FieldElement(target, 1)};
  EPoly xq = emod(x, er);
  for (int i = 0; i < target->k; ++i) xq = epowmod(xq, p, er, target);
  EPoly diff = xq;
  diff.resize(std::max<size_t>(diff.size(), 2), FieldElement(target));
  diff[1] -= FieldElement(target, 1);
  etrim(diff);
  EPoly split = diff.empty() ? emonic(er) : egcd(er, diff);
  std::vector<FieldElement> out;
  std::mt19937_64 rng(seed);
  split_linear(split, target, rng, out);
  return out;
}

}  // namespace modlie
