#include "modlie/zp.hpp"

#include <algorithm>
#include <string>
#include <tuple>
#include <utility>

namespace modlie {

uint32_t zpow(uint32_t a, uint64_t e, uint32_t p) {
  uint64_t r = 1 % p, b = a % p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<uint32_t>(r);
}

uint32_t zinv(uint32_t a, uint32_t p) {
  a %= p;
  if (a == 0) throw DivisionByZero("inverse of 0 in GF(" + std::to_string(p) + ")");
  int64_t t = 0, nt = 1, r = p, nr = a;
  while (nr) {
    int64_t q = r / nr;
    std::tie(t, nt) = std::make_pair(nt, t - q * nt);
    std::tie(r, nr) = std::make_pair(nr, r - q * nr);
  }
  return zred(t, p);
}

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

uint32_t binom_mod(uint64_t n, uint64_t k, uint32_t p) {
  if (k > n) return 0;
  uint64_t r = 1;
  while (n || k) {
    uint64_t ni = n % p, ki = k % p;
    if (ki > ni) return 0;
    // small binomial by multiplicative formula
    uint64_t num = 1, den = 1;
    for (uint64_t i = 0; i < ki; ++i) {
      num = num * ((ni - i) % p) % p;
      den = den * ((i + 1) % p) % p;
    }
    r = r * num % p * zinv(static_cast<uint32_t>(den), p) % p;
    n /= p;
    k /= p;
  }
  return static_cast<uint32_t>(r);
}

namespace poly {

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int degree(const Poly& f) {
  for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
    if (f[i]) return i;
  return -1;
}

Poly add(const Poly& a, const Poly& b, uint32_t p) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] = zadd(r[i], b[i], p);
  trim(r);
  return r;
}

Poly sub(const Poly& a, const Poly& b, uint32_t p) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] = zsub(r[i], b[i], p);
  trim(r);
  return r;
}

Poly mul(const Poly& a, const Poly& b, uint32_t p) {
  if (a.empty() || b.empty()) return {};
  std::vector<uint64_t> acc(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j) acc[i + j] = (acc[i + j] + uint64_t(a[i]) * b[j]) % p;
  }
  Poly r(acc.size());
  for (size_t i = 0; i < acc.size(); ++i) r[i] = static_cast<uint32_t>(acc[i]);
  trim(r);
  return r;
}

Poly scale(const Poly& a, uint32_t c, uint32_t p) {
  Poly r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = zmul(a[i], c, p);
  trim(r);
  return r;
}

void divmod(const Poly& a, const Poly& b, uint32_t p, Poly& q, Poly& r) {
  int db = degree(b);
  if (db < 0) throw DivisionByZero("polynomial division by zero");
  r = a;
  trim(r);
  int da = degree(r);
  q.assign(da >= db ? da - db + 1 : 0, 0);
  uint32_t lead_inv = zinv(b[db], p);
  for (int d = da; d >= db; --d) {
    uint32_t c = zmul(r[d], lead_inv, p);
    if (!c) continue;
    q[d - db] = c;
    for (int i = 0; i <= db; ++i) r[d - db + i] = zsub(r[d - db + i], zmul(c, b[i], p), p);
  }
  trim(r);
  trim(q);
}

Poly mod(const Poly& a, const Poly& b, uint32_t p) {
  Poly q, r;
  divmod(a, b, p, q, r);
  return r;
}

Poly monic(const Poly& a, uint32_t p) {
  int d = degree(a);
  if (d < 0) return {};
  return scale(a, zinv(a[d], p), p);
}

Poly gcd(const Poly& a, const Poly& b, uint32_t p) {
  Poly x = a, y = b;
  trim(x);
  trim(y);
  while (!y.empty()) {
    Poly r = mod(x, y, p);
    x = std::move(y);
    y = std::move(r);
  }
  return monic(x, p);
}

Poly derivative(const Poly& a, uint32_t p) {
  if (a.size() <= 1) return {};
  Poly r(a.size() - 1);
  for (size_t i = 1; i < a.size(); ++i) r[i - 1] = zmul(a[i], static_cast<uint32_t>(i % p), p);
  trim(r);
  return r;
}

Poly powmod(const Poly& base, uint64_t e, const Poly& m, uint32_t p) {
  Poly result{1};
  result = mod(result, m, p);
  Poly b = mod(base, m, p);
  while (e) {
    if (e & 1) result = mod(mul(result, b, p), m, p);
    b = mod(mul(b, b, p), m, p);
    e >>= 1;
  }
  return result;
}

Poly invmod(const Poly& a, const Poly& m, uint32_t p) {
  // extended Euclid
  Poly r0 = m, r1 = mod(a, m, p), s0{}, s1{1};
  while (!r1.empty()) {
    Poly q, r;
    divmod(r0, r1, p, q, r);
    Poly s2 = sub(s0, mul(q, s1, p), p);
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (degree(r0) != 0) throw DivisionByZero("polynomial not invertible modulo m");
  return mod(scale(s0, zinv(r0[0], p), p), m, p);
}

static Poly x_pow_p_iter(const Poly& f, int times, uint32_t p) {
  Poly x{0, 1};
  Poly r = mod(x, f, p);
  for (int i = 0; i < times; ++i) r = powmod(r, p, f, p);
  return r;
}

bool is_irreducible(const Poly& f, uint32_t p) {
  int k = degree(f);
  if (k <= 0) return false;
  if (k == 1) return true;
  Poly x{0, 1};
  // X^{p^k} == X mod f
  if (sub(x_pow_p_iter(f, k, p), mod(x, f, p), p).size() != 0) return false;
  for (int r = 2; r <= k; ++r) {
    if (k % r || !is_prime(r)) continue;
    Poly g = sub(x_pow_p_iter(f, k / r, p), x, p);
    if (degree(gcd(f, g, p)) != 0) return false;
  }
  return true;
}

// f(X) = h(X^p) = h(X)^p over GF(p); return h.
static Poly pth_root(const Poly& f, uint32_t p) {
  Poly h;
  for (size_t i = 0; i < f.size(); i += p) h.push_back(f[i]);
  trim(h);
  return h;
}

Poly radical(const Poly& f0, uint32_t p) {
  Poly f = monic(f0, p);
  if (degree(f) <= 0) return Poly{1};
  Poly d = derivative(f, p);
  if (d.empty()) return radical(pth_root(f, p), p);
  Poly g = gcd(f, d, p);
  Poly w, rem;
  divmod(f, g, p, w, rem);
  // strip factors of w from g; what remains is a p-th power
  for (;;) {
    Poly c = gcd(g, w, p);
    if (degree(c) <= 0) break;
    Poly q;
    divmod(g, c, p, q, rem);
    g = q;
  }
  Poly r = monic(w, p);
  if (degree(g) > 0) r = mul(r, radical(pth_root(monic(g, p), p), p), p);
  return monic(r, p);
}

}  // namespace poly
}  // namespace modlie
