#pragma once

#include <cstdint>
#include <vector>

#include "modlie/errors.hpp"

// Scalar arithmetic in GF(p) on plain residues, plus dense polynomials over
// GF(p) stored low degree first.
namespace modlie {

inline uint32_t zadd(uint32_t a, uint32_t b, uint32_t p) {
  uint32_t s = a + b;
  return s >= p ? s - p : s;
}
inline uint32_t zsub(uint32_t a, uint32_t b, uint32_t p) { return a >= b ? a - b : a + p - b; }
inline uint32_t zneg(uint32_t a, uint32_t p) { return a == 0 ? 0 : p - a; }
inline uint32_t zmul(uint32_t a, uint32_t b, uint32_t p) {
  return static_cast<uint32_t>(static_cast<uint64_t>(a) * b % p);
}
uint32_t zpow(uint32_t a, uint64_t e, uint32_t p);
uint32_t zinv(uint32_t a, uint32_t p);
// Reduce a signed integer into [0, p).
inline uint32_t zred(int64_t v, uint32_t p) {
  int64_t r = v % static_cast<int64_t>(p);
  return static_cast<uint32_t>(r < 0 ? r + p : r);
}
bool is_prime(uint64_t n);
// binom(n, k) mod p via Lucas.
uint32_t binom_mod(uint64_t n, uint64_t k, uint32_t p);

namespace poly {

using Poly = std::vector<uint32_t>;

void trim(Poly& f);
int degree(const Poly& f);  // -1 for zero
Poly add(const Poly& a, const Poly& b, uint32_t p);
Poly sub(const Poly& a, const Poly& b, uint32_t p);
Poly mul(const Poly& a, const Poly& b, uint32_t p);
Poly scale(const Poly& a, uint32_t c, uint32_t p);
// Quotient and remainder; b must be nonzero.
void divmod(const Poly& a, const Poly& b, uint32_t p, Poly& q, Poly& r);
Poly mod(const Poly& a, const Poly& b, uint32_t p);
Poly monic(const Poly& a, uint32_t p);
Poly gcd(const Poly& a, const Poly& b, uint32_t p);
Poly derivative(const Poly& a, uint32_t p);
Poly powmod(const Poly& base, uint64_t e, const Poly& m, uint32_t p);
// Inverse of a modulo m; a and m coprime.
Poly invmod(const Poly& a, const Poly& m, uint32_t p);
bool is_irreducible(const Poly& f, uint32_t p);
// Product of the distinct monic irreducible factors of f.
Poly radical(const Poly& f, uint32_t p);

}  // namespace poly
}  // namespace modlie
