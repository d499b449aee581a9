#include <random>
#include <set>

#include "doctest.h"
#include "modlie/gf.hpp"

using namespace modlie;

TEST_CASE("prime field arithmetic") {
  auto f5 = make_field(5);
  CHECK(f5->k == 1);
  CHECK(FieldElement(f5, 2) + FieldElement(f5, 4) == FieldElement(f5, 1));
  CHECK(field_arithmetic(FieldElement(f5, 3), FieldElement(f5, 0), FieldOp::inv) == FieldElement(f5, 2));
  auto f7 = make_field(7);
  CHECK(FieldElement(f7, 3) * FieldElement(f7, 5) == FieldElement(f7, 1));
  CHECK_THROWS_AS(FieldElement(f5, 0).inv(), DivisionByZero);
  CHECK_THROWS_AS(make_field(9), NonPrime);
  CHECK_THROWS_AS(make_field(3), CharacteristicGate);
  CHECK_NOTHROW(make_field(2, 1, true));
}

TEST_CASE("scalar helpers") {
  CHECK(zinv(3, 7) == 5);
  CHECK(binom_mod(5, 1, 5) == 0);
  CHECK(binom_mod(6, 2, 5) == 0);  // 15
  CHECK(binom_mod(7, 2, 5) == 1);  // 21
  CHECK(poly::is_irreducible({2, 0, 1}, 5));   // T^2 + 2
  CHECK(!poly::is_irreducible({1, 0, 1}, 5));  // T^2 + 1 = (T-2)(T+2)
}

TEST_CASE("GF(25): element orders divide 24 and a^25 = a") {
  auto f = make_field(5, 2);
  CHECK(f->k == 2);
  CHECK(poly::is_irreducible(f->modulus, 5));
  std::set<std::vector<uint32_t>> seen;
  for (uint32_t a = 0; a < 5; ++a)
    for (uint32_t b = 0; b < 5; ++b) {
      FieldElement x(f, std::vector<uint32_t>{a, b});
      seen.insert(x.coeffs());
      CHECK(x.pow(25) == x);
      if (!x.is_zero()) {
        CHECK(x.pow(24) == FieldElement(f, 1));
        CHECK(x * x.inv() == FieldElement(f, 1));
      }
      // Frobenius fixes exactly the prime field.
      CHECK((x.frobenius() == x) == (b == 0));
    }
  CHECK(seen.size() == 25);
}

TEST_CASE("field descriptors are deterministic") {
  auto a = make_field(7, 3);
  auto b = make_field(7, 3);
  CHECK(a == b);
  CHECK(a->modulus == b->modulus);
}

TEST_CASE("Artin-Schreier roots") {
  auto f5 = make_field(5);
  FieldElement z = artin_schreier_root(FieldElement(f5, 0));
  CHECK(z.pow(5) - z == FieldElement(z.field(), 0));

  FieldElement b = artin_schreier_root(FieldElement(f5, 1));
  CHECK(b.field()->k == 5);
  CHECK(b.pow(5) - b == embed_element(FieldElement(f5, 1), b.field()));
  CHECK(artin_schreier_root(FieldElement(f5, 1)) == b);

  // Trace-zero elements of GF(25) have all five roots inside GF(25).
  auto f25 = make_field(5, 2);
  int trace_zero = 0;
  for (uint32_t c0 = 0; c0 < 5; ++c0)
    for (uint32_t c1 = 0; c1 < 5; ++c1) {
      FieldElement a(f25, std::vector<uint32_t>{c0, c1});
      FieldElement r = artin_schreier_root(a);
      FieldElement lifted = r.field() == f25 ? a : embed_element(a, r.field());
      CHECK(r.pow(5) - r == lifted);
      if (absolute_trace(a) != 0) continue;
      ++trace_zero;
      CHECK(r.field() == f25);
      // Brute force: the roots in GF(25) are exactly r + GF(5).
      int roots = 0;
      for (uint32_t d0 = 0; d0 < 5; ++d0)
        for (uint32_t d1 = 0; d1 < 5; ++d1) {
          FieldElement y(f25, std::vector<uint32_t>{d0, d1});
          if (y.pow(5) - y == a) {
            ++roots;
            CHECK((y - r).in_prime_field());
          }
        }
      CHECK(roots == 5);
    }
  CHECK(trace_zero == 5);
}

TEST_CASE("embeddings are ring homomorphisms") {
  auto f5 = make_field(5);
  auto f25 = make_field(5, 2);
  CHECK(embed_element(FieldElement(f5, 3), f25) == FieldElement(f25, 3));
  auto f625 = make_field(5, 4);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<uint32_t> d(0, 4);
  for (int t = 0; t < 50; ++t) {
    FieldElement a(f25, std::vector<uint32_t>{d(rng), d(rng)});
    FieldElement b(f25, std::vector<uint32_t>{d(rng), d(rng)});
    CHECK(embed_element(a * b, f625) == embed_element(a, f625) * embed_element(b, f625));
    CHECK(embed_element(a + b, f625) == embed_element(a, f625) + embed_element(b, f625));
  }
  CHECK_THROWS_AS(embed_element(FieldElement(f25, 1), make_field(5, 3)), NoEmbedding);
  // Mixed arithmetic with the prime field embeds automatically.
  CHECK((FieldElement(f25, 2) + FieldElement(f5, 3)).is_zero());
}
