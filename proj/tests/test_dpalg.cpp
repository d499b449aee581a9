#include <doctest.h>

#include <random>

#include "modlie/dpalg.hpp"
#include "modlie/errors.hpp"

using namespace modlie;

namespace {

DPElement random_element(const OPtr& O, std::mt19937_64& rng, bool augmented, size_t terms = 4) {
  std::uniform_int_distribution<size_t> pick(augmented ? 1 : 0, O->dim() - 1);
  std::uniform_int_distribution<uint32_t> coef(1, O->p() - 1);
  SparseVec v;
  for (size_t k = 0; k < terms; ++k) v.emplace_back(static_cast<uint32_t>(pick(rng)), coef(rng));
  return DPElement(O, v);
}

uint64_t factorial_mod(unsigned n, uint32_t p) {
  uint64_t f = 1;
  for (unsigned k = 2; k <= n; ++k) f = f * k % p;
  return f;
}

}  // namespace

TEST_CASE("divided power monomial products") {
  auto O = make_divided_powers({1}, 5);
  auto x = DPElement::variable(O, 0);
  CHECK(x * x == DPElement::monomial(O, {2}, 2));
  CHECK((DPElement::monomial(O, {4}) * x).is_zero());
  // x^(2) x^(2) = binom(4,2) x^(4)
  CHECK(DPElement::monomial(O, {2}) * DPElement::monomial(O, {2}) == DPElement::monomial(O, {4}, 6 % 5));
  auto O2 = make_divided_powers({1, 2}, 3);
  CHECK(O2->dim() == 27);
  CHECK(O2->index({2, 8}).value() == 26);
  CHECK_FALSE(O2->index({3, 0}).has_value());
  // x2^(3) x2^(3) = binom(6,3) x2^(6) = 20 = 2 mod 3
  auto a = DPElement::monomial(O2, {0, 3});
  CHECK(a * a == DPElement::monomial(O2, {0, 6}, 2));
}

TEST_CASE("divided power multiplication is associative and commutative") {
  for (auto [n, p] : std::vector<std::pair<std::vector<unsigned>, uint32_t>>{{{1}, 5}, {{1, 1}, 3}, {{2}, 2}}) {
    auto O = make_divided_powers(n, p);
    for (size_t a = 0; a < O->dim(); ++a)
      for (size_t b = 0; b < O->dim(); ++b) {
        DPElement xa(O, {{uint32_t(a), 1}}), xb(O, {{uint32_t(b), 1}});
        CHECK(xa * xb == xb * xa);
        for (size_t c = 0; c < O->dim(); ++c) {
          DPElement xc(O, {{uint32_t(c), 1}});
          CHECK((xa * xb) * xc == xa * (xb * xc));
        }
      }
  }
}

TEST_CASE("divided power map axioms on random samples") {
  std::mt19937_64 rng(7);
  auto O = make_divided_powers({2, 1}, 3);
  const uint32_t p = O->p();
  for (int trial = 0; trial < 200; ++trial) {
    auto f = random_element(O, rng, true);
    auto g = random_element(O, rng, true);
    auto h = random_element(O, rng, false, 2);
    unsigned r = 1 + trial % 4, s = 1 + (trial / 4) % 4;
    // f^(r) f^(s) = binom(r+s, r) f^(r+s)
    CHECK(divided_power(f, r) * divided_power(f, s) == divided_power(f, r + s).scaled(binom_mod(r + s, r, p)));
    // (f+g)^(s) = sum f^(i) g^(s-i)
    DPElement sum(O);
    for (unsigned i = 0; i <= s; ++i) sum = sum + divided_power(f, i) * divided_power(g, s - i);
    CHECK(divided_power(f + g, s) == sum);
    // (h f)^(s) = h^s f^(s)
    DPElement hs = DPElement::constant(O, 1);
    for (unsigned i = 0; i < s; ++i) hs = hs * h;
    CHECK(divided_power(h * f, s) == hs * divided_power(f, s));
    // (f^(r))^(s) = (rs)!/(s!(r!)^s) f^(rs), for rs < p where the factorials are invertible
    if (r * s < p) {
      uint64_t den = factorial_mod(s, p);
      for (unsigned i = 0; i < s; ++i) den = den * factorial_mod(r, p) % p;
      uint32_t c = zmul(static_cast<uint32_t>(factorial_mod(r * s, p)), zinv(static_cast<uint32_t>(den), p), p);
      CHECK(divided_power(divided_power(f, r), s) == divided_power(f, r * s).scaled(c));
      // f^(s) = f^s / s!
      DPElement fs = DPElement::constant(O, 1);
      for (unsigned i = 0; i < s; ++i) fs = fs * f;
      CHECK(divided_power(f, s) == fs.scaled(zinv(static_cast<uint32_t>(factorial_mod(s, p)), p)));
    }
  }
  CHECK_THROWS_AS(divided_power(DPElement::constant(O, 1), 2), NonzeroConstantTerm);
}

TEST_CASE("truncated exponential") {
  auto O = make_divided_powers({1, 1}, 5);
  auto x = DPElement::variable(O, 0), y = DPElement::variable(O, 1);
  CHECK(exp_truncated(x) * exp_truncated(-x) == DPElement::constant(O, 1));
  CHECK(exp_truncated(x + y) == exp_truncated(x) * exp_truncated(y));
  // exp x = sum x^(i)
  DPElement e(O);
  for (uint32_t i = 0; i < 5; ++i) e = e + DPElement::monomial(O, {i, 0});
  CHECK(exp_truncated(x) == e);
  CHECK(partial_derivative(0, exp_truncated(x)) == exp_truncated(x) - DPElement::monomial(O, {4, 0}));
}

TEST_CASE("derivations and exterior calculus") {
  std::mt19937_64 rng(11);
  auto O = make_divided_powers({1, 1, 1}, 3);
  for (int trial = 0; trial < 30; ++trial) {
    auto f = random_element(O, rng, false);
    auto g = random_element(O, rng, false);
    for (size_t i = 0; i < 3; ++i) {
      CHECK(partial_derivative(i, f * g) == partial_derivative(i, f) * g + f * partial_derivative(i, g));
      for (size_t j = 0; j < 3; ++j)
        CHECK(partial_derivative(i, partial_derivative(j, f)) == partial_derivative(j, partial_derivative(i, f)));
    }
    CHECK(exterior_d(exterior_d(f)).is_zero());
    auto w = wedge(exterior_d(f), DifferentialForm::dx(O, 2)).times(g);
    CHECK(exterior_d(exterior_d(w)).is_zero());
    // d(a ∧ b) = da ∧ b - a ∧ db for a 1-form a
    auto a = exterior_d(f).times(g);
    auto b = DifferentialForm::dx(O, 0).times(f);
    CHECK(exterior_d(wedge(a, b)) == wedge(exterior_d(a), b) - wedge(a, exterior_d(b)));

    SpecialDerivation D{{random_element(O, rng, false), random_element(O, rng, false), random_element(O, rng, false)}};
    SpecialDerivation E{{random_element(O, rng, false), random_element(O, rng, false), random_element(O, rng, false)}};
    CHECK(D.apply(f * g) == D.apply(f) * g + f * D.apply(g));
    CHECK(bracket(D, E).apply(f) == D.apply(E.apply(f)) - E.apply(D.apply(f)));
    // Lie derivative commutes with d and is a derivation of the wedge product
    CHECK(derivation_action_on_form(D, exterior_d(f)) == exterior_d(D.apply(f)));
    CHECK(derivation_action_on_form(D, wedge(a, b)) ==
          wedge(derivation_action_on_form(D, a), b) + wedge(a, derivation_action_on_form(D, b)));
    CHECK(derivation_action_on_form(bracket(D, E), a) ==
          derivation_action_on_form(D, derivation_action_on_form(E, a)) -
              derivation_action_on_form(E, derivation_action_on_form(D, a)));
  }
}

TEST_CASE("wedge signs") {
  auto O = make_divided_powers({1, 1, 1}, 5);
  auto d0 = DifferentialForm::dx(O, 0), d1 = DifferentialForm::dx(O, 1), d2 = DifferentialForm::dx(O, 2);
  CHECK(wedge(d1, d0) == wedge(d0, d1).scaled(4));
  CHECK(wedge(d0, d0).is_zero());
  CHECK(DifferentialForm::dx(O, std::vector<size_t>{2, 0, 1}) == DifferentialForm::dx(O, std::vector<size_t>{0, 1, 2}));
  CHECK(DifferentialForm::dx(O, std::vector<size_t>{1, 0, 2}) == wedge(wedge(d0, d1), d2).scaled(4));
}

TEST_CASE("standard forms are nondegenerate") {
  auto O3 = make_divided_powers({1, 1, 1}, 5);
  auto vol = DifferentialForm::dx(O3, std::vector<size_t>{0, 1, 2});
  CHECK(nondegenerate(vol));
  auto x = [&](const OPtr& O, size_t i) { return DPElement::variable(O, i); };
  CHECK_FALSE(nondegenerate(vol.times(x(O3, 0))));
  // contact form dx3 + x2 dx1 - x1 dx2
  auto contact = DifferentialForm::dx(O3, 2) + DifferentialForm::dx(O3, 0).times(x(O3, 1)) -
                 DifferentialForm::dx(O3, 1).times(x(O3, 0));
  CHECK(nondegenerate(contact));
  CHECK_FALSE(nondegenerate(DifferentialForm::dx(O3, 2)));
  auto O4 = make_divided_powers({1, 1, 1, 1}, 3);
  auto symp = wedge(DifferentialForm::dx(O4, 0), DifferentialForm::dx(O4, 2)) +
              wedge(DifferentialForm::dx(O4, 1), DifferentialForm::dx(O4, 3));
  CHECK(nondegenerate(symp));
  CHECK_FALSE(nondegenerate(wedge(DifferentialForm::dx(O4, 0), DifferentialForm::dx(O4, 2))));
  CHECK_THROWS_AS(nondegenerate(wedge(DifferentialForm::dx(O4, 0), DifferentialForm::dx(O4, 2)).times(x(O4, 1))),
                  NotClosed);
  // a twisted symplectic form (exp x1) d(x1 dx3 + x2 dx4)-like: closedness is checked after stripping exp
  auto inner = DifferentialForm::dx(O4, 2).times(x(O4, 0)) + DifferentialForm::dx(O4, 3).times(x(O4, 1));
  auto stripped = exterior_d(inner) + wedge(exterior_d(x(O4, 0)), inner);
  CHECK(nondegenerate(TwistedForm{x(O4, 0), stripped}));
  CHECK_THROWS_AS(nondegenerate(DifferentialForm::function(x(O4, 0))), WrongDegree);
}

TEST_CASE("divided powers of forms") {
  auto O4 = make_divided_powers({1, 1, 1, 1}, 5);
  auto symp = wedge(DifferentialForm::dx(O4, 0), DifferentialForm::dx(O4, 2)) +
              wedge(DifferentialForm::dx(O4, 1), DifferentialForm::dx(O4, 3));
  auto sq = form_divided_power(symp, 2);
  // (dx1∧dx3 + dx2∧dx4)^(2) = dx1∧dx3∧dx2∧dx4 = -dx1∧dx2∧dx3∧dx4
  CHECK(sq == DifferentialForm::dx(O4, std::vector<size_t>{0, 1, 2, 3}).scaled(4));
  CHECK(form_divided_power(symp, 1) == symp);
  CHECK(form_divided_power(symp, 3).is_zero());
  CHECK_THROWS_AS(form_divided_power(symp, 5), SBeyondCharacteristic);
  CHECK_THROWS_AS(form_divided_power(DifferentialForm::dx(O4, 0), 2), WrongDegree);
}
