#include <doctest.h>

#include "modlie/cartan.hpp"
#include "modlie/errors.hpp"
#include "modlie/restricted.hpp"
#include "small_algebras.hpp"

using namespace modlie;

namespace {

// Span of the images of L's basis in its outermost ambient W(m;n).
SubspaceBasis image_in_witt(const LieAlgebra& L) {
  REQUIRE(L.ambient);
  return SubspaceBasis::span(L.embedding, L.ambient->dim(), L.p());
}

std::vector<size_t> dims(const std::vector<LieAlgebra>& v) {
  std::vector<size_t> out;
  for (const auto& L : v) out.push_back(L.dim());
  return out;
}

}  // namespace

TEST_CASE("Witt algebra dimensions and the e_i table") {
  CHECK(build_witt(1, {1}, 5).dim() == 5);
  CHECK(build_witt(1, {2}, 5).dim() == 25);
  CHECK(build_witt(2, {1, 1}, 5).dim() == 50);
  CHECK(build_witt(1, {1}, 7).dim() == 7);
  CHECK_THROWS_AS(build_witt(2, {1}, 5), DimensionMismatch);

  // x^(i+1)∂ = e_i/(i+1)!; compare with the hand-written Witt table after
  // rescaling each basis vector.
  for (uint32_t p : {5u, 7u}) {
    LieAlgebra W = build_witt(1, {1}, p);
    LieAlgebra ref = testalg::witt_table(p);
    std::vector<uint32_t> scale(p);
    uint64_t f = 1;
    for (uint32_t k = 0; k < p; ++k) {
      scale[k] = static_cast<uint32_t>(f);  // e_{k-1} = k! · x^(k)∂
      f = f * (k + 1) % p;
    }
    for (uint32_t a = 0; a < p; ++a)
      for (uint32_t b = 0; b < p; ++b) {
        Vec lhs = W.bracket(scaled(W.basis_vector(a), scale[a], p), scaled(W.basis_vector(b), scale[b], p));
        Vec rhs(p, 0);
        for (auto [k, c] : ref.bracket_basis(a, b)) rhs[k] = zmul(c, scale[k], p);
        CHECK(lhs == rhs);
      }
  }
}

TEST_CASE("Witt grading, filtration and toral rank metadata") {
  LieAlgebra W = build_witt(2, {1, 1}, 5);
  REQUIRE(W.grading);
  CHECK(graded_component(W, -1).dim() == 2);
  CHECK(graded_component(W, 0).dim() == 4);
  REQUIRE(W.filtration);
  CHECK(W.filtration->at(0).dim() == 48);
  CHECK(W.meta.at("toral_rank") == "2");
  CHECK(build_witt(1, {2}, 5).meta.count("toral_rank") == 0);
  CHECK(witt_polynomial_check(5).e_table_matches);
  CHECK(witt_polynomial_check(5).u_relation_holds);
}

TEST_CASE("Special algebra S(3;1) against the divergence-free spanning set") {
  LieAlgebra S = build_cartan(CartanFamily::S, 3, {1, 1, 1}, 5);
  auto chain = derived_to_stability(S);
  CHECK(dims(chain) == std::vector<size_t>{251, 248});  // (m-1)p^m + 1, (m-1)(p^m - 1)
  CHECK(is_simple(chain[1]));

  // S^(1) is spanned by ∂_j(f)∂_i − ∂_i(f)∂_j.
  const LieAlgebra& W = *chain[1].ambient;
  OPtr O = divided_powers_of(W);
  WittBasis WB(O);
  std::vector<Vec> gens;
  for (size_t k = 0; k < O->dim(); ++k) {
    DPElement f = DPElement::monomial(O, O->exponent(k));
    for (size_t i = 0; i < 3; ++i)
      for (size_t j = i + 1; j < 3; ++j) {
        SpecialDerivation D = SpecialDerivation::zero(O);
        D.f[i] = partial_derivative(j, f);
        D.f[j] = -partial_derivative(i, f);
        gens.push_back(WB.coordinates(D));
      }
  }
  CHECK(SubspaceBasis::span(gens, W.dim(), 5) == image_in_witt(chain[1]));
  CHECK_THROWS_AS(build_cartan(CartanFamily::S, 2, {1, 1}, 5), WrongDegree);
}

TEST_CASE("Hamiltonian algebra H(2;1) and its derived chain") {
  LieAlgebra H = build_cartan(CartanFamily::H, 2, {1, 1}, 5);
  auto chain = derived_to_stability(H);
  CHECK(dims(chain) == std::vector<size_t>{26, 24, 23});  // p^2+1, p^2-1, p^2-2
  CHECK(is_simple(chain[2]));
  CHECK(is_restrictable(chain[2]));

  // H^(1) is the image of f ↦ ∂_1(f)∂_2 − ∂_2(f)∂_1.
  const LieAlgebra& W = *chain[1].ambient;
  OPtr O = divided_powers_of(W);
  WittBasis WB(O);
  std::vector<Vec> gens;
  for (size_t k = 0; k < O->dim(); ++k) {
    DPElement f = DPElement::monomial(O, O->exponent(k));
    gens.push_back(WB.coordinates(SpecialDerivation{{-partial_derivative(1, f), partial_derivative(0, f)}}));
  }
  CHECK(SubspaceBasis::span(gens, W.dim(), 5) == image_in_witt(chain[1]));
  // the top monomial's Hamiltonian field is missing from H^(2)
  DPElement top = DPElement::monomial(O, O->top());
  Vec t = WB.coordinates(SpecialDerivation{{-partial_derivative(1, top), partial_derivative(0, top)}});
  CHECK_FALSE(image_in_witt(chain[2]).contains(t));
}

TEST_CASE("contact algebra K(3;1)") {
  LieAlgebra K = build_cartan(CartanFamily::K, 3, {1, 1, 1}, 5);
  CHECK(K.dim() == 125);
  CHECK(is_perfect(K));  // p does not divide m+3 = 6
  REQUIRE(K.grading);
  CHECK(graded_component(K, -2).dim() == 1);
  CHECK(graded_component(K, -1).dim() == 2);
  CHECK(K.meta.at("toral_rank") == "2");
  MaximalSubalgebraReport r = standard_maximal_subalgebra(K);
  CHECK(K.dim() - r.space.dim() == 3);
  CHECK(r.maximal);
}

TEST_CASE("form-built algebras keep filtration and ambient") {
  LieAlgebra W = build_witt(1, {1}, 5);
  MaximalSubalgebraReport r = standard_maximal_subalgebra(W);
  CHECK(r.space.dim() == 4);
  CHECK(r.maximal);

  OPtr O = make_divided_powers({1, 1}, 5);
  LieAlgebra CH = build_from_form(hamiltonian_form(O), FormMode::scale_by_F);
  LieAlgebra H = build_from_form(hamiltonian_form(O), FormMode::annihilate);
  CHECK(CH.dim() == H.dim() + 1);  // the Euler-type grading element
  CHECK(image_in_witt(CH).contains(image_in_witt(H)));
  CHECK_THROWS_AS(build_from_form(volume_form(O), FormMode::scale_by_O), WrongDegree);
  DifferentialForm degenerate = hamiltonian_form(O).times(DPElement::variable(O, 0));
  CHECK_THROWS_AS(build_from_form(degenerate, FormMode::annihilate), DegenerateForm);
}

TEST_CASE("normal forms") {
  NormalFormSpec c;
  c.family = NormalFormFamily::contact_I;
  c.i = 2;
  c.pairs = {{0, 1}};
  TwistedForm k = normal_form(c, 3, {1, 1, 1}, 5);
  OPtr O = k.base.parent();
  CHECK_FALSE(k.twisted());
  CHECK(k.base == DifferentialForm::dx(O, 2) + DifferentialForm::dx(O, 1).times(DPElement::variable(O, 0)));

  NormalFormSpec v;
  v.family = NormalFormFamily::volume_delta;
  TwistedForm d = normal_form(v, 3, {1, 1, 1}, 5);
  const OPtr& Od = d.base.parent();
  CHECK(d.base.coefficient(0b111) == DPElement::constant(Od, 1) - DPElement::monomial(Od, {4, 4, 4}));

  NormalFormSpec h;
  h.family = NormalFormFamily::hamiltonian_AB;
  h.blocks = {HamiltonianBlock{}};
  TwistedForm ab = normal_form(h, 2, {1, 1}, 5);
  CHECK(ab.base == hamiltonian_form(ab.base.parent()));

  HamiltonianBlock bad;
  bad.kind = HamiltonianBlock::Kind::block_cyclic;
  bad.r = 3, bad.d = 2, bad.s = 2, bad.lambda = 1;
  h.blocks = {bad};
  CHECK_THROWS_AS(normal_form(h, 6, {1, 1, 1, 1, 1, 1}, 5), BadBlockShape);
  c.pairs = {{0, 2}};
  CHECK_THROWS_AS(normal_form(c, 3, {1, 1, 1}, 5), InvalidDecomposition);
}

TEST_CASE("restrictability profiles match the predicted pattern") {
  OPtr O = make_divided_powers({1, 1}, 5);
  TwistedForm wH = TwistedForm::plain(hamiltonian_form(O));
  CHECK(is_exact_form(wH));
  RestrictabilityProfile rp = restrictability_profile(build_from_form(wH, FormMode::annihilate), wH, FormMode::annihilate);
  CHECK(rp.consistent);
  CHECK(rp.restrictable.back());

  OPtr O21 = make_divided_powers({2, 1}, 5);
  TwistedForm w21 = TwistedForm::plain(hamiltonian_form(O21));
  RestrictabilityProfile r21 = restrictability_profile(build_from_form(w21, FormMode::annihilate), w21, FormMode::annihilate);
  CHECK(r21.consistent);
  CHECK_FALSE(r21.restrictable.back());

  NormalFormSpec s;
  s.family = NormalFormFamily::volume_exp_i;
  TwistedForm we = normal_form(s, 3, {1, 1, 1}, 5);
  CHECK_FALSE(is_exact_form(we));
  LieAlgebra Se = build_from_form(we, FormMode::annihilate);
  CHECK(Se.dim() == 250);
  RestrictabilityProfile re = restrictability_profile(Se, we, FormMode::annihilate);
  CHECK(re.consistent);
  CHECK_FALSE(re.restrictable.back());
}
