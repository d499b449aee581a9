#include <doctest.h>

#include <random>
#include <set>

#include "modlie/cartan.hpp"
#include "modlie/errors.hpp"
#include "modlie/exceptional.hpp"
#include "modlie/restricted.hpp"
#include "small_algebras.hpp"

using namespace modlie;

namespace {

LieAlgebra witt11() { return build_witt(1, {1}, 5); }
Vec e(const LieAlgebra& W, int i) { return W.basis_vector(static_cast<size_t>(i + 1)); }

std::multiset<size_t> weight_dims(const RootDatum& R) {
  std::multiset<size_t> out;
  for (const auto& s : R.spaces) out.insert(s.dim());
  return out;
}

// Σ_{k<p} (ad x)^k / k!
Matrix truncated_exp(const Matrix& a) {
  const uint32_t p = a.p();
  Matrix out = Matrix::identity(a.rows(), p), term = Matrix::identity(a.rows(), p);
  for (uint32_t k = 1; k < p; ++k) {
    term = (term * a).scaled(zinv(k, p));
    out = out + term;
  }
  return out;
}

}  // namespace

TEST_CASE("p-map on W(1;1) and on matrix algebras") {
  LieAlgebra W = witt11();
  PMap P(W);
  CHECK_FALSE(P.uses_realization());
  CHECK(P.unique());
  CHECK(is_zero(P(e(W, -1))));
  CHECK(P(e(W, 0)) == e(W, 0));
  CHECK(is_zero(P(e(W, 1))));

  LieAlgebra sl2 = testalg::sl(2, 5);
  PMap Q(sl2);
  CHECK(Q.uses_realization());
  CHECK(Q(sl2.basis_vector(0)) == sl2.basis_vector(0));  // diag(1,-1)^5 = diag(1,-1)
  CHECK(is_zero(Q(sl2.basis_vector(1))));

  // the attached classical p-map agrees with the one read off from ad
  LieAlgebra G2 = build_chevalley('G', 2, 5);
  PMap A(G2, false);
  REQUIRE(G2.pmap);
  for (size_t i = 0; i < G2.dim(); ++i) CHECK(A(G2.basis_vector(i)) == (*G2.pmap)[i]);
}

TEST_CASE("restrictability and p-envelopes") {
  CHECK(is_restrictable(witt11()));
  LieAlgebra W2 = build_witt(1, {2}, 5);
  CHECK_FALSE(is_restrictable(W2));
  CHECK_THROWS_AS(attach_pmap(W2), NotRestrictable);
  LieAlgebra env = p_envelope(W2);
  CHECK(env.dim() == 26);  // adds ∂^5
  CHECK(is_restrictable(env));
  CHECK(p_envelope(witt11()).dim() == 5);

  auto H = derived_to_stability(build_cartan(CartanFamily::H, 2, {1, 1}, 5));
  // H(2;1)^(2) is restrictable, so its envelope adds nothing
  CHECK(adjoint_p_closure(H[2]).dim() == 23);
  CHECK(p_envelope(H[2]).dim() == 23);
  CHECK_THROWS_AS(p_envelope(testalg::heisenberg(5)), NotCentreless);

  LieAlgebra W = witt11();
  attach_pmap(W);
  REQUIRE(W.pmap);
  CHECK((*W.pmap)[1] == e(W, 0));
}

TEST_CASE("Jordan decomposition") {
  LieAlgebra W = witt11();
  JordanParts t = jordan_decomposition(W, e(W, 0));
  CHECK(t.semisimple == e(W, 0));
  CHECK(is_zero(t.nilpotent));
  JordanParts n = jordan_decomposition(W, e(W, -1));
  CHECK(is_zero(n.semisimple));
  CHECK(n.nilpotent == e(W, -1));

  Vec x = vadd(e(W, 0), e(W, 1), 5);
  JordanParts j = jordan_decomposition(W, x);
  CHECK(vadd(j.semisimple, j.nilpotent, 5) == x);
  CHECK(is_zero(W.bracket(j.semisimple, j.nilpotent)));
  PMap P(W);
  CHECK(is_zero(P.iterate(j.nilpotent, 2)));
  CHECK(semisimple_torus(W, j.semisimple).contains(j.semisimple));
}

TEST_CASE("toral elements and maximal tori") {
  LieAlgebra W = witt11();
  auto te = toral_elements(W, SubspaceBasis::span({e(W, 0)}, 5, 5));
  REQUIRE(te.size() == 1);
  CHECK(SubspaceBasis::span(te, 5, 5) == SubspaceBasis::span({e(W, 0)}, 5, 5));
  CHECK(toral_elements(W, SubspaceBasis::span({e(W, -1)}, 5, 5)).empty());
  CHECK_THROWS_AS(toral_elements(W, SubspaceBasis::span({e(W, -1), e(W, 0)}, 5, 5)), NotAbelian);

  TorusSearch s = maximal_torus(W);
  CHECK(s.mt_estimate == 1);
  CHECK(s.exact);
  CHECK(s.maximal_certified);

  LieAlgebra M = build_melikian(1, 1);
  MelikianTorusAnalysis a = melikian_t0_analysis(M);
  CHECK(toral_elements(M, a.torus).size() == 2);

  ToralRank nil = toral_rank_via_adjoint(testalg::heisenberg(5));
  CHECK(nil.value == 0);
  CHECK(nil.exact);
  ToralRank sl2 = absolute_toral_rank(build_matrix_classical(MatrixKind::sl, 2, 5));
  CHECK(sl2.value == 1);
  CHECK(sl2.exact);
  CHECK_THROWS_AS(absolute_toral_rank(testalg::heisenberg(5)), NotCentreless);
  CHECK(absolute_toral_rank(build_witt(1, {2}, 5)).value >= 1);
}

TEST_CASE("root decompositions") {
  LieAlgebra W = witt11();
  RootDatum R = root_decomposition(W, {e(W, 0)});
  CHECK(R.weights.size() == 5);
  CHECK(weight_dims(R) == std::multiset<size_t>{1, 1, 1, 1, 1});
  // [e_0, e_i] = i e_i
  for (int i = -1; i <= 3; ++i) {
    const SubspaceBasis* s = R.space_of(Vec{static_cast<uint32_t>((i + 5) % 5)});
    REQUIRE(s);
    CHECK(s->contains(e(W, i)));
  }
  CHECK(root_grading_holds(W, R));

  RootDatum R2 = root_decomposition(W, {vadd(e(W, -1), e(W, 0), 5)});
  CHECK(weight_dims(R2) == std::multiset<size_t>{1, 1, 1, 1, 1});

  LieAlgebra ab = testalg::abelian(2, 5);
  RootDatum Ra = root_decomposition(ab, {ab.basis_vector(0), ab.basis_vector(1)});
  CHECK(Ra.weights.size() == 1);
  CHECK(Ra.zero.has_value());

  // ad of [[0,1],[2,0]] has eigenvalues ±2√2, outside GF(5)
  LieAlgebra sl2 = testalg::sl(2, 5);
  Vec x(3, 0);
  x[1] = 1, x[2] = 2;
  CHECK_THROWS_AS(root_decomposition(sl2, {x}), NotSplit);
}

TEST_CASE("sections") {
  LieAlgebra W = witt11();
  RootDatum R = root_decomposition(W, {e(W, 0)});
  CHECK(k_section(W, R, {Vec{1}}).dim() == 5);
  CHECK(k_section(W, R, {}).dim() == 1);
  CHECK_THROWS_AS(k_section(W, R, {Vec{1}, Vec{2}}), DependentRoots);
}

TEST_CASE("Jacobson's formula") {
  LieAlgebra sl2 = testalg::sl(2, 5);
  JacobsonCheck ef = jacobson_terms(sl2, sl2.basis_vector(1), sl2.basis_vector(2));
  CHECK(ef.operator_identity);
  CHECK(ef.pmap_identity);
  LieAlgebra W = witt11();
  JacobsonCheck c = jacobson_terms(W, e(W, 0), scaled(e(W, 0), 3, 5));
  for (const Vec& s : c.s) CHECK(is_zero(s));
  std::mt19937_64 rng(11);
  for (int k = 0; k < 5; ++k) {
    Vec x(5), y(5);
    for (auto& v : x) v = static_cast<uint32_t>(rng() % 5);
    for (auto& v : y) v = static_cast<uint32_t>(rng() % 5);
    JacobsonCheck j = jacobson_terms(W, x, y);
    CHECK(j.operator_identity);
    CHECK(j.pmap_identity);
  }
}

TEST_CASE("Winter exponential on W(1;1)") {
  LieAlgebra W = witt11();
  RootDatum R = root_decomposition(W, {e(W, 0)});
  WinterData d = winter_exponential(W, R, e(W, -1));
  CHECK(d.m == 1);
  CHECK(is_zero(d.q));
  CHECK(d.over_prime_field);
  CHECK(d.E == truncated_exp(W.ad(e(W, -1))));
  CHECK(d.invertible);
  CHECK(d.cartan_validated);
  CHECK(d.roots_match);
  // the new torus is spanned by (1+x)∂ up to scaling
  REQUIRE(d.new_toral_basis.size() == 1);
  CHECK(SubspaceBasis::span(d.new_toral_basis, 5, 5) ==
        SubspaceBasis::span({vadd(e(W, -1), e(W, 0), 5)}, 5, 5));
  CHECK_THROWS(winter_exponential(W, R, vadd(e(W, -1), e(W, 1), 5)));
}

TEST_CASE("weight-set comparison") {
  LieAlgebra W = witt11();
  RootDatum R1 = root_decomposition(W, {e(W, 0)});
  WeightComparison same = weight_set_compare(R1, R1);
  CHECK(same.found);
  RootDatum R2 = root_decomposition(W, {vadd(e(W, -1), e(W, 0), 5)});
  WeightComparison c = weight_set_compare(R1, R2);
  CHECK(c.found);
  CHECK(c.zero_in_first);
  CHECK(c.full_line_second);

  // sl(2) diagonal torus: weights 0, ±2 with the zero space of dim 1
  LieAlgebra sl2 = testalg::sl(2, 5);
  RootDatum Rs = root_decomposition(sl2, {sl2.basis_vector(0)});
  CHECK_FALSE(weight_set_compare(R1, Rs).found);
}

TEST_CASE("K_alpha and K'") {
  LieAlgebra sl2 = testalg::sl(2, 5);
  RootDatum R = root_decomposition(sl2, {sl2.basis_vector(0)});
  CHECK(K_alpha(sl2, R, Vec{2}).dim() == 0);

  LieAlgebra W = witt11();
  RootDatum RW = root_decomposition(W, {e(W, 0)});
  KPrime kp = K_prime(W, RW, Vec{1});
  CHECK(kp.triangulable);
}

TEST_CASE("sandwich elements") {
  LieAlgebra W = witt11();
  CHECK(is_sandwich(W, e(W, 3)));
  CHECK_FALSE(is_sandwich(W, e(W, 2)));
  SandwichReport r = sandwich_search(W);
  CHECK(r.span == SubspaceBasis::span({e(W, 3)}, 5, 5));
  CHECK(r.strongly_degenerate);
  CHECK(r.within_killing_radical);
  SandwichReport s = sandwich_search(testalg::sl(2, 5), nullptr, 3);
  CHECK(s.span.dim() == 0);
  CHECK_FALSE(s.strongly_degenerate);
}
