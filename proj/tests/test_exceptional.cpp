#include <doctest.h>

#include <map>

#include "modlie/errors.hpp"
#include "modlie/exceptional.hpp"
#include "modlie/restricted.hpp"

using namespace modlie;

namespace {

std::map<int, size_t> graded_dims(const LieAlgebra& L) {
  std::map<int, size_t> out;
  for (int d : grading_degrees(L)) out[d] = graded_component(L, d).dim();
  return out;
}

// Every nonzero basis bracket lands in degree deg(a) + deg(b) (mod m if m > 0).
bool grading_is_additive(const LieAlgebra& L, const std::vector<int>& deg, int m) {
  auto norm = [m](int d) { return m > 0 ? ((d % m) + m) % m : d; };
  for (size_t a = 0; a < L.dim(); ++a)
    for (size_t b = 0; b < L.dim(); ++b)
      for (const auto& [k, c] : L.bracket_basis(a, b))
        if (c != 0 && norm(deg[k]) != norm(deg[a] + deg[b])) return false;
  return true;
}

}  // namespace

TEST_CASE("Melikian bracket on small elements") {
  OPtr O = make_divided_powers({1, 1}, 5);
  auto function = [&](const DPElement& f) {
    MelikianElement x = MelikianElement::zero(O);
    x.f = f;
    return x;
  };
  auto tilde = [&](size_t i) {
    MelikianElement x = MelikianElement::zero(O);
    x.E = SpecialDerivation::basis(O, {0, 0}, i);
    return x;
  };
  DPElement x1 = DPElement::variable(O, 0), x2 = DPElement::variable(O, 1);

  // [x1, x2] = 2(x1·D_{x2} − x2·D_{x1})~ = −2(x1∂̃1 + x2∂̃2)
  MelikianElement b = melikian_bracket(function(x1), function(x2));
  CHECK(b.D == SpecialDerivation::zero(O));
  CHECK(b.f == DPElement::constant(O, 0));
  CHECK(b.E.f[0] == x1.scaled(3));
  CHECK(b.E.f[1] == x2.scaled(3));

  // [1, ∂̃1] = ∂1 and [∂̃1, ∂̃2] = 1
  MelikianElement c = melikian_bracket(function(DPElement::constant(O, 1)), tilde(0));
  CHECK(c.D == SpecialDerivation::basis(O, {0, 0}, 0));
  MelikianElement d = melikian_bracket(tilde(0), tilde(1));
  CHECK(d.f == DPElement::constant(O, 1));
  CHECK(d.E == SpecialDerivation::zero(O));

  CHECK(hamiltonian_derivation(x1).f[1] == DPElement::constant(O, 1));
}

TEST_CASE("Melikian algebra M(1,1)") {
  LieAlgebra M = build_melikian(1, 1);
  CHECK(M.dim() == 125);
  CHECK(M.meta.at("toral_rank") == "2");
  CHECK(is_simple(M));
  CHECK(is_restrictable(M));
  REQUIRE(M.grading);
  CHECK(grading_is_additive(M, *M.grading, 0));
  CHECK(grading_is_additive(M, M.extra_gradings.at("z3"), 3));
  auto g = graded_dims(M);
  CHECK(g.at(-3) == 2);
  CHECK(g.at(-2) == 1);
  CHECK(g.at(-1) == 2);
  CHECK(g.at(0) == 4);

  for (size_t k : {0ul, 30ul, 55ul, 124ul}) {
    Vec v = M.basis_vector(k);
    CHECK(melikian_coordinates(M, melikian_element(M, v)) == v);
  }

  SubspaceBasis pm1 = melikian_pm1_subalgebra(M);
  CHECK(pm1.dim() == 14);
  CHECK(is_subalgebra(M, pm1));

  CHECK_THROWS_AS(build_melikian(1, 1, 7), WrongCharacteristic);
}

TEST_CASE("Brown algebra G2(2;(1,1)) in characteristic 2") {
  BrownResult r = build_brown({1, 1});
  CHECK(r.cover.dim() == 16);
  CHECK(r.center.dim() == 1);
  CHECK(r.center_is_bottom);
  CHECK(r.algebra.dim() == 14);
  CHECK(is_perfect(r.algebra));
  REQUIRE(r.algebra.grading);
  CHECK(graded_dims(r.algebra) ==
        std::map<int, size_t>{{-3, 2}, {-2, 1}, {-1, 2}, {0, 4}, {1, 2}, {2, 1}, {3, 2}});
  for (size_t i = 0; i < r.algebra.dim(); ++i)
    CHECK(is_zero(r.algebra.bracket(r.algebra.basis_vector(i), r.algebra.basis_vector(i))));
  CHECK_THROWS_AS(build_brown({1, 1}, 5), WrongCharacteristic);
}

TEST_CASE("root systems") {
  CHECK(root_system('A', 4).positive.size() == 10);
  CHECK(root_system('B', 3).positive.size() == 9);
  CHECK(root_system('C', 3).positive.size() == 9);
  CHECK(root_system('D', 4).positive.size() == 12);
  CHECK(root_system('G', 2).positive.size() == 6);
  CHECK(root_system('F', 4).positive.size() == 24);
  CHECK(root_system('E', 6).positive.size() == 36);
  CHECK(root_system('E', 8).positive.size() == 120);
  CHECK_THROWS_AS(root_system('D', 3), UnsupportedType);
  CHECK_THROWS_AS(root_system('E', 9), UnsupportedType);
  CHECK_THROWS_AS(root_system('X', 2), UnsupportedType);

  RootSystemData g = root_system('G', 2);
  CHECK(g.string_below(g.positive[1], g.positive[0]) == 0);
  // the highest root of G2 is 3α1 + 2α2 in some order of the simple roots
  CHECK(g.positive.back()[0] + g.positive.back()[1] == 5);
  CHECK(g.roots().size() == 12);
}

TEST_CASE("Chevalley algebras") {
  LieAlgebra A1 = build_chevalley('A', 1, 5);
  CHECK(A1.dim() == 3);
  CHECK(is_simple(A1));

  for (auto [t, r, p] : std::vector<std::tuple<char, size_t, uint32_t>>{
           {'G', 2, 5}, {'B', 3, 7}, {'C', 3, 7}, {'D', 4, 5}, {'F', 4, 7}}) {
    LieAlgebra L = build_chevalley(t, r, p);
    ChevalleyCheck c = verify_chevalley(L, root_system(t, r));
    CHECK_MESSAGE(c.all(), t << r);
  }
  LieAlgebra G2 = build_chevalley('G', 2, 5);
  CHECK(G2.dim() == 14);
  CHECK(verify_chevalley(G2, root_system('G', 2)).max_string == 2);
  CHECK(is_simple(G2));

  // A4 at p = 5 is sl(5): one-dimensional center, simple quotient
  LieAlgebra A4 = build_chevalley('A', 4, 5);
  CHECK(center(A4).dim() == 1);
  LieAlgebra Q = central_quotient(A4);
  CHECK(Q.dim() == 23);
  CHECK(is_simple(Q));

  CHECK_THROWS_AS(build_chevalley('A', 2, 3), WrongCharacteristic);
  CHECK_THROWS_AS(build_chevalley('D', 3, 5), UnsupportedType);
}

TEST_CASE("matrix families") {
  ClassicalInvariants sl5 = classical_invariants(build_matrix_classical(MatrixKind::sl, 5, 5));
  CHECK(sl5.perfect);
  CHECK(sl5.center_dim == 1);

  LieAlgebra pgl5 = build_matrix_classical(MatrixKind::pgl, 5, 5);
  CHECK(pgl5.dim() == 24);
  ClassicalInvariants pg = classical_invariants(pgl5);
  CHECK(pg.center_dim == 0);
  CHECK(pg.derived_codim == 1);

  LieAlgebra psl5 = build_matrix_classical(MatrixKind::psl, 5, 5);
  CHECK(psl5.dim() == 23);
  CHECK(is_simple(psl5));

  ClassicalInvariants gl2 = classical_invariants(build_matrix_classical(MatrixKind::gl, 2, 5));
  CHECK(gl2.center_dim == 1);
  CHECK(gl2.derived_codim == 1);

  ClassicalInvariants sl3 = classical_invariants(build_matrix_classical(MatrixKind::sl, 3, 5));
  CHECK(sl3.center_dim == 0);

  CHECK(matrix_kind_from_string("psl") == MatrixKind::psl);
  CHECK_FALSE(matrix_kind_from_string("so").has_value());
  CHECK_THROWS_AS(build_matrix_classical(MatrixKind::sl, 1, 5), PreconditionFailed);
}
