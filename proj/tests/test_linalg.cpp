#include <random>

#include "doctest.h"
#include "modlie/linalg.hpp"

using namespace modlie;

namespace {

Matrix random_matrix(size_t r, size_t c, uint32_t p, std::mt19937_64& rng, double fill = 1.0) {
  std::uniform_int_distribution<uint32_t> d(0, p - 1);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<Vec> rows(r, Vec(c, 0));
  for (auto& row : rows)
    for (auto& x : row)
      if (u(rng) < fill) x = d(rng);
  return Matrix::from_dense_rows(rows, c, p);
}

// Irreducibility by brute force: every nonzero vector must spin to everything.
bool brute_irreducible(const std::vector<Matrix>& gens, size_t n, uint32_t p) {
  bool irr = true;
  for_each_projective_point(n, p, [&](const Vec& v) {
    if (spin(v, gens, p).dim() < n) irr = false;
    return irr;
  });
  return irr;
}

bool invariant(const SubspaceBasis& s, const std::vector<Matrix>& gens) {
  for (const auto& g : gens)
    for (const auto& v : s.vectors())
      if (!s.contains(g.apply(v))) return false;
  return true;
}

}  // namespace

TEST_CASE("nullspace basics") {
  CHECK(nullspace(Matrix::identity(3, 5)).dim() == 0);
  CHECK(nullspace(Matrix(2, 3, 5)).dim() == 3);
}

TEST_CASE("rank-nullity on a constructed rank-7 matrix") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 10; ++t) {
    Matrix b = random_matrix(10, 7, 7, rng), c = random_matrix(7, 10, 7, rng);
    Matrix m = b * c;
    size_t r = rank(m);
    CHECK(r <= 7);
    SubspaceBasis ker = nullspace(m);
    CHECK(ker.dim() == 10 - r);
    for (const auto& v : ker.vectors()) CHECK(is_zero(m.apply(v)));
    // Rank is 7 whenever both factors have full rank 7.
    if (rank(b) == 7 && rank(c) == 7) CHECK(r == 7);
  }
}

TEST_CASE("sparse and dense products agree") {
  std::mt19937_64 rng(3);
  for (double fill : {0.05, 0.5}) {
    Matrix a = random_matrix(12, 9, 11, rng, fill), b = random_matrix(9, 14, 11, rng, fill);
    Matrix c = a * b;
    for (size_t i = 0; i < 12; ++i)
      for (size_t j = 0; j < 14; ++j) {
        uint64_t s = 0;
        for (size_t k = 0; k < 9; ++k) s += uint64_t{a.get(i, k)} * b.get(k, j);
        CHECK(c.get(i, j) == s % 11);
      }
    CHECK(a.transpose().transpose() == a);
  }
}

TEST_CASE("solve_linear") {
  Vec b{1, 2, 3};
  CHECK(*solve_linear(Matrix::identity(3, 5), b) == b);
  std::mt19937_64 rng(5);
  Matrix m = random_matrix(6, 8, 7, rng);
  CHECK(is_zero(*solve_linear(m, Vec(6, 0))));
  for (int t = 0; t < 20; ++t) {
    Matrix a = random_matrix(9, 6, 7, rng);
    Vec x0(6);
    for (auto& x : x0) x = static_cast<uint32_t>(rng() % 7);
    Vec rhs = a.apply(x0);
    auto x = solve_linear(a, rhs);
    REQUIRE(x);
    CHECK(a.apply(*x) == rhs);
  }
  // x = 1 and x = 2 at once.
  Matrix inc = Matrix::from_dense_rows({{1}, {1}}, 1, 5);
  CHECK(!solve_linear(inc, {1, 2}));
}

TEST_CASE("subspace operations") {
  const uint32_t p = 5;
  SubspaceBasis u = SubspaceBasis::span({{1, 1, 0, 0}, {0, 0, 1, 0}}, 4, p);
  SubspaceBasis v = SubspaceBasis::span({{1, 1, 1, 0}, {0, 0, 0, 1}}, 4, p);
  CHECK(u.intersect(v).dim() == 1);
  CHECK(u.intersect(v).contains(Vec{1, 1, 1, 0}));
  CHECK(u.sum(v).dim() == 3);
  Vec w{3, 3, 2, 0};
  Vec c = u.coordinates(w);
  Vec back(4, 0);
  for (size_t i = 0; i < c.size(); ++i) axpy(back, c[i], u.vectors()[i], p);
  CHECK(back == w);
  CHECK(u.complement().size() == 2);
}

TEST_CASE("simultaneous eigenspaces") {
  const uint32_t p = 5;
  Matrix d = Matrix::from_dense_rows({{0, 0, 0}, {0, 1, 0}, {0, 0, 1}}, 3, p);
  auto sp = simultaneous_eigenspaces({d});
  REQUIRE(sp.size() == 2);
  CHECK(sp[0].weight == Vec{0});
  CHECK(sp[0].space.dim() == 1);
  CHECK(sp[1].weight == Vec{1});
  CHECK(sp[1].space.dim() == 2);

  // Two commuting toral operators on GF(5)^4, conjugated by a random change of basis.
  std::mt19937_64 rng(9);
  Matrix t1 = Matrix::from_dense_rows({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 2, 0}, {0, 0, 0, 0}}, 4, p);
  Matrix t2 = Matrix::from_dense_rows({{3, 0, 0, 0}, {0, 4, 0, 0}, {0, 0, 3, 0}, {0, 0, 0, 3}}, 4, p);
  Matrix g = random_matrix(4, 4, p, rng);
  while (rank(g) < 4) g = random_matrix(4, 4, p, rng);
  // Inverse by solving against unit vectors.
  std::vector<Vec> inv_cols;
  for (size_t i = 0; i < 4; ++i) inv_cols.push_back(*solve_linear(g, unit_vector(4, i)));
  Matrix gi = Matrix::from_columns(inv_cols, 4, p);
  auto spaces = simultaneous_eigenspaces({g * t1 * gi, g * t2 * gi});
  size_t total = 0;
  for (const auto& s : spaces) total += s.space.dim();
  CHECK(total == 4);
  CHECK(spaces.size() == 4);

  Matrix j = Matrix::from_dense_rows({{1, 1}, {0, 1}}, 2, p);
  CHECK_THROWS_AS(simultaneous_eigenspaces({j}), NotToral);
  Matrix a = Matrix::from_dense_rows({{0, 1}, {1, 0}}, 2, p);
  CHECK_THROWS_AS(simultaneous_eigenspaces({d, Matrix::from_dense_rows({{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}, 3, p)}),
                  NotCommuting);
  (void)a;
}

TEST_CASE("module irreducibility") {
  const uint32_t p = 5;
  auto r = module_irreducible({Matrix::identity(3, p)}, 3, p);
  CHECK(!r.irreducible);
  CHECK(r.invariant.dim() >= 1);
  CHECK(r.invariant.dim() < 3);

  // Matrix units E12, E21, E23, E32 generate the natural gl(3) module.
  auto unit = [&](size_t i, size_t j) {
    std::vector<Vec> rows(3, Vec(3, 0));
    rows[i][j] = 1;
    return Matrix::from_dense_rows(rows, 3, p);
  };
  CHECK(module_irreducible({unit(0, 1), unit(1, 0), unit(1, 2), unit(2, 1)}, 3, p).irreducible);
  CHECK(!module_irreducible({unit(0, 1), unit(1, 2)}, 3, p).irreducible);

  // Random generator sets against brute force, half of them block triangular.
  std::mt19937_64 rng(21);
  for (int t = 0; t < 40; ++t) {
    std::vector<Matrix> gens;
    for (int k = 0; k < 2; ++k) {
      Matrix m = random_matrix(4, 4, p, rng, 0.4);
      if (t % 2) {
        std::vector<Vec> rows(4);
        for (size_t i = 0; i < 4; ++i) rows[i] = m.row_dense(i);
        rows[2][0] = rows[2][1] = rows[3][0] = rows[3][1] = 0;
        m = Matrix::from_dense_rows(rows, 4, p);
      }
      gens.push_back(m);
    }
    auto res = module_irreducible(gens, 4, p, 100 + static_cast<uint64_t>(t));
    CHECK(res.irreducible == brute_irreducible(gens, 4, p));
    if (!res.irreducible) {
      CHECK(res.invariant.dim() > 0);
      CHECK(res.invariant.dim() < 4);
      CHECK(invariant(res.invariant, gens));
    }
  }
}

TEST_CASE("Jordan-Chevalley decomposition of matrices") {
  const uint32_t p = 5;
  Matrix nil = Matrix::from_dense_rows({{0, 1, 0}, {0, 0, 1}, {0, 0, 0}}, 3, p);
  auto jn = jordan_chevalley_matrix(nil);
  CHECK(jn.semisimple.is_zero());
  CHECK(jn.nilpotent == nil);
  Matrix diag = Matrix::from_dense_rows({{2, 0}, {0, 3}}, 2, p);
  CHECK(jordan_chevalley_matrix(diag).semisimple == diag);
  Matrix j2 = Matrix::from_dense_rows({{1, 1}, {0, 1}}, 2, p);
  auto jj = jordan_chevalley_matrix(j2);
  CHECK(jj.semisimple == Matrix::identity(2, p));
  CHECK((jj.nilpotent * jj.nilpotent).is_zero());

  std::mt19937_64 rng(13);
  for (int t = 0; t < 15; ++t) {
    Matrix m = random_matrix(7, 7, p, rng, 0.4);
    auto jc = jordan_chevalley_matrix(m);
    CHECK(jc.semisimple + jc.nilpotent == m);
    CHECK(commutator(jc.semisimple, jc.nilpotent).is_zero());
    CHECK(jc.nilpotent.pow(7).is_zero());
    // Semisimple: minimal polynomial squarefree, i.e. the radical of the
    // characteristic polynomial annihilates it.
    CHECK(poly_eval(poly::radical(charpoly(jc.semisimple), p), jc.semisimple).is_zero());
    // S is a polynomial in M, so it commutes with anything commuting with M.
    Matrix m2 = m * m + m.scaled(3);
    CHECK(commutator(jc.semisimple, m2).is_zero());
  }
}

TEST_CASE("characteristic polynomial") {
  // Companion matrix of T^3 - 2T + 1 over GF(7).
  Matrix c = Matrix::from_dense_rows({{0, 0, 6}, {1, 0, 2}, {0, 1, 0}}, 3, 7);
  CHECK(charpoly(c) == poly::Poly{1, 5, 0, 1});
  std::mt19937_64 rng(1);
  for (int t = 0; t < 10; ++t) {
    Matrix m = random_matrix(6, 6, 7, rng, 0.5);
    CHECK(poly_eval(charpoly(m), m).is_zero());  // Cayley-Hamilton
  }
}
