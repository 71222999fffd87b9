#include "doctest.h"

#include "densor/linalg.hpp"

using namespace densor;

namespace {

bool is_rref(const Matrix& m, const std::vector<std::size_t>& piv) {
  for (std::size_t i = 0; i < piv.size(); ++i) {
    if (m(i, piv[i]) != 1) return false;
    if (i > 0 && piv[i] <= piv[i - 1]) return false;
    for (std::size_t r = 0; r < m.rows(); ++r)
      if (r != i && m(r, piv[i]) != 0) return false;
    for (std::size_t c = 0; c < piv[i]; ++c)
      if (m(i, c) != 0) return false;
  }
  for (std::size_t r = piv.size(); r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (m(r, c) != 0) return false;
  return true;
}

}  // namespace

TEST_CASE("rref examples") {
  Field F = Field::make(5);
  auto id = rref(Matrix::identity(F, 4));
  CHECK(id.rank() == 4);
  CHECK(id.r == Matrix::identity(F, 4));
  auto r = rref(Matrix(F, 2, 2, {1, 1, 2, 2}));
  CHECK(r.rank() == 1);
  CHECK(r.r == Matrix(F, 2, 2, {1, 1, 0, 0}));
}

TEST_CASE("rref audited by a recorded transformation") {
  // Reduce [M | I]; the right block T satisfies T M = R.
  Field F = Field::make(7);
  Rng rng(4);
  for (int it = 0; it < 20; ++it) {
    Matrix M = Matrix::random(F, 10, 14, rng);
    if (it % 3 == 0)
      for (std::size_t c = 0; c < 14; ++c) M(3, c) = F.add(M(1, c), M(2, c));
    Matrix aug(F, 10, 24);
    for (std::size_t i = 0; i < 10; ++i) {
      for (std::size_t j = 0; j < 14; ++j) aug(i, j) = M(i, j);
      aug(i, 14 + i) = 1;
    }
    auto ra = rref(aug);
    Matrix T = ra.r.block(0, 14, 10, 10);
    Matrix R = ra.r.block(0, 0, 10, 14);
    CHECK(T * M == R);
    CHECK(is_invertible(T));
    auto direct = rref(M);
    CHECK(direct.r == R);
    CHECK(is_rref(direct.r, direct.pivots));
  }
}

TEST_CASE("serial and parallel elimination agree") {
  Field F = Field::make(5);
  Rng rng(9);
  Matrix M = Matrix::random(F, 150, 200, rng);
  for (std::size_t c = 0; c < 200; ++c) M(7, c) = F.add(M(3, c), M(5, c));
  auto a = rref(M, ExecPolicy::Serial);
  auto b = rref(M, ExecPolicy::Parallel);
  CHECK(a.r == b.r);
  CHECK(a.pivots == b.pivots);
}

TEST_CASE("kernel examples and properties") {
  Field F5 = Field::make(5);
  CHECK(kernel(Matrix::identity(F5, 3)).dim() == 0);
  auto k = kernel(Matrix(F5, 2, 2, {1, 1, 2, 2}));
  REQUIRE(k.dim() == 1);
  CHECK(k.vector(0) == Vec{1, 4});
  CHECK(kernel(Matrix(F5, 3, 3)).dim() == 3);

  Rng rng(12);
  for (auto [p, e] : std::vector<std::pair<int, int>>{{5, 1}, {7, 1}, {7, 2}}) {
    Field F = Field::make(p, e);
    for (int it = 0; it < 500; ++it) {
      std::size_t r = 1 + rng() % 6, c = 1 + rng() % 7;
      Matrix M = Matrix::random(F, r, c, rng);
      if (rng() % 2 && r > 1)
        for (std::size_t j = 0; j < c; ++j) M(0, j) = M(r - 1, j);
      Subspace K = kernel(M);
      CHECK(K.dim() + rank(M) == c);
      for (std::size_t i = 0; i < K.dim(); ++i) {
        Vec v = M.apply(K.vector(i));
        CHECK(std::all_of(v.begin(), v.end(), [](Elem x) { return x == 0; }));
      }
    }
  }
}

TEST_CASE("solve") {
  Field F = Field::make(5);
  Vec b{1, 2, 3};
  CHECK(solve(Matrix::identity(F, 3), b) == std::optional<Vec>(b));
  CHECK_FALSE(solve(Matrix(F, 2, 2, {1, 1, 2, 2}), Vec{1, 3}).has_value());
  CHECK_THROWS_AS(solve(Matrix::identity(F, 3), Vec{1}), std::invalid_argument);
  Rng rng(8);
  for (int it = 0; it < 100; ++it) {
    Matrix M = Matrix::random(F, 5, 7, rng);
    Vec x0(7);
    for (auto& v : x0) v = F.random(rng);
    Vec rhs = M.apply(x0);
    auto x = solve(M, rhs);
    REQUIRE(x.has_value());
    CHECK(M.apply(*x) == rhs);
  }
}

TEST_CASE("inverse") {
  Field F = Field::make(7, 2);
  Rng rng(3);
  for (int it = 0; it < 50; ++it) {
    Matrix M = Matrix::random(F, 4, 4, rng);
    auto inv = inverse(M);
    if (inv) CHECK(M * *inv == Matrix::identity(F, 4));
    else CHECK(rank(M) < 4);
  }
}

TEST_CASE("minimal and characteristic polynomials") {
  Field F = Field::make(7);
  FieldPolyRing R(FieldOps{F});
  CHECK(min_poly(Matrix::identity(F, 3)) == R.make({6, 1}));
  Matrix J(F, 3, 3, {0, 1, 0, 0, 0, 1, 0, 0, 0});
  CHECK(min_poly(J) == R.make({0, 0, 0, 1}));
  CHECK(char_poly(J) == R.make({0, 0, 0, 1}));
  Rng rng(6);
  for (int it = 0; it < 50; ++it) {
    Matrix M = Matrix::random(F, 6, 6, rng);
    if (it % 2) M = direct_sum(M.block(0, 0, 3, 3), M.block(0, 0, 3, 3));
    FieldPoly mp = min_poly(M), cp = char_poly(M);
    CHECK(eval_poly(mp, M).is_zero());
    CHECK(eval_poly(cp, M).is_zero());
    CHECK(cp.degree() == 6);
    CHECK(R.mod(cp, mp).is_zero());
    CHECK(mp.degree() <= 6);
  }
}

TEST_CASE("subspace operations") {
  Field F = Field::make(5);
  Subspace a = Subspace::span(F, 3, {{1, 0, 0}, {0, 1, 0}});
  Subspace b = Subspace::span(F, 3, {{0, 1, 0}, {0, 0, 1}});
  CHECK(a.intersect(b) == Subspace::span(F, 3, {{0, 1, 0}}));
  CHECK(a.sum(b) == Subspace::full(F, 3));
  CHECK(Subspace::span(F, 3, {{2, 4, 0}}) == Subspace::span(F, 3, {{1, 2, 0}}));
  auto c = a.coordinates(Vec{3, 4, 0});
  REQUIRE(c.has_value());
  CHECK(a.combine(*c) == Vec{3, 4, 0});
}

TEST_CASE("algebra closure") {
  Field F = Field::make(5);
  Matrix E12(F, 2, 2, {0, 1, 0, 0}), E21(F, 2, 2, {0, 0, 1, 0}), H(F, 2, 2, {1, 0, 0, 4});
  CHECK(algebra_closure({E12}, Product::Associative, true).dim() == 2);
  CHECK(algebra_closure({E12, E21, H}, Product::Bracket, false).dim() == 3);
  Subspace full = algebra_closure({E12, E21}, Product::Associative, false);
  CHECK(full.dim() == 4);
  auto again = algebra_closure(matrices_of(full, 2), Product::Associative, false);
  CHECK(again == full);
  CHECK_THROWS(algebra_closure({E12, Matrix::identity(F, 3)}, Product::Associative, false));
}
