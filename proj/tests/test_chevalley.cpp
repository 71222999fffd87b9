#include "doctest.h"

#include "densor/chevalley.hpp"

using namespace densor;

namespace {

Matrix random_gl(const Field& F, std::size_t n, Rng& rng) {
  for (;;) {
    Matrix m = Matrix::random(F, n, n, rng);
    if (is_invertible(m)) return m;
  }
}

MatrixLieAlgebra conjugated_sl(const Field& F, std::size_t N, Rng& rng) {
  Matrix Q = random_gl(F, N, rng);
  Matrix Qi = *inverse(Q);
  std::vector<Matrix> gens;
  for (const auto& b : sl_standard_basis(F, N)) gens.push_back(Q * b * Qi);
  // Shuffle the basis by random invertible recombination.
  std::vector<Matrix> mixed;
  Matrix C = random_gl(F, gens.size(), rng);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    Matrix m(F, N, N);
    for (std::size_t k = 0; k < gens.size(); ++k)
      if (C(i, k) != 0) F.sub_mul(m.data(), F.neg(C(i, k)), gens[k].data());
    mixed.push_back(m);
  }
  return MatrixLieAlgebra::make(F, N, mixed);
}

Matrix unit(const Field& F, std::size_t n, std::size_t i, std::size_t j) {
  Matrix m(F, n, n);
  m(i, j) = 1;
  return m;
}

}  // namespace

TEST_CASE("standard basis coordinates") {
  Field F = Field::make(7);
  auto b = sl_standard_basis(F, 3);
  CHECK(b.size() == 8);
  Rng rng(1);
  for (int rep = 0; rep < 20; ++rep) {
    Vec c(8);
    for (auto& v : c) v = F.random(rng);
    Matrix y(F, 3, 3);
    for (std::size_t k = 0; k < 8; ++k) F.sub_mul(y.data(), F.neg(c[k]), b[k].data());
    CHECK(sl_standard_coordinates(y) == c);
  }
  CHECK_THROWS_AS(sl_standard_coordinates(Matrix::identity(F, 2)), std::invalid_argument);
}

TEST_CASE("recognize sl3 in standard basis") {
  Rng rng(2);
  Field F = Field::make(7);
  auto M = MatrixLieAlgebra::make(F, 3, sl_standard_basis(F, 3));
  auto o = recognize_type_a(M, rng);
  REQUIRE(o.status == RecognitionStatus::Recognized);
  CHECK(o.rec->n == 2);
  CHECK(verify_recognition(M, *o.rec));
  // The recognized map is an automorphism of sl3; round trip through from_standard.
  for (const auto& b : M.basis()) CHECK(o.rec->from_standard(o.rec->to_standard(M, b)) == b);
}

TEST_CASE("recognition round trip on random conjugates") {
  Rng rng(3);
  for (std::uint32_t p : {5u, 7u}) {
    Field F = Field::make(p);
    for (std::size_t N : {2u, 3u, 4u}) {
      if (N % p == 0) continue;
      for (int rep = 0; rep < 50; ++rep) {
        auto M = conjugated_sl(F, N, rng);
        auto o = recognize_type_a(M, rng);
        INFO(p, " ", N, " ", o.diagnostic);
        REQUIRE(o.status == RecognitionStatus::Recognized);
        CHECK(o.rec->n + 1 == N);
        CHECK(M.dim() == N * N - 1);
        CHECK(verify_recognition(M, *o.rec));
      }
    }
  }
}

TEST_CASE("non type A inputs") {
  Rng rng(4);
  Field F = Field::make(5);
  // Witt algebra: derivations x^{i+1} d/dx of F5[x]/(x^5) as 5x5 matrices.
  std::vector<Matrix> witt;
  for (int i = -1; i <= 3; ++i) {
    Matrix m(F, 5, 5);
    for (int k = 0; k < 5; ++k) {
      const int tgt = k + i;
      if (tgt >= 0 && tgt < 5 && k != 0) m(tgt, k) = F.from_int(k);
    }
    witt.push_back(m);
  }
  auto W = MatrixLieAlgebra::make(F, 5, witt);
  CHECK(W.dim() == 5);
  CHECK(recognize_type_a(W, rng).status == RecognitionStatus::NotTypeA);
  // Abelian of dimension 3.
  auto A = MatrixLieAlgebra::make(F, 3, {unit(F, 3, 0, 0), unit(F, 3, 1, 1), unit(F, 3, 2, 2)});
  CHECK(recognize_type_a(A, rng).status == RecognitionStatus::NotTypeA);
  // Characteristic restrictions.
  Field F3 = Field::make(3);
  CHECK(recognize_type_a(MatrixLieAlgebra::make(F3, 2, sl_standard_basis(F3, 2)), rng).status ==
        RecognitionStatus::Unsupported);
  CHECK(recognize_type_a(MatrixLieAlgebra::make(F, 5, sl_standard_basis(F, 5)), rng).status ==
        RecognitionStatus::Unsupported);
}

TEST_CASE("so3 is a split form of sl2") {
  Rng rng(5);
  Field F = Field::make(7);
  std::vector<Matrix> so3;
  for (auto [i, j] : {std::pair<std::size_t, std::size_t>{0, 1}, {0, 2}, {1, 2}})
    so3.push_back(unit(F, 3, i, j) - unit(F, 3, j, i));
  auto M = MatrixLieAlgebra::make(F, 3, so3);
  auto o = recognize_type_a(M, rng);
  REQUIRE(o.status == RecognitionStatus::Recognized);
  CHECK(o.rec->n == 1);
}

TEST_CASE("unitary outer form su3 is inconclusive") {
  // su3 over GF(5): traceless skew-hermitian 3x3 over GF(25), written as
  // 6x6 matrices over GF(5).
  Field F = Field::make(5);
  Field E = Field::make(5, 2);
  const Elem t = 5;  // the generator x of GF(25)
  auto conj = [&](Elem a) { return E.pow(a, 5); };
  auto realize = [&](const std::vector<std::vector<Elem>>& X) {
    Matrix m(F, 6, 6);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t c = 0; c < 2; ++c) {
          auto col = E.coords(E.mul(X[i][j], c == 0 ? 1 : t));
          m(2 * i, 2 * j + c) = col[0];
          m(2 * i + 1, 2 * j + c) = col[1];
        }
    return m;
  };
  std::vector<Matrix> gens;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j)
      for (Elem c : {Elem(1), t}) {
        std::vector<std::vector<Elem>> X(3, std::vector<Elem>(3, 0));
        X[i][j] = c;
        X[j][i] = E.neg(conj(c));
        gens.push_back(realize(X));
      }
  const Elem d = E.sub(t, conj(t));
  for (std::size_t i = 0; i < 2; ++i) {
    std::vector<std::vector<Elem>> X(3, std::vector<Elem>(3, 0));
    X[i][i] = d;
    X[i + 1][i + 1] = E.neg(d);
    gens.push_back(realize(X));
  }
  auto M = MatrixLieAlgebra::make(F, 6, gens);
  REQUIRE(M.dim() == 8);
  Rng rng(6);
  auto o = recognize_type_a(M, rng);
  CHECK(o.status == RecognitionStatus::Inconclusive);
}

TEST_CASE("diagram twist") {
  Field F = Field::make(7);
  Matrix E12 = unit(F, 3, 0, 1);
  CHECK(anti_transpose(E12) == unit(F, 3, 1, 2));
  // The anti-transpose reverses products; the twist -x-bar preserves brackets.
  Rng rng(6);
  for (int rep = 0; rep < 30; ++rep) {
    Matrix x = Matrix::random(F, 4, 4, rng), y = Matrix::random(F, 4, 4, rng);
    CHECK(anti_transpose(x * y) == anti_transpose(y) * anti_transpose(x));
    CHECK(twist_matrix(twist_matrix(x)) == x);
    CHECK(twist_matrix(commutator(x, y)) == commutator(twist_matrix(x), twist_matrix(y)));
  }
  // h1 = E11 - E22 goes to h2 = E22 - E33 up to the sign of the twist.
  Matrix h1 = unit(F, 3, 0, 0) - unit(F, 3, 1, 1);
  Matrix h2 = unit(F, 3, 1, 1) - unit(F, 3, 2, 2);
  CHECK(anti_transpose(h1) == h2.scaled(F.neg(1)));
  CHECK(twist_matrix(h1) == h2);
  // A1 has no diagram automorphism.
  auto M = MatrixLieAlgebra::make(F, 2, sl_standard_basis(F, 2));
  Rng r2(7);
  auto o = recognize_type_a(M, r2);
  REQUIRE(o.rec);
  CHECK(diagram_twist(*o.rec) == sl_standard_basis(F, 2));
}
