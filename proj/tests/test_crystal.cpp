#include "doctest.h"

#include "densor/chevalley.hpp"
#include "densor/crystal.hpp"
#include "densor/modules.hpp"
#include "densor/operators.hpp"
#include "densor/tensor_spaces.hpp"

using namespace densor;

namespace {

// All partitions of m with exactly n parts (zeros allowed).
std::vector<Partition> partitions(int m, int n) {
  std::vector<Partition> out;
  Partition cur;
  auto rec = [&](auto&& self, int left, int maxpart) -> void {
    if (static_cast<int>(cur.size()) == n) {
      if (left == 0) out.push_back(cur);
      return;
    }
    for (int v = std::min(left, maxpart); v >= 0; --v) {
      cur.push_back(v);
      self(self, left - v, v);
      cur.pop_back();
    }
  };
  rec(rec, m, m);
  return out;
}

}  // namespace

TEST_CASE("row insertion") {
  CHECK(*row_insert({2, 1, 0}, 1) == Partition{3, 1, 0});
  CHECK(*row_insert({1, 1, 1}, 4) == Partition{0, 0, 0});
  CHECK(*row_insert({1, 1, 0}, 3) == Partition{1, 1, 1});
  CHECK_FALSE(row_insert({1, 0, 0}, 3));
  CHECK_FALSE(row_insert({1, 1, 0}, 4));
  CHECK_THROWS_AS(row_insert({1, 0}, 0), std::invalid_argument);
  CHECK_THROWS_AS(row_insert({1, 0}, 4), std::invalid_argument);
  CHECK(*iterated_insert({2, 1}, {}) == Partition{2, 1});
  // An invalid prefix poisons the word even if the end shape is fine.
  CHECK_FALSE(iterated_insert({0, 0}, {2, 1}));
  CHECK(*iterated_insert({0, 0}, {1, 2}) == Partition{1, 1});
}

TEST_CASE("semistandard tableaux") {
  CHECK(enumerate_ssyt({1}, 2).size() == 2);
  CHECK(enumerate_ssyt({1, 1, 0}, 3).size() == 3);
  CHECK(enumerate_ssyt({2, 1}, 3).size() == 8);
  // Semistandard conditions and sorted reading words.
  auto ts = enumerate_ssyt({3, 2, 0}, 4);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const auto& t = ts[i];
    for (std::size_t r = 0; r < t.rows.size(); ++r)
      for (std::size_t c = 0; c < t.rows[r].size(); ++c) {
        if (c > 0) CHECK(t.rows[r][c - 1] <= t.rows[r][c]);
        if (r > 0) CHECK(t.rows[r - 1][c] < t.rows[r][c]);
      }
    if (i > 0) CHECK(reading_word(ts[i - 1]) < reading_word(t));
  }
  // Cardinality against the Weyl dimension formula.
  for (int n = 1; n <= 3; ++n)
    for (int m = 0; m <= 5; ++m)
      for (const auto& p : partitions(m, n))
        CHECK(static_cast<long>(enumerate_ssyt(p, n + 1).size()) == weyl_dimension(p));
  // Far-eastern reading of the (2,1) tableau [[1,2],[3]].
  Tableau t{{2, 1}, {{1, 2}, {3}}};
  CHECK(reading_word(t) == std::vector<int>{2, 1, 3});
}

TEST_CASE("LR coefficients") {
  CHECK(lr_coefficient({2, 1}, {0, 0}, {2, 1}) == 1);
  CHECK(lr_coefficient({2, 1}, {2, 1}, {2, 1}) == 2);
  CHECK(lr_coefficient({3, 3}, {2, 1}, {3, 3}) == 1);
  CHECK(lr_adjoint_formula({2, 1}) == 2);
  CHECK(lr_adjoint_formula({3, 3}) == 1);
  CHECK(lr_adjoint_formula({0, 0}) == 0);
  CHECK(adjoint_partition(3) == Partition{2, 1, 1});
}

TEST_CASE("adjoint LR formula holds exhaustively") {
  int checked = 0;
  for (int n = 1; n <= 4; ++n)
    for (int m = 0; m <= 6; ++m)
      for (const auto& lam : partitions(m, n)) {
        CHECK(lr_coefficient(lam, adjoint_partition(n), lam) == lr_adjoint_formula(lam));
        ++checked;
      }
  CHECK(checked == 73);
}

TEST_CASE("crystal cardinality conservation") {
  for (int n = 1; n <= 3; ++n)
    for (int a = 0; a <= 3; ++a)
      for (int b = 0; b <= 3; ++b)
        for (const auto& lam : partitions(a, n))
          for (const auto& mu : partitions(b, n)) {
            long total = 0;
            for (const auto& [nu, c] : lr_decomposition(lam, mu)) total += c * weyl_dimension(nu);
            CHECK(total == weyl_dimension(lam) * weyl_dimension(mu));
          }
}

TEST_CASE("divisor counts and family shapes") {
  CHECK(divisor_count(4, 2) == 2);
  CHECK(divisor_count(6, 3) == 3);
  CHECK(divisor_count(7, 1) == 1);
  CHECK(divisor_count(12, 12) == 6);
  CHECK_THROWS_AS(divisor_count(0, 2), std::invalid_argument);
  auto f = family_partitions(2, 2);
  REQUIRE(f.size() == 2);
  CHECK(f[0] == Partition{1, 1});
  CHECK(f[1] == Partition{2, 0});
  for (int m = 1; m <= 8; ++m)
    for (int n = 1; n <= 4; ++n)
      for (const auto& lam : family_partitions(m, n)) {
        CHECK(partition_size(lam) == m);
        CHECK(lr_adjoint_formula(lam) == 1);
      }
}

TEST_CASE("exterior powers are representations") {
  Field F = Field::make(7);
  auto b = sl_standard_basis(F, 4);
  for (std::size_t k = 1; k <= 3; ++k)
    for (const auto& x : b)
      for (const auto& y : b)
        CHECK(exterior_power_action(commutator(x, y), k) ==
              commutator(exterior_power_action(x, k), exterior_power_action(y, k)));
}

TEST_CASE("simple modules V(lambda)") {
  Rng rng(1);
  Field F7 = Field::make(7);
  Field F5 = Field::make(5);
  struct Case {
    int n;
    Partition lam;
    Field F;
    std::size_t dim;  // Weyl dimension formula values
  };
  std::vector<Case> cases{{2, {1, 0}, F7, 3}, {2, {1, 1}, F7, 3}, {2, {2, 0}, F7, 6},
                          {2, {2, 1}, F7, 8}, {2, {2, 2}, F7, 6}, {3, {1, 1, 0}, F7, 6},
                          {1, {3}, F5, 4},    {3, {2, 0, 0}, F5, 10}, {2, {0, 0}, F7, 1}};
  for (const auto& c : cases) {
    auto M = build_simple_module(c.n, c.lam, c.F, rng);
    CHECK(M.dim == c.dim);
    CHECK(static_cast<long>(M.dim) == weyl_dimension(c.lam));
    auto b = sl_standard_basis(c.F, c.n + 1);
    REQUIRE(M.action.size() == b.size());
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) {
        auto coords = sl_standard_coordinates(commutator(b[i], b[j]));
        Matrix lhs(c.F, M.dim, M.dim);
        for (std::size_t k = 0; k < coords.size(); ++k)
          if (coords[k] != 0) c.F.sub_mul(lhs.data(), c.F.neg(coords[k]), M.action[k].data());
        CHECK(lhs == commutator(M.action[i], M.action[j]));
      }
  }
  CHECK_THROWS_AS(build_simple_module(2, {1, 0}, Field::make(3), rng), std::invalid_argument);
  CHECK_THROWS_AS(build_simple_module(2, {5, 0}, F5, rng), std::invalid_argument);
}

TEST_CASE("family tensors") {
  Rng rng(2);
  Field F = Field::make(7);
  auto a = family_tensor(2, {1, 1}, F, rng);
  CHECK(a.bimap.dims() == std::vector<std::size_t>{8, 3, 3});
  CHECK(is_nondegenerate(a.bimap).overall());
  // Embedded sl3: x -> (ad x, rho(x), rho(x)) is a bimap derivation.
  auto L = MatrixLieAlgebra::make(F, 3, sl_standard_basis(F, 3));
  for (std::size_t i = 0; i < L.dim(); ++i) {
    OperatorTuple d{{L.ad(L[i]), a.module.action[i], a.module.action[i]}};
    CHECK(is_derivation(a.bimap, bimap_to_trilinear(d)));
  }
  auto b = family_tensor(2, {2, 0}, F, rng);
  CHECK(b.bimap.dims() == std::vector<std::size_t>{8, 6, 6});
  CHECK(is_nondegenerate(b.bimap).overall());
  CHECK(densor_space(b.bimap).coords.dim() == 1);
  CHECK(densor_space(a.bimap).coords.dim() == 1);
  CHECK_FALSE(a.bimap.dims() == b.bimap.dims());
  // Brahana algebra: products land in the last summand and anticommute on M x L.
  const std::size_t m = 6, l = 8, N = 20;
  REQUIRE(b.brahana.dims() == std::vector<std::size_t>{N, N, N});
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < N; ++k) {
        const Elem xy = b.brahana.at({m + i, j, k}), yx = b.brahana.at({j, m + i, k});
        CHECK(xy == F.neg(yx));
        if (k < m + l) CHECK(xy == 0);
        else CHECK(xy == b.bimap.at({i, j, k - m - l}));
      }
}
