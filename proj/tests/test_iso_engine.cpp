#include "doctest.h"

#include <set>

#include "densor/crystal.hpp"
#include "densor/examples.hpp"
#include "densor/iso_engine.hpp"

using namespace densor;

namespace {

std::vector<Matrix> all_invertible(const Field& F, std::size_t d) {
  std::vector<Matrix> out;
  std::size_t total = 1;
  for (std::size_t i = 0; i < d * d; ++i) total *= F.q();
  for (std::size_t code = 0; code < total; ++code) {
    Vec e(d * d);
    std::size_t c = code;
    for (auto& v : e) {
      v = static_cast<Elem>(c % F.q());
      c /= F.q();
    }
    Matrix m(F, d, d, e);
    if (rank(m) == d) out.push_back(m);
  }
  return out;
}

// Stabilizer order by plain enumeration of every tuple.
std::size_t naive_stabilizer(const Tensor& t) {
  const Frame& fr = t.frame();
  std::vector<std::vector<Matrix>> gl;
  for (auto d : fr.dims) gl.push_back(all_invertible(fr.field, d));
  std::size_t total = 1, count = 0;
  for (const auto& g : gl) total *= g.size();
  for (std::size_t idx = 0; idx < total; ++idx) {
    OperatorTuple o;
    std::size_t r = idx;
    for (const auto& g : gl) {
      o.mats.push_back(g[r % g.size()]);
      r /= g.size();
    }
    if (act(t, o) == t) ++count;
  }
  return count;
}

// Group closure by breadth-first search over tuples.
std::size_t closure_size(const Frame& fr, const std::vector<OperatorTuple>& gens) {
  std::set<Vec> seen{OperatorTuple::identity(fr).flatten()};
  std::vector<OperatorTuple> queue{OperatorTuple::identity(fr)};
  for (std::size_t k = 0; k < queue.size(); ++k)
    for (const auto& g : gens) {
      OperatorTuple h = queue[k] * g;
      if (seen.insert(h.flatten()).second) queue.push_back(h);
    }
  return seen.size();
}

Tensor universal(const Field& F, std::size_t a, std::size_t b) {
  Tensor t(make_frame(F, {a, b, a * b}));
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < b; ++j) t.at({i, j, i * b + j}) = 1;
  return t;
}

bool witness_ok(const IsoResult& r, const Tensor& s, const Tensor& t) {
  return r.verdict == Verdict::Isomorphic && r.witness && act(t, *r.witness) == s;
}

}  // namespace

TEST_CASE("gl orders match enumeration") {
  CHECK(gl_order(2, 5) == all_invertible(Field::make(5), 2).size());
  CHECK(gl_order(3, 2) == all_invertible(Field::make(2), 3).size());
  CHECK(gl_order(2, 4) == all_invertible(Field::make(2, 2), 2).size());
  CHECK(gl_order(1, 7) == 6);
}

TEST_CASE("brute force over GF(2) agrees with full tuple enumeration") {
  const Field F = Field::make(2);
  Rng rng(11);
  const Frame fr = make_frame(F, {2, 2, 2});
  for (int trial = 0; trial < 6; ++trial) {
    Tensor t = Tensor::random(fr, rng);
    CHECK(brute_force_count(t, t) == naive_stabilizer(t));
    Tensor s = act(t, OperatorTuple::random_invertible(fr, rng));
    CHECK(witness_ok(brute_force_iso(s, t), s, t));
  }
  // Nondegenerate versus degenerate: no witness.
  Tensor a = dot_tensor(F, 2, true);
  Tensor b(make_frame(F, {2, 2, 1}));
  b[0] = 1;
  CHECK(brute_force_iso(b, a).verdict == Verdict::NotIsomorphic);
}

TEST_CASE("brute force stabilizer of the dot product") {
  const Field F3 = Field::make(3), F5 = Field::make(5);
  CHECK(brute_force_count(dot_tensor(F3, 2), dot_tensor(F3, 2)) == naive_stabilizer(dot_tensor(F3, 2)));
  CHECK(brute_force_count(dot_tensor(F5, 2), dot_tensor(F5, 2)) == 480);
}

TEST_CASE("brute force serial and parallel witnesses coincide") {
  const Field F = Field::make(5);
  Rng rng(3);
  const Frame fr = make_frame(F, {2, 2, 2});
  Tensor t = random_nondegenerate(fr, rng);
  Tensor s = act(t, OperatorTuple::random_invertible(fr, rng));
  auto a = brute_force_iso(s, t, ExecPolicy::Serial);
  auto b = brute_force_iso(s, t, ExecPolicy::Parallel);
  REQUIRE(a.witness);
  REQUIRE(b.witness);
  CHECK(*a.witness == *b.witness);
  CHECK(brute_force_count(t, t, ExecPolicy::Serial) == brute_force_count(t, t, ExecPolicy::Parallel));
}

TEST_CASE("tiny densor: identity and matmul round trip") {
  const Field F = Field::make(5);
  Rng rng(5);
  Tensor t = matmul_tensor(F, 2, 2, 3);
  auto same = tiny_densor_iso(t, t, rng);
  CHECK(same.verdict == Verdict::Isomorphic);
  CHECK(*same.witness == OperatorTuple::identity(t.frame()));
  for (int trial = 0; trial < 3; ++trial) {
    Tensor s = act(t, OperatorTuple::random_invertible(t.frame(), rng));
    auto r = tiny_densor_iso(s, t, rng);
    CHECK(witness_ok(r, s, t));
  }
}

TEST_CASE("tiny densor: matmul against a random tensor") {
  const Field F = Field::make(5);
  Rng rng(8);
  Tensor t = matmul_tensor(F, 2, 2, 2);
  Tensor s = random_nondegenerate(t.frame(), rng);
  auto r = tiny_densor_iso(s, t, rng);
  CHECK(r.verdict == Verdict::NotIsomorphic);
  CHECK(r.reason == IsoReason::DerivationAlgebrasNotConjugate);
}

TEST_CASE("tiny densor: frame and radical rejects, small characteristic") {
  Rng rng(2);
  const Field F = Field::make(5);
  CHECK(tiny_densor_iso(dot_tensor(F, 2), dot_tensor(F, 3), rng).reason == IsoReason::FrameMismatch);
  Tensor deg(make_frame(F, {2, 2}));
  deg[0] = 1;
  CHECK(tiny_densor_iso(deg, dot_tensor(F, 2), rng).reason == IsoReason::NondegeneracyProfile);
  const Field F3 = Field::make(3);
  Tensor t = dot_tensor(F3, 2);
  Tensor s = act(t, OperatorTuple::random_invertible(t.frame(), rng));
  if (!(s == t)) CHECK(tiny_densor_iso(s, t, rng).verdict == Verdict::Inconclusive);
}

TEST_CASE("oracle agreement where the hypotheses hold") {
  // (2,3,6): the generic tensors are all equivalent to the universal one;
  // mixing in degenerate and lower-rank ones gives both verdicts.
  const Field F = Field::make(5);
  Rng rng(21);
  Tensor u = universal(F, 2, 3);
  const Frame fr = u.frame();
  int verdicts = 0, iso = 0, non = 0;
  for (int trial = 0; trial < 12; ++trial) {
    Tensor s;
    switch (trial % 3) {
      case 0: s = act(u, OperatorTuple::random_invertible(fr, rng)); break;
      case 1: s = Tensor::random(fr, rng); break;
      default: {
        // rank-deficient flattening: drop one column of the codomain image
        Tensor v = u;
        for (std::size_t i = 0; i < 2; ++i) v.at({i, 2, i * 3 + 2}) = 0;
        v.at({1, 2, 1}) = 1;
        s = act(v, OperatorTuple::random_invertible(fr, rng));
      }
    }
    auto tiny = tiny_densor_iso(s, u, rng);
    auto brute = brute_force_iso(s, u);
    if (tiny.verdict == Verdict::Inconclusive) continue;
    ++verdicts;
    CHECK(tiny.verdict == brute.verdict);
    if (tiny.verdict == Verdict::Isomorphic) {
      ++iso;
      CHECK(witness_ok(tiny, s, u));
    } else {
      ++non;
    }
  }
  CHECK(iso >= 4);
  CHECK(non >= 1);
  CHECK(verdicts >= 8);
}

TEST_CASE("algorithm1 dispatch and soundness outside the tiny case") {
  const Field F = Field::make(5);
  Rng rng(4);
  Tensor d = dot_tensor(F, 3);
  Tensor s = act(d, OperatorTuple::random_invertible(d.frame(), rng));
  CHECK(witness_ok(algorithm1(s, d, rng), s, d));
  // Generic (2,2,2) tensors have a two-dimensional densor and a torus for Der.
  const Frame fr = make_frame(F, {2, 2, 2});
  for (int trial = 0; trial < 10; ++trial) {
    Tensor t = random_nondegenerate(fr, rng);
    Tensor s2 = random_nondegenerate(fr, rng);
    auto a = algorithm1(s2, t, rng);
    auto b = brute_force_iso(s2, t);
    if (a.verdict == Verdict::Inconclusive) {
      auto c = decide_iso(s2, t, Method::Auto, rng);
      CHECK(c.verdict != Verdict::Inconclusive);
      CHECK(c.verdict == b.verdict);
      continue;
    }
    CHECK(a.verdict == b.verdict);
  }
}

TEST_CASE("family tensor round trip on (8,3,3)") {
  const Field F = Field::make(7);
  Rng rng(13);
  Tensor t = family_tensor(2, {1, 0}, F, rng).bimap;
  REQUIRE(t.dims() == std::vector<std::size_t>{8, 3, 3});
  for (int trial = 0; trial < 2; ++trial) {
    Tensor s = act(t, OperatorTuple::random_invertible(t.frame(), rng));
    CHECK(witness_ok(tiny_densor_iso(s, t, rng), s, t));
  }
}

TEST_CASE("Schreier-Sims order matches closure") {
  Rng rng(17);
  const Field F3 = Field::make(3), F2 = Field::make(2);
  for (int trial = 0; trial < 4; ++trial) {
    const Frame fr = make_frame(F3, {2, 2});
    std::vector<OperatorTuple> gens{OperatorTuple::random_invertible(fr, rng),
                                    OperatorTuple::random_invertible(fr, rng)};
    CHECK(*generated_order(fr, gens) == closure_size(fr, gens));
    const Frame f3 = make_frame(F2, {3, 1});
    std::vector<OperatorTuple> g3{OperatorTuple::random_invertible(f3, rng)};
    if (trial % 2) g3.push_back(OperatorTuple::random_invertible(f3, rng));
    CHECK(*generated_order(f3, g3) == closure_size(f3, g3));
  }
}

TEST_CASE("automorphism generators of the dot product") {
  Rng rng(9);
  for (std::uint32_t p : {5u, 7u}) {
    const Field F = Field::make(p);
    Tensor t = dot_tensor(F, 2);
    auto A = aut_generators(t, rng);
    REQUIRE(!A.generators.empty());
    for (const auto& g : A.generators) CHECK(act(t, g) == t);
    CHECK(*generated_order(t.frame(), A.generators) == brute_force_count(t, t));
  }
  const Field F = Field::make(5);
  Tensor t3 = dot_tensor(F, 3);
  CHECK(*generated_order(t3.frame(), aut_generators(t3, rng).generators) == gl_order(3, 5));
}

TEST_CASE("automorphism generators of 2x2 matrix multiplication") {
  const Field F = Field::make(5);
  Rng rng(10);
  Tensor t = matmul_tensor(F, 2, 2, 2);
  auto A = aut_generators(t, rng);
  for (const auto& g : A.generators) CHECK(act(t, g) == t);
  // (A, B, C) acting by X -> A X B^-1 etc., modulo the diagonal scalars.
  const std::uint64_t g = gl_order(2, 5);
  CHECK(*generated_order(t.frame(), A.generators) == g * g * g / 4);
}

TEST_CASE("automorphism generators reject degenerate input") {
  Rng rng(1);
  const Field F = Field::make(5);
  Tensor deg(make_frame(F, {2, 2}));
  deg[0] = 1;
  CHECK_THROWS_AS(aut_generators(deg, rng), std::domain_error);
}

TEST_CASE("example generators") {
  Rng rng(1);
  ExampleParams dot{"dot", {3}, 5};
  Tensor d = gen_example(dot, rng);
  CHECK(d.dims() == std::vector<std::size_t>{3, 3});
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(d.at({i, j}) == (i == j ? 1u : 0u));
  Tensor m = gen_example(ExampleParams{"matmul", {2, 2, 2}, 5}, rng);
  CHECK(is_nondegenerate(m).overall());
  for (auto e : m.entries()) CHECK(e <= 1);
  Tensor h = gen_example(ExampleParams{"heisenberg", {}, 5}, rng);
  CHECK(h.dims() == std::vector<std::size_t>{10, 10, 5});
  const Field F = h.field();
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 10; ++j)
      for (std::size_t k = 0; k < 5; ++k) CHECK(h.at({i, j, k}) == F.neg(h.at({j, i, k})));
  CHECK_THROWS_AS(gen_example(ExampleParams{"heisenberg", {}, 5, 2}, rng), std::invalid_argument);
  CHECK_THROWS_AS(gen_example(ExampleParams{"nope", {}, 5}, rng), std::invalid_argument);
}

TEST_CASE("isomorphism invariants are constant on orbits") {
  Rng rng(31);
  const Field F = Field::make(5);
  for (auto dims : {std::vector<std::size_t>{2, 2, 2}, {2, 3, 3}, {3, 3, 2}}) {
    const Frame fr = make_frame(F, dims);
    for (int trial = 0; trial < 5; ++trial) {
      Tensor t = Tensor::random(fr, rng);
      if (trial == 0) t.entries().assign(t.entries().size(), 0), t[0] = 1;
      Tensor s = act(t, OperatorTuple::random_invertible(fr, rng));
      CHECK(derivation_algebra(s).dim() == derivation_algebra(t).dim());
      CHECK(densor_space(s).dim() == densor_space(t).dim());
      CHECK(is_nondegenerate(s).per_axis == is_nondegenerate(t).per_axis);
    }
  }
}
