#include "doctest.h"

#include "densor/examples.hpp"
#include "densor/tensor_spaces.hpp"

#include <map>

using namespace densor;

namespace {

Vec basis_vec(std::size_t n, std::size_t i) {
  Vec v(n, 0);
  v[i] = 1;
  return v;
}

// Entry of apply_operator computed only through evaluate().
Elem operator_entry_oracle(const Tensor& t, const OperatorTuple& w, const LinearForm& p,
                           const std::vector<std::size_t>& idx) {
  const Field& F = t.field();
  Elem acc = 0;
  for (std::size_t a = 0; a < idx.size(); ++a) {
    std::vector<Vec> vs;
    for (std::size_t b = 0; b < idx.size(); ++b) {
      Vec e = basis_vec(t.dims()[b], idx[b]);
      vs.push_back(b == a ? w.mats[a].apply(e) : e);
    }
    acc = F.add(acc, F.mul(p.coeffs[a], evaluate(t, vs)));
  }
  return acc;
}

// dim Op({t}, d) from a system assembled column by column with evaluate().
std::size_t der_dim_oracle(const Tensor& t) {
  const Frame& fr = t.frame();
  LinearForm d = LinearForm::derivation(fr.field, fr.arity());
  Matrix sys(fr.field, fr.volume(), fr.operator_dim());
  std::size_t col = 0;
  for (std::size_t a = 0; a < fr.arity(); ++a)
    for (std::size_t r = 0; r < fr.dims[a]; ++r)
      for (std::size_t c = 0; c < fr.dims[a]; ++c, ++col) {
        OperatorTuple w = OperatorTuple::zero(fr);
        w.mats[a](r, c) = 1;
        for (std::size_t f = 0; f < fr.volume(); ++f)
          sys(f, col) = operator_entry_oracle(t, w, d, multi_index(fr.dims, f));
      }
  return fr.operator_dim() - rank(sys);
}

bool radical_exhaustive(const Tensor& t, std::size_t axis) {
  // true iff a nonzero v on the axis kills every basis evaluation
  const Field& F = t.field();
  const std::size_t d = t.dims()[axis];
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= F.q();
  for (std::size_t code = 1; code < total; ++code) {
    Vec v(d);
    std::size_t c = code;
    for (auto& x : v) {
      x = static_cast<Elem>(c % F.q());
      c /= F.q();
    }
    bool kills = true;
    for (std::size_t f = 0; f < t.frame().volume() && kills; ++f) {
      auto idx = multi_index(t.dims(), f);
      if (idx[axis] != 0) continue;
      std::vector<Vec> vs;
      for (std::size_t b = 0; b < idx.size(); ++b) vs.push_back(b == axis ? v : basis_vec(t.dims()[b], idx[b]));
      if (evaluate(t, vs) != 0) kills = false;
    }
    if (kills) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("evaluate") {
  Field F = Field::make(5);
  CHECK(evaluate(dot_tensor(F, 2), {{1, 2}, {3, 4}}) == 1);
  CHECK(evaluate(Tensor(make_frame(F, {2, 3})), {{1, 2}, {3, 4, 1}}) == 0);
  Rng rng(1);
  Tensor mm = matmul_tensor(F, 2, 2, 2);
  Matrix A = Matrix::random(F, 2, 2, rng), B = Matrix::random(F, 2, 2, rng), C = Matrix::random(F, 2, 2, rng);
  Matrix AB = A * B;
  Elem expect = 0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t k = 0; k < 2; ++k) expect = F.add(expect, F.mul(AB(i, k), C(i, k)));
  CHECK(evaluate(mm, {A.data(), B.data(), C.data()}) == expect);
  CHECK_THROWS(evaluate(mm, {A.data(), B.data()}));
}

TEST_CASE("evaluate is multilinear") {
  Field F = Field::make(7);
  Rng rng(2);
  Tensor t = Tensor::random(make_frame(F, {2, 3, 4}), rng);
  for (int it = 0; it < 50; ++it) {
    std::vector<Vec> vs;
    for (auto d : t.dims()) vs.push_back(Matrix::random(F, 1, d, rng).data());
    Vec u = Matrix::random(F, 1, 3, rng).data();
    Elem a = F.random(rng), b = F.random(rng);
    std::vector<Vec> mixed = vs, only_u = vs;
    for (std::size_t j = 0; j < 3; ++j) mixed[1][j] = F.add(F.mul(a, vs[1][j]), F.mul(b, u[j]));
    only_u[1] = u;
    CHECK(evaluate(t, mixed) == F.add(F.mul(a, evaluate(t, vs)), F.mul(b, evaluate(t, only_u))));
  }
}

TEST_CASE("act") {
  Field F = Field::make(5);
  Rng rng(3);
  Tensor dot = dot_tensor(F, 3);
  CHECK(act(dot, OperatorTuple::identity(dot.frame())) == dot);
  Matrix A;
  do A = Matrix::random(F, 3, 3, rng);
  while (!is_invertible(A));
  CHECK(act(dot, OperatorTuple{{A, inverse(A.transpose()).value()}}) == dot);
  for (auto dims : std::vector<std::vector<std::size_t>>{{2, 2, 2}, {2, 3, 4}}) {
    Frame fr = make_frame(F, dims);
    for (int it = 0; it < 100; ++it) {
      Tensor t = Tensor::random(fr, rng);
      auto phi = OperatorTuple::random_invertible(fr, rng);
      auto psi = OperatorTuple::random_invertible(fr, rng);
      CHECK(act(act(t, phi), psi) == act(t, phi * psi));
      CHECK(act(act(t, phi), *inverse(phi)) == t);
      // definition through evaluate
      if (it < 5) {
        std::vector<Vec> vs, moved;
        for (std::size_t a = 0; a < dims.size(); ++a) {
          vs.push_back(Matrix::random(F, 1, dims[a], rng).data());
          moved.push_back(phi.mats[a].apply(vs.back()));
        }
        CHECK(evaluate(act(t, phi), vs) == evaluate(t, moved));
      }
    }
  }
  CHECK_THROWS(act(dot, OperatorTuple::identity(make_frame(F, {2, 2}))));
}

TEST_CASE("serial and parallel mode products agree") {
  Field F = Field::make(7);
  Rng rng(4);
  Frame fr = make_frame(F, {12, 14, 16});
  Tensor t = Tensor::random(fr, rng);
  auto phi = OperatorTuple::random_invertible(fr, rng);
  CHECK(act(t, phi, ExecPolicy::Serial) == act(t, phi, ExecPolicy::Parallel));
}

TEST_CASE("apply_operator") {
  Field F = Field::make(5);
  Rng rng(5);
  Tensor t = Tensor::random(make_frame(F, {2, 3, 2}), rng);
  CHECK(apply_operator(t, OperatorTuple::zero(t.frame()), LinearForm::derivation(F, 3)).is_zero());
  OperatorTuple w = OperatorTuple::zero(t.frame());
  w.mats[0] = Matrix::identity(F, 2);
  CHECK(apply_operator(t, w, LinearForm{{1, 0, 0}}) == t);
  Tensor dot = dot_tensor(F, 2);
  Matrix E12(F, 2, 2, {0, 1, 0, 0});
  OperatorTuple om{{E12, E12.transpose()}};
  LinearForm p{{F.neg(1), 1}};
  Tensor r = apply_operator(dot, om, p);
  for (std::size_t f = 0; f < 4; ++f) CHECK(r[f] == operator_entry_oracle(dot, om, p, multi_index(dot.dims(), f)));
  for (int it = 0; it < 20; ++it) {
    OperatorTuple x{{Matrix::random(F, 2, 2, rng), Matrix::random(F, 3, 3, rng), Matrix::random(F, 2, 2, rng)}};
    LinearForm q{{F.random(rng), F.random(rng), F.random(rng)}};
    Tensor out = apply_operator(t, x, q);
    for (std::size_t f = 0; f < 12; ++f) CHECK(out[f] == operator_entry_oracle(t, x, q, multi_index(t.dims(), f)));
  }
}

TEST_CASE("flatten and nondegeneracy") {
  Field F = Field::make(5);
  Tensor id = dot_tensor(F, 2);
  CHECK(flatten(id, 0) == Matrix::identity(F, 2));
  CHECK(flatten(Tensor(make_frame(F, {2, 2})), 1).is_zero());
  Rng rng(6);
  Tensor t = Tensor::random(make_frame(F, {2, 3, 4}), rng);
  Matrix m = flatten(t, 1);
  CHECK(m.rows() == 3);
  CHECK(m.cols() == 8);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t c = 0; c < 4; ++c)
        CHECK(m(i, a * 4 + c) == evaluate(t, {basis_vec(2, a), basis_vec(3, i), basis_vec(4, c)}));
  CHECK(is_nondegenerate(dot_tensor(F, 3)).overall());
  CHECK(is_nondegenerate(matmul_tensor(F, 2, 2, 2)).overall());
  Tensor slice = t;
  for (std::size_t f = 0; f < slice.entries().size(); ++f)
    if (multi_index(slice.dims(), f)[0] == 1) slice[f] = 0;
  CHECK_FALSE(is_nondegenerate(slice).per_axis[0]);
}

TEST_CASE("nondegeneracy agrees with exhaustive radical search") {
  Rng rng(7);
  for (int p : {2, 3}) {
    Field F = Field::make(p);
    for (auto dims : std::vector<std::vector<std::size_t>>{{2, 2}, {2, 3, 2}, {3, 2, 2}, {2, 2, 2, 2}, {4, 4, 4}}) {
      Frame fr = make_frame(F, dims);
      for (int it = 0; it < 15; ++it) {
        Tensor t = Tensor::random(fr, rng);
        if (it % 3 == 0) t = Tensor(fr, Vec(fr.volume(), 0)) + t.scaled(static_cast<Elem>(rng() % 2));
        auto nd = is_nondegenerate(t);
        for (std::size_t a = 0; a < dims.size(); ++a) CHECK(nd.per_axis[a] == !radical_exhaustive(t, a));
      }
    }
  }
}

TEST_CASE("derivation algebra dimensions") {
  Field F = Field::make(5);
  CHECK(derivation_algebra(dot_tensor(F, 2, true)).dim() == 5);
  CHECK(der_dim_oracle(dot_tensor(F, 2, true)) == 5);
  OperatorSpace mm = derivation_algebra(matmul_tensor(F, 2, 2, 2));
  CHECK(mm.dim() == 11);
  CHECK(der_dim_oracle(matmul_tensor(F, 2, 2, 2)) == 11);
  CHECK(derivation_algebra(Tensor(make_frame(F, {2, 2, 2}))).dim() == 12);
  CHECK(derivation_algebra(matmul_tensor(F, 2, 2, 3)).dim() == 16);
  CHECK(der_dim_oracle(matmul_tensor(F, 2, 2, 3)) == 16);
  CHECK(is_bracket_closed(mm));
  for (const auto& x : mm.basis()) CHECK(is_derivation(matmul_tensor(F, 2, 2, 2), x));
}

TEST_CASE("random tensors: derivation oracle, closure, scalar law") {
  Rng rng(8);
  for (int p : {5, 7}) {
    Field F = Field::make(p);
    for (int it = 0; it < 10; ++it) {
      Tensor t = Tensor::random(make_frame(F, {2, 2, 3}), rng);
      OperatorSpace L = derivation_algebra(t);
      CHECK(L.dim() == der_dim_oracle(t));
      CHECK(is_bracket_closed(L));
    }
  }
  Field F = Field::make(5);
  Tensor t = Tensor::random(make_frame(F, {2, 2, 2}), rng);
  for (Elem a = 0; a < 5; ++a)
    for (Elem b = 0; b < 5; ++b)
      for (Elem c = 0; c < 5; ++c) {
        OperatorTuple s{{Matrix::identity(F, 2).scaled(a), Matrix::identity(F, 2).scaled(b),
                         Matrix::identity(F, 2).scaled(c)}};
        CHECK(is_derivation(t, s) == (F.add(F.add(a, b), c) == 0));
      }
  CHECK_FALSE(is_derivation(t, OperatorTuple::identity(t.frame())));
}

TEST_CASE("op_space monotonicity") {
  Field F = Field::make(5);
  Rng rng(9);
  Frame fr = make_frame(F, {2, 3, 2});
  for (int it = 0; it < 10; ++it) {
    std::vector<Tensor> S{Tensor::random(fr, rng)};
    OperatorSpace small = op_space(S, LinearForm::derivation(F, 3));
    S.push_back(Tensor::random(fr, rng));
    OperatorSpace big = op_space(S, LinearForm::derivation(F, 3));
    CHECK(small.coords.contains(big.coords));
  }
  CHECK(op_space({Tensor(fr)}, LinearForm::derivation(F, 3)).dim() == fr.operator_dim());
}

TEST_CASE("adjoint algebra") {
  Field F = Field::make(5);
  for (std::size_t n : {2u, 3u}) {
    OperatorSpace A = adjoint_algebra(dot_tensor(F, n));
    CHECK(A.dim() == n * n);
    CHECK(is_adjoint_closed(A));
  }
  OperatorSpace mm = adjoint_algebra(matmul_tensor(F, 2, 3, 2));
  CHECK(is_adjoint_closed(mm));
  Rng rng(10);
  std::map<std::size_t, int> dist;
  int checked = 0;
  for (int it = 0; it < 100; ++it) {
    Tensor t = random_nondegenerate(make_frame(F, {2, 2, 2}), rng);
    OperatorSpace A = adjoint_algebra(t);
    CHECK(is_adjoint_closed(A));
    ++dist[A.dim()];
    // Oracle: with slices T_k, A^T T_k = T_k B. When T_0 is invertible,
    // B = T_0^{-1} A^T T_0 and A^T ranges over the centralizer of T_1 T_0^{-1}.
    Matrix T0(F, 2, 2), T1(F, 2, 2);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        T0(i, j) = t.at({i, j, 0});
        T1(i, j) = t.at({i, j, 1});
      }
    auto T0i = inverse(T0);
    if (!T0i) continue;
    Matrix M = T1 * *T0i;
    Matrix sys(F, 4, 4);
    for (std::size_t c = 0; c < 4; ++c) {
      Matrix X(F, 2, 2);
      X.data()[c] = 1;
      Matrix r = X * M - M * X;
      for (std::size_t k = 0; k < 4; ++k) sys(k, c) = r.data()[k];
    }
    CHECK(A.dim() == kernel(sys).dim());
    ++checked;
  }
  CHECK(checked > 50);
  MESSAGE("Adj dims for random (2,2,2): dim2=" << dist[2] << " dim4=" << dist[4] << " of 100");
}

TEST_CASE("ten_space and densor") {
  Field F = Field::make(5);
  Frame fr = make_frame(F, {2, 2, 2});
  auto d = LinearForm::derivation(F, 3);
  CHECK(ten_space(d, {OperatorTuple::zero(fr)}, fr).dim() == 8);
  auto vac = ten_space(d, std::vector<OperatorTuple>{}, fr);
  CHECK(vac.vacuous);
  CHECK(vac.dim() == 8);
  Tensor mm = matmul_tensor(F, 2, 2, 2);
  TensorSubspace den = densor_space(mm);
  CHECK(den.dim() == 1);
  CHECK(den.contains(mm));
  CHECK(ten_space(d, OperatorSpace::full(fr)).dim() == 0);
  CHECK(densor_space(Tensor(fr)).dim() == 0);
  CHECK(lie_tensor_space(derivation_algebra(mm)) .dim() == 1);
}

TEST_CASE("densor containment and invariance") {
  Rng rng(11);
  Field F = Field::make(7);
  for (int it = 0; it < 10; ++it) {
    Frame fr = make_frame(F, {2, 2, 3});
    Tensor t = Tensor::random(fr, rng);
    TensorSubspace den = densor_space(t);
    CHECK(den.contains(t));
    auto phi = OperatorTuple::random_invertible(fr, rng);
    CHECK(densor_space(act(t, phi)).dim() == den.dim());
    CHECK(derivation_algebra(act(t, phi)).dim() == derivation_algebra(t).dim());
  }
}

TEST_CASE("sl2 invariant pairing lies in the Lie tensor space") {
  Field F = Field::make(5);
  Frame fr = make_frame(F, {2, 2});
  Matrix e(F, 2, 2, {0, 1, 0, 0}), f(F, 2, 2, {0, 0, 1, 0}), h(F, 2, 2, {1, 0, 0, 4});
  OperatorSpace L = OperatorSpace::span(fr, {OperatorTuple{{e, e}}, OperatorTuple{{f, f}}, OperatorTuple{{h, h}}});
  TensorSubspace sp = lie_tensor_space(L);
  CHECK(sp.dim() >= 1);
  Tensor omega(fr, {0, 1, 4, 0});
  CHECK(sp.contains(omega));
}
