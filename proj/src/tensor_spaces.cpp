#include "densor/tensor_spaces.hpp"

#include <stdexcept>

namespace densor {

Tensor TensorSubspace::element(std::size_t i) const {
  auto r = coords.basis().row(i);
  return Tensor(frame, Vec(r.begin(), r.end()));
}

std::vector<Tensor> TensorSubspace::basis() const {
  std::vector<Tensor> out;
  for (std::size_t i = 0; i < dim(); ++i) out.push_back(element(i));
  return out;
}

bool TensorSubspace::contains(const Tensor& t) const {
  return t.frame() == frame && coords.contains(t.entries());
}

namespace {

// Restrict the solution set W (rows: current basis, length N) to those
// combinations annihilated by one operator.
std::vector<Vec> restrict_by(const std::vector<Vec>& W, const Frame& frame, const OperatorTuple& w,
                             const LinearForm& p, ExecPolicy policy) {
  const Field& F = frame.field;
  const std::size_t N = frame.volume(), k = W.size();
  if (k == 0) return W;
  Matrix img(F, N, k);
  for (std::size_t c = 0; c < k; ++c) {
    Tensor im = apply_operator(Tensor(frame, W[c]), w, p, policy);
    for (std::size_t r = 0; r < N; ++r) img(r, c) = im[r];
  }
  Subspace ker = kernel(img, policy);
  std::vector<Vec> out;
  for (std::size_t i = 0; i < ker.dim(); ++i) {
    Vec v(N, 0);
    auto coef = ker.basis().row(i);
    for (std::size_t c = 0; c < k; ++c)
      if (coef[c] != 0) F.sub_mul(v, F.neg(coef[c]), W[c]);
    out.push_back(std::move(v));
  }
  return out;
}

// Diagonal members of U act on the standard basis by a weight; any s in
// Ten(p, U) is supported where all these weights vanish.
std::vector<std::size_t> weight_zero_support(const LinearForm& p, const std::vector<OperatorTuple>& upsilon,
                                             const Frame& frame) {
  const Field& F = frame.field;
  std::vector<std::size_t> off_positions;  // flat operator coordinates that are off-diagonal
  std::size_t off = 0;
  for (auto d : frame.dims) {
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c)
        if (r != c) off_positions.push_back(off + r * d + c);
    off += d * d;
  }
  Matrix sys(F, off_positions.size(), upsilon.size());
  std::vector<Vec> flats;
  for (std::size_t j = 0; j < upsilon.size(); ++j) {
    flats.push_back(upsilon[j].flatten());
    for (std::size_t r = 0; r < off_positions.size(); ++r) sys(r, j) = flats[j][off_positions[r]];
  }
  Subspace combos = kernel(sys);
  std::vector<Vec> diag_weights;  // per diagonal operator: concatenated weighted diagonals
  for (std::size_t c = 0; c < combos.dim(); ++c) {
    Vec w;
    std::size_t base = 0;
    for (std::size_t a = 0; a < frame.arity(); ++a) {
      const std::size_t d = frame.dims[a];
      for (std::size_t i = 0; i < d; ++i) {
        Elem v = 0;
        for (std::size_t j = 0; j < upsilon.size(); ++j)
          v = F.add(v, F.mul(combos.basis()(c, j), flats[j][base + i * d + i]));
        w.push_back(F.mul(p.coeffs[a], v));
      }
      base += d * d;
    }
    diag_weights.push_back(std::move(w));
  }
  std::vector<std::size_t> support;
  for (std::size_t f = 0; f < frame.volume(); ++f) {
    auto idx = multi_index(frame.dims, f);
    bool ok = true;
    for (const auto& w : diag_weights) {
      Elem s = 0;
      std::size_t base = 0;
      for (std::size_t a = 0; a < frame.arity(); ++a) {
        s = F.add(s, w[base + idx[a]]);
        base += frame.dims[a];
      }
      if (s != 0) {
        ok = false;
        break;
      }
    }
    if (ok) support.push_back(f);
  }
  return support;
}

}  // namespace

TensorSubspace ten_space(const LinearForm& p, const std::vector<OperatorTuple>& upsilon,
                         const Frame& frame, Rng* rng, ExecPolicy policy) {
  const Field& F = frame.field;
  const std::size_t N = frame.volume();
  if (upsilon.empty()) return TensorSubspace{frame, Subspace::full(F, N), true};
  for (const auto& w : upsilon)
    if (!w.fits(frame)) throw std::invalid_argument("operator does not fit the frame");
  std::vector<Vec> W;
  for (std::size_t i : weight_zero_support(p, upsilon, frame)) {
    Vec e(N, 0);
    e[i] = 1;
    W.push_back(std::move(e));
  }
  // A random combination first usually cuts the space down to near its final
  // size, so the per-operator passes run on a small basis.
  if (upsilon.size() > 1) {
    Rng local(0x5eed);
    Rng& g = rng ? *rng : local;
    OperatorTuple combo = OperatorTuple::zero(frame);
    for (const auto& w : upsilon) combo = combo + w.scaled(F.random(g));
    W = restrict_by(W, frame, combo, p, policy);
  }
  for (const auto& w : upsilon) {
    if (W.empty()) break;
    W = restrict_by(W, frame, w, p, policy);
  }
  return TensorSubspace{frame, Subspace::span(F, N, W), false};
}

TensorSubspace ten_space(const LinearForm& p, const OperatorSpace& upsilon, Rng* rng, ExecPolicy policy) {
  return ten_space(p, upsilon.basis(), upsilon.frame, rng, policy);
}

TensorSubspace densor_space(const Tensor& t, const OperatorSpace& der, ExecPolicy policy) {
  return ten_space(LinearForm::derivation(t.field(), t.dims().size()), der, nullptr, policy);
}

TensorSubspace densor_space(const Tensor& t, ExecPolicy policy) {
  return densor_space(t, derivation_algebra(t, policy), policy);
}

TensorSubspace lie_tensor_space(const OperatorSpace& L) {
  return ten_space(LinearForm::derivation(L.frame.field, L.frame.arity()), L);
}

GaloisCheck galois_check(const std::vector<Tensor>& S, const LinearForm& p,
                         const std::vector<OperatorTuple>& upsilon) {
  if (S.empty()) throw std::invalid_argument("galois_check needs at least one tensor");
  const Frame& frame = S[0].frame();
  GaloisCheck g;
  TensorSubspace ten = ten_space(p, upsilon, frame);
  g.tensors_in_ten = true;
  for (const auto& t : S)
    if (!ten.contains(t)) g.tensors_in_ten = false;
  OperatorSpace op = op_space(S, p);
  g.operators_in_op = true;
  for (const auto& w : upsilon)
    if (!op.contains(w)) g.operators_in_op = false;
  return g;
}

}  // namespace densor
