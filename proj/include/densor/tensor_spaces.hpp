#pragma once

#include <vector>

#include "densor/operators.hpp"

namespace densor {

/// Subspace of tensors on a frame, canonical RREF over flat coordinates.
struct TensorSubspace {
  Frame frame;
  Subspace coords;
  /// Set when the defining operator set was empty (no condition imposed).
  bool vacuous = false;

  std::size_t dim() const { return coords.dim(); }
  Tensor element(std::size_t i) const;
  std::vector<Tensor> basis() const;
  bool contains(const Tensor& t) const;
};

/// Ten(p, U) = {s : apply_operator(s, w, p) = 0 for all w in U}.
TensorSubspace ten_space(const LinearForm& p, const std::vector<OperatorTuple>& upsilon,
                         const Frame& frame, Rng* rng = nullptr, ExecPolicy policy = ExecPolicy::Auto);
TensorSubspace ten_space(const LinearForm& p, const OperatorSpace& upsilon, Rng* rng = nullptr,
                         ExecPolicy policy = ExecPolicy::Auto);

/// The densor <t> = Ten(d, Der(t)).
TensorSubspace densor_space(const Tensor& t, ExecPolicy policy = ExecPolicy::Auto);
TensorSubspace densor_space(const Tensor& t, const OperatorSpace& der, ExecPolicy policy = ExecPolicy::Auto);

/// All tensors on the frame whose derivation algebra contains L.
TensorSubspace lie_tensor_space(const OperatorSpace& L);

struct GaloisCheck {
  bool tensors_in_ten = false;     // S within Ten(p, U)
  bool operators_in_op = false;    // U within Op(S, p)
  bool consistent() const { return tensors_in_ten == operators_in_op; }
};
GaloisCheck galois_check(const std::vector<Tensor>& S, const LinearForm& p,
                         const std::vector<OperatorTuple>& upsilon);

}  // namespace densor
