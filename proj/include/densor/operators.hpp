#pragma once

#include <vector>

#include "densor/tensor.hpp"

namespace densor {

enum class Structure { Plain, Lie, Associative };

/// A K-space of operator tuples on a frame, with a canonical RREF basis over
/// the concatenated coordinates.
struct OperatorSpace {
  Frame frame;
  Subspace coords;
  Structure structure = Structure::Plain;

  std::size_t dim() const { return coords.dim(); }
  OperatorTuple element(std::size_t i) const;
  std::vector<OperatorTuple> basis() const;
  bool contains(const OperatorTuple& o) const;
  std::optional<Vec> coordinates(const OperatorTuple& o) const;
  /// Basis of the matrices on one axis (projection of the space).
  std::vector<Matrix> axis_matrices(std::size_t axis) const;

  static OperatorSpace span(const Frame& frame, const std::vector<OperatorTuple>& ops,
                            Structure s = Structure::Plain);
  static OperatorSpace full(const Frame& frame);
};

/// {w : sum_a alpha_a <t| .., w_a v_a, ..> = 0 for all t in S}. Only the axes
/// listed carry unknowns; the result lives on the sub-frame of those axes.
OperatorSpace op_space_axes(const std::vector<Tensor>& S, const LinearForm& p,
                            const std::vector<std::size_t>& axes,
                            ExecPolicy policy = ExecPolicy::Auto);
OperatorSpace op_space(const std::vector<Tensor>& S, const LinearForm& p,
                       ExecPolicy policy = ExecPolicy::Auto);

/// The coefficient matrix of the op_space system (rows: |S| * volume).
Matrix op_system(const std::vector<Tensor>& S, const LinearForm& p,
                 const std::vector<std::size_t>& axes, ExecPolicy policy = ExecPolicy::Auto);

/// Der(t), verified bracket-closed; throws std::logic_error if not.
OperatorSpace derivation_algebra(const Tensor& t, ExecPolicy policy = ExecPolicy::Auto);

/// Adj(t): pairs (A, B) on the two domain axes with <t|A u, v, ..> = <t|u, B v, ..>.
/// Closed under (a, b)(a', b') = (a' a, b b'); verified.
OperatorSpace adjoint_algebra(const Tensor& t);
OperatorTuple adjoint_product(const OperatorTuple& x, const OperatorTuple& y);

bool is_derivation(const Tensor& t, const OperatorTuple& omega);

bool is_bracket_closed(const OperatorSpace& L);
bool is_adjoint_closed(const OperatorSpace& A);

}  // namespace densor
