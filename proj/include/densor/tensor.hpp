#pragma once

// Multilinear forms on a frame (V_0, ..., V_{l-1}). Entries are stored flat,
// row-major, axis 0 slowest. act() is the right action
//   <act(t, phi) | v_0, ..., v_{l-1}> = <t | phi_0 v_0, ..., phi_{l-1} v_{l-1}>.
//
// Bimap view of a 3-tensor: axes (V_2, V_1, V_0) with the last axis the
// codomain, paired with its dual. A bimap derivation (d2, d1, d0) with
//   d0 <t|u, v> = <t|d2 u, v> + <t|u, d1 v>
// corresponds to the trilinear derivation (d2, d1, -d0^T).

#include <cstddef>
#include <vector>

#include "densor/linalg.hpp"

namespace densor {

struct Frame {
  Field field;
  std::vector<std::size_t> dims;

  std::size_t arity() const { return dims.size(); }
  std::size_t volume() const;
  /// Sum of d_a^2, the coordinate count of an operator tuple.
  std::size_t operator_dim() const;
  friend bool operator==(const Frame& a, const Frame& b) {
    return a.field == b.field && a.dims == b.dims;
  }
};

Frame make_frame(const Field& F, std::vector<std::size_t> dims);

class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Frame frame);
  Tensor(Frame frame, Vec entries);

  static Tensor random(const Frame& frame, Rng& rng);

  const Frame& frame() const { return frame_; }
  const Field& field() const { return frame_.field; }
  const std::vector<std::size_t>& dims() const { return frame_.dims; }
  const Vec& entries() const { return e_; }
  Vec& entries() { return e_; }
  Elem& operator[](std::size_t i) { return e_[i]; }
  Elem operator[](std::size_t i) const { return e_[i]; }
  Elem at(const std::vector<std::size_t>& idx) const;
  Elem& at(const std::vector<std::size_t>& idx);
  bool is_zero() const;

  Tensor scaled(Elem c) const;
  Tensor operator+(const Tensor& o) const;
  Tensor operator-(const Tensor& o) const;

  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.frame_ == b.frame_ && a.e_ == b.e_;
  }

 private:
  Frame frame_;
  Vec e_;
};

/// Multi-index <-> flat offset under the axis-0-slowest convention.
std::size_t flat_index(const std::vector<std::size_t>& dims, const std::vector<std::size_t>& idx);
std::vector<std::size_t> multi_index(const std::vector<std::size_t>& dims, std::size_t flat);
/// Stride of an axis in the flat array.
std::size_t axis_stride(const std::vector<std::size_t>& dims, std::size_t axis);

/// One square matrix per frame axis.
struct OperatorTuple {
  std::vector<Matrix> mats;

  static OperatorTuple identity(const Frame& frame);
  static OperatorTuple zero(const Frame& frame);
  static OperatorTuple random_invertible(const Frame& frame, Rng& rng);
  /// Concatenated row-major coordinates, axis 0 first.
  Vec flatten() const;
  static OperatorTuple unflatten(const Frame& frame, std::span<const Elem> v);
  bool fits(const Frame& frame) const;
  std::size_t arity() const { return mats.size(); }

  OperatorTuple operator*(const OperatorTuple& o) const;  // componentwise product
  OperatorTuple operator+(const OperatorTuple& o) const;
  OperatorTuple operator-(const OperatorTuple& o) const;
  OperatorTuple scaled(Elem c) const;
  friend bool operator==(const OperatorTuple&, const OperatorTuple&) = default;
};

OperatorTuple bracket(const OperatorTuple& a, const OperatorTuple& b);
std::optional<OperatorTuple> inverse(const OperatorTuple& phi);

/// Coefficients alpha_a of a degree-one form p = sum_a alpha_a x_a.
struct LinearForm {
  Vec coeffs;
  /// d = x_0 + ... + x_{l-1}
  static LinearForm derivation(const Field& F, std::size_t arity);
  /// x_0 - x_1: the balancing condition of the adjoint algebra.
  static LinearForm adjoint(const Field& F, std::size_t arity);
};

Elem evaluate(const Tensor& t, const std::vector<Vec>& vectors);
Tensor act(const Tensor& t, const OperatorTuple& phi, ExecPolicy policy = ExecPolicy::Auto);
Tensor apply_operator(const Tensor& t, const OperatorTuple& omega, const LinearForm& p,
                      ExecPolicy policy = ExecPolicy::Auto);
/// t with a single matrix applied on one axis.
Tensor apply_on_axis(const Tensor& t, std::size_t axis, const Matrix& m,
                     ExecPolicy policy = ExecPolicy::Auto);

/// d_a x prod_{b != a} d_b matricization; row i is the slice at e_i on axis a.
Matrix flatten(const Tensor& t, std::size_t axis);

struct Nondegeneracy {
  std::vector<bool> per_axis;
  bool overall() const;
};
Nondegeneracy is_nondegenerate(const Tensor& t);

/// Bimap derivation triple (d2, d1, d0) <-> trilinear derivation tuple.
OperatorTuple bimap_to_trilinear(const OperatorTuple& bimap_der);
OperatorTuple trilinear_to_bimap(const OperatorTuple& tri_der);

}  // namespace densor
