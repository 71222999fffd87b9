#include "densor/operators.hpp"

#include <stdexcept>

namespace densor {

OperatorTuple OperatorSpace::element(std::size_t i) const {
  return OperatorTuple::unflatten(frame, coords.basis().row(i));
}

std::vector<OperatorTuple> OperatorSpace::basis() const {
  std::vector<OperatorTuple> out;
  for (std::size_t i = 0; i < dim(); ++i) out.push_back(element(i));
  return out;
}

bool OperatorSpace::contains(const OperatorTuple& o) const { return coords.contains(o.flatten()); }

std::optional<Vec> OperatorSpace::coordinates(const OperatorTuple& o) const {
  return coords.coordinates(o.flatten());
}

std::vector<Matrix> OperatorSpace::axis_matrices(std::size_t axis) const {
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < dim(); ++i) out.push_back(element(i).mats[axis]);
  return out;
}

OperatorSpace OperatorSpace::span(const Frame& frame, const std::vector<OperatorTuple>& ops, Structure s) {
  std::vector<Vec> rows;
  for (const auto& o : ops) {
    if (!o.fits(frame)) throw std::invalid_argument("operator tuple does not fit the frame");
    rows.push_back(o.flatten());
  }
  return OperatorSpace{frame, Subspace::span(frame.field, frame.operator_dim(), rows), s};
}

OperatorSpace OperatorSpace::full(const Frame& frame) {
  return OperatorSpace{frame, Subspace::full(frame.field, frame.operator_dim()), Structure::Plain};
}

Matrix op_system(const std::vector<Tensor>& S, const LinearForm& p,
                 const std::vector<std::size_t>& axes, ExecPolicy policy) {
  if (S.empty()) throw std::invalid_argument("op_space needs at least one tensor");
  const Frame& frame = S[0].frame();
  for (const auto& t : S)
    if (!(t.frame() == frame)) throw std::invalid_argument("tensors must share a frame");
  if (p.coeffs.size() != frame.arity()) throw std::invalid_argument("linear form arity mismatch");
  const Field& F = frame.field;
  const auto& dims = frame.dims;
  std::vector<std::size_t> offset(axes.size());
  std::size_t cols = 0;
  for (std::size_t k = 0; k < axes.size(); ++k) {
    if (axes[k] >= dims.size()) throw std::invalid_argument("invalid axis");
    offset[k] = cols;
    cols += dims[axes[k]] * dims[axes[k]];
  }
  const std::size_t vol = frame.volume();
  Matrix sys(F, S.size() * vol, cols);
  const long long total = static_cast<long long>(S.size() * vol);
  auto fill_row = [&](std::size_t r) {
    const Tensor& t = S[r / vol];
    const std::size_t i = r % vol;
    auto out = sys.row(r);
    for (std::size_t k = 0; k < axes.size(); ++k) {
      const std::size_t a = axes[k];
      const Elem alpha = p.coeffs[a];
      if (alpha == 0) continue;
      const std::size_t d = dims[a], stride = axis_stride(dims, a);
      const std::size_t m = (i / stride) % d;
      const std::size_t base = i - m * stride;
      // Coefficient of w_a(j, m) is alpha_a * t[i with i_a -> j].
      for (std::size_t j = 0; j < d; ++j) {
        const Elem v = t[base + j * stride];
        if (v == 0) continue;
        Elem& slot = out[offset[k] + j * d + m];
        slot = F.add(slot, F.mul(alpha, v));
      }
    }
  };
  if (policy != ExecPolicy::Serial) {
#pragma omp parallel for schedule(static)
    for (long long r = 0; r < total; ++r) fill_row(static_cast<std::size_t>(r));
  } else {
    for (long long r = 0; r < total; ++r) fill_row(static_cast<std::size_t>(r));
  }
  return sys;
}

OperatorSpace op_space_axes(const std::vector<Tensor>& S, const LinearForm& p,
                            const std::vector<std::size_t>& axes, ExecPolicy policy) {
  Matrix sys = op_system(S, p, axes, policy);
  const Frame& frame = S[0].frame();
  std::vector<std::size_t> sub;
  for (auto a : axes) sub.push_back(frame.dims[a]);
  return OperatorSpace{Frame{frame.field, sub}, kernel(sys, policy), Structure::Plain};
}

OperatorSpace op_space(const std::vector<Tensor>& S, const LinearForm& p, ExecPolicy policy) {
  if (S.empty()) throw std::invalid_argument("op_space needs at least one tensor");
  std::vector<std::size_t> axes(S[0].dims().size());
  for (std::size_t a = 0; a < axes.size(); ++a) axes[a] = a;
  return op_space_axes(S, p, axes, policy);
}

bool is_bracket_closed(const OperatorSpace& L) {
  auto b = L.basis();
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = i + 1; j < b.size(); ++j)
      if (!L.contains(bracket(b[i], b[j]))) return false;
  return true;
}

OperatorTuple adjoint_product(const OperatorTuple& x, const OperatorTuple& y) {
  if (x.mats.size() != 2 || y.mats.size() != 2) throw std::invalid_argument("adjoint elements are pairs");
  return OperatorTuple{{y.mats[0] * x.mats[0], x.mats[1] * y.mats[1]}};
}

bool is_adjoint_closed(const OperatorSpace& A) {
  auto b = A.basis();
  for (const auto& x : b)
    for (const auto& y : b)
      if (!A.contains(adjoint_product(x, y))) return false;
  return true;
}

OperatorSpace derivation_algebra(const Tensor& t, ExecPolicy policy) {
  OperatorSpace L = op_space({t}, LinearForm::derivation(t.field(), t.dims().size()), policy);
  L.structure = Structure::Lie;
  if (!is_bracket_closed(L)) throw std::logic_error("derivation algebra failed bracket closure");
  return L;
}

OperatorSpace adjoint_algebra(const Tensor& t) {
  if (t.dims().size() != 2 && t.dims().size() != 3)
    throw std::invalid_argument("adjoint algebra needs a 2- or 3-axis tensor");
  OperatorSpace A = op_space_axes({t}, LinearForm::adjoint(t.field(), t.dims().size()), {0, 1});
  A.structure = Structure::Associative;
  if (!is_adjoint_closed(A)) throw std::logic_error("adjoint algebra failed product closure");
  return A;
}

bool is_derivation(const Tensor& t, const OperatorTuple& omega) {
  return apply_operator(t, omega, LinearForm::derivation(t.field(), t.dims().size())).is_zero();
}

}  // namespace densor
