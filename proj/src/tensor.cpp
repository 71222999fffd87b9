#include "densor/tensor.hpp"

#include <algorithm>
#include <stdexcept>

namespace densor {

std::size_t Frame::volume() const {
  std::size_t v = 1;
  for (auto d : dims) v *= d;
  return v;
}

std::size_t Frame::operator_dim() const {
  std::size_t s = 0;
  for (auto d : dims) s += d * d;
  return s;
}

Frame make_frame(const Field& F, std::vector<std::size_t> dims) {
  if (dims.size() < 2) throw std::invalid_argument("a frame needs at least two axes");
  for (auto d : dims)
    if (d < 1) throw std::invalid_argument("frame dimensions must be positive");
  return Frame{F, std::move(dims)};
}

Tensor::Tensor(Frame frame) : frame_(std::move(frame)), e_(frame_.volume(), 0) {}

Tensor::Tensor(Frame frame, Vec entries) : frame_(std::move(frame)), e_(std::move(entries)) {
  if (e_.size() != frame_.volume()) throw std::invalid_argument("tensor entry count does not match frame");
  for (auto x : e_)
    if (x >= frame_.field.q()) throw std::invalid_argument("tensor entry out of field range");
}

Tensor Tensor::random(const Frame& frame, Rng& rng) {
  Tensor t(frame);
  for (auto& x : t.e_) x = frame.field.random(rng);
  return t;
}

Elem Tensor::at(const std::vector<std::size_t>& idx) const { return e_[flat_index(dims(), idx)]; }
Elem& Tensor::at(const std::vector<std::size_t>& idx) { return e_[flat_index(dims(), idx)]; }

bool Tensor::is_zero() const {
  return std::all_of(e_.begin(), e_.end(), [](Elem x) { return x == 0; });
}

Tensor Tensor::scaled(Elem c) const {
  Tensor r = *this;
  field().scale(r.e_, c);
  return r;
}

Tensor Tensor::operator+(const Tensor& o) const {
  if (!(frame_ == o.frame_)) throw std::invalid_argument("frame mismatch");
  Tensor r = *this;
  for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = field().add(e_[i], o.e_[i]);
  return r;
}

Tensor Tensor::operator-(const Tensor& o) const {
  if (!(frame_ == o.frame_)) throw std::invalid_argument("frame mismatch");
  Tensor r = *this;
  for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = field().sub(e_[i], o.e_[i]);
  return r;
}

std::size_t flat_index(const std::vector<std::size_t>& dims, const std::vector<std::size_t>& idx) {
  if (idx.size() != dims.size()) throw std::invalid_argument("index arity mismatch");
  std::size_t f = 0;
  for (std::size_t a = 0; a < dims.size(); ++a) {
    if (idx[a] >= dims[a]) throw std::out_of_range("tensor index out of range");
    f = f * dims[a] + idx[a];
  }
  return f;
}

std::vector<std::size_t> multi_index(const std::vector<std::size_t>& dims, std::size_t flat) {
  std::vector<std::size_t> idx(dims.size());
  for (std::size_t a = dims.size(); a-- > 0;) {
    idx[a] = flat % dims[a];
    flat /= dims[a];
  }
  return idx;
}

std::size_t axis_stride(const std::vector<std::size_t>& dims, std::size_t axis) {
  std::size_t s = 1;
  for (std::size_t a = axis + 1; a < dims.size(); ++a) s *= dims[a];
  return s;
}

// ------------------------------------------------------------ operators

OperatorTuple OperatorTuple::identity(const Frame& frame) {
  OperatorTuple o;
  for (auto d : frame.dims) o.mats.push_back(Matrix::identity(frame.field, d));
  return o;
}

OperatorTuple OperatorTuple::zero(const Frame& frame) {
  OperatorTuple o;
  for (auto d : frame.dims) o.mats.emplace_back(frame.field, d, d);
  return o;
}

OperatorTuple OperatorTuple::random_invertible(const Frame& frame, Rng& rng) {
  OperatorTuple o;
  for (auto d : frame.dims) {
    Matrix m;
    do {
      m = Matrix::random(frame.field, d, d, rng);
    } while (!is_invertible(m));
    o.mats.push_back(std::move(m));
  }
  return o;
}

Vec OperatorTuple::flatten() const {
  Vec v;
  for (const auto& m : mats) v.insert(v.end(), m.data().begin(), m.data().end());
  return v;
}

OperatorTuple OperatorTuple::unflatten(const Frame& frame, std::span<const Elem> v) {
  if (v.size() != frame.operator_dim()) throw std::invalid_argument("operator coordinate length mismatch");
  OperatorTuple o;
  std::size_t off = 0;
  for (auto d : frame.dims) {
    o.mats.push_back(unflat(frame.field, d, d, v.subspan(off, d * d)));
    off += d * d;
  }
  return o;
}

bool OperatorTuple::fits(const Frame& frame) const {
  if (mats.size() != frame.arity()) return false;
  for (std::size_t a = 0; a < mats.size(); ++a)
    if (mats[a].rows() != frame.dims[a] || mats[a].cols() != frame.dims[a]) return false;
  return true;
}

namespace {
template <class Op>
OperatorTuple zip(const OperatorTuple& a, const OperatorTuple& b, Op op) {
  if (a.mats.size() != b.mats.size()) throw std::invalid_argument("operator arity mismatch");
  OperatorTuple r;
  for (std::size_t i = 0; i < a.mats.size(); ++i) r.mats.push_back(op(a.mats[i], b.mats[i]));
  return r;
}
}  // namespace

OperatorTuple OperatorTuple::operator*(const OperatorTuple& o) const {
  return zip(*this, o, [](const Matrix& x, const Matrix& y) { return x * y; });
}
OperatorTuple OperatorTuple::operator+(const OperatorTuple& o) const {
  return zip(*this, o, [](const Matrix& x, const Matrix& y) { return x + y; });
}
OperatorTuple OperatorTuple::operator-(const OperatorTuple& o) const {
  return zip(*this, o, [](const Matrix& x, const Matrix& y) { return x - y; });
}
OperatorTuple OperatorTuple::scaled(Elem c) const {
  OperatorTuple r;
  for (const auto& m : mats) r.mats.push_back(m.scaled(c));
  return r;
}

OperatorTuple bracket(const OperatorTuple& a, const OperatorTuple& b) {
  return zip(a, b, [](const Matrix& x, const Matrix& y) { return commutator(x, y); });
}

std::optional<OperatorTuple> inverse(const OperatorTuple& phi) {
  OperatorTuple r;
  for (const auto& m : phi.mats) {
    auto inv = inverse(m);
    if (!inv) return std::nullopt;
    r.mats.push_back(std::move(*inv));
  }
  return r;
}

LinearForm LinearForm::derivation(const Field& F, std::size_t arity) {
  (void)F;
  return LinearForm{Vec(arity, 1)};
}

LinearForm LinearForm::adjoint(const Field& F, std::size_t arity) {
  Vec c(arity, 0);
  c[0] = 1;
  c[1] = F.neg(1);
  return LinearForm{c};
}

// ------------------------------------------------------------- actions

Elem evaluate(const Tensor& t, const std::vector<Vec>& vectors) {
  const auto& dims = t.dims();
  if (vectors.size() != dims.size()) throw std::invalid_argument("one vector per axis is required");
  for (std::size_t a = 0; a < dims.size(); ++a)
    if (vectors[a].size() != dims[a]) throw std::invalid_argument("vector length does not match axis");
  // Contract the last axis repeatedly.
  const Field& F = t.field();
  Vec cur = t.entries();
  for (std::size_t a = dims.size(); a-- > 0;) {
    const std::size_t d = dims[a];
    Vec next(cur.size() / d, 0);
    for (std::size_t o = 0; o < next.size(); ++o) {
      Elem acc = 0;
      for (std::size_t j = 0; j < d; ++j) acc = F.add(acc, F.mul(cur[o * d + j], vectors[a][j]));
      next[o] = acc;
    }
    cur = std::move(next);
  }
  return cur[0];
}

Tensor apply_on_axis(const Tensor& t, std::size_t axis, const Matrix& m, ExecPolicy policy) {
  if (axis >= t.dims().size()) throw std::invalid_argument("invalid axis");
  if (m.rows() != t.dims()[axis] || m.cols() != t.dims()[axis])
    throw std::invalid_argument("operator does not fit the axis");
  Tensor out(t.frame());
  mode_apply(t.field(), t.dims(), axis, m.data().data(), t.entries().data(), out.entries().data(), policy);
  return out;
}

Tensor act(const Tensor& t, const OperatorTuple& phi, ExecPolicy policy) {
  if (!phi.fits(t.frame())) throw std::invalid_argument("operator tuple does not fit the frame");
  Tensor cur = t;
  for (std::size_t a = 0; a < phi.mats.size(); ++a) cur = apply_on_axis(cur, a, phi.mats[a], policy);
  return cur;
}

Tensor apply_operator(const Tensor& t, const OperatorTuple& omega, const LinearForm& p,
                      ExecPolicy policy) {
  if (!omega.fits(t.frame())) throw std::invalid_argument("operator tuple does not fit the frame");
  if (p.coeffs.size() != t.dims().size()) throw std::invalid_argument("linear form arity mismatch");
  const Field& F = t.field();
  Tensor out(t.frame());
  for (std::size_t a = 0; a < omega.mats.size(); ++a) {
    if (p.coeffs[a] == 0) continue;
    Tensor part = apply_on_axis(t, a, omega.mats[a], policy);
    F.sub_mul(out.entries(), F.neg(p.coeffs[a]), part.entries());
  }
  return out;
}

Matrix flatten(const Tensor& t, std::size_t axis) {
  const auto& dims = t.dims();
  if (axis >= dims.size()) throw std::invalid_argument("invalid axis");
  const std::size_t d = dims[axis];
  const std::size_t rest = t.frame().volume() / d;
  const std::size_t stride = axis_stride(dims, axis);
  Matrix m(t.field(), d, rest);
  for (std::size_t f = 0; f < t.entries().size(); ++f) {
    const std::size_t i = (f / stride) % d;
    const std::size_t outer = f / (stride * d);
    const std::size_t inner = f % stride;
    m(i, outer * stride + inner) = t[f];
  }
  return m;
}

bool Nondegeneracy::overall() const {
  return std::all_of(per_axis.begin(), per_axis.end(), [](bool b) { return b; });
}

Nondegeneracy is_nondegenerate(const Tensor& t) {
  Nondegeneracy n;
  for (std::size_t a = 0; a < t.dims().size(); ++a)
    n.per_axis.push_back(rank(flatten(t, a)) == t.dims()[a]);
  return n;
}

OperatorTuple bimap_to_trilinear(const OperatorTuple& b) {
  if (b.mats.size() != 3) throw std::invalid_argument("bimap view needs three axes");
  const Field& F = b.mats[2].field();
  return OperatorTuple{{b.mats[0], b.mats[1], b.mats[2].transpose().scaled(F.neg(1))}};
}

OperatorTuple trilinear_to_bimap(const OperatorTuple& t) { return bimap_to_trilinear(t); }

}  // namespace densor
