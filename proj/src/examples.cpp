#include "densor/examples.hpp"

#include <stdexcept>

namespace densor {

Tensor dot_tensor(const Field& F, std::size_t n, bool bimap) {
  if (n < 1) throw std::invalid_argument("dot product needs n >= 1");
  Frame frame = bimap ? make_frame(F, {n, n, 1}) : make_frame(F, {n, n});
  Tensor t(frame);
  for (std::size_t i = 0; i < n; ++i) t[i * n + i] = 1;
  return t;
}

Tensor matmul_tensor(const Field& F, std::size_t a, std::size_t b, std::size_t c) {
  if (a < 1 || b < 1 || c < 1) throw std::invalid_argument("matmul dimensions must be positive");
  Tensor t(make_frame(F, {a * b, b * c, a * c}));
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < b; ++j)
      for (std::size_t k = 0; k < c; ++k) t.at({i * b + j, j * c + k, i * c + k}) = 1;
  return t;
}

Tensor heisenberg_tensor(const Field& F) {
  if (!F.is_prime()) throw std::invalid_argument("the Heisenberg example needs a prime field");
  const std::size_t p = F.p();
  Tensor t(make_frame(F, {2 * p, 2 * p, p}));
  const Elem minus = F.neg(1);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; i + j < p; ++j) {
      t.at({i, p + j, i + j}) = 1;       // a_i y_j
      t.at({p + i, j, i + j}) = minus;   // -b_i x_j
    }
  return t;
}

Tensor random_nondegenerate(const Frame& frame, Rng& rng) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Tensor t = Tensor::random(frame, rng);
    if (is_nondegenerate(t).overall()) return t;
  }
  throw std::runtime_error("could not sample a nondegenerate tensor");
}

}  // namespace densor
