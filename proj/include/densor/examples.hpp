#pragma once

// Standard example tensors.

#include "densor/tensor.hpp"

namespace densor {

/// The dot product on K^n as a 2-tensor (identity matrix), or as the bimap
/// K^n x K^n -> K on the frame (n, n, 1).
Tensor dot_tensor(const Field& F, std::size_t n, bool bimap = false);

/// <t | A, B, C> = sum_{i,j,k} A_ij B_jk C_ik on the frame (ab, bc, ac).
Tensor matmul_tensor(const Field& F, std::size_t a, std::size_t b, std::size_t c);

/// <t | (a, b), (x, y)> = a y - b x over A = GF(p)[x]/(x^p), frame (2p, 2p, p),
/// monomial basis of A.
Tensor heisenberg_tensor(const Field& F);

/// Uniformly random tensor on the frame conditioned on nondegeneracy.
Tensor random_nondegenerate(const Frame& frame, Rng& rng);

}  // namespace densor
