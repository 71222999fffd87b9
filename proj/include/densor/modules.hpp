#pragma once

// Modules over matrix algebras: the module is K^n with the listed matrices
// acting on columns. Randomized routines take an explicit generator.

#include <optional>
#include <vector>

#include "densor/lie.hpp"

namespace densor {

/// Smallest subspace containing seeds and invariant under every generator.
Subspace spin(const std::vector<Matrix>& gens, const std::vector<Vec>& seeds, std::size_t n);

/// Matrices of the action on an invariant subspace, in the given basis
/// (rows of W's canonical basis). Throws if W is not invariant.
std::vector<Matrix> restrict_action(const std::vector<Matrix>& gens, const Subspace& W);
std::vector<Matrix> restrict_action(const std::vector<Matrix>& gens, const std::vector<Vec>& basis);

struct MeataxeResult {
  bool simple = false;
  Subspace submodule;  // proper nonzero invariant subspace when !simple
};

/// Las Vegas irreducibility test; throws LasVegasAbort after the retry budget.
MeataxeResult meataxe_split(const std::vector<Matrix>& gens, std::size_t n, Rng& rng);

/// A simple submodule (recursive Meataxe); the whole space when simple.
Subspace find_simple_submodule(const std::vector<Matrix>& gens, std::size_t n, Rng& rng);

struct EndomorphismRing {
  std::vector<Matrix> basis;
  /// Set when the ring is a field: a generator and the field order exponent
  /// [Delta : K].
  std::optional<Matrix> primitive;
  std::size_t degree = 0;
};

/// {f : f x = x f for all gens}. With require_field, throws std::domain_error
/// unless the ring is a field.
EndomorphismRing endomorphism_ring(const std::vector<Matrix>& gens, std::size_t n, Rng& rng,
                                   bool require_field = false);

/// Primitive idempotent of an algebra A (basis of matrices, containing I)
/// isomorphic to M_f(Delta). Throws std::domain_error if A is not central simple.
Matrix primitive_idempotent(const std::vector<Matrix>& A, Rng& rng);

struct SplitOff {
  Subspace complement;  // N S
  Matrix n_element;     // n in span(N) with n S != 0
};

/// V = S + N S for a proper simple M-submodule S under transverse ideals M, N.
SplitOff split_off(const std::vector<Matrix>& M, const std::vector<Matrix>& N, const Subspace& S, Rng& rng);

/// Checks m n = n m for all pairs.
bool is_transverse(const std::vector<Matrix>& M, const std::vector<Matrix>& N);

struct TensorFactorization {
  std::vector<Matrix> M_on_S;  // action of the M basis on S (dim_S x dim_S)
  std::vector<Matrix> N_on_T;  // action of the N basis on T
  std::size_t dim_S = 0, dim_T = 0;
  std::size_t delta_degree = 1;  // [Delta : K]
  Matrix iso;                    // V -> S (x) T, Kronecker order s * dim_T + t
};

/// Verifies iso m iso^{-1} = m|S (x) I and iso n iso^{-1} = I (x) n|T exactly.
bool verify_factorization(const TensorFactorization& f, const std::vector<Matrix>& M,
                          const std::vector<Matrix>& N);

/// V simple over M + N (transverse). Only Delta = K is supported; other
/// cases throw std::domain_error.
TensorFactorization tensor_decompose(const std::vector<Matrix>& M, const std::vector<Matrix>& N,
                                     std::size_t n, Rng& rng);

struct FullFactorization {
  std::vector<std::vector<Matrix>> factors;  // action of ideal i on S_i
  std::vector<std::size_t> dims;
  Matrix iso;  // V -> S_1 (x) ... (x) S_r
};

FullFactorization full_tensor_decompose(const std::vector<std::vector<Matrix>>& ideals, std::size_t n,
                                        Rng& rng);
bool verify_full_factorization(const FullFactorization& f, const std::vector<std::vector<Matrix>>& ideals);

/// Some invertible Psi with Psi x1_i = x2_i Psi for all i, or none.
std::optional<Matrix> module_iso_fixed_algebra(const std::vector<Matrix>& x1, const std::vector<Matrix>& x2,
                                               Rng& rng);

/// Solution space of Psi a_i = b_i Psi (Psi : K^n1 -> K^n2).
std::vector<Matrix> intertwiners(const std::vector<Matrix>& a, const std::vector<Matrix>& b);
/// An invertible element of span(space), found by sampling then exhaustive
/// scan when small; throws LasVegasAbort when neither settles it.
std::optional<Matrix> find_invertible(const std::vector<Matrix>& space, Rng& rng);

struct CyclicPseudoIso {
  FieldPoly g;  // c1 -> g(c2)
  Matrix Psi;   // Psi c1 = g(c2) Psi
};

/// Pseudo-isomorphism between cyclic algebras K[c1] on V1 and K[c2] on V2.
/// Every g mod f_2 with f_1(g) = 0 mod f_2 and K[g(c_2)] = K[c_2] (at most limit).
std::vector<FieldPoly> cyclic_algebra_maps(const Matrix& c1, const Matrix& c2, Rng& rng, std::size_t limit = 4096);
std::optional<CyclicPseudoIso> cyclic_pseudo_iso(const Matrix& c1, const Matrix& c2, Rng& rng);

}  // namespace densor
