#pragma once

// Type-A tableau combinatorics for sl_{n+1}: diagrams with n rows, the
// row-insertion operator Y[j], semistandard tableaux, LR counts, and explicit
// simple modules V(lambda).

#include <map>
#include <optional>
#include <vector>

#include "densor/lie.hpp"
#include "densor/tensor.hpp"

namespace densor {

/// Weakly decreasing, nonnegative, fixed length n (zeros allowed).
using Partition = std::vector<int>;

bool is_partition(const Partition& p);
int partition_size(const Partition& p);

struct Tableau {
  Partition shape;
  std::vector<std::vector<int>> rows;  // entries in [1, n+1]
};

/// Columns right to left, each column top to bottom.
std::vector<int> reading_word(const Tableau& t);

/// Y[j]: add a box to row j (j <= n), or remove a full column (j = n+1).
/// Throws std::invalid_argument when j is outside [1, n+1].
std::optional<Partition> row_insert(const Partition& Y, int j);
std::optional<Partition> iterated_insert(const Partition& Y, const std::vector<int>& word);

/// All semistandard fillings with entries in [1, alphabet], sorted by reading word.
std::vector<Tableau> enumerate_ssyt(const Partition& shape, int alphabet);

/// Number of tableaux T of shape mu (alphabet n+1) with lambda[word(T)] = nu.
long lr_coefficient(const Partition& lambda, const Partition& mu, const Partition& nu);
/// All nu with their multiplicities in B(lambda) (x) B(mu).
std::map<Partition, long> lr_decomposition(const Partition& lambda, const Partition& mu);

/// (2, 1, ..., 1) with n parts: the adjoint highest weight.
Partition adjoint_partition(int n);
/// Number of distinct nonzero parts.
long lr_adjoint_formula(const Partition& lambda);

/// |{l : l | m, l <= n}|.
int divisor_count(int m, int n);

/// Weyl dimension of V(lambda) for sl_{n+1}, n = lambda.size().
long weyl_dimension(const Partition& lambda);

/// lambda |- m with all nonzero parts equal to l, for each l | m with
/// l <= n and m / l <= n.
std::vector<Partition> family_partitions(int m, int n);

/// Action of the standard basis of sl_{n+1}(K) on V(lambda), spun from the
/// highest weight vector of a tensor product of exterior powers. Requires
/// p not dividing n+1 and p > |lambda|; simplicity is certified by the Meataxe
/// (std::runtime_error if that fails).
LieModule build_simple_module(int n, const Partition& lambda, const Field& F, Rng& rng);

/// Exterior power action on k-subsets in lexicographic order.
Matrix exterior_power_action(const Matrix& x, std::size_t k);

struct FamilyMember {
  Partition lambda;
  LieModule module;
  Tensor bimap;     // frame (dim L, dim M, dim M): <t|x_i, v_j> = rho(x_i) v_j
  Tensor brahana;   // structure constants of the algebra on M + L + M
};

/// Brahana product on M + L + M: (m, x, m')(n, y, n') = (0, 0, x n - y m).
Tensor brahana_algebra(const Tensor& bimap);

FamilyMember family_tensor(int n, const Partition& lambda, const Field& F, Rng& rng);

}  // namespace densor
