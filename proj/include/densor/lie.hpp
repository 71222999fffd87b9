#pragma once

// Lie algebras given as spans of square matrices with the commutator bracket.

#include <vector>

#include "densor/linalg.hpp"

namespace densor {

class MatrixLieAlgebra {
 public:
  MatrixLieAlgebra() = default;
  /// Keeps a maximal independent prefix-greedy subset of gens, in order.
  /// Throws std::invalid_argument if the span is not bracket-closed.
  static MatrixLieAlgebra make(const Field& F, std::size_t n, const std::vector<Matrix>& gens);
  /// Lie algebra generated by gens (bracket closure).
  static MatrixLieAlgebra generated(const Field& F, std::size_t n, const std::vector<Matrix>& gens);

  const Field& field() const { return F_; }
  std::size_t size() const { return n_; }  // matrices are size() x size()
  std::size_t dim() const { return basis_.size(); }
  const std::vector<Matrix>& basis() const { return basis_; }
  const Matrix& operator[](std::size_t i) const { return basis_[i]; }

  std::optional<Vec> coordinates(const Matrix& x) const;
  bool contains(const Matrix& x) const { return coordinates(x).has_value(); }
  Matrix element(std::span<const Elem> c) const;
  /// ad(x) in basis coordinates: column j = coords([x, b_j]).
  Matrix ad(const Matrix& x) const;
  /// coords of [b_i, b_j]
  Vec bracket_coords(std::size_t i, std::size_t j) const;
  bool is_abelian() const;

 private:
  Field F_;
  std::size_t n_ = 0;
  std::vector<Matrix> basis_;
  SpanCoordinates coords_;
};

/// A Lie algebra given by its action on V: one matrix per basis element.
struct LieModule {
  Field field;
  std::size_t dim = 0;
  std::vector<Matrix> action;
};

/// Subspace of L given by coordinate vectors (rows), returned as matrices.
std::vector<Matrix> elements_from_coords(const MatrixLieAlgebra& L, const Subspace& coords);

/// Center and derived subalgebra, as coordinate subspaces of L.
Subspace center(const MatrixLieAlgebra& L);
Subspace derived(const MatrixLieAlgebra& L);

/// Centralizer of a set of matrices within L (coordinates).
Subspace centralizer(const MatrixLieAlgebra& L, const std::vector<Matrix>& xs);

struct IdealDecomposition {
  std::vector<Matrix> abelian;                  // center Z(L)
  std::vector<std::vector<Matrix>> simple;      // minimal nonabelian ideals of [L, L]
};

/// L = Z(L) + [L, L] with [L, L] split into minimal ideals by the Meataxe on
/// its adjoint module. Throws std::domain_error when L is not reductive.
IdealDecomposition minimal_ideals(const MatrixLieAlgebra& L, Rng& rng);

}  // namespace densor
