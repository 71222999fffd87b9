#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "densor/field.hpp"
#include "densor/kernels.hpp"
#include "densor/poly.hpp"

namespace densor {

using Vec = std::vector<Elem>;

/// Dense row-major matrix over a finite field.
class Matrix {
 public:
  Matrix() = default;
  Matrix(Field F, std::size_t rows, std::size_t cols)
      : F_(std::move(F)), rows_(rows), cols_(cols), a_(rows * cols, 0) {}
  Matrix(Field F, std::size_t rows, std::size_t cols, Vec entries);

  static Matrix identity(const Field& F, std::size_t n);
  static Matrix random(const Field& F, std::size_t rows, std::size_t cols, Rng& rng);
  static Matrix from_rows(const Field& F, const std::vector<Vec>& rows, std::size_t cols);

  const Field& field() const { return F_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  Elem& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  Elem operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  std::span<Elem> row(std::size_t i) { return {a_.data() + i * cols_, cols_}; }
  std::span<const Elem> row(std::size_t i) const { return {a_.data() + i * cols_, cols_}; }
  Vec& data() { return a_; }
  const Vec& data() const { return a_; }
  bool is_zero() const;

  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator*(const Matrix& o) const;
  Matrix scaled(Elem c) const;
  Matrix transpose() const;
  Vec apply(std::span<const Elem> v) const;  // M v
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;

 private:
  Field F_;
  std::size_t rows_ = 0, cols_ = 0;
  Vec a_;
};

Matrix commutator(const Matrix& a, const Matrix& b);
/// Block diagonal / Kronecker product helpers.
Matrix kron(const Matrix& a, const Matrix& b);
Matrix direct_sum(const Matrix& a, const Matrix& b);

struct RrefResult {
  Matrix r;
  std::vector<std::size_t> pivots;
  std::size_t rank() const { return pivots.size(); }
};

RrefResult rref(Matrix m, ExecPolicy policy = ExecPolicy::Auto);
std::size_t rank(const Matrix& m);

/// Subspace of K^n with a canonical RREF basis (rows). Equal subspaces have
/// byte-identical bases.
class Subspace {
 public:
  Subspace() = default;
  Subspace(Field F, std::size_t ambient) : F_(std::move(F)), n_(ambient), basis_(F_, 0, ambient) {}

  static Subspace span(const Field& F, std::size_t ambient, const std::vector<Vec>& vectors);
  static Subspace from_matrix_rows(const Matrix& m);
  static Subspace full(const Field& F, std::size_t n);

  const Field& field() const { return F_; }
  std::size_t ambient() const { return n_; }
  std::size_t dim() const { return basis_.rows(); }
  const Matrix& basis() const { return basis_; }
  Vec vector(std::size_t i) const;
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  bool contains(std::span<const Elem> v) const;
  bool contains(const Subspace& o) const;
  /// Coordinates of v in the basis, or none when v is outside.
  std::optional<Vec> coordinates(std::span<const Elem> v) const;
  Subspace sum(const Subspace& o) const;
  Subspace intersect(const Subspace& o) const;
  /// Combination sum_i c_i b_i.
  Vec combine(std::span<const Elem> c) const;
  Vec random_element(Rng& rng) const;

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.n_ == b.n_ && a.basis_ == b.basis_;
  }

 private:
  Field F_;
  std::size_t n_ = 0;
  Matrix basis_;
  std::vector<std::size_t> pivots_;
};

/// Growing echelon basis; add() reports whether the vector was new.
class IncrementalBasis {
 public:
  IncrementalBasis(Field F, std::size_t n) : F_(std::move(F)), n_(n) {}
  bool add(Vec v);
  /// v minus its projection on the current span (zero iff v is inside).
  Vec reduce(Vec v) const;
  bool contains(std::span<const Elem> v) const;
  std::size_t dim() const { return originals_.size(); }
  std::size_t ambient() const { return n_; }
  /// The added vectors, in insertion order.
  const std::vector<Vec>& vectors() const { return originals_; }
  Subspace subspace() const;

 private:
  Field F_;
  std::size_t n_;
  std::vector<Vec> rows_;  // reduced, pivot entry 1
  std::vector<std::size_t> pivots_;
  std::vector<Vec> originals_;
};

/// Coordinates with respect to a fixed, linearly independent list of vectors
/// (kept in the given order, unlike Subspace).
class SpanCoordinates {
 public:
  SpanCoordinates() = default;
  /// Throws std::invalid_argument when the vectors are dependent.
  SpanCoordinates(const Field& F, std::size_t ambient, const std::vector<Vec>& vectors);
  std::size_t dim() const { return count_; }
  std::optional<Vec> coordinates(std::span<const Elem> v) const;
  const Subspace& span() const { return span_; }

 private:
  Field F_;
  std::size_t count_ = 0;
  Subspace span_;
  Matrix transform_;  // RREF row i = sum_j transform_(i, j) * vectors[j]
};

/// Null space {v : m v = 0}.
Subspace kernel(const Matrix& m, ExecPolicy policy = ExecPolicy::Auto);
/// Some x with m x = b; throws std::invalid_argument on size mismatch.
std::optional<Vec> solve(const Matrix& m, std::span<const Elem> b);
std::optional<Matrix> inverse(const Matrix& m);
bool is_invertible(const Matrix& m);

FieldPoly min_poly(const Matrix& m);
FieldPoly char_poly(const Matrix& m);
Matrix eval_poly(const FieldPoly& f, const Matrix& m);
/// Minimal polynomial of v under m (monic, lowest degree with f(m)v = 0).
FieldPoly min_poly_vector(const Matrix& m, std::span<const Elem> v);

/// Matrices viewed as flat vectors of length rows*cols.
Vec flat(const Matrix& m);
Matrix unflat(const Field& F, std::size_t rows, std::size_t cols, std::span<const Elem> v);

enum class Product { Associative, Bracket };

/// Smallest span containing gens (and I when unital) closed under the product.
/// Basis is returned as a Subspace of flattened n x n matrices.
Subspace algebra_closure(const std::vector<Matrix>& gens, Product product, bool unital);
std::vector<Matrix> matrices_of(const Subspace& s, std::size_t n);

}  // namespace densor
