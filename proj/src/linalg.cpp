#include "densor/linalg.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace densor {

Matrix::Matrix(Field F, std::size_t rows, std::size_t cols, Vec entries)
    : F_(std::move(F)), rows_(rows), cols_(cols), a_(std::move(entries)) {
  if (a_.size() != rows * cols) throw std::invalid_argument("matrix entry count mismatch");
}

Matrix Matrix::identity(const Field& F, std::size_t n) {
  Matrix m(F, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::random(const Field& F, std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(F, rows, cols);
  for (auto& x : m.a_) x = F.random(rng);
  return m;
}

Matrix Matrix::from_rows(const Field& F, const std::vector<Vec>& rows, std::size_t cols) {
  Matrix m(F, rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw std::invalid_argument("row length mismatch");
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  }
  return m;
}

bool Matrix::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](Elem x) { return x == 0; });
}

Matrix Matrix::operator+(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix size mismatch");
  Matrix r(F_, rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = F_.add(a_[i], o.a_[i]);
  return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix size mismatch");
  Matrix r(F_, rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = F_.sub(a_[i], o.a_[i]);
  return r;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("matrix product size mismatch");
  Matrix r(F_, rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Elem c = a_[i * cols_ + k];
      if (c != 0) F_.sub_mul(r.row(i), F_.neg(c), o.row(k));
    }
  return r;
}

Matrix Matrix::scaled(Elem c) const {
  Matrix r = *this;
  F_.scale(r.a_, c);
  return r;
}

Matrix Matrix::transpose() const {
  Matrix r(F_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

Vec Matrix::apply(std::span<const Elem> v) const {
  if (v.size() != cols_) throw std::invalid_argument("vector length mismatch");
  Vec out(rows_, 0);
  for (std::size_t i = 0; i < rows_; ++i) {
    Elem acc = 0;
    for (std::size_t j = 0; j < cols_; ++j) acc = F_.add(acc, F_.mul(a_[i * cols_ + j], v[j]));
    out[i] = acc;
  }
  return out;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  Matrix r(F_, nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) r(i, j) = (*this)(r0 + i, c0 + j);
  return r;
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

Matrix kron(const Matrix& a, const Matrix& b) {
  const Field& F = a.field();
  Matrix r(F, a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Elem c = a(i, j);
      if (c == 0) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          r(i * b.rows() + k, j * b.cols() + l) = F.mul(c, b(k, l));
    }
  return r;
}

Matrix direct_sum(const Matrix& a, const Matrix& b) {
  Matrix r(a.field(), a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) r(a.rows() + i, a.cols() + j) = b(i, j);
  return r;
}

RrefResult rref(Matrix m, ExecPolicy policy) {
  auto piv = rref_inplace(m.field(), m.rows(), m.cols(), m.data().data(), policy);
  return {std::move(m), std::move(piv)};
}

std::size_t rank(const Matrix& m) { return rref(m).rank(); }

// ---------------------------------------------------------------- Subspace

Subspace Subspace::from_matrix_rows(const Matrix& m) {
  auto r = rref(m);
  Subspace s(m.field(), m.cols());
  s.basis_ = r.r.block(0, 0, r.rank(), m.cols());
  s.pivots_ = std::move(r.pivots);
  return s;
}

Subspace Subspace::span(const Field& F, std::size_t ambient, const std::vector<Vec>& vectors) {
  if (vectors.empty()) return Subspace(F, ambient);
  return from_matrix_rows(Matrix::from_rows(F, vectors, ambient));
}

Subspace Subspace::full(const Field& F, std::size_t n) {
  return from_matrix_rows(Matrix::identity(F, n));
}

Vec Subspace::vector(std::size_t i) const {
  auto r = basis_.row(i);
  return Vec(r.begin(), r.end());
}

std::optional<Vec> Subspace::coordinates(std::span<const Elem> v) const {
  if (v.size() != n_) throw std::invalid_argument("vector length mismatch");
  Vec c(dim());
  Vec rest(v.begin(), v.end());
  for (std::size_t i = 0; i < dim(); ++i) {
    c[i] = v[pivots_[i]];
    F_.sub_mul(rest, c[i], basis_.row(i));
  }
  if (std::any_of(rest.begin(), rest.end(), [](Elem x) { return x != 0; })) return std::nullopt;
  return c;
}

bool Subspace::contains(std::span<const Elem> v) const { return coordinates(v).has_value(); }

bool Subspace::contains(const Subspace& o) const {
  for (std::size_t i = 0; i < o.dim(); ++i)
    if (!contains(o.basis_.row(i))) return false;
  return true;
}

Subspace Subspace::sum(const Subspace& o) const {
  if (o.n_ != n_) throw std::invalid_argument("ambient mismatch");
  Matrix m(F_, dim() + o.dim(), n_);
  std::copy(basis_.data().begin(), basis_.data().end(), m.data().begin());
  std::copy(o.basis_.data().begin(), o.basis_.data().end(), m.data().begin() + basis_.data().size());
  return from_matrix_rows(m);
}

Subspace Subspace::intersect(const Subspace& o) const {
  if (o.n_ != n_) throw std::invalid_argument("ambient mismatch");
  const std::size_t k = dim(), l = o.dim();
  if (k == 0 || l == 0) return Subspace(F_, n_);
  // x A = y B  <=>  [A^T | -B^T] (x; y) = 0
  Matrix sys(F_, n_, k + l);
  for (std::size_t j = 0; j < n_; ++j) {
    for (std::size_t i = 0; i < k; ++i) sys(j, i) = basis_(i, j);
    for (std::size_t i = 0; i < l; ++i) sys(j, k + i) = F_.neg(o.basis_(i, j));
  }
  Subspace ker = kernel(sys);
  std::vector<Vec> out;
  for (std::size_t r = 0; r < ker.dim(); ++r) {
    auto kv = ker.basis().row(r);
    out.push_back(combine(kv.subspan(0, k)));
  }
  return span(F_, n_, out);
}

Vec Subspace::combine(std::span<const Elem> c) const {
  if (c.size() != dim()) throw std::invalid_argument("coefficient count mismatch");
  Vec out(n_, 0);
  for (std::size_t i = 0; i < dim(); ++i) F_.sub_mul(out, F_.neg(c[i]), basis_.row(i));
  return out;
}

Vec Subspace::random_element(Rng& rng) const {
  Vec c(dim());
  for (auto& x : c) x = F_.random(rng);
  return combine(c);
}

// -------------------------------------------------------- IncrementalBasis

Vec IncrementalBasis::reduce(Vec v) const {
  if (v.size() != n_) throw std::invalid_argument("vector length mismatch");
  for (std::size_t j = 0; j < rows_.size(); ++j) {
    const Elem c = v[pivots_[j]];
    if (c != 0) F_.sub_mul(v, c, rows_[j]);
  }
  return v;
}

bool IncrementalBasis::contains(std::span<const Elem> v) const {
  Vec r = reduce(Vec(v.begin(), v.end()));
  return std::all_of(r.begin(), r.end(), [](Elem x) { return x == 0; });
}

bool IncrementalBasis::add(Vec v) {
  Vec r = reduce(v);
  auto it = std::find_if(r.begin(), r.end(), [](Elem x) { return x != 0; });
  if (it == r.end()) return false;
  const std::size_t p = static_cast<std::size_t>(it - r.begin());
  F_.scale(r, F_.inv(r[p]));
  rows_.push_back(std::move(r));
  pivots_.push_back(p);
  originals_.push_back(std::move(v));
  return true;
}

Subspace IncrementalBasis::subspace() const { return Subspace::span(F_, n_, rows_); }

// -------------------------------------------------------- SpanCoordinates

SpanCoordinates::SpanCoordinates(const Field& F, std::size_t ambient, const std::vector<Vec>& vectors)
    : F_(F), count_(vectors.size()) {
  const std::size_t k = vectors.size();
  Matrix aug(F, k, ambient + k);
  for (std::size_t i = 0; i < k; ++i) {
    if (vectors[i].size() != ambient) throw std::invalid_argument("vector length mismatch");
    std::copy(vectors[i].begin(), vectors[i].end(), aug.row(i).begin());
    aug(i, ambient + i) = 1;
  }
  auto r = rref(std::move(aug));
  std::size_t rank = 0;
  while (rank < r.rank() && r.pivots[rank] < ambient) ++rank;
  if (rank != k) throw std::invalid_argument("vectors are linearly dependent");
  span_ = Subspace::from_matrix_rows(r.r.block(0, 0, k, ambient));
  transform_ = r.r.block(0, ambient, k, k);
}

std::optional<Vec> SpanCoordinates::coordinates(std::span<const Elem> v) const {
  auto c = span_.coordinates(v);
  if (!c) return std::nullopt;
  Vec out(count_, 0);
  for (std::size_t i = 0; i < count_; ++i)
    if ((*c)[i] != 0) F_.sub_mul(out, F_.neg((*c)[i]), transform_.row(i));
  return out;
}

// ------------------------------------------------------------ solving

Subspace kernel(const Matrix& m, ExecPolicy policy) {
  const Field& F = m.field();
  auto r = rref(m, policy);
  const std::size_t n = m.cols();
  std::vector<char> is_pivot(n, 0);
  for (auto p : r.pivots) is_pivot[p] = 1;
  std::vector<Vec> out;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    Vec v(n, 0);
    v[f] = 1;
    for (std::size_t i = 0; i < r.rank(); ++i) v[r.pivots[i]] = F.neg(r.r(i, f));
    out.push_back(std::move(v));
  }
  return Subspace::span(F, n, out);
}

std::optional<Vec> solve(const Matrix& m, std::span<const Elem> b) {
  if (b.size() != m.rows()) throw std::invalid_argument("right-hand side length mismatch");
  Matrix aug(m.field(), m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  auto r = rref(std::move(aug));
  Vec x(m.cols(), 0);
  for (std::size_t i = 0; i < r.rank(); ++i) {
    if (r.pivots[i] == m.cols()) return std::nullopt;
    x[r.pivots[i]] = r.r(i, m.cols());
  }
  return x;
}

std::optional<Matrix> inverse(const Matrix& m) {
  if (!m.square()) throw std::invalid_argument("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  Matrix aug(m.field(), n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  auto r = rref(std::move(aug));
  if (r.rank() < n || r.pivots[n - 1] != n - 1) return std::nullopt;
  return r.r.block(0, n, n, n);
}

bool is_invertible(const Matrix& m) { return m.square() && rank(m) == m.rows(); }

// -------------------------------------------------------- polynomials

FieldPoly min_poly_vector(const Matrix& m, std::span<const Elem> v) {
  const Field& F = m.field();
  const std::size_t n = m.rows();
  FieldPolyRing ring(FieldOps{F});
  std::vector<Vec> rows, coefs;
  std::vector<std::size_t> piv;
  Vec w(v.begin(), v.end());
  for (std::size_t k = 0; k <= n; ++k) {
    Vec coef(k + 1, 0);
    coef[k] = 1;
    Vec r = w;
    for (std::size_t j = 0; j < rows.size(); ++j) {
      const Elem c = r[piv[j]];
      if (c == 0) continue;
      F.sub_mul(r, c, rows[j]);
      F.sub_mul(std::span<Elem>(coef.data(), coefs[j].size()), c, coefs[j]);
    }
    auto it = std::find_if(r.begin(), r.end(), [](Elem x) { return x != 0; });
    if (it == r.end()) return ring.make(coef);
    const std::size_t p = static_cast<std::size_t>(it - r.begin());
    const Elem inv = F.inv(r[p]);
    F.scale(r, inv);
    F.scale(coef, inv);
    rows.push_back(std::move(r));
    coefs.push_back(std::move(coef));
    piv.push_back(p);
    w = m.apply(w);
  }
  throw std::logic_error("Krylov sequence did not terminate");
}

FieldPoly min_poly(const Matrix& m) {
  if (!m.square()) throw std::invalid_argument("minimal polynomial of a non-square matrix");
  const Field& F = m.field();
  const std::size_t n = m.rows();
  FieldPolyRing ring(FieldOps{F});
  FieldPoly acc = ring.one();
  IncrementalBasis covered(F, n);
  for (std::size_t i = 0; i < n && covered.dim() < n; ++i) {
    Vec e(n, 0);
    e[i] = 1;
    if (covered.contains(e)) continue;
    FieldPoly f = min_poly_vector(m, e);
    Vec w = e;
    for (int k = 0; k < f.degree(); ++k) {
      covered.add(w);
      w = m.apply(w);
    }
    // lcm(acc, f)
    acc = ring.monic(ring.div(ring.mul(acc, f), ring.gcd(acc, f)));
  }
  return acc;
}

FieldPoly char_poly(const Matrix& m) {
  if (!m.square()) throw std::invalid_argument("characteristic polynomial of a non-square matrix");
  const Field& F = m.field();
  const std::size_t n = m.rows();
  FieldPolyRing ring(FieldOps{F});
  Matrix H = m;
  // Similarity reduction to upper Hessenberg form.
  for (std::size_t j = 0; j + 2 < n; ++j) {
    std::size_t piv = n;
    for (std::size_t i = j + 1; i < n; ++i)
      if (H(i, j) != 0) {
        piv = i;
        break;
      }
    if (piv == n) continue;
    if (piv != j + 1) {
      for (std::size_t c = 0; c < n; ++c) std::swap(H(piv, c), H(j + 1, c));
      for (std::size_t r = 0; r < n; ++r) std::swap(H(r, piv), H(r, j + 1));
    }
    const Elem inv = F.inv(H(j + 1, j));
    for (std::size_t r = j + 2; r < n; ++r) {
      const Elem u = F.mul(H(r, j), inv);
      if (u == 0) continue;
      for (std::size_t c = 0; c < n; ++c) H(r, c) = F.sub(H(r, c), F.mul(u, H(j + 1, c)));
      for (std::size_t c = 0; c < n; ++c) H(c, j + 1) = F.add(H(c, j + 1), F.mul(u, H(c, r)));
    }
  }
  // p_{k+1} = (x - h_kk) p_k - sum_{i<k} h_ik (prod_{l=i+1..k} h_{l,l-1}) p_i
  std::vector<FieldPoly> p{ring.one()};
  for (std::size_t k = 0; k < n; ++k) {
    FieldPoly next = ring.mul(ring.make({F.neg(H(k, k)), 1}), p[k]);
    Elem prod = 1;
    for (std::size_t i = k; i-- > 0;) {
      prod = F.mul(prod, H(i + 1, i));
      const Elem c = F.mul(H(i, k), prod);
      if (c != 0) next = ring.sub(next, ring.scale(p[i], c));
    }
    p.push_back(std::move(next));
  }
  return p[n];
}

Matrix eval_poly(const FieldPoly& f, const Matrix& m) {
  const Field& F = m.field();
  Matrix acc(F, m.rows(), m.cols());
  for (int i = f.degree(); i >= 0; --i) {
    acc = acc * m;
    for (std::size_t d = 0; d < m.rows(); ++d) acc(d, d) = F.add(acc(d, d), f[i]);
  }
  return acc;
}

// ---------------------------------------------------- algebra closure

Vec flat(const Matrix& m) { return m.data(); }

Matrix unflat(const Field& F, std::size_t rows, std::size_t cols, std::span<const Elem> v) {
  return Matrix(F, rows, cols, Vec(v.begin(), v.end()));
}

Subspace algebra_closure(const std::vector<Matrix>& gens, Product product, bool unital) {
  if (gens.empty()) throw std::invalid_argument("algebra closure needs at least one generator");
  const Field& F = gens[0].field();
  const std::size_t n = gens[0].rows();
  for (const auto& g : gens)
    if (g.rows() != n || g.cols() != n) throw std::invalid_argument("generator size mismatch");
  IncrementalBasis basis(F, n * n);
  std::deque<Matrix> queue;
  auto push = [&](const Matrix& x) {
    if (basis.add(flat(x))) queue.push_back(x);
  };
  if (unital && product == Product::Associative) push(Matrix::identity(F, n));
  for (const auto& g : gens) push(g);
  while (!queue.empty() && basis.dim() < n * n) {
    Matrix x = std::move(queue.front());
    queue.pop_front();
    for (const auto& g : gens) push(product == Product::Associative ? x * g : commutator(x, g));
  }
  return basis.subspace();
}

std::vector<Matrix> matrices_of(const Subspace& s, std::size_t n) {
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < s.dim(); ++i) out.push_back(unflat(s.field(), n, n, s.basis().row(i)));
  return out;
}

}  // namespace densor
