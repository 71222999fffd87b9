#include "densor/lie.hpp"

#include <stdexcept>

#include "densor/modules.hpp"

namespace densor {

MatrixLieAlgebra MatrixLieAlgebra::make(const Field& F, std::size_t n, const std::vector<Matrix>& gens) {
  MatrixLieAlgebra L;
  L.F_ = F;
  L.n_ = n;
  IncrementalBasis ib(F, n * n);
  for (const auto& g : gens) {
    if (g.rows() != n || g.cols() != n) throw std::invalid_argument("Lie algebra element has the wrong size");
    if (ib.add(flat(g))) L.basis_.push_back(g);
  }
  std::vector<Vec> flats;
  for (const auto& b : L.basis_) flats.push_back(flat(b));
  L.coords_ = SpanCoordinates(F, n * n, flats);
  for (std::size_t i = 0; i < L.dim(); ++i)
    for (std::size_t j = i + 1; j < L.dim(); ++j)
      if (!L.contains(commutator(L.basis_[i], L.basis_[j])))
        throw std::invalid_argument("span is not closed under the bracket");
  return L;
}

MatrixLieAlgebra MatrixLieAlgebra::generated(const Field& F, std::size_t n, const std::vector<Matrix>& gens) {
  if (gens.empty()) return make(F, n, {});
  Subspace s = algebra_closure(gens, Product::Bracket, false);
  // Keep the generators first so their coordinates stay simple.
  std::vector<Matrix> all = gens;
  for (auto& m : matrices_of(s, n)) all.push_back(std::move(m));
  return make(F, n, all);
}

std::optional<Vec> MatrixLieAlgebra::coordinates(const Matrix& x) const {
  if (x.rows() != n_ || x.cols() != n_) return std::nullopt;
  if (basis_.empty()) {
    if (x.is_zero()) return Vec{};
    return std::nullopt;
  }
  return coords_.coordinates(x.data());
}

Matrix MatrixLieAlgebra::element(std::span<const Elem> c) const {
  if (c.size() != dim()) throw std::invalid_argument("coordinate count mismatch");
  Matrix out(F_, n_, n_);
  for (std::size_t i = 0; i < dim(); ++i)
    if (c[i] != 0) F_.sub_mul(out.data(), F_.neg(c[i]), basis_[i].data());
  return out;
}

Matrix MatrixLieAlgebra::ad(const Matrix& x) const {
  Matrix out(F_, dim(), dim());
  for (std::size_t j = 0; j < dim(); ++j) {
    auto c = coordinates(commutator(x, basis_[j]));
    if (!c) throw std::invalid_argument("ad: element does not normalize the algebra");
    for (std::size_t i = 0; i < dim(); ++i) out(i, j) = (*c)[i];
  }
  return out;
}

Vec MatrixLieAlgebra::bracket_coords(std::size_t i, std::size_t j) const {
  return *coordinates(commutator(basis_[i], basis_[j]));
}

bool MatrixLieAlgebra::is_abelian() const {
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t j = i + 1; j < dim(); ++j)
      if (!commutator(basis_[i], basis_[j]).is_zero()) return false;
  return true;
}

std::vector<Matrix> elements_from_coords(const MatrixLieAlgebra& L, const Subspace& coords) {
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < coords.dim(); ++i) out.push_back(L.element(coords.basis().row(i)));
  return out;
}

Subspace centralizer(const MatrixLieAlgebra& L, const std::vector<Matrix>& xs) {
  const Field& F = L.field();
  const std::size_t d = L.dim(), n = L.size();
  // unknown c: sum_i c_i [b_i, x] = 0 for each x, as n*n equations per x
  Matrix sys(F, xs.size() * n * n, d);
  for (std::size_t k = 0; k < xs.size(); ++k)
    for (std::size_t i = 0; i < d; ++i) {
      Matrix c = commutator(L[i], xs[k]);
      for (std::size_t e = 0; e < n * n; ++e) sys(k * n * n + e, i) = c.data()[e];
    }
  return kernel(sys);
}

Subspace center(const MatrixLieAlgebra& L) { return centralizer(L, L.basis()); }

Subspace derived(const MatrixLieAlgebra& L) {
  std::vector<Vec> v;
  for (std::size_t i = 0; i < L.dim(); ++i)
    for (std::size_t j = i + 1; j < L.dim(); ++j) v.push_back(L.bracket_coords(i, j));
  return Subspace::span(L.field(), L.dim(), v);
}

IdealDecomposition minimal_ideals(const MatrixLieAlgebra& L, Rng& rng) {
  const Field& F = L.field();
  Subspace Z = center(L), D = derived(L);
  if (Z.dim() + D.dim() != L.dim() || Z.intersect(D).dim() != 0)
    throw std::domain_error("Lie algebra is not reductive (center and derived subalgebra do not split it)");
  IdealDecomposition out;
  out.abelian = elements_from_coords(L, Z);
  // Peel simple submodules of the adjoint action on the current ideal.
  std::vector<Vec> current;
  for (std::size_t i = 0; i < D.dim(); ++i) current.push_back(D.vector(i));
  std::vector<Matrix> ad_full;
  for (std::size_t j = 0; j < L.dim(); ++j) ad_full.push_back(L.ad(L[j]));
  while (!current.empty()) {
    const std::size_t k = current.size();
    std::vector<Matrix> ads;
    SpanCoordinates sc(F, L.dim(), current);
    for (std::size_t j = 0; j < L.dim(); ++j) {
      // ad(b_j) on the ideal, in the basis `current`
      Matrix m(F, k, k);
      for (std::size_t c = 0; c < k; ++c) {
        Vec img = ad_full[j].apply(current[c]);
        auto co = sc.coordinates(img);
        if (!co) throw std::logic_error("derived subalgebra is not an ideal");
        for (std::size_t r = 0; r < k; ++r) m(r, c) = (*co)[r];
      }
      ads.push_back(std::move(m));
    }
    Subspace S = find_simple_submodule(ads, k, rng);
    std::vector<Vec> ideal;  // back to L coordinates
    for (std::size_t i = 0; i < S.dim(); ++i) {
      Vec v(L.dim(), 0);
      for (std::size_t c = 0; c < k; ++c)
        if (S.basis()(i, c) != 0) F.sub_mul(v, F.neg(S.basis()(i, c)), current[c]);
      ideal.push_back(std::move(v));
    }
    std::vector<Matrix> ideal_m;
    for (const auto& v : ideal) ideal_m.push_back(L.element(v));
    MatrixLieAlgebra I = MatrixLieAlgebra::make(F, L.size(), ideal_m);
    if (I.is_abelian()) throw std::domain_error("derived subalgebra has an abelian ideal; not reductive");
    out.simple.push_back(ideal_m);
    // Complement inside the current ideal: its centralizer of the new ideal.
    Subspace cen = centralizer(L, ideal_m);
    Subspace cur = Subspace::span(F, L.dim(), current).intersect(cen);
    if (cur.dim() + ideal.size() != k)
      throw std::domain_error("minimal ideal has no complementary ideal; not reductive");
    current.clear();
    for (std::size_t i = 0; i < cur.dim(); ++i) current.push_back(cur.vector(i));
  }
  return out;
}

}  // namespace densor
