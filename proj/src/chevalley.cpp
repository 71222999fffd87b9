#include "densor/chevalley.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "densor/modules.hpp"
#include "densor/poly.hpp"

namespace densor {

namespace {

constexpr int kCartanBudget = 256;

Matrix unit(const Field& F, std::size_t n, std::size_t i, std::size_t j) {
  Matrix m(F, n, n);
  m(i, j) = 1;
  return m;
}

// Common eigenspaces of commuting diagonalizable operators, with weights.
// Returns false when some operator does not split over K.
bool common_eigenspaces(const std::vector<Matrix>& ops, std::size_t d, Rng& rng,
                        std::vector<std::pair<Vec, Subspace>>& out) {
  const Field& F = ops[0].field();
  FieldPolyRing R(FieldOps{F});
  out.clear();
  out.emplace_back(Vec{}, Subspace::full(F, d));
  for (const auto& op : ops) {
    std::vector<std::pair<Vec, Subspace>> next;
    for (auto& [w, W] : out) {
      std::vector<Vec> b;
      for (std::size_t i = 0; i < W.dim(); ++i) b.push_back(W.vector(i));
      Matrix r = restrict_action({op}, b)[0];
      FieldPoly mp = min_poly(r);
      auto roots = R.roots(mp, rng);
      if (static_cast<int>(roots.size()) != mp.degree()) return false;
      for (Elem lam : roots) {
        Matrix s = r - Matrix::identity(F, r.rows()).scaled(lam);
        Subspace k = kernel(s);
        std::vector<Vec> vs;
        for (std::size_t i = 0; i < k.dim(); ++i) vs.push_back(W.combine(k.vector(i)));
        Vec w2 = w;
        w2.push_back(lam);
        next.emplace_back(std::move(w2), Subspace::span(F, d, vs));
      }
    }
    out = std::move(next);
  }
  return true;
}

Vec add_vec(const Field& F, const Vec& a, const Vec& b) {
  Vec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = F.add(a[i], b[i]);
  return c;
}

Vec neg_vec(const Field& F, const Vec& a) {
  Vec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = F.neg(a[i]);
  return c;
}

RecognitionOutcome fail(RecognitionStatus s, std::string why) {
  RecognitionOutcome o;
  o.status = s;
  o.diagnostic = std::move(why);
  return o;
}

}  // namespace

std::vector<Matrix> sl_standard_basis(const Field& F, std::size_t N) {
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      if (i != j) out.push_back(unit(F, N, i, j));
  for (std::size_t i = 0; i + 1 < N; ++i) out.push_back(unit(F, N, i, i) - unit(F, N, i + 1, i + 1));
  return out;
}

Vec sl_standard_coordinates(const Matrix& y) {
  const Field& F = y.field();
  const std::size_t N = y.rows();
  Vec c;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      if (i != j) c.push_back(y(i, j));
  Elem run = 0;
  for (std::size_t i = 0; i + 1 < N; ++i) {
    run = F.add(run, y(i, i));
    c.push_back(run);
  }
  run = F.add(run, y(N - 1, N - 1));
  if (run != 0) throw std::invalid_argument("matrix is not trace zero");
  return c;
}

Matrix TypeARecognition::to_standard(const MatrixLieAlgebra& M, const Matrix& x) const {
  auto c = M.coordinates(x);
  if (!c) throw std::invalid_argument("element is outside the recognized algebra");
  const Field& F = M.field();
  Matrix out(F, n + 1, n + 1);
  for (std::size_t k = 0; k < c->size(); ++k)
    if ((*c)[k] != 0) F.sub_mul(out.data(), F.neg((*c)[k]), to_std[k].data());
  return out;
}

Matrix TypeARecognition::from_standard(const Matrix& y) const {
  Vec c = sl_standard_coordinates(y);
  const Field& F = y.field();
  Matrix out(F, from_std[0].rows(), from_std[0].cols());
  for (std::size_t k = 0; k < c.size(); ++k)
    if (c[k] != 0) F.sub_mul(out.data(), F.neg(c[k]), from_std[k].data());
  return out;
}

RecognitionOutcome recognize_type_a(const MatrixLieAlgebra& M, Rng& rng) {
  const Field& F = M.field();
  const std::size_t d = M.dim();
  std::size_t n = 0;
  while ((n + 2) * (n + 2) - 1 <= d) ++n;
  if (n == 0 || (n + 1) * (n + 1) - 1 != d)
    return fail(RecognitionStatus::NotTypeA, "dimension " + std::to_string(d) + " is not (n+1)^2-1");
  if (F.p() == 2 || F.p() == 3) return fail(RecognitionStatus::Unsupported, "characteristic 2 or 3");
  if ((n + 1) % F.p() == 0) return fail(RecognitionStatus::Unsupported, "characteristic divides n+1");
  if (derived(M).dim() != d || center(M).dim() != 0)
    return fail(RecognitionStatus::NotTypeA, "algebra is not perfect with trivial center");

  FieldPolyRing R(FieldOps{F});
  // Descend through centralizers of split semisimple elements until the
  // centralizer has dimension n; it is then a split Cartan subalgebra.
  Subspace C = Subspace::full(F, d);
  Matrix ad_sys(F, d * d, d);
  for (std::size_t k = 0; k < d; ++k) {
    Matrix a = M.ad(M[k]);
    for (std::size_t e = 0; e < d * d; ++e) ad_sys(e, k) = a.data()[e];
  }
  for (int attempt = 0; attempt < kCartanBudget; ++attempt) {
    if (C.dim() < n) C = Subspace::full(F, d);
    Matrix ady = M.ad(M.element(C.random_element(rng)));
    FieldPoly mp = min_poly(ady);
    auto fac = R.factor(mp, rng);
    if (!std::all_of(fac.begin(), fac.end(), [](const auto& f) { return f.first.degree() == 1; })) continue;
    if (!std::all_of(fac.begin(), fac.end(), [](const auto& f) { return f.second == 1; })) {
      // Replace ad(y) by its semisimple part, which is again inner.
      FieldPoly P = R.make({});
      for (const auto& [g, m] : fac) {
        FieldPoly gm = R.one();
        for (int i = 0; i < m; ++i) gm = R.mul(gm, g);
        FieldPoly h = R.div(mp, gm);
        FieldPoly e = R.mod(R.mul(h, R.inv_mod(h, gm)), mp);
        P = R.add(P, R.scale(e, F.neg(g.coeffs()[0])));
      }
      auto z = solve(ad_sys, flat(eval_poly(P, ady)));
      if (!z) continue;
      ady = M.ad(M.element(*z));
    }
    C = C.intersect(kernel(ady));
    if (C.dim() != n) continue;
    Subspace Hc = C;
    C = Subspace::full(F, d);
    std::vector<Matrix> H, adH;
    for (std::size_t i = 0; i < n; ++i) {
      H.push_back(M.element(Hc.vector(i)));
      adH.push_back(M.ad(H.back()));
    }
    bool abelian = true;
    for (std::size_t i = 0; i < n && abelian; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (!commutator(H[i], H[j]).is_zero()) abelian = false;
    if (!abelian) continue;
    std::vector<std::pair<Vec, Subspace>> spaces;
    if (!common_eigenspaces(adH, d, rng, spaces)) continue;
    // Weight zero must be H itself, every other weight space a line.
    std::map<Vec, Vec> root_vec;
    bool ok = true;
    for (auto& [w, W] : spaces) {
      if (W.dim() == 0) continue;
      if (std::all_of(w.begin(), w.end(), [](Elem e) { return e == 0; })) {
        ok = ok && W == Hc;
      } else {
        ok = ok && W.dim() == 1 && !root_vec.count(w);
        root_vec[w] = W.vector(0);
      }
    }
    if (!ok || root_vec.size() != d - n) continue;

    // Simple root chain: each new root extends every tail sum to a root.
    std::vector<Vec> alpha{root_vec.begin()->first};
    while (alpha.size() < n) {
      bool found = false;
      for (const auto& [beta, v] : root_vec) {
        Vec tail = beta;
        bool good = true;
        for (std::size_t j = alpha.size(); j-- > 0 && good;) {
          tail = add_vec(F, tail, alpha[j]);
          good = root_vec.count(tail) > 0;
        }
        if (good) {
          alpha.push_back(beta);
          found = true;
          break;
        }
      }
      if (!found) return fail(RecognitionStatus::NotTypeA, "root system is not of type A");
    }
    std::map<Vec, int> expected;
    for (std::size_t i = 0; i < n; ++i) {
      Vec s = alpha[i];
      for (std::size_t j = i; j < n; ++j) {
        if (j > i) s = add_vec(F, s, alpha[j]);
        expected[s]++;
        expected[neg_vec(F, s)]++;
      }
    }
    bool match = expected.size() == root_vec.size();
    for (const auto& [r, c] : expected) match = match && c == 1 && root_vec.count(r);
    if (!match) return fail(RecognitionStatus::NotTypeA, "root system is not of type A");

    TypeARecognition rec;
    rec.n = n;
    rec.cartan = H;
    for (std::size_t i = 0; i < n; ++i) {
      Matrix e = M.element(root_vec[alpha[i]]);
      Matrix f0 = M.element(root_vec[neg_vec(F, alpha[i])]);
      Matrix h0 = commutator(e, f0);
      auto ce = M.coordinates(e);
      auto che = M.coordinates(commutator(h0, e));
      std::size_t piv = 0;
      while ((*ce)[piv] == 0) ++piv;
      const Elem c = F.div((*che)[piv], (*ce)[piv]);
      if (c == 0) return fail(RecognitionStatus::NotTypeA, "degenerate root pairing");
      Matrix f = f0.scaled(F.div(2, c));
      rec.e.push_back(e);
      rec.f.push_back(f);
      rec.h.push_back(commutator(e, f));
    }
    // X(i, j) for the image of E_ij.
    const std::size_t N = n + 1;
    std::vector<std::vector<Matrix>> X(N, std::vector<Matrix>(N));
    for (std::size_t i = 0; i < n; ++i) {
      X[i][i + 1] = rec.e[i];
      X[i + 1][i] = rec.f[i];
    }
    for (std::size_t len = 2; len < N; ++len)
      for (std::size_t i = 0; i + len < N; ++i) {
        const std::size_t j = i + len;
        X[i][j] = commutator(X[i][j - 1], X[j - 1][j]);
        X[j][i] = commutator(X[j][j - 1], X[j - 1][i]);
      }
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j)
        if (i != j) rec.from_std.push_back(X[i][j]);
    for (const auto& h : rec.h) rec.from_std.push_back(h);
    std::vector<Vec> flats;
    for (const auto& m : rec.from_std) flats.push_back(flat(m));
    std::optional<SpanCoordinates> sc;
    try {
      sc.emplace(F, M.size() * M.size(), flats);
    } catch (const std::invalid_argument&) {
      return fail(RecognitionStatus::NotTypeA, "Chevalley generators are dependent");
    }
    auto std_basis = sl_standard_basis(F, N);
    for (const auto& b : M.basis()) {
      auto c = sc->coordinates(b.data());
      if (!c) return fail(RecognitionStatus::NotTypeA, "Chevalley generators do not span");
      Matrix img(F, N, N);
      for (std::size_t k = 0; k < c->size(); ++k)
        if ((*c)[k] != 0) F.sub_mul(img.data(), F.neg((*c)[k]), std_basis[k].data());
      rec.to_std.push_back(std::move(img));
    }
    if (!verify_recognition(M, rec)) return fail(RecognitionStatus::NotTypeA, "bracket relations fail");
    RecognitionOutcome o;
    o.status = RecognitionStatus::Recognized;
    o.rec = std::move(rec);
    return o;
  }
  return fail(RecognitionStatus::Inconclusive, "no split Cartan subalgebra found; possibly a non-split form");
}

bool verify_recognition(const MatrixLieAlgebra& M, const TypeARecognition& rec) {
  const Field& F = M.field();
  const std::size_t d = M.dim();
  if (rec.to_std.size() != d) return false;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      Vec c = M.bracket_coords(i, j);
      Matrix lhs(F, rec.n + 1, rec.n + 1);
      for (std::size_t k = 0; k < d; ++k)
        if (c[k] != 0) F.sub_mul(lhs.data(), F.neg(c[k]), rec.to_std[k].data());
      if (!(lhs == commutator(rec.to_std[i], rec.to_std[j]))) return false;
    }
  // Cartan matrix relations on the generators.
  for (std::size_t i = 0; i < rec.n; ++i)
    for (std::size_t j = 0; j < rec.n; ++j) {
      const Elem a = i == j ? F.from_int(2) : (i + 1 == j || j + 1 == i ? F.neg(1) : 0);
      if (!(commutator(rec.h[i], rec.e[j]) == rec.e[j].scaled(a))) return false;
    }
  return true;
}

Matrix anti_transpose(const Matrix& x) {
  const std::size_t N = x.rows();
  Matrix out(x.field(), N, N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) out(i, j) = x(N - 1 - j, N - 1 - i);
  return out;
}

Matrix twist_matrix(const Matrix& x) {
  if (x.rows() == 2) return x;
  return anti_transpose(x).scaled(x.field().neg(1));
}

std::vector<Matrix> diagram_twist(const TypeARecognition& rec) {
  const Field& F = rec.to_std.empty() ? rec.e[0].field() : rec.to_std[0].field();
  std::vector<Matrix> out;
  for (const auto& b : sl_standard_basis(F, rec.n + 1)) out.push_back(twist_matrix(b));
  return out;
}

}  // namespace densor
