#include "densor/pseudo_iso.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "densor/modules.hpp"
#include "densor/poly.hpp"

namespace densor {

namespace {

constexpr std::size_t kCandidateLimit = 1u << 14;

struct Ideal {
  MatrixLieAlgebra M;
  TypeARecognition rec;
};

struct Prepared {
  MatrixLieAlgebra L;
  std::vector<Matrix> center;
  std::vector<Ideal> ideals;
  std::optional<Matrix> generator;  // of the associative envelope of the center
  SpanCoordinates split;            // coordinates in center + ideals
  bool inconclusive = false;
  std::string reason;
};

Matrix combine(const Field& F, std::size_t n, const std::vector<Matrix>& xs, std::span<const Elem> c) {
  Matrix out(F, n, n);
  for (std::size_t k = 0; k < xs.size(); ++k)
    if (c[k] != 0) F.sub_mul(out.data(), F.neg(c[k]), xs[k].data());
  return out;
}

Prepared prepare(const LieModule& V, Rng& rng) {
  if (V.action.empty()) throw std::invalid_argument("module has no action matrices");
  const Field& F = V.field;
  Prepared P;
  P.L = MatrixLieAlgebra::make(F, V.dim, V.action);
  if (P.L.dim() != V.action.size()) throw std::invalid_argument("action matrices are linearly dependent");
  if (!meataxe_split(V.action, V.dim, rng).simple) throw std::domain_error("module is not simple");
  auto dec = minimal_ideals(P.L, rng);
  P.center = dec.abelian;
  std::vector<Matrix> all = dec.abelian;
  for (auto& gens : dec.simple) {
    Ideal I;
    I.M = MatrixLieAlgebra::make(F, V.dim, gens);
    auto o = recognize_type_a(I.M, rng);
    if (o.status == RecognitionStatus::Inconclusive) {
      P.inconclusive = true;
      P.reason = o.diagnostic;
      continue;
    }
    if (o.status != RecognitionStatus::Recognized)
      throw std::domain_error("minimal ideal outside the scoped class: " + o.diagnostic);
    I.rec = std::move(*o.rec);
    all.insert(all.end(), I.M.basis().begin(), I.M.basis().end());
    P.ideals.push_back(std::move(I));
  }
  if (!P.center.empty()) {
    auto A = matrices_of(algebra_closure(P.center, Product::Associative, true), V.dim);
    for (int i = 0; i < 64 && !P.generator; ++i) {
      Matrix c(F, V.dim, V.dim);
      for (const auto& a : A) F.sub_mul(c.data(), F.neg(F.random(rng)), a.data());
      if (min_poly(c).degree() == static_cast<int>(A.size())) P.generator = c;
    }
    if (!P.generator) throw std::domain_error("center does not generate a cyclic algebra");
  }
  if (!P.inconclusive) {
    std::vector<Vec> flats;
    for (const auto& m : all) flats.push_back(flat(m));
    P.split = SpanCoordinates(F, V.dim * V.dim, flats);
  }
  return P;
}

std::vector<std::size_t> ideal_dims(const Prepared& P) {
  std::vector<std::size_t> d;
  for (const auto& I : P.ideals) d.push_back(I.M.dim());
  std::sort(d.begin(), d.end());
  return d;
}

// Images of the center basis of L1 under each admissible map of the cyclic envelopes.
std::vector<std::vector<Matrix>> center_candidates(const Prepared& P1, const Prepared& P2, std::size_t n,
                                                   const Field& F, Rng& rng) {
  if (P1.center.empty()) return {{}};
  const Matrix& c1 = *P1.generator;
  const Matrix& c2 = *P2.generator;
  const int a = min_poly(c1).degree();
  std::vector<Vec> powers;
  Matrix pw = Matrix::identity(F, n);
  for (int k = 0; k < a; ++k) {
    powers.push_back(flat(pw));
    pw = pw * c1;
  }
  SpanCoordinates pc(F, n * n, powers);
  std::vector<Vec> z2;
  for (const auto& z : P2.center) z2.push_back(flat(z));
  Subspace Z2 = Subspace::span(F, n * n, z2);
  std::vector<std::vector<Matrix>> out;
  for (const auto& G : cyclic_algebra_maps(c1, c2, rng)) {
    Matrix g = eval_poly(G, c2);
    std::vector<Matrix> gp{Matrix::identity(F, n)};
    for (int k = 1; k < a; ++k) gp.push_back(gp.back() * g);
    std::vector<Matrix> imgs;
    bool ok = true;
    for (const auto& z : P1.center) {
      auto co = pc.coordinates(z.data());
      Matrix img = combine(F, n, gp, *co);
      ok = ok && Z2.contains(img.data());
      imgs.push_back(std::move(img));
    }
    if (ok) out.push_back(std::move(imgs));
  }
  return out;
}

PseudoIsoResult run(const LieModule& V1, const LieModule& V2, Rng& rng, bool simple_only) {
  if (!(V1.field == V2.field)) throw std::invalid_argument("modules over different fields");
  const Field& F = V1.field;
  PseudoIsoResult res;
  if (V1.dim != V2.dim || V1.action.size() != V2.action.size()) {
    res.reason = "dimension mismatch";
    return res;
  }
  Prepared P1 = prepare(V1, rng), P2 = prepare(V2, rng);
  if (simple_only && (!P1.center.empty() || P1.ideals.size() != 1 || !P2.center.empty() || P2.ideals.size() != 1))
    throw std::domain_error("simple_factor_pseudo_iso needs a simple Lie algebra");
  if (P1.inconclusive || P2.inconclusive) {
    res.status = PseudoIsoStatus::Inconclusive;
    res.reason = P1.inconclusive ? P1.reason : P2.reason;
    return res;
  }
  if (P1.center.size() != P2.center.size() || ideal_dims(P1) != ideal_dims(P2)) {
    res.reason = "ideal signature differs";
    return res;
  }
  const std::size_t n = V1.dim, r = P1.ideals.size();
  auto centers = center_candidates(P1, P2, n, F, rng);
  if (centers.empty()) {
    res.reason = "centers are not pseudo-isomorphic";
    return res;
  }
  std::vector<std::size_t> perm(r);
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t tried = 0;
  do {
    bool dims_ok = true;
    for (std::size_t k = 0; k < r; ++k) dims_ok = dims_ok && P1.ideals[k].M.dim() == P2.ideals[perm[k]].M.dim();
    if (!dims_ok) continue;
    std::vector<std::size_t> twistable;
    for (std::size_t k = 0; k < r; ++k)
      if (P1.ideals[k].rec.n >= 2) twistable.push_back(k);
    for (std::size_t mask = 0; mask < (std::size_t(1) << twistable.size()); ++mask) {
      // Images of the ideal bases under this matching and twist choice.
      std::vector<Matrix> ideal_imgs;
      for (std::size_t k = 0; k < r; ++k) {
        bool tw = false;
        for (std::size_t t = 0; t < twistable.size(); ++t) tw = tw || (twistable[t] == k && (mask >> t & 1));
        const Ideal& A = P1.ideals[k];
        const Ideal& B = P2.ideals[perm[k]];
        for (const auto& x : A.M.basis()) {
          Matrix y = A.rec.to_standard(A.M, x);
          if (tw) y = twist_matrix(y);
          ideal_imgs.push_back(B.rec.from_standard(y));
        }
      }
      for (const auto& cz : centers) {
        if (++tried > kCandidateLimit) {
          res.status = PseudoIsoStatus::Inconclusive;
          res.reason = "candidate limit reached";
          return res;
        }
        std::vector<Matrix> imgs = cz;
        imgs.insert(imgs.end(), ideal_imgs.begin(), ideal_imgs.end());
        PseudoIso p;
        for (const auto& x : V1.action) p.psi.push_back(combine(F, n, imgs, *P1.split.coordinates(x.data())));
        auto Psi = find_invertible(intertwiners(V1.action, p.psi), rng);
        if (!Psi) continue;
        p.Psi = std::move(*Psi);
        p.psi_coords = Matrix(F, V2.action.size(), V1.action.size());
        for (std::size_t i = 0; i < p.psi.size(); ++i) {
          auto c = P2.L.coordinates(p.psi[i]);
          if (!c) throw std::logic_error("candidate map leaves L2");
          for (std::size_t k = 0; k < c->size(); ++k) p.psi_coords(k, i) = (*c)[k];
        }
        if (!verify_pseudo_iso(V1, V2, p)) throw std::logic_error("pseudo-isomorphism failed verification");
        res.status = PseudoIsoStatus::Found;
        res.iso = std::move(p);
        return res;
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  res.reason = "no candidate algebra isomorphism admits an intertwiner";
  return res;
}

}  // namespace

PseudoIsoResult pseudo_iso(const LieModule& V1, const LieModule& V2, Rng& rng) { return run(V1, V2, rng, false); }

PseudoIsoResult simple_factor_pseudo_iso(const LieModule& S1, const LieModule& S2, Rng& rng) {
  return run(S1, S2, rng, true);
}

bool verify_pseudo_iso(const LieModule& V1, const LieModule& V2, const PseudoIso& p) {
  if (p.psi.size() != V1.action.size() || !is_invertible(p.Psi) || !is_invertible(p.psi_coords)) return false;
  const Field& F = V1.field;
  for (std::size_t i = 0; i < p.psi.size(); ++i) {
    if (!(p.Psi * V1.action[i] == p.psi[i] * p.Psi)) return false;
    Matrix y(F, V2.dim, V2.dim);
    for (std::size_t k = 0; k < V2.action.size(); ++k)
      if (p.psi_coords(k, i) != 0) F.sub_mul(y.data(), F.neg(p.psi_coords(k, i)), V2.action[k].data());
    if (!(y == p.psi[i])) return false;
  }
  return true;
}

std::optional<Matrix> brute_force_pseudo_iso(const LieModule& V1, const LieModule& V2) {
  const Field& F = V1.field;
  const std::size_t n = V1.dim;
  if (V2.dim != n || V1.action.size() != V2.action.size()) return std::nullopt;
  std::size_t total = 1;
  for (std::size_t i = 0; i < n * n; ++i) {
    total *= F.q();
    if (total > (1u << 24)) throw std::invalid_argument("brute force search space too large");
  }
  std::vector<Vec> f2;
  for (const auto& y : V2.action) f2.push_back(flat(y));
  Subspace L2 = Subspace::span(F, n * n, f2);
  for (std::size_t code = 1; code < total; ++code) {
    Vec e(n * n);
    std::size_t c = code;
    for (auto& v : e) {
      v = static_cast<Elem>(c % F.q());
      c /= F.q();
    }
    // Projective normalization: first nonzero entry is 1.
    auto it = std::find_if(e.begin(), e.end(), [](Elem x) { return x != 0; });
    if (*it != 1) continue;
    Matrix Psi(F, n, n, e);
    auto inv = inverse(Psi);
    if (!inv) continue;
    bool ok = true;
    for (const auto& x : V1.action) {
      if (!L2.contains((Psi * x * *inv).data())) {
        ok = false;
        break;
      }
    }
    if (ok) return Psi;
  }
  return std::nullopt;
}

}  // namespace densor
