#include "densor/modules.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace densor {

namespace {

constexpr int kMeataxeBudget = 256;
constexpr int kIdempotentBudget = 256;
constexpr int kInvertibleSamples = 64;
constexpr std::size_t kExhaustiveLimit = 1u << 16;

Matrix random_combination(const std::vector<Matrix>& xs, Rng& rng) {
  const Field& F = xs[0].field();
  Matrix out(F, xs[0].rows(), xs[0].cols());
  for (const auto& x : xs) {
    const Elem c = F.random(rng);
    if (c != 0) F.sub_mul(out.data(), F.neg(c), x.data());
  }
  return out;
}

std::vector<Matrix> transposes(const std::vector<Matrix>& xs) {
  std::vector<Matrix> out;
  for (const auto& x : xs) out.push_back(x.transpose());
  return out;
}

std::vector<Vec> column_basis(const Matrix& m) {
  Subspace s = Subspace::from_matrix_rows(m.transpose());
  std::vector<Vec> out;
  for (std::size_t i = 0; i < s.dim(); ++i) out.push_back(s.vector(i));
  return out;
}

// GF(p^k)[x]/(g) for irreducible g, as a coefficient field.
struct QuotientOps {
  using Value = FieldPoly;
  FieldPolyRing R;
  FieldPoly g;
  Value zero() const { return FieldPoly(); }
  Value one() const { return R.one(); }
  Value add(const Value& a, const Value& b) const { return R.add(a, b); }
  Value sub(const Value& a, const Value& b) const { return R.sub(a, b); }
  Value mul(const Value& a, const Value& b) const { return R.mod(R.mul(a, b), g); }
  Value inv(const Value& a) const { return R.inv_mod(a, g); }
  bool is_zero(const Value& a) const { return a.is_zero(); }
  Value random(Rng& rng) const { return R.random(g.degree(), rng); }
  std::uint32_t characteristic() const { return R.coeff().field.p(); }
  std::uint32_t prime_degree() const {
    return R.coeff().field.k() * static_cast<std::uint32_t>(g.degree());
  }
};

}  // namespace

Subspace spin(const std::vector<Matrix>& gens, const std::vector<Vec>& seeds, std::size_t n) {
  if (seeds.empty()) throw std::invalid_argument("spin needs a seed");
  if (gens.empty()) throw std::invalid_argument("spin needs at least one generator");
  const Field& F = gens[0].field();
  IncrementalBasis basis(F, n);
  std::deque<Vec> queue;
  for (const auto& s : seeds)
    if (basis.add(s)) queue.push_back(s);
  while (!queue.empty() && basis.dim() < n) {
    Vec v = std::move(queue.front());
    queue.pop_front();
    for (const auto& g : gens) {
      Vec w = g.apply(v);
      if (basis.add(w)) queue.push_back(std::move(w));
    }
  }
  return basis.subspace();
}

std::vector<Matrix> restrict_action(const std::vector<Matrix>& gens, const std::vector<Vec>& basis) {
  if (gens.empty()) return {};
  const Field& F = gens[0].field();
  const std::size_t k = basis.size();
  SpanCoordinates sc(F, gens[0].rows(), basis);
  std::vector<Matrix> out;
  for (const auto& g : gens) {
    Matrix m(F, k, k);
    for (std::size_t c = 0; c < k; ++c) {
      auto co = sc.coordinates(g.apply(basis[c]));
      if (!co) throw std::invalid_argument("subspace is not invariant");
      for (std::size_t r = 0; r < k; ++r) m(r, c) = (*co)[r];
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<Matrix> restrict_action(const std::vector<Matrix>& gens, const Subspace& W) {
  std::vector<Vec> b;
  for (std::size_t i = 0; i < W.dim(); ++i) b.push_back(W.vector(i));
  return restrict_action(gens, b);
}

MeataxeResult meataxe_split(const std::vector<Matrix>& gens_in, std::size_t n, Rng& rng) {
  if (gens_in.empty()) throw std::invalid_argument("meataxe needs at least one generator");
  if (n == 0) throw std::invalid_argument("meataxe on the zero module");
  const Field& F = gens_in[0].field();
  MeataxeResult res;
  if (n == 1) {
    res.simple = true;
    return res;
  }
  const std::vector<Matrix>& gens = gens_in;
  const std::vector<Matrix> gensT = transposes(gens);
  std::vector<Matrix> pool = gens;
  FieldPolyRing R(FieldOps{F});
  for (int attempt = 0; attempt < kMeataxeBudget; ++attempt) {
    if (pool.size() < 32) {
      const Matrix& x = pool[rng() % pool.size()];
      const Matrix& y = gens[rng() % gens.size()];
      pool.push_back(x * y);
    }
    Matrix a = random_combination(pool, rng);
    auto factors = R.factor(char_poly(a), rng);
    std::stable_sort(factors.begin(), factors.end(),
                     [](const auto& l, const auto& r) { return l.first.degree() < r.first.degree(); });
    for (const auto& [g, mult] : factors) {
      Matrix ga = eval_poly(g, a);
      Subspace N = kernel(ga);
      Subspace S = spin(gens, {N.vector(0)}, n);
      if (S.dim() < n) {
        res.submodule = S;
        return res;
      }
      if (static_cast<int>(N.dim()) != g.degree()) continue;
      Subspace Nt = kernel(ga.transpose());
      Subspace U = spin(gensT, {Nt.vector(0)}, n);
      if (U.dim() == n) {
        res.simple = true;
        return res;
      }
      // U is invariant under the transposes; its annihilator is a submodule.
      res.submodule = kernel(U.basis());
      return res;
    }
  }
  throw LasVegasAbort("meataxe exhausted its retry budget");
}

Subspace find_simple_submodule(const std::vector<Matrix>& gens, std::size_t n, Rng& rng) {
  const Field& F = gens[0].field();
  auto r = meataxe_split(gens, n, rng);
  if (r.simple) return Subspace::full(F, n);
  const Subspace& W = r.submodule;
  Subspace inner = find_simple_submodule(restrict_action(gens, W), W.dim(), rng);
  std::vector<Vec> out;
  for (std::size_t i = 0; i < inner.dim(); ++i) out.push_back(W.combine(inner.basis().row(i)));
  return Subspace::span(F, n, out);
}

std::vector<Matrix> intertwiners(const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
  if (a.size() != b.size() || a.empty()) throw std::invalid_argument("intertwiner lists must match and be nonempty");
  const Field& F = a[0].field();
  const std::size_t n1 = a[0].rows(), n2 = b[0].rows();
  Matrix sys(F, a.size() * n2 * n1, n2 * n1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t r = 0; r < n2; ++r)
      for (std::size_t c = 0; c < n1; ++c) {
        auto row = sys.row((i * n2 + r) * n1 + c);
        for (std::size_t k = 0; k < n1; ++k) row[r * n1 + k] = F.add(row[r * n1 + k], a[i](k, c));
        for (std::size_t k = 0; k < n2; ++k) row[k * n1 + c] = F.sub(row[k * n1 + c], b[i](r, k));
      }
  Subspace ker = kernel(sys);
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < ker.dim(); ++i) out.push_back(unflat(F, n2, n1, ker.basis().row(i)));
  return out;
}

std::optional<Matrix> find_invertible(const std::vector<Matrix>& space, Rng& rng) {
  if (space.empty() || !space[0].square()) return std::nullopt;
  for (const auto& m : space)
    if (is_invertible(m)) return m;
  for (int i = 0; i < kInvertibleSamples; ++i) {
    Matrix m = random_combination(space, rng);
    if (is_invertible(m)) return m;
  }
  const Field& F = space[0].field();
  std::size_t total = 1;
  for (std::size_t i = 0; i < space.size(); ++i) {
    total *= F.q();
    if (total > kExhaustiveLimit) throw LasVegasAbort("no invertible element found by sampling");
  }
  for (std::size_t code = 1; code < total; ++code) {
    Matrix m(F, space[0].rows(), space[0].cols());
    std::size_t c = code;
    for (const auto& s : space) {
      const Elem e = static_cast<Elem>(c % F.q());
      c /= F.q();
      if (e != 0) F.sub_mul(m.data(), F.neg(e), s.data());
    }
    if (is_invertible(m)) return m;
  }
  return std::nullopt;
}

std::optional<Matrix> module_iso_fixed_algebra(const std::vector<Matrix>& x1, const std::vector<Matrix>& x2,
                                               Rng& rng) {
  if (x1.size() != x2.size()) throw std::invalid_argument("modules must use the same algebra basis");
  if (x1.empty()) throw std::invalid_argument("empty algebra basis");
  if (x1[0].rows() != x2[0].rows()) return std::nullopt;
  return find_invertible(intertwiners(x1, x2), rng);
}

EndomorphismRing endomorphism_ring(const std::vector<Matrix>& gens, std::size_t n, Rng& rng, bool require_field) {
  if (gens.empty()) throw std::invalid_argument("endomorphism ring needs generators");
  (void)n;
  EndomorphismRing E;
  E.basis = intertwiners(gens, gens);
  const std::size_t e = E.basis.size();
  const Field& F = gens[0].field();
  FieldPolyRing R(FieldOps{F});
  if (e == 1) {
    E.primitive = Matrix::identity(F, gens[0].rows());
    E.degree = 1;
    return E;
  }
  for (int i = 0; i < kInvertibleSamples; ++i) {
    Matrix x = random_combination(E.basis, rng);
    FieldPoly mp = min_poly(x);
    if (mp.degree() != static_cast<int>(e)) continue;
    auto fac = R.factor(mp, rng);
    if (fac.size() == 1 && fac[0].second == 1) {
      E.primitive = x;
      E.degree = e;
      return E;
    }
  }
  if (require_field) throw std::domain_error("endomorphism ring is not a field");
  return E;
}

Matrix primitive_idempotent(const std::vector<Matrix>& A, Rng& rng) {
  if (A.empty()) throw std::invalid_argument("empty algebra");
  const Field& F = A[0].field();
  const std::size_t n = A[0].rows();
  FieldPolyRing R(FieldOps{F});
  // Center of A.
  Matrix sys(F, A.size() * n * n, A.size());
  for (std::size_t j = 0; j < A.size(); ++j)
    for (std::size_t i = 0; i < A.size(); ++i) {
      Matrix c = commutator(A[i], A[j]);
      for (std::size_t e = 0; e < n * n; ++e) sys(j * n * n + e, i) = c.data()[e];
    }
  Subspace Zc = kernel(sys);
  const std::size_t zdim = Zc.dim();
  if (zdim == 0 || A.size() % zdim != 0) throw std::domain_error("algebra is not central simple");
  const std::size_t ratio = A.size() / zdim;
  std::size_t f = 1;
  while ((f + 1) * (f + 1) <= ratio) ++f;
  if (f * f != ratio || n % f != 0) throw std::domain_error("algebra is not central simple");
  if (zdim > 1) {
    std::vector<Matrix> zb;
    for (std::size_t i = 0; i < zdim; ++i) {
      Matrix z(F, n, n);
      for (std::size_t k = 0; k < A.size(); ++k)
        if (Zc.basis()(i, k) != 0) F.sub_mul(z.data(), F.neg(Zc.basis()(i, k)), A[k].data());
      zb.push_back(std::move(z));
    }
    bool field = false;
    for (int i = 0; i < kInvertibleSamples && !field; ++i) {
      FieldPoly mp = min_poly(random_combination(zb, rng));
      auto fac = R.factor(mp, rng);
      field = mp.degree() == static_cast<int>(zdim) && fac.size() == 1 && fac[0].second == 1;
    }
    if (!field) throw std::domain_error("center of the algebra is not a field");
  }
  const std::size_t target = n / f;
  Matrix E = Matrix::identity(F, n);
  std::size_t rk = n;
  for (int attempt = 0; attempt < kIdempotentBudget && rk > target; ++attempt) {
    Matrix b = E * random_combination(A, rng) * E;
    auto img = column_basis(E);
    Matrix bm = restrict_action({b}, img)[0];
    FieldPoly mp = min_poly(bm);
    auto fac = R.factor(mp, rng);
    if (fac.size() < 2) continue;
    std::optional<Matrix> best;
    std::size_t best_rank = rk;
    for (const auto& [g, m] : fac) {
      FieldPoly gm = R.one();
      for (int i = 0; i < m; ++i) gm = R.mul(gm, g);
      FieldPoly h = R.div(mp, gm);
      FieldPoly q = R.mod(R.mul(h, R.inv_mod(h, gm)), mp);
      Matrix e_new = eval_poly(q, b) * E;
      const std::size_t r = rank(e_new);
      if (r > 0 && r < best_rank) {
        best_rank = r;
        best = std::move(e_new);
      }
    }
    if (best) {
      E = std::move(*best);
      rk = best_rank;
    }
  }
  if (rk != target) throw LasVegasAbort("primitive idempotent search exhausted its retry budget");
  if (!(E * E == E)) throw std::logic_error("idempotent check failed");
  return E;
}

bool is_transverse(const std::vector<Matrix>& M, const std::vector<Matrix>& N) {
  for (const auto& m : M)
    for (const auto& x : N)
      if (!(m * x == x * m)) return false;
  return true;
}

SplitOff split_off(const std::vector<Matrix>& M, const std::vector<Matrix>& N, const Subspace& S, Rng& rng) {
  if (M.empty() || N.empty()) throw std::invalid_argument("split_off needs both ideals");
  const Field& F = M[0].field();
  const std::size_t n = M[0].rows();
  if (!is_transverse(M, N)) throw std::invalid_argument("ideal actions are not transverse");
  if (S.dim() == 0 || S.dim() >= n) throw std::invalid_argument("S must be a proper nonzero submodule");
  bool abelian = true;
  for (std::size_t i = 0; i < M.size() && abelian; ++i)
    for (std::size_t j = i + 1; j < M.size(); ++j)
      if (!commutator(M[i], M[j]).is_zero()) {
        abelian = false;
        break;
      }
  if (abelian) throw std::invalid_argument("M is abelian; no proper simple M-submodule split applies");
  auto restricted = restrict_action(M, S);
  if (!meataxe_split(restricted, S.dim(), rng).simple) throw std::invalid_argument("S is not a simple M-module");
  // Images x S for x in K<N> are M-homomorphic images of S; collect
  // independent ones until they fill a complement.
  std::vector<Matrix> candidates = N;
  for (const auto& x : N)
    for (const auto& y : N) candidates.push_back(x * y);
  for (int i = 0; i < 64; ++i) candidates.push_back(random_combination(N, rng) * random_combination(N, rng));
  Subspace acc = S, comp(F, n);
  std::optional<Matrix> witness;
  for (const auto& x : candidates) {
    if (acc.dim() == n) break;
    std::vector<Vec> img;
    for (std::size_t i = 0; i < S.dim(); ++i) img.push_back(x.apply(S.vector(i)));
    Subspace im = Subspace::span(F, n, img);
    if (im.dim() != S.dim()) continue;
    Subspace next = acc.sum(im);
    if (next.dim() != acc.dim() + S.dim()) continue;
    acc = next;
    comp = comp.sum(im);
    if (!witness) witness = x;
  }
  if (acc.dim() != n || !witness) throw std::invalid_argument("V is not S plus N S; transverse split failed");
  return SplitOff{comp, *witness};
}

bool verify_factorization(const TensorFactorization& f, const std::vector<Matrix>& M, const std::vector<Matrix>& N) {
  const Field& F = f.iso.field();
  Matrix IS = Matrix::identity(F, f.dim_S), IT = Matrix::identity(F, f.dim_T);
  for (std::size_t i = 0; i < M.size(); ++i)
    if (!(f.iso * M[i] == kron(f.M_on_S[i], IT) * f.iso)) return false;
  for (std::size_t i = 0; i < N.size(); ++i)
    if (!(f.iso * N[i] == kron(IS, f.N_on_T[i]) * f.iso)) return false;
  return true;
}

TensorFactorization tensor_decompose(const std::vector<Matrix>& M, const std::vector<Matrix>& N,
                                     std::size_t n, Rng& rng) {
  if (M.empty()) throw std::invalid_argument("tensor_decompose needs a nonempty ideal M");
  const Field& F = M[0].field();
  if (!is_transverse(M, N)) throw std::invalid_argument("ideal actions are not transverse");
  std::vector<Matrix> all = M;
  all.insert(all.end(), N.begin(), N.end());
  if (!meataxe_split(all, n, rng).simple) throw std::invalid_argument("module is not simple over M + N");
  TensorFactorization out;
  Subspace S = find_simple_submodule(M, n, rng);
  if (S.dim() == n) {
    // M acts simply: N acts through End_M(V), which must be K.
    auto E = endomorphism_ring(M, n, rng, true);
    if (E.degree != 1) throw std::domain_error("End_M(S) is a proper extension of K; unsupported");
    out.dim_S = n;
    out.dim_T = 1;
    out.M_on_S = M;
    for (const auto& x : N) {
      const Elem c = x(0, 0);
      if (!(x == Matrix::identity(F, n).scaled(c))) throw std::logic_error("commuting action is not scalar");
      out.N_on_T.push_back(Matrix(F, 1, 1, {c}));
    }
    out.iso = Matrix::identity(F, n);
    return out;
  }
  auto M_on_S = restrict_action(M, S);
  auto E = endomorphism_ring(M_on_S, S.dim(), rng, true);
  if (E.degree != 1) throw std::domain_error("End_M(S) is a proper extension of K; unsupported");
  std::vector<Matrix> A = matrices_of(algebra_closure(M, Product::Associative, true), n);
  Matrix e = primitive_idempotent(A, rng);
  const std::size_t dS = S.dim(), dT = n / dS;
  if (n % dS != 0 || rank(e) != dT) throw std::logic_error("idempotent rank does not match the factor size");
  std::vector<Vec> tau = column_basis(e);
  Vec s0;
  for (std::size_t i = 0; i < dS && s0.empty(); ++i) {
    Vec v = e.apply(S.vector(i));
    if (std::any_of(v.begin(), v.end(), [](Elem x) { return x != 0; })) s0 = std::move(v);
  }
  if (s0.empty()) throw std::logic_error("primitive idempotent kills S");
  std::vector<Matrix> Ae;
  for (const auto& a : A) Ae.push_back(a * e);
  Matrix sys(F, n, Ae.size());
  for (std::size_t k = 0; k < Ae.size(); ++k) {
    Vec v = Ae[k].apply(s0);
    for (std::size_t r = 0; r < n; ++r) sys(r, k) = v[r];
  }
  Matrix P(F, n, n);
  for (std::size_t i = 0; i < dS; ++i) {
    auto c = solve(sys, S.vector(i));
    if (!c) throw std::logic_error("S is not reached from e S");
    Matrix ai(F, n, n);
    for (std::size_t k = 0; k < Ae.size(); ++k)
      if ((*c)[k] != 0) F.sub_mul(ai.data(), F.neg((*c)[k]), Ae[k].data());
    for (std::size_t j = 0; j < dT; ++j) {
      Vec col = ai.apply(tau[j]);
      for (std::size_t r = 0; r < n; ++r) P(r, i * dT + j) = col[r];
    }
  }
  auto Pinv = inverse(P);
  if (!Pinv) throw std::logic_error("tensor decomposition map is singular");
  out.iso = std::move(*Pinv);
  out.dim_S = dS;
  out.dim_T = dT;
  out.M_on_S = std::move(M_on_S);
  out.N_on_T = restrict_action(N, tau);
  if (!verify_factorization(out, M, N)) throw std::logic_error("tensor decomposition failed verification");
  return out;
}

bool verify_full_factorization(const FullFactorization& f, const std::vector<std::vector<Matrix>>& ideals) {
  const Field& F = f.iso.field();
  for (std::size_t i = 0; i < ideals.size(); ++i)
    for (std::size_t k = 0; k < ideals[i].size(); ++k) {
      Matrix big = Matrix::identity(F, 1);
      for (std::size_t j = 0; j < f.dims.size(); ++j)
        big = kron(big, j == i ? f.factors[i][k] : Matrix::identity(F, f.dims[j]));
      if (!(f.iso * ideals[i][k] == big * f.iso)) return false;
    }
  return true;
}

FullFactorization full_tensor_decompose(const std::vector<std::vector<Matrix>>& ideals, std::size_t n, Rng& rng) {
  if (ideals.empty() || ideals[0].empty()) throw std::invalid_argument("need at least one nonempty ideal");
  const Field& F = ideals[0][0].field();
  for (const auto& I : ideals)
    if (std::all_of(I.begin(), I.end(), [](const Matrix& m) { return m.is_zero(); }))
      throw std::invalid_argument("an ideal acts trivially; the action is not faithful");
  FullFactorization out;
  if (ideals.size() == 1) {
    if (!meataxe_split(ideals[0], n, rng).simple) throw std::invalid_argument("module is not simple");
    out.factors = ideals;
    out.dims = {n};
    out.iso = Matrix::identity(F, n);
    return out;
  }
  std::vector<Matrix> N;
  for (std::size_t i = 1; i < ideals.size(); ++i) N.insert(N.end(), ideals[i].begin(), ideals[i].end());
  TensorFactorization f = tensor_decompose(ideals[0], N, n, rng);
  std::vector<std::vector<Matrix>> rest;
  std::size_t off = 0;
  for (std::size_t i = 1; i < ideals.size(); ++i) {
    rest.emplace_back(f.N_on_T.begin() + off, f.N_on_T.begin() + off + ideals[i].size());
    off += ideals[i].size();
  }
  FullFactorization sub = full_tensor_decompose(rest, f.dim_T, rng);
  out.factors.push_back(f.M_on_S);
  out.dims.push_back(f.dim_S);
  out.factors.insert(out.factors.end(), sub.factors.begin(), sub.factors.end());
  out.dims.insert(out.dims.end(), sub.dims.begin(), sub.dims.end());
  out.iso = kron(Matrix::identity(F, f.dim_S), sub.iso) * f.iso;
  if (!verify_full_factorization(out, ideals)) throw std::logic_error("full factorization failed verification");
  return out;
}

std::vector<FieldPoly> cyclic_algebra_maps(const Matrix& c1, const Matrix& c2, Rng& rng, std::size_t limit) {
  if (!c1.square() || !c2.square()) throw std::invalid_argument("cyclic generators must be square");
  const Field& F = c1.field();
  FieldPolyRing R(FieldOps{F});
  FieldPoly f1 = min_poly(c1), f2 = min_poly(c2);
  if (f1.degree() != f2.degree()) return {};
  auto fac = R.factor(f2, rng);
  for (const auto& [g, m] : fac)
    if (m != 1) throw std::domain_error("cyclic algebra is not semisimple; unsupported");
  // Roots of f1 in each field K[x]/(g_j).
  std::vector<std::vector<FieldPoly>> roots;
  for (const auto& [g, m] : fac) {
    QuotientOps Q{R, g};
    PolyRing<QuotientOps> RQ(Q);
    std::vector<FieldPoly> lifted;
    for (auto c : f1.coeffs()) lifted.push_back(R.make({c}));
    auto rs = RQ.roots(RQ.make(lifted), rng);
    if (rs.empty()) return {};
    roots.push_back(std::move(rs));
  }
  std::vector<FieldPoly> out;
  std::vector<std::size_t> choice(roots.size(), 0);
  while (out.size() < limit) {
    // CRT-combine the chosen residues.
    FieldPoly G = roots[0][choice[0]], mod = fac[0].first;
    for (std::size_t j = 1; j < roots.size(); ++j) {
      const FieldPoly& gj = fac[j].first;
      FieldPoly diff = R.mod(R.sub(roots[j][choice[j]], G), gj);
      FieldPoly t = R.mod(R.mul(diff, R.inv_mod(mod, gj)), gj);
      G = R.add(G, R.mul(mod, t));
      mod = R.mul(mod, gj);
    }
    G = R.mod(G, f2);
    if (min_poly(eval_poly(G, c2)).degree() == f2.degree()) out.push_back(G);
    std::size_t k = 0;
    while (k < choice.size() && ++choice[k] == roots[k].size()) choice[k++] = 0;
    if (k == choice.size()) break;
  }
  return out;
}

std::optional<CyclicPseudoIso> cyclic_pseudo_iso(const Matrix& c1, const Matrix& c2, Rng& rng) {
  if (c1.rows() != c2.rows()) return std::nullopt;
  for (const auto& G : cyclic_algebra_maps(c1, c2, rng)) {
    auto Psi = find_invertible(intertwiners({c1}, {eval_poly(G, c2)}), rng);
    if (Psi) return CyclicPseudoIso{G, *Psi};
  }
  return std::nullopt;
}

}  // namespace densor
