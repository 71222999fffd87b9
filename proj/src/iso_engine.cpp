#include "densor/iso_engine.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "densor/chevalley.hpp"
#include "densor/crystal.hpp"
#include "densor/examples.hpp"
#include "densor/lie.hpp"
#include "densor/modules.hpp"

namespace densor {

namespace {

constexpr std::size_t kCandidateLimit = 1u << 14;

Matrix block_diag(const OperatorTuple& o) {
  Matrix m = o.mats[0];
  for (std::size_t a = 1; a < o.mats.size(); ++a) m = direct_sum(m, o.mats[a]);
  return m;
}

Matrix axis_block(const Matrix& m, const Frame& frame, std::size_t axis) {
  std::size_t off = 0;
  for (std::size_t a = 0; a < axis; ++a) off += frame.dims[a];
  return m.block(off, off, frame.dims[axis], frame.dims[axis]);
}

OperatorTuple split_blocks(const Matrix& m, const Frame& frame) {
  OperatorTuple o;
  for (std::size_t a = 0; a < frame.arity(); ++a) o.mats.push_back(axis_block(m, frame, a));
  return o;
}

Matrix combine(const Field& F, std::size_t n, const std::vector<Matrix>& xs, std::span<const Elem> c) {
  Matrix out(F, n, n);
  for (std::size_t k = 0; k < xs.size(); ++k)
    if (c[k] != 0) F.sub_mul(out.data(), F.neg(c[k]), xs[k].data());
  return out;
}

struct Ideal {
  MatrixLieAlgebra M;
  TypeARecognition rec;
};

// Der(t) in its faithful block-diagonal representation on V_0 + ... + V_{l-1}.
struct DerData {
  Frame frame;
  std::vector<OperatorTuple> basis;
  std::vector<Matrix> diag;
  MatrixLieAlgebra L;
  std::vector<Matrix> center;
  std::vector<Ideal> ideals;
  SpanCoordinates split;
  bool ok = false;
  std::string reason;
};

std::size_t total_dim(const Frame& f) { return std::accumulate(f.dims.begin(), f.dims.end(), std::size_t(0)); }

DerData prepare(const Tensor& t, const OperatorSpace& der, Rng& rng) {
  DerData D;
  D.frame = t.frame();
  const Field& F = t.field();
  D.basis = der.basis();
  if (D.basis.empty()) {
    D.reason = "derivation algebra is zero";
    return D;
  }
  try {
    for (std::size_t a = 0; a < D.frame.arity(); ++a) {
      std::vector<Matrix> xs;
      for (const auto& b : D.basis) xs.push_back(b.mats[a]);
      if (!meataxe_split(xs, D.frame.dims[a], rng).simple || intertwiners(xs, xs).size() != 1) {
        D.reason = "axis " + std::to_string(a) + " is not an absolutely simple Der-module";
        return D;
      }
    }
  } catch (const LasVegasAbort& e) {
    D.reason = e.what();
    return D;
  }
  for (const auto& b : D.basis) D.diag.push_back(block_diag(b));
  const std::size_t N = total_dim(D.frame);
  D.L = MatrixLieAlgebra::make(F, N, D.diag);
  IdealDecomposition dec;
  try {
    dec = minimal_ideals(D.L, rng);
  } catch (const std::domain_error&) {
    D.reason = "derivation algebra is not reductive";
    return D;
  } catch (const LasVegasAbort& e) {
    D.reason = e.what();
    return D;
  }
  D.center = dec.abelian;
  std::vector<Matrix> all = dec.abelian;
  for (auto& gens : dec.simple) {
    Ideal I;
    I.M = MatrixLieAlgebra::make(F, N, gens);
    auto o = recognize_type_a(I.M, rng);
    if (o.status != RecognitionStatus::Recognized) {
      D.reason = "minimal ideal of dimension " + std::to_string(I.M.dim()) + " not recognized: " + o.diagnostic;
      return D;
    }
    I.rec = std::move(*o.rec);
    all.insert(all.end(), I.M.basis().begin(), I.M.basis().end());
    D.ideals.push_back(std::move(I));
  }
  std::vector<Vec> flats;
  for (const auto& m : all) flats.push_back(flat(m));
  D.split = SpanCoordinates(F, N * N, flats);
  D.ok = true;
  return D;
}

std::vector<std::size_t> ideal_dims(const DerData& D) {
  std::vector<std::size_t> d;
  for (const auto& I : D.ideals) d.push_back(I.M.dim());
  std::sort(d.begin(), d.end());
  return d;
}

enum class SearchEnd { Found, Exhausted, Limit };

struct SearchState {
  bool any_conjugating = false;  // some psi admitted invertible intertwiners on every axis
  std::size_t tried = 0;
};

// phi with Der(act(t, phi)) = Der(s) for the candidate images of D1.diag, if
// every axis admits an invertible intertwiner.
std::optional<OperatorTuple> conjugator(const DerData& D1, const std::vector<Matrix>& images, Rng& rng) {
  OperatorTuple phi;
  for (std::size_t a = 0; a < D1.frame.arity(); ++a) {
    std::vector<Matrix> xs, ys;
    for (std::size_t i = 0; i < D1.basis.size(); ++i) {
      xs.push_back(D1.basis[i].mats[a]);
      ys.push_back(axis_block(images[i], D1.frame, a));
    }
    auto Psi = find_invertible(intertwiners(xs, ys), rng);
    if (!Psi) return std::nullopt;
    phi.mats.push_back(*inverse(*Psi));
  }
  return phi;
}

// Scales axis 0 so that act(t, phi) = s; false when act(t, phi) is not a
// multiple of s.
bool absorb_scalar(const Tensor& s, const Tensor& t, OperatorTuple& phi) {
  const Field& F = t.field();
  Tensor u = act(t, phi);
  const auto& se = s.entries();
  auto it = std::find_if(se.begin(), se.end(), [](Elem x) { return x != 0; });
  if (it == se.end()) return u.is_zero();
  const std::size_t idx = static_cast<std::size_t>(it - se.begin());
  const Elem lambda = F.div(u[idx], *it);
  if (lambda == 0 || !(u == s.scaled(lambda))) return false;
  phi.mats[0] = phi.mats[0].scaled(F.inv(lambda));
  return true;
}

// Candidate Lie isomorphisms Der(t) -> Der(s): the center is fixed pointwise
// (it acts by scalars on each axis), ideals are matched by dimension and each
// may be composed with the diagram twist. on_witness returns true to stop.
template <class OnWitness>
SearchEnd search(const DerData& Dt, const DerData& Ds, const Tensor& s, const Tensor& t, Rng& rng,
                 SearchState& st, OnWitness on_witness) {
  const Field& F = t.field();
  const std::size_t N = total_dim(Dt.frame), r = Dt.ideals.size();
  if (Dt.center.size() != Ds.center.size() || ideal_dims(Dt) != ideal_dims(Ds)) return SearchEnd::Exhausted;
  for (const auto& z : Dt.center)
    if (!Ds.L.contains(z)) return SearchEnd::Exhausted;
  std::vector<std::size_t> perm(r);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::size_t> twistable;
  for (std::size_t k = 0; k < r; ++k)
    if (Dt.ideals[k].rec.n >= 2) twistable.push_back(k);
  do {
    bool dims_ok = true;
    for (std::size_t k = 0; k < r; ++k) dims_ok = dims_ok && Dt.ideals[k].M.dim() == Ds.ideals[perm[k]].M.dim();
    if (!dims_ok) continue;
    for (std::size_t mask = 0; mask < (std::size_t(1) << twistable.size()); ++mask) {
      if (++st.tried > kCandidateLimit) return SearchEnd::Limit;
      std::vector<Matrix> basis_imgs = Dt.center;
      for (std::size_t k = 0; k < r; ++k) {
        bool tw = false;
        for (std::size_t q = 0; q < twistable.size(); ++q) tw = tw || (twistable[q] == k && (mask >> q & 1));
        const Ideal& A = Dt.ideals[k];
        const Ideal& B = Ds.ideals[perm[k]];
        for (const auto& x : A.M.basis()) {
          Matrix y = A.rec.to_standard(A.M, x);
          if (tw) y = twist_matrix(y);
          basis_imgs.push_back(B.rec.from_standard(y));
        }
      }
      std::vector<Matrix> images;
      for (const auto& x : Dt.diag) images.push_back(combine(F, N, basis_imgs, *Dt.split.coordinates(x.data())));
      auto phi = conjugator(Dt, images, rng);
      if (!phi) continue;
      st.any_conjugating = true;
      if (!absorb_scalar(s, t, *phi)) continue;
      if (!(act(t, *phi) == s)) throw std::logic_error("isomorphism witness failed verification");
      if (on_witness(*phi)) return SearchEnd::Found;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return SearchEnd::Exhausted;
}

IsoResult make_result(Verdict v, IsoReason r, std::string detail) {
  IsoResult res;
  res.verdict = v;
  res.reason = r;
  res.detail = std::move(detail);
  return res;
}

IsoResult run(const Tensor& s, const Tensor& t, Rng& rng, bool tiny_only) {
  if (!(s.field() == t.field())) throw std::invalid_argument("tensors over different fields");
  if (s.dims() != t.dims()) return make_result(Verdict::NotIsomorphic, IsoReason::FrameMismatch, "frames differ");
  const Field& F = t.field();
  const auto nd_s = is_nondegenerate(s), nd_t = is_nondegenerate(t);
  if (nd_s.per_axis != nd_t.per_axis)
    return make_result(Verdict::NotIsomorphic, IsoReason::NondegeneracyProfile, "radical profiles differ");
  const OperatorSpace der_s = derivation_algebra(s), der_t = derivation_algebra(t);
  if (der_s.dim() != der_t.dim())
    return make_result(Verdict::NotIsomorphic, IsoReason::DerivationAlgebrasNotConjugate,
                       "dim Der(s) = " + std::to_string(der_s.dim()) + ", dim Der(t) = " + std::to_string(der_t.dim()));
  const std::size_t m_s = densor_space(s, der_s).dim(), m = densor_space(t, der_t).dim();
  if (m_s != m)
    return make_result(Verdict::NotIsomorphic, IsoReason::DensorMismatch,
                       "densor dimensions " + std::to_string(m_s) + " and " + std::to_string(m));
  if (s == t) {
    IsoResult res = make_result(Verdict::Isomorphic, IsoReason::None, "identical tensors");
    res.witness = OperatorTuple::identity(t.frame());
    return res;
  }
  if (F.p() == 2 || F.p() == 3)
    return make_result(Verdict::Inconclusive, IsoReason::OutsideHypotheses, "characteristic 2 or 3");
  if (!nd_t.overall()) return make_result(Verdict::Inconclusive, IsoReason::OutsideHypotheses, "degenerate tensors");
  if (tiny_only && m != 1)
    return make_result(Verdict::Inconclusive, IsoReason::OutsideHypotheses,
                       "densor dimension " + std::to_string(m) + " is not 1");
  try {
    DerData Dt = prepare(t, der_t, rng);
    if (!Dt.ok) return make_result(Verdict::Inconclusive, IsoReason::OutsideHypotheses, Dt.reason);
    DerData Ds = prepare(s, der_s, rng);
    if (!Ds.ok) return make_result(Verdict::Inconclusive, IsoReason::OutsideHypotheses, Ds.reason);
    SearchState st;
    std::optional<OperatorTuple> found;
    const SearchEnd end = search(Dt, Ds, s, t, rng, st, [&](const OperatorTuple& phi) {
      found = phi;
      return true;
    });
    if (end == SearchEnd::Found) {
      IsoResult res = make_result(Verdict::Isomorphic, IsoReason::None, "");
      res.witness = std::move(found);
      return res;
    }
    if (end == SearchEnd::Limit)
      return make_result(Verdict::Inconclusive, IsoReason::OutsideHypotheses, "candidate limit reached");
    if (!st.any_conjugating)
      return make_result(Verdict::NotIsomorphic, IsoReason::DerivationAlgebrasNotConjugate,
                         "no candidate isomorphism of derivation algebras is induced by the axes");
    if (m == 1) throw std::logic_error("conjugated tensor left the densor line");
    return make_result(Verdict::Inconclusive, IsoReason::OutsideHypotheses,
                       "no candidate normalizer element moves t onto the line of s");
  } catch (const LasVegasAbort& e) {
    return make_result(Verdict::Inconclusive, IsoReason::OutsideHypotheses, e.what());
  }
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Isomorphic: return "isomorphic";
    case Verdict::NotIsomorphic: return "not_isomorphic";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "";
}

std::string to_string(IsoReason r) {
  switch (r) {
    case IsoReason::None: return "none";
    case IsoReason::DerivationAlgebrasNotConjugate: return "derivation_algebras_not_conjugate";
    case IsoReason::DensorMismatch: return "densor_mismatch";
    case IsoReason::OutsideHypotheses: return "outside_hypotheses";
    case IsoReason::FrameMismatch: return "frame_mismatch";
    case IsoReason::NondegeneracyProfile: return "nondegeneracy_profile";
  }
  return "";
}

IsoResult tiny_densor_iso(const Tensor& s, const Tensor& t, Rng& rng) { return run(s, t, rng, true); }

IsoResult algorithm1(const Tensor& s, const Tensor& t, Rng& rng) { return run(s, t, rng, false); }

std::uint64_t gl_order(std::size_t d, std::uint64_t q) {
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t qd = 1;
  for (std::size_t i = 0; i < d; ++i) {
    if (qd > kMax / q) return kMax;
    qd *= q;
  }
  std::uint64_t order = 1, qi = 1;
  for (std::size_t i = 0; i < d; ++i) {
    const std::uint64_t f = qd - qi;
    if (f != 0 && order > kMax / f) return kMax;
    order *= f;
    qi *= q;
  }
  return order;
}

namespace {

constexpr std::uint64_t kLeadingGuard = 1ull << 30;
constexpr std::uint64_t kKernelGuard = 1ull << 22;

std::uint64_t leading_size(const Frame& fr) {
  std::uint64_t total = 1;
  const std::size_t l = fr.arity();
  for (std::size_t a = 0; a + 2 < l; ++a) {
    const std::uint64_t g = gl_order(fr.dims[a], fr.field.q());
    if (g > kLeadingGuard || total > kLeadingGuard / g) return kLeadingGuard + 1;
    total *= g;
  }
  return total;
}

std::vector<Matrix> enumerate_gl(const Field& F, std::size_t d) {
  std::vector<Matrix> out;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < d * d; ++i) total *= F.q();
  Vec e(d * d);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    for (auto& v : e) {
      v = static_cast<Elem>(c % F.q());
      c /= F.q();
    }
    Matrix m(F, d, d, e);
    if (is_invertible(m)) out.push_back(std::move(m));
  }
  return out;
}

// Solutions (P, Q) of act(t', (.., I, P, Q)) = s on the last two axes.
// Calls visit(P, Q) for each; visit returns true to stop. Returns the number
// of solutions visited.
template <class Visit>
std::uint64_t pencil_solutions(const Tensor& tp, const Tensor& s, Visit visit) {
  const Field& F = s.field();
  const auto& dims = s.dims();
  const std::size_t l = dims.size();
  const std::size_t m = dims[l - 2], n = dims[l - 1];
  const std::size_t lead = s.entries().size() / (m * n);
  const std::size_t vars = m * m + n * n;
  Matrix sys(F, lead * m * n, vars);
  for (std::size_t I = 0; I < lead; ++I) {
    const Elem* T = tp.entries().data() + I * m * n;
    const Elem* S = s.entries().data() + I * m * n;
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        auto row = sys.row((I * m + j) * n + k);
        for (std::size_t jp = 0; jp < m; ++jp) row[j * m + jp] = F.add(row[j * m + jp], T[jp * n + k]);
        for (std::size_t kp = 0; kp < n; ++kp)
          row[m * m + kp * n + k] = F.sub(row[m * m + kp * n + k], S[j * n + kp]);
      }
  }
  const Subspace K = kernel(sys, ExecPolicy::Serial);
  const std::size_t e = K.dim();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < e; ++i) {
    total *= F.q();
    if (total > kKernelGuard) throw std::invalid_argument("brute force: solution space too large");
  }
  std::uint64_t count = 0;
  Vec c(e);
  for (std::uint64_t code = 1; code < total; ++code) {
    std::uint64_t r = code;
    for (auto& v : c) {
      v = static_cast<Elem>(r % F.q());
      r /= F.q();
    }
    const Vec x = K.combine(c);
    Matrix R(F, m, m, Vec(x.begin(), x.begin() + m * m));
    Matrix C(F, n, n, Vec(x.begin() + m * m, x.end()));
    auto Q = inverse(C);
    if (!Q || !is_invertible(R)) continue;
    ++count;
    if (visit(R.transpose(), *Q)) break;
  }
  return count;
}

struct Leading {
  std::vector<std::vector<Matrix>> gl;  // per leading axis
  std::uint64_t size = 1;
  OperatorTuple tuple(const Frame& fr, std::uint64_t idx) const {
    OperatorTuple o = OperatorTuple::identity(fr);
    for (std::size_t a = 0; a < gl.size(); ++a) {
      o.mats[a] = gl[a][idx % gl[a].size()];
      idx /= gl[a].size();
    }
    return o;
  }
};

Leading leading_tuples(const Frame& fr) {
  if (fr.arity() < 2) throw std::invalid_argument("brute force needs at least two axes");
  if (leading_size(fr) > kLeadingGuard) throw std::invalid_argument("brute force: search space exceeds the guard");
  Leading L;
  for (std::size_t a = 0; a + 2 < fr.arity(); ++a) {
    L.gl.push_back(enumerate_gl(fr.field, fr.dims[a]));
    L.size *= L.gl.back().size();
  }
  return L;
}

Tensor apply_leading(const Tensor& t, const OperatorTuple& o, std::size_t count) {
  Tensor u = t;
  for (std::size_t a = 0; a < count; ++a) u = apply_on_axis(u, a, o.mats[a], ExecPolicy::Serial);
  return u;
}

bool use_parallel(ExecPolicy policy, std::uint64_t n) {
  if (policy == ExecPolicy::Serial) return false;
  if (policy == ExecPolicy::Parallel) return true;
  return thread_count() > 1 && n >= 64;
}

}  // namespace

bool brute_force_feasible(const Tensor& t) {
  const Frame& fr = t.frame();
  if (fr.arity() < 2 || leading_size(fr) > kLeadingGuard) return false;
  for (std::size_t a = 0; a + 2 < fr.arity(); ++a) {
    std::uint64_t q2 = 1;
    for (std::size_t i = 0; i < fr.dims[a] * fr.dims[a]; ++i) {
      q2 *= fr.field.q();
      if (q2 > kLeadingGuard) return false;
    }
  }
  return true;
}

IsoResult brute_force_iso(const Tensor& s, const Tensor& t, ExecPolicy policy) {
  if (!(s.field() == t.field())) throw std::invalid_argument("tensors over different fields");
  if (s.dims() != t.dims()) return make_result(Verdict::NotIsomorphic, IsoReason::FrameMismatch, "frames differ");
  if (is_nondegenerate(s).per_axis != is_nondegenerate(t).per_axis)
    return make_result(Verdict::NotIsomorphic, IsoReason::NondegeneracyProfile, "radical profiles differ");
  const Frame& fr = t.frame();
  const Leading L = leading_tuples(fr);
  const std::size_t lead = L.gl.size();
  // Lowest leading index with a solution, so serial and parallel agree.
  std::atomic<std::uint64_t> best{std::numeric_limits<std::uint64_t>::max()};
  auto try_index = [&](std::uint64_t idx) -> std::optional<OperatorTuple> {
    OperatorTuple o = L.tuple(fr, idx);
    const Tensor tp = apply_leading(t, o, lead);
    std::optional<OperatorTuple> w;
    pencil_solutions(tp, s, [&](const Matrix& P, const Matrix& Q) {
      o.mats[fr.arity() - 2] = P;
      o.mats[fr.arity() - 1] = Q;
      w = o;
      return true;
    });
    return w;
  };
  std::optional<OperatorTuple> witness;
  if (use_parallel(policy, L.size)) {
    const std::int64_t total = static_cast<std::int64_t>(L.size);
#pragma omp parallel for schedule(dynamic, 8) num_threads(std::max(thread_count(), 1))
    for (std::int64_t i = 0; i < total; ++i) {
      const auto idx = static_cast<std::uint64_t>(i);
      if (idx >= best.load()) continue;
      auto w = try_index(idx);
      if (!w) continue;
      std::uint64_t cur = best.load();
      while (idx < cur && !best.compare_exchange_weak(cur, idx)) {
      }
    }
    if (best.load() != std::numeric_limits<std::uint64_t>::max()) witness = try_index(best.load());
  } else {
    for (std::uint64_t idx = 0; idx < L.size && !witness; ++idx) witness = try_index(idx);
  }
  if (!witness) return make_result(Verdict::NotIsomorphic, IsoReason::None, "exhaustive search found no witness");
  if (!(act(t, *witness) == s)) throw std::logic_error("brute force witness failed verification");
  IsoResult res = make_result(Verdict::Isomorphic, IsoReason::None, "exhaustive search");
  res.witness = std::move(witness);
  return res;
}

std::uint64_t brute_force_count(const Tensor& s, const Tensor& t, ExecPolicy policy) {
  if (!(s.frame() == t.frame()) || is_nondegenerate(s).per_axis != is_nondegenerate(t).per_axis) return 0;
  const Frame& fr = t.frame();
  const Leading L = leading_tuples(fr);
  const std::size_t lead = L.gl.size();
  auto count_index = [&](std::uint64_t idx) {
    const Tensor tp = apply_leading(t, L.tuple(fr, idx), lead);
    return pencil_solutions(tp, s, [](const Matrix&, const Matrix&) { return false; });
  };
  std::uint64_t total = 0;
  if (use_parallel(policy, L.size)) {
    const std::int64_t n = static_cast<std::int64_t>(L.size);
#pragma omp parallel for schedule(dynamic, 8) reduction(+ : total) num_threads(std::max(thread_count(), 1))
    for (std::int64_t i = 0; i < n; ++i) total += count_index(static_cast<std::uint64_t>(i));
  } else {
    for (std::uint64_t idx = 0; idx < L.size; ++idx) total += count_index(idx);
  }
  return total;
}

IsoResult decide_iso(const Tensor& s, const Tensor& t, Method m, Rng& rng) {
  if (m == Method::Tiny) return tiny_densor_iso(s, t, rng);
  if (m == Method::Brute) return brute_force_iso(s, t);
  IsoResult r = algorithm1(s, t, rng);
  if (r.verdict == Verdict::Inconclusive && brute_force_feasible(t)) {
    r = brute_force_iso(s, t);
    r.detail = "settled by exhaustive search";
  }
  return r;
}

namespace {

// exp(x) for x with x^p = 0.
std::optional<Matrix> nilpotent_exp(const Matrix& x) {
  const Field& F = x.field();
  Matrix result = Matrix::identity(F, x.rows()), term = result;
  for (std::uint32_t k = 1; k < F.p(); ++k) {
    term = (term * x).scaled(F.inv(F.from_int(k)));
    result = result + term;
  }
  if (!(term * x).is_zero()) return std::nullopt;
  return result;
}

// xi^w on the w-eigenspace, w lifted to (-p/2, p/2].
std::optional<Matrix> torus_element(const Matrix& h) {
  const Field& F = h.field();
  const std::size_t d = h.rows();
  const std::int64_t p = F.p(), order = F.q() - 1;
  Matrix B(F, d, d);
  std::vector<Elem> diag;
  std::size_t col = 0;
  for (std::int64_t w = 0; w < p; ++w) {
    const Subspace E = kernel(h - Matrix::identity(F, d).scaled(F.from_int(w)));
    std::int64_t lift = w > p / 2 ? w - p : w;
    const Elem val = F.pow(F.primitive(), static_cast<std::uint64_t>(((lift % order) + order) % order));
    for (std::size_t i = 0; i < E.dim(); ++i, ++col) {
      const Vec v = E.vector(i);
      for (std::size_t r = 0; r < d; ++r) B(r, col) = v[r];
      diag.push_back(val);
    }
  }
  if (col != d) return std::nullopt;
  Matrix D(F, d, d);
  for (std::size_t i = 0; i < d; ++i) D(i, i) = diag[i];
  return B * D * *inverse(B);
}

class GeneratorSet {
 public:
  explicit GeneratorSet(const Tensor& t) : t_(t) {}
  void add(const OperatorTuple& g) {
    if (g == OperatorTuple::identity(t_.frame())) return;
    if (!(act(t_, g) == t_)) return;
    for (const auto& h : out_)
      if (h == g) return;
    out_.push_back(g);
  }
  std::vector<OperatorTuple> take() { return std::move(out_); }

 private:
  const Tensor& t_;
  std::vector<OperatorTuple> out_;
};

}  // namespace

AutGenerators aut_generators(const Tensor& t, Rng& rng) {
  const Field& F = t.field();
  const Frame& fr = t.frame();
  if (F.p() == 2 || F.p() == 3) throw std::domain_error("characteristic 2 or 3");
  if (!is_nondegenerate(t).overall()) throw std::domain_error("degenerate tensor");
  const OperatorSpace der = derivation_algebra(t);
  if (densor_space(t, der).dim() != 1) throw std::domain_error("densor is not a line");
  DerData D = prepare(t, der, rng);
  if (!D.ok) throw std::domain_error(D.reason);
  GeneratorSet gens(t);
  const std::size_t l = fr.arity();
  const Elem xi = F.primitive();
  for (std::size_t a = 0; a + 1 < l; ++a) {
    OperatorTuple g = OperatorTuple::identity(fr);
    g.mats[a] = g.mats[a].scaled(xi);
    g.mats[a + 1] = g.mats[a + 1].scaled(F.inv(xi));
    gens.add(g);
  }
  // Root subgroups x_a(s) for simple roots and s in a prime-field basis of K.
  std::vector<Elem> scalars;
  for (std::uint32_t j = 0, pj = 1; j < F.k(); ++j, pj *= F.p()) scalars.push_back(pj);
  for (const auto& I : D.ideals) {
    std::vector<Matrix> roots = I.rec.e;
    roots.insert(roots.end(), I.rec.f.begin(), I.rec.f.end());
    for (const auto& x : roots)
      for (Elem c : scalars) {
        OperatorTuple g;
        const OperatorTuple xs = split_blocks(x.scaled(c), fr);
        bool ok = true;
        for (const auto& xa : xs.mats) {
          auto e = nilpotent_exp(xa);
          ok = ok && e.has_value();
          if (ok) g.mats.push_back(*e);
        }
        if (ok) gens.add(g);
      }
  }
  // Torus elements from prime-field combinations of the Cartan part.
  std::vector<Matrix> H = D.center;
  for (const auto& I : D.ideals) H.insert(H.end(), I.rec.h.begin(), I.rec.h.end());
  const std::size_t r = H.size(), N = total_dim(fr);
  std::vector<std::int64_t> coeffs;
  std::uint64_t span = 1;
  for (std::size_t i = 0; i < r && span <= 4096; ++i) span *= F.p();
  if (span <= 4096) {
    for (std::int64_t c = 0; c < F.p(); ++c) coeffs.push_back(c);
  } else {
    coeffs = {0, 1, -1};
  }
  std::uint64_t combos = 1;
  for (std::size_t i = 0; i < r && combos <= 4096; ++i) combos *= coeffs.size();
  if (combos > 4096) {
    for (const auto& h : H) {
      OperatorTuple g;
      bool ok = true;
      for (const auto& ha : split_blocks(h, fr).mats) {
        auto e = torus_element(ha);
        ok = ok && e.has_value();
        if (ok) g.mats.push_back(*e);
      }
      if (ok) gens.add(g);
    }
  } else {
    for (std::uint64_t code = 1; code < combos; ++code) {
      Vec c(r);
      std::uint64_t rest = code;
      for (auto& v : c) {
        v = F.from_int(coeffs[rest % coeffs.size()]);
        rest /= coeffs.size();
      }
      const Matrix h = combine(F, N, H, c);
      OperatorTuple g;
      bool ok = true;
      for (const auto& ha : split_blocks(h, fr).mats) {
        auto e = torus_element(ha);
        ok = ok && e.has_value();
        if (ok) g.mats.push_back(*e);
      }
      if (ok) gens.add(g);
    }
  }
  SearchState st;
  search(D, D, t, t, rng, st, [&](const OperatorTuple& g) {
    gens.add(g);
    return false;
  });
  return AutGenerators{gens.take()};
}

namespace {

using Perm = std::vector<std::uint32_t>;

Perm perm_mul(const Perm& a, const Perm& b) {  // x^(ab) = (x^a)^b
  Perm r(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) r[x] = b[a[x]];
  return r;
}

Perm perm_inv(const Perm& a) {
  Perm r(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) r[a[x]] = static_cast<std::uint32_t>(x);
  return r;
}

bool perm_is_id(const Perm& a) {
  for (std::size_t x = 0; x < a.size(); ++x)
    if (a[x] != x) return false;
  return true;
}

// Deterministic Schreier-Sims with explicit generator lists per level.
class StabChain {
 public:
  StabChain(std::size_t n, const std::vector<Perm>& gens) : n_(n) {
    std::vector<Perm> S;
    for (const auto& g : gens)
      if (!perm_is_id(g)) S.push_back(g);
    for (const auto& g : S) {
      bool moves = false;
      for (auto b : base_) moves = moves || g[b] != b;
      if (!moves) append_base(first_moved(g));
    }
    for (std::size_t i = 0; i < base_.size(); ++i) {
      for (const auto& g : S) {
        bool fixes = true;
        for (std::size_t j = 0; j < i; ++j) fixes = fixes && g[base_[j]] == base_[j];
        if (fixes) levels_[i].gens.push_back(g);
      }
      rebuild(i);
    }
    std::ptrdiff_t i = static_cast<std::ptrdiff_t>(base_.size()) - 1;
    while (i >= 0) {
      if (!check_level(static_cast<std::size_t>(i), i)) --i;
    }
  }

  std::uint64_t order() const {
    std::uint64_t o = 1;
    for (const auto& L : levels_) o *= L.orbit.size();
    return o;
  }

 private:
  struct Level {
    std::vector<Perm> gens;
    std::vector<std::uint32_t> orbit;
    std::vector<std::int32_t> where;  // point -> index in orbit, or -1
    std::vector<Perm> u;               // base^u[k] = orbit[k]
  };

  static std::uint32_t first_moved(const Perm& g) {
    for (std::size_t x = 0; x < g.size(); ++x)
      if (g[x] != x) return static_cast<std::uint32_t>(x);
    return 0;
  }

  void append_base(std::uint32_t b) {
    base_.push_back(b);
    levels_.emplace_back();
  }

  void rebuild(std::size_t i) {
    Level& L = levels_[i];
    L.orbit = {base_[i]};
    L.where.assign(n_, -1);
    L.where[base_[i]] = 0;
    Perm id(n_);
    std::iota(id.begin(), id.end(), 0u);
    L.u = {id};
    for (std::size_t k = 0; k < L.orbit.size(); ++k)
      for (const auto& s : L.gens) {
        const std::uint32_t z = s[L.orbit[k]];
        if (L.where[z] >= 0) continue;
        L.where[z] = static_cast<std::int32_t>(L.orbit.size());
        L.orbit.push_back(z);
        L.u.push_back(perm_mul(L.u[k], s));
      }
  }

  // Sifts h through levels from..end; returns the residue and the level reached.
  std::pair<Perm, std::size_t> strip(Perm h, std::size_t from) const {
    for (std::size_t l = from; l < base_.size(); ++l) {
      const std::uint32_t b = h[base_[l]];
      const std::int32_t k = levels_[l].where[b];
      if (k < 0) return {h, l};
      h = perm_mul(h, perm_inv(levels_[l].u[static_cast<std::size_t>(k)]));
    }
    return {h, base_.size()};
  }

  // False when every Schreier generator at level i sifts; otherwise extends
  // the chain and sets i to the level that must be rechecked.
  bool check_level(std::size_t i, std::ptrdiff_t& next) {
    Level& L = levels_[i];
    for (std::size_t k = 0; k < L.orbit.size(); ++k)
      for (std::size_t g = 0; g < levels_[i].gens.size(); ++g) {
        const Perm& s = levels_[i].gens[g];
        const Perm& ub = levels_[i].u[k];
        const std::uint32_t img = s[levels_[i].orbit[k]];
        const Perm h = perm_mul(perm_mul(ub, s), perm_inv(levels_[i].u[static_cast<std::size_t>(levels_[i].where[img])]));
        if (perm_is_id(h)) continue;
        auto [res, j] = strip(h, i + 1);
        if (perm_is_id(res)) continue;
        if (j == base_.size()) append_base(first_moved(res));
        for (std::size_t l = i + 1; l <= j; ++l) {
          levels_[l].gens.push_back(res);
          rebuild(l);
        }
        next = static_cast<std::ptrdiff_t>(j);
        return true;
      }
    return false;
  }

  std::size_t n_;
  std::vector<std::uint32_t> base_;
  std::vector<Level> levels_;
};

}  // namespace

std::optional<std::uint64_t> generated_order(const Frame& frame, const std::vector<OperatorTuple>& gens) {
  const Field& F = frame.field;
  std::vector<std::size_t> offset;
  std::uint64_t points = 0;
  for (auto d : frame.dims) {
    offset.push_back(points);
    std::uint64_t c = 1;
    for (std::size_t i = 0; i < d; ++i) {
      c *= F.q();
      if (c > (1u << 16)) return std::nullopt;
    }
    points += c;
    if (points > (1u << 16)) return std::nullopt;
  }
  std::vector<Perm> perms;
  for (const auto& g : gens) {
    Perm P(points);
    for (std::size_t a = 0; a < frame.arity(); ++a) {
      const std::size_t d = frame.dims[a];
      const std::uint64_t count = (a + 1 < frame.arity() ? offset[a + 1] : points) - offset[a];
      Vec v(d);
      for (std::uint64_t code = 0; code < count; ++code) {
        std::uint64_t c = code;
        for (auto& x : v) {
          x = static_cast<Elem>(c % F.q());
          c /= F.q();
        }
        const Vec w = g.mats[a].apply(v);
        std::uint64_t img = 0;
        for (std::size_t i = d; i-- > 0;) img = img * F.q() + w[i];
        P[offset[a] + code] = static_cast<std::uint32_t>(offset[a] + img);
      }
    }
    perms.push_back(std::move(P));
  }
  return StabChain(points, perms).order();
}

Tensor gen_example(const ExampleParams& pr, Rng& rng) {
  const Field F = Field::make(pr.p, pr.k);
  if (pr.name == "dot") {
    const std::size_t n = pr.dims.empty() ? static_cast<std::size_t>(pr.n) : pr.dims[0];
    return dot_tensor(F, n, pr.bimap);
  }
  if (pr.name == "matmul") {
    if (pr.dims.size() != 3) throw std::invalid_argument("matmul needs three dimensions");
    return matmul_tensor(F, pr.dims[0], pr.dims[1], pr.dims[2]);
  }
  if (pr.name == "heisenberg") {
    if (pr.k != 1) throw std::invalid_argument("heisenberg needs a prime field");
    return heisenberg_tensor(F);
  }
  if (pr.name == "family") {
    if (pr.n < 1 || !is_partition(pr.lambda)) throw std::invalid_argument("family needs n >= 1 and a partition");
    Partition lam = pr.lambda;
    lam.resize(static_cast<std::size_t>(pr.n), 0);
    return family_tensor(pr.n, lam, F, rng).bimap;
  }
  if (pr.name == "random") {
    if (pr.dims.empty()) throw std::invalid_argument("random needs dimensions");
    return random_nondegenerate(make_frame(F, pr.dims), rng);
  }
  throw std::invalid_argument("unknown example: " + pr.name);
}

}  // namespace densor
