#include "densor/crystal.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "densor/chevalley.hpp"
#include "densor/modules.hpp"

namespace densor {

bool is_partition(const Partition& p) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0) return false;
    if (i > 0 && p[i] > p[i - 1]) return false;
  }
  return true;
}

int partition_size(const Partition& p) { return std::accumulate(p.begin(), p.end(), 0); }

std::vector<int> reading_word(const Tableau& t) {
  std::vector<int> w;
  const int width = t.shape.empty() ? 0 : t.shape[0];
  for (int c = width; c-- > 0;)
    for (std::size_t r = 0; r < t.rows.size() && static_cast<int>(t.rows[r].size()) > c; ++r)
      w.push_back(t.rows[r][c]);
  return w;
}

std::optional<Partition> row_insert(const Partition& Y, int j) {
  const int n = static_cast<int>(Y.size());
  if (j < 1 || j > n + 1) throw std::invalid_argument("row index out of range");
  Partition out = Y;
  if (j <= n) {
    out[j - 1] += 1;
  } else {
    for (auto& v : out) v -= 1;
  }
  if (!is_partition(out)) return std::nullopt;
  return out;
}

std::optional<Partition> iterated_insert(const Partition& Y, const std::vector<int>& word) {
  Partition cur = Y;
  for (int b : word) {
    auto next = row_insert(cur, b);
    if (!next) return std::nullopt;
    cur = std::move(*next);
  }
  return cur;
}

std::vector<Tableau> enumerate_ssyt(const Partition& shape, int alphabet) {
  if (!is_partition(shape)) throw std::invalid_argument("shape is not a partition");
  std::vector<Tableau> out;
  Tableau t;
  t.shape = shape;
  for (int len : shape) t.rows.emplace_back(len, 0);
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t r = 0; r < shape.size(); ++r)
    for (int c = 0; c < shape[r]; ++c) cells.emplace_back(r, c);
  auto rec = [&](auto&& self, std::size_t idx) -> void {
    if (idx == cells.size()) {
      out.push_back(t);
      return;
    }
    auto [r, c] = cells[idx];
    int lo = 1;
    if (c > 0) lo = std::max(lo, t.rows[r][c - 1]);
    if (r > 0) lo = std::max(lo, t.rows[r - 1][c] + 1);
    for (int v = lo; v <= alphabet; ++v) {
      t.rows[r][c] = v;
      self(self, idx + 1);
    }
    t.rows[r][c] = 0;
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end(),
            [](const Tableau& a, const Tableau& b) { return reading_word(a) < reading_word(b); });
  return out;
}

std::map<Partition, long> lr_decomposition(const Partition& lambda, const Partition& mu) {
  if (lambda.size() != mu.size()) throw std::invalid_argument("partitions need the same number of parts");
  if (!is_partition(lambda) || !is_partition(mu)) throw std::invalid_argument("not a partition");
  std::map<Partition, long> out;
  const int alphabet = static_cast<int>(lambda.size()) + 1;
  for (const auto& T : enumerate_ssyt(mu, alphabet)) {
    auto nu = iterated_insert(lambda, reading_word(T));
    if (nu) out[*nu]++;
  }
  return out;
}

long lr_coefficient(const Partition& lambda, const Partition& mu, const Partition& nu) {
  if (nu.size() != lambda.size()) throw std::invalid_argument("partitions need the same number of parts");
  auto d = lr_decomposition(lambda, mu);
  auto it = d.find(nu);
  return it == d.end() ? 0 : it->second;
}

Partition adjoint_partition(int n) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  Partition p(n, 1);
  p[0] = 2;
  return p;
}

long lr_adjoint_formula(const Partition& lambda) {
  std::set<int> s;
  for (int v : lambda)
    if (v > 0) s.insert(v);
  return static_cast<long>(s.size());
}

int divisor_count(int m, int n) {
  if (m < 1 || n < 1) throw std::invalid_argument("divisor_count needs m, n >= 1");
  int c = 0;
  for (int l = 1; l <= std::min(m, n); ++l)
    if (m % l == 0) ++c;
  return c;
}

long weyl_dimension(const Partition& lambda) {
  Partition ext = lambda;
  ext.push_back(0);
  const std::size_t N = ext.size();
  // Exact rational product, reduced as we go.
  long num = 1, den = 1;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j) {
      num *= ext[i] - ext[j] + static_cast<long>(j - i);
      den *= static_cast<long>(j - i);
      const long g = std::gcd(num, den);
      num /= g;
      den /= g;
    }
  return num / den;
}

std::vector<Partition> family_partitions(int m, int n) {
  std::vector<Partition> out;
  for (int l = 1; l <= std::min(m, n); ++l) {
    if (m % l != 0 || m / l > n) continue;
    Partition p(n, 0);
    for (int i = 0; i < m / l; ++i) p[i] = l;
    out.push_back(p);
  }
  return out;
}

Matrix exterior_power_action(const Matrix& x, std::size_t k) {
  const Field& F = x.field();
  const std::size_t N = x.rows();
  std::vector<std::vector<std::size_t>> subsets;
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (cur.size() == k) {
      subsets.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < N; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  std::map<std::vector<std::size_t>, std::size_t> index;
  for (std::size_t i = 0; i < subsets.size(); ++i) index[subsets[i]] = i;
  Matrix out(F, subsets.size(), subsets.size());
  for (std::size_t col = 0; col < subsets.size(); ++col) {
    const auto& S = subsets[col];
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t i = 0; i < N; ++i) {
        const Elem c = x(i, S[r]);
        if (c == 0) continue;
        if (i != S[r] && std::find(S.begin(), S.end(), i) != S.end()) continue;
        std::vector<std::size_t> T = S;
        T[r] = i;
        // Sort, tracking the sign of the permutation.
        bool odd = false;
        for (std::size_t a = 0; a < k; ++a)
          for (std::size_t b = a + 1; b < k; ++b)
            if (T[a] > T[b]) odd = !odd;
        std::sort(T.begin(), T.end());
        const std::size_t row = index.at(T);
        out(row, col) = F.add(out(row, col), odd ? F.neg(c) : c);
      }
  }
  return out;
}

LieModule build_simple_module(int n, const Partition& lambda, const Field& F, Rng& rng) {
  if (n < 1 || static_cast<int>(lambda.size()) != n || !is_partition(lambda))
    throw std::invalid_argument("lambda must be a partition with n parts");
  const std::size_t N = static_cast<std::size_t>(n) + 1;
  if (N % F.p() == 0) throw std::invalid_argument("characteristic divides n+1");
  if (static_cast<long>(F.p()) <= partition_size(lambda))
    throw std::invalid_argument("characteristic must exceed |lambda|");
  const auto basis = sl_standard_basis(F, N);
  // Factors: lambda = sum_k a_k omega_k with a_k = lambda_k - lambda_{k+1}.
  std::vector<std::size_t> factors;
  for (int k = 1; k <= n; ++k) {
    const int a = lambda[k - 1] - (k < n ? lambda[k] : 0);
    for (int i = 0; i < a; ++i) factors.push_back(static_cast<std::size_t>(k));
  }
  std::vector<Matrix> action;
  for (const auto& x : basis) {
    std::vector<Matrix> parts;
    for (std::size_t k : factors) parts.push_back(exterior_power_action(x, k));
    Matrix total(F, 1, 1);
    if (!parts.empty()) {
      std::size_t dim = 1;
      for (const auto& p : parts) dim *= p.rows();
      total = Matrix(F, dim, dim);
      for (std::size_t t = 0; t < parts.size(); ++t) {
        Matrix term = Matrix::identity(F, 1);
        for (std::size_t s = 0; s < parts.size(); ++s)
          term = kron(term, s == t ? parts[s] : Matrix::identity(F, parts[s].rows()));
        total = total + term;
      }
    }
    action.push_back(std::move(total));
  }
  const std::size_t W = action[0].rows();
  Vec top(W, 0);
  top[0] = 1;  // e_1 ^ ... ^ e_k in every factor
  Subspace S = spin(action, {top}, W);
  LieModule M{F, S.dim(), restrict_action(action, S)};
  if (!meataxe_split(M.action, M.dim, rng).simple)
    throw std::runtime_error("spun module is not simple; refusing to guess in small characteristic");
  return M;
}

Tensor brahana_algebra(const Tensor& t) {
  const Field& F = t.field();
  const std::size_t l = t.dims()[0], m = t.dims()[1];
  if (t.dims().size() != 3 || t.dims()[2] != m) throw std::invalid_argument("need a module bimap L x M -> M");
  const std::size_t N = 2 * m + l;
  Tensor out(make_frame(F, {N, N, N}));
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k) {
        const Elem c = t.at({i, j, k});
        if (c == 0) continue;
        out.at({m + i, j, m + l + k}) = c;        // x . n
        out.at({j, m + i, m + l + k}) = F.neg(c); // - y . m
      }
  return out;
}

FamilyMember family_tensor(int n, const Partition& lambda, const Field& F, Rng& rng) {
  FamilyMember fm;
  fm.lambda = lambda;
  fm.module = build_simple_module(n, lambda, F, rng);
  const std::size_t l = fm.module.action.size(), m = fm.module.dim;
  fm.bimap = Tensor(make_frame(F, {l, m, m}));
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k) fm.bimap.at({i, j, k}) = fm.module.action[i](k, j);
  fm.brahana = brahana_algebra(fm.bimap);
  return fm;
}

}  // namespace densor
