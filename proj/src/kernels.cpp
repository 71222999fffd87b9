#include "densor/kernels.hpp"

#include <algorithm>
#include <span>

#include <omp.h>

namespace densor {

namespace {

// Below this many entries the fork/join overhead dominates.
constexpr std::size_t kParallelThreshold = 1u << 14;

bool use_parallel(ExecPolicy policy, std::size_t work) {
  if (policy == ExecPolicy::Serial) return false;
  if (policy == ExecPolicy::Parallel) return true;
  return work >= kParallelThreshold && omp_get_max_threads() > 1;
}

std::span<Elem> row(Elem* data, std::size_t cols, std::size_t r) {
  return {data + r * cols, cols};
}

}  // namespace

void set_thread_count(int n) {
  if (n > 0) omp_set_num_threads(n);
}

int thread_count() { return omp_get_max_threads(); }

std::vector<std::size_t> rref_inplace(const Field& F, std::size_t rows, std::size_t cols,
                                      Elem* data, ExecPolicy policy) {
  std::vector<std::size_t> pivots;
  const bool par = use_parallel(policy, rows * cols);
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t r = rank; r < rows; ++r)
      if (data[r * cols + c] != 0) {
        piv = r;
        break;
      }
    if (piv == rows) continue;
    if (piv != rank)
      std::swap_ranges(data + piv * cols + c, data + (piv + 1) * cols, data + rank * cols + c);
    auto prow = row(data, cols, rank);
    const Elem inv = F.inv(prow[c]);
    for (std::size_t j = c; j < cols; ++j) prow[j] = F.mul(prow[j], inv);
    const std::span<const Elem> src(prow.data(), cols);
    const long long n = static_cast<long long>(rows);
    if (par) {
#pragma omp parallel for schedule(static)
      for (long long i = 0; i < n; ++i) {
        if (static_cast<std::size_t>(i) == rank) continue;
        Elem* ri = data + i * cols;
        if (ri[c] != 0) F.sub_mul({ri, cols}, ri[c], src, c);
      }
    } else {
      for (long long i = 0; i < n; ++i) {
        if (static_cast<std::size_t>(i) == rank) continue;
        Elem* ri = data + i * cols;
        if (ri[c] != 0) F.sub_mul({ri, cols}, ri[c], src, c);
      }
    }
    pivots.push_back(c);
    ++rank;
  }
  return pivots;
}

void mode_apply(const Field& F, const std::vector<std::size_t>& dims, std::size_t axis,
                const Elem* M, const Elem* t, Elem* out, ExecPolicy policy) {
  std::size_t outer = 1, inner = 1;
  for (std::size_t a = 0; a < axis; ++a) outer *= dims[a];
  for (std::size_t a = axis + 1; a < dims.size(); ++a) inner *= dims[a];
  const std::size_t d = dims[axis];
  const std::size_t total = outer * d * inner;
  std::fill(out, out + total, 0);
  auto body = [&](std::size_t o) {
    const Elem* tb = t + o * d * inner;
    Elem* ob = out + o * d * inner;
    for (std::size_t j = 0; j < d; ++j) {
      const Elem* tj = tb + j * inner;
      for (std::size_t i = 0; i < d; ++i) {
        const Elem m = M[j * d + i];
        if (m == 0) continue;
        // out_i += m * t_j, phrased as a sub_mul with the negated coefficient.
        F.sub_mul({ob + i * inner, inner}, F.neg(m), {tj, inner});
      }
    }
  };
  const long long n = static_cast<long long>(outer);
  if (use_parallel(policy, total) && outer > 1) {
#pragma omp parallel for schedule(static)
    for (long long o = 0; o < n; ++o) body(static_cast<std::size_t>(o));
  } else {
    for (long long o = 0; o < n; ++o) body(static_cast<std::size_t>(o));
  }
}

}  // namespace densor
