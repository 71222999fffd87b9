#pragma once

// Hot loops with a serial reference and an OpenMP variant. The two produce
// bit-identical output; the parallel one is selected by default above a size
// threshold.

#include <cstddef>
#include <vector>

#include "densor/field.hpp"

namespace densor {

enum class ExecPolicy { Serial, Parallel, Auto };

/// Sets the worker count used by Parallel/Auto kernels (<= 0 keeps the default).
void set_thread_count(int n);
int thread_count();

/// In-place Gauss-Jordan reduction of a rows x cols row-major block. Returns
/// the pivot columns; the first pivots.size() rows are the nonzero RREF rows.
std::vector<std::size_t> rref_inplace(const Field& F, std::size_t rows, std::size_t cols,
                                      Elem* data, ExecPolicy policy = ExecPolicy::Auto);

/// out = t with matrix M applied on one axis:
/// out[.., i, ..] = sum_j M(j, i) * t[.., j, ..], where M is d x d row-major.
void mode_apply(const Field& F, const std::vector<std::size_t>& dims, std::size_t axis,
                const Elem* M, const Elem* t, Elem* out, ExecPolicy policy = ExecPolicy::Auto);

}  // namespace densor
