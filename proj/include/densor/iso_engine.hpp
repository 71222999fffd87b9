#pragma once

// Tensor isomorphism under GL(V_0) x ... x GL(V_{l-1}) acting axis by axis.
// Witnesses w satisfy act(t, w) = s exactly.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "densor/tensor_spaces.hpp"

namespace densor {

enum class Verdict { Isomorphic, NotIsomorphic, Inconclusive };

enum class IsoReason {
  None,
  DerivationAlgebrasNotConjugate,
  DensorMismatch,
  OutsideHypotheses,
  FrameMismatch,
  NondegeneracyProfile,
};

struct IsoResult {
  Verdict verdict = Verdict::Inconclusive;
  std::optional<OperatorTuple> witness;
  IsoReason reason = IsoReason::None;
  std::string detail;
};

std::string to_string(Verdict v);
std::string to_string(IsoReason r);

/// Tiny-densor decision: char not 2 or 3, nondegenerate, dim densor = 1,
/// reductive Der with split type-A ideals acting absolutely irreducibly on
/// every axis. Anything else that is not settled by an invariant comes back
/// inconclusive.
IsoResult tiny_densor_iso(const Tensor& s, const Tensor& t, Rng& rng);

/// Derivation-densor method. Falls through to tiny_densor_iso when the densor
/// is a line; otherwise searches the candidate normalizer elements and never
/// concludes non-isomorphism from that partial search.
IsoResult algorithm1(const Tensor& s, const Tensor& t, Rng& rng);

/// Enumerates GL on all axes but the last two; those two are solved as a
/// linear system R T_I = S_I C with R = phi^T, C = psi^-1. Throws
/// std::invalid_argument past the guard (2^30 leading tuples, 2^22 kernel
/// elements per tuple).
IsoResult brute_force_iso(const Tensor& s, const Tensor& t, ExecPolicy policy = ExecPolicy::Auto);
/// Number of tuples phi with act(t, phi) = s (|Aut(t)| for s = t).
std::uint64_t brute_force_count(const Tensor& s, const Tensor& t, ExecPolicy policy = ExecPolicy::Auto);
bool brute_force_feasible(const Tensor& t);

enum class Method { Auto, Tiny, Brute };
/// Auto: algorithm1, then brute force when it is inconclusive and feasible.
IsoResult decide_iso(const Tensor& s, const Tensor& t, Method m, Rng& rng);

struct AutGenerators {
  std::vector<OperatorTuple> generators;
};

/// Generators of Aut(t): scalar tuples, unipotent root elements, torus
/// elements from the Cartan part of Der(t), and the outer candidates. Each is
/// checked to fix t. Throws std::domain_error outside the tiny-densor class.
AutGenerators aut_generators(const Tensor& t, Rng& rng);

/// Order of the group generated by gens (Schreier-Sims on the vectors of all
/// axes). Empty when there are more than 2^16 points.
std::optional<std::uint64_t> generated_order(const Frame& frame, const std::vector<OperatorTuple>& gens);

/// |GL_d(q)|, saturating at UINT64_MAX.
std::uint64_t gl_order(std::size_t d, std::uint64_t q);

struct ExampleParams {
  std::string name;            // dot, matmul, heisenberg, family, random
  std::vector<std::size_t> dims;
  std::uint32_t p = 5, k = 1;
  int n = 2;                   // family: rank of sl_{n+1}
  std::vector<int> lambda;     // family: highest weight partition
  bool bimap = false;          // dot: (n, n, 1) instead of (n, n)
};

Tensor gen_example(const ExampleParams& params, Rng& rng);

}  // namespace densor
