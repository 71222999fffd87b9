#pragma once

// Pseudo-isomorphism of faithful simple Lie modules: invertible Psi and a Lie
// isomorphism psi with Psi x = psi(x) Psi for every x in L1.

#include <optional>
#include <string>
#include <vector>

#include "densor/chevalley.hpp"
#include "densor/lie.hpp"

namespace densor {

struct PseudoIso {
  std::vector<Matrix> psi;  // psi(x_i) acting on V2, per basis element of L1
  Matrix psi_coords;        // column i: coordinates of psi(x_i) in L2's basis
  Matrix Psi;
};

enum class PseudoIsoStatus { Found, None, Inconclusive };

struct PseudoIsoResult {
  PseudoIsoStatus status = PseudoIsoStatus::None;
  std::optional<PseudoIso> iso;
  std::string reason;
};

/// Reductive L with split type-A minimal ideals and a cyclic abelian part.
/// Candidate psi: ideal matchings x diagram twists x cyclic-algebra maps of
/// the center; each is certified by one intertwiner solve on V.
/// Throws std::domain_error outside that class or when V is not simple.
PseudoIsoResult pseudo_iso(const LieModule& V1, const LieModule& V2, Rng& rng);

/// Same, for L simple (a single type-A ideal).
PseudoIsoResult simple_factor_pseudo_iso(const LieModule& S1, const LieModule& S2, Rng& rng);

/// Exact matrix identity on a full basis, plus psi bijective onto L2.
bool verify_pseudo_iso(const LieModule& V1, const LieModule& V2, const PseudoIso& p);

/// Exhaustive search over PGL(V): some Psi with Psi L1 Psi^-1 = L2. Only for
/// q^(dim V)^2 <= 2^24; throws std::invalid_argument otherwise.
std::optional<Matrix> brute_force_pseudo_iso(const LieModule& V1, const LieModule& V2);

}  // namespace densor
