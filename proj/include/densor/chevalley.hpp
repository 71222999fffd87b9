#pragma once

// Recognition of split type-A simple Lie algebras sl_{n+1}(K).

#include <optional>
#include <string>
#include <vector>

#include "densor/lie.hpp"

namespace densor {

/// Standard basis of sl_N: E_ij (i != j) row-major, then h_i = E_ii - E_{i+1,i+1}.
std::vector<Matrix> sl_standard_basis(const Field& F, std::size_t N);

/// Coordinates of a trace-zero N x N matrix in sl_standard_basis.
Vec sl_standard_coordinates(const Matrix& y);

struct TypeARecognition {
  std::size_t n = 0;               // rank; the standard algebra is sl_{n+1}
  std::vector<Matrix> to_std;      // image of each basis element of M
  std::vector<Matrix> from_std;    // image of each standard basis element, in M
  std::vector<Matrix> cartan;
  std::vector<Matrix> e, f, h;     // Chevalley generators in M

  Matrix to_standard(const MatrixLieAlgebra& M, const Matrix& x) const;
  Matrix from_standard(const Matrix& y) const;
};

enum class RecognitionStatus { Recognized, NotTypeA, Inconclusive, Unsupported };

struct RecognitionOutcome {
  RecognitionStatus status = RecognitionStatus::NotTypeA;
  std::optional<TypeARecognition> rec;
  std::string diagnostic;
};

/// Las Vegas search for a split Cartan subalgebra (256 tries), then a simple
/// root chain and the map E_{i,i+1} -> e_i, E_{i+1,i} -> f_i.
RecognitionOutcome recognize_type_a(const MatrixLieAlgebra& M, Rng& rng);

/// Bracket table of M carried exactly onto sl_{n+1}.
bool verify_recognition(const MatrixLieAlgebra& M, const TypeARecognition& rec);

/// x-bar: transpose along the opposite diagonal. Reverses products.
Matrix anti_transpose(const Matrix& x);

/// Outer automorphism x -> -x-bar of sl_N (the identity for N = 2).
Matrix twist_matrix(const Matrix& x);

/// Images of the standard basis of sl_{n+1} under the diagram twist.
std::vector<Matrix> diagram_twist(const TypeARecognition& rec);

}  // namespace densor
