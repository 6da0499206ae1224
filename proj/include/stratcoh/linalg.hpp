#pragma once

#include <stop_token>
#include <vector>

#include "stratcoh/matrix.hpp"
#include "stratcoh/ring.hpp"

namespace stratcoh::homalg {

/// U·A·V = D with U, V unimodular and D diagonal, d_1 | d_2 | ... (all d_i ≥ 0).
struct SmithDecomposition {
  IntMatrix U;
  IntMatrix D;
  IntMatrix V;
  /// Filled only when requested: U⁻¹ and V⁻¹.
  IntMatrix U_inverse;
  IntMatrix V_inverse;

  std::vector<Integer> diagonal() const;
  std::size_t rank() const;
};

struct SmithOptions {
  bool transforms = true;
  bool inverses = false;
};

SmithDecomposition smith_normal_form(const IntMatrix& A, SmithOptions options = {},
                                     std::stop_token stop = {});

/// Fraction-free (Bareiss) determinant of a square matrix.
Integer determinant(const IntMatrix& A);

struct InvariantFactors {
  std::size_t rank = 0;
  /// Invariant factors strictly greater than one, in divisibility order.
  std::vector<Integer> torsion;
};

/// Invariant factors of a sparse integer matrix. Unit pivots are eliminated
/// sparsely first; whatever remains is handed to a dense Smith reduction.
InvariantFactors invariant_factors(const SparseMatrix& A, std::stop_token stop = {});

/// Rank over the given ring (Z and Q give the same answer).
std::size_t rank(const SparseMatrix& A, const Ring& ring, std::stop_token stop = {});

/// Columns form a Z-basis of the saturated lattice {x : A x = 0}.
IntMatrix integer_kernel(const IntMatrix& A, std::stop_token stop = {});

/// A basis (as columns, in column echelon form) for the Z-span of the columns.
IntMatrix lattice_basis(const IntMatrix& generators, std::stop_token stop = {});

/// Structure of the quotient lattice span(big) / span(small), where span(small)
/// must be contained in span(big). Returns the free rank and torsion.
InvariantFactors lattice_quotient(const IntMatrix& big, const IntMatrix& small,
                                  std::stop_token stop = {});

/// Horizontal concatenation [a | b]; row counts must agree.
IntMatrix hconcat(const IntMatrix& a, const IntMatrix& b);

}  // namespace stratcoh::homalg
