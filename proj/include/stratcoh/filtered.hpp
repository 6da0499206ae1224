#pragma once

#include <vector>

#include "stratcoh/complex.hpp"

namespace stratcoh::homalg {

/// A cochain complex with a decreasing filtration adapted to its basis: every
/// basis vector carries a level, and F^p is spanned by the vectors of level ≥ p.
struct FilteredComplex {
  CochainComplex complex;
  /// levels[k - complex.lo()][i] = level of basis vector i in degree k.
  std::vector<std::vector<int>> levels;

  int level(int degree, std::size_t index) const;
  /// Range of levels in use; (0, 0) for the zero complex.
  int min_level() const;
  int max_level() const;

  /// Throws FiltrationNotPreserved when some d e_j has a component of lower
  /// level than e_j, naming the degree and the offending basis pair.
  void require_valid() const;
};

/// Every basis vector at the same level: the one-step filtration.
FilteredComplex trivial_filtration(CochainComplex c, int level = 0);

/// Double complex totalization. Column p is `columns[p]`; `horizontal[p]` is a
/// chain map columns[p] → columns[p+1]. The total differential on column p is
/// h + (-1)^p d_vertical; basis is ordered by column, then by the column's
/// own basis. Column p sits at filtration level first_level + p.
/// Throws NotADoubleComplex naming the first square that fails.
FilteredComplex total_complex(const std::vector<CochainComplex>& columns, const std::vector<ChainMap>& horizontal,
                              int first_level = 0);

/// Dual complex with the dual filtration: basis vector e_i* gets level -level(e_i).
FilteredComplex dualize_filtered(const FilteredComplex& f);

}  // namespace stratcoh::homalg
