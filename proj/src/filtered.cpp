#include "stratcoh/filtered.hpp"

#include <algorithm>
#include <climits>

#include "stratcoh/error.hpp"

namespace stratcoh::homalg {

int FilteredComplex::level(int degree, std::size_t index) const {
  return levels.at(static_cast<std::size_t>(degree - complex.lo())).at(index);
}

int FilteredComplex::min_level() const {
  int m = INT_MAX;
  for (const auto& l : levels)
    for (int x : l) m = std::min(m, x);
  return m == INT_MAX ? 0 : m;
}

int FilteredComplex::max_level() const {
  int m = INT_MIN;
  for (const auto& l : levels)
    for (int x : l) m = std::max(m, x);
  return m == INT_MIN ? 0 : m;
}

void FilteredComplex::require_valid() const {
  if (levels.size() != complex.ranks().size())
    throw Error(ErrorCode::FiltrationNotPreserved, "filtration levels cover the wrong number of degrees");
  for (std::size_t i = 0; i < levels.size(); ++i)
    if (levels[i].size() != complex.ranks()[i])
      throw Error(ErrorCode::FiltrationNotPreserved,
                  "filtration levels at degree " + std::to_string(complex.lo() + static_cast<int>(i)) +
                      " do not match the rank");
  for (int k = complex.lo(); k < complex.hi(); ++k) {
    const SparseMatrix d = complex.differential(k);
    for (std::size_t c = 0; c < d.cols(); ++c)
      for (const auto& e : d.column(c))
        if (level(k + 1, e.row) < level(k, c))
          throw Error(ErrorCode::FiltrationNotPreserved,
                      "d maps basis vector " + std::to_string(c) + " of degree " + std::to_string(k) + " (level " +
                          std::to_string(level(k, c)) + ") onto vector " + std::to_string(e.row) + " of level " +
                          std::to_string(level(k + 1, e.row)));
  }
}

FilteredComplex trivial_filtration(CochainComplex c, int level) {
  FilteredComplex f;
  for (auto r : c.ranks()) f.levels.emplace_back(r, level);
  f.complex = std::move(c);
  return f;
}

FilteredComplex total_complex(const std::vector<CochainComplex>& columns, const std::vector<ChainMap>& horizontal,
                              int first_level) {
  if (columns.empty()) return trivial_filtration(CochainComplex(Ring::integers()));
  if (horizontal.size() + 1 != columns.size() && !(horizontal.empty() && columns.size() == 1))
    throw Error(ErrorCode::NotADoubleComplex, "need one horizontal map between each pair of adjacent columns");
  const Ring ring = columns.front().ring();
  for (const auto& c : columns)
    if (!(c.ring() == ring)) throw Error(ErrorCode::RingMismatch, "columns over different rings");

  const std::size_t ncols = columns.size();
  for (std::size_t p = 0; p + 1 < ncols; ++p) {
    const auto& h = horizontal[p];
    for (const auto& [k, b] : h.blocks())
      if (b.rows() != columns[p + 1].rank(k) || b.cols() != columns[p].rank(k))
        throw Error(ErrorCode::NotADoubleComplex, "horizontal block (column " + std::to_string(p) + ", degree " +
                                                      std::to_string(k) + ") has the wrong shape");
    if (auto k = h.first_noncommuting_degree(columns[p], columns[p + 1]))
      throw Error(ErrorCode::NotADoubleComplex, "square at column " + std::to_string(p) + ", vertical degree " +
                                                    std::to_string(*k) + " does not commute");
    if (p + 2 < ncols) {
      ChainMap hh = h.then(horizontal[p + 1]).normalized(ring);
      if (!hh.is_zero())
        throw Error(ErrorCode::NotADoubleComplex,
                    "horizontal maps from column " + std::to_string(p) + " compose to a nonzero map");
    }
  }

  int lo = INT_MAX, hi = INT_MIN;
  for (std::size_t p = 0; p < ncols; ++p) {
    if (columns[p].total_rank() == 0) continue;
    lo = std::min(lo, columns[p].lo() + static_cast<int>(p));
    hi = std::max(hi, columns[p].hi() + static_cast<int>(p));
  }
  if (lo == INT_MAX) return trivial_filtration(CochainComplex(ring));

  // offset[n][p]: first index of column p's summand in total degree n.
  const std::size_t span = static_cast<std::size_t>(hi - lo + 1);
  std::vector<std::vector<std::size_t>> offset(span, std::vector<std::size_t>(ncols, 0));
  std::vector<std::size_t> ranks(span, 0);
  FilteredComplex out;
  out.levels.resize(span);
  bool weighted = std::all_of(columns.begin(), columns.end(),
                              [](const CochainComplex& c) { return c.has_weights() || c.total_rank() == 0; });
  std::vector<std::vector<int>> weights(span);
  for (int n = lo; n <= hi; ++n) {
    const auto s = static_cast<std::size_t>(n - lo);
    for (std::size_t p = 0; p < ncols; ++p) {
      const int q = n - static_cast<int>(p);
      offset[s][p] = ranks[s];
      const std::size_t r = columns[p].rank(q);
      ranks[s] += r;
      out.levels[s].insert(out.levels[s].end(), r, first_level + static_cast<int>(p));
      if (weighted) {
        auto w = columns[p].weights(q);
        weights[s].insert(weights[s].end(), w.begin(), w.end());
      }
    }
  }
  std::vector<SparseMatrix> diffs;
  for (int n = lo; n < hi; ++n) {
    const auto s = static_cast<std::size_t>(n - lo);
    std::vector<Triplet> t;
    for (std::size_t p = 0; p < ncols; ++p) {
      const int q = n - static_cast<int>(p);
      const auto& col = columns[p];
      if (!col.rank(q)) continue;
      const bool odd = p % 2 != 0;
      const SparseMatrix dv = col.differential(q);
      for (std::size_t c = 0; c < dv.cols(); ++c)
        for (const auto& e : dv.column(c))
          t.push_back({offset[s + 1][p] + e.row, offset[s][p] + c, odd ? Integer(-e.value) : e.value});
      if (p + 1 < ncols)
        if (const auto* h = horizontal[p].find(q))
          for (std::size_t c = 0; c < h->cols(); ++c)
            for (const auto& e : h->column(c)) t.push_back({offset[s + 1][p + 1] + e.row, offset[s][p] + c, e.value});
    }
    diffs.push_back(SparseMatrix::from_triplets(ranks[s + 1], ranks[s], std::move(t)));
  }
  std::optional<std::vector<std::vector<int>>> w;
  if (weighted) w = std::move(weights);
  out.complex = CochainComplex(ring, lo, std::move(ranks), std::move(diffs), std::move(w));
  return out;
}

FilteredComplex dualize_filtered(const FilteredComplex& f) {
  FilteredComplex out;
  out.complex = dualize_complex(f.complex);
  for (auto it = f.levels.rbegin(); it != f.levels.rend(); ++it) {
    std::vector<int> l = *it;
    for (auto& x : l) x = -x;
    out.levels.push_back(std::move(l));
  }
  return out;
}

}  // namespace stratcoh::homalg
