#include "stratcoh/linalg.hpp"

#include <algorithm>
#include <numeric>

#include "stratcoh/detail/column_reduction.hpp"
#include "stratcoh/error.hpp"

namespace stratcoh::homalg {

namespace {

void check_stop(const std::stop_token& stop, const char* where) {
  if (stop.stop_requested()) throw Error(ErrorCode::Cancelled, std::string(where) + " interrupted");
}

// Elementary operations applied to A together with the transforms.
struct SmithState {
  IntMatrix A;
  IntMatrix U, V, Ui, Vi;
  bool transforms;
  bool inverses;

  void add_row(std::size_t t, std::size_t s, const Integer& f) {
    A.add_row_multiple(t, s, f);
    if (transforms) U.add_row_multiple(t, s, f);
    if (inverses) Ui.add_col_multiple(s, t, -f);
  }
  void add_col(std::size_t t, std::size_t s, const Integer& f) {
    A.add_col_multiple(t, s, f);
    if (transforms) V.add_col_multiple(t, s, f);
    if (inverses) Vi.add_row_multiple(s, t, -f);
  }
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    A.swap_rows(a, b);
    if (transforms) U.swap_rows(a, b);
    if (inverses) Ui.swap_cols(a, b);
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    A.swap_cols(a, b);
    if (transforms) V.swap_cols(a, b);
    if (inverses) Vi.swap_rows(a, b);
  }
  void negate_row(std::size_t r) {
    A.negate_row(r);
    if (transforms) U.negate_row(r);
    if (inverses) Ui.negate_col(r);
  }
};

}  // namespace

std::vector<Integer> SmithDecomposition::diagonal() const {
  std::vector<Integer> d;
  for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i) d.push_back(D(i, i));
  return d;
}

std::size_t SmithDecomposition::rank() const {
  std::size_t r = 0;
  for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i)
    if (D(i, i) != 0) ++r;
  return r;
}

SmithDecomposition smith_normal_form(const IntMatrix& input, SmithOptions options, std::stop_token stop) {
  const std::size_t m = input.rows(), n = input.cols();
  SmithState s{input, {}, {}, {}, {}, options.transforms || options.inverses, options.inverses};
  if (s.transforms) {
    s.U = IntMatrix::identity(m);
    s.V = IntMatrix::identity(n);
  }
  if (s.inverses) {
    s.Ui = IntMatrix::identity(m);
    s.Vi = IntMatrix::identity(n);
  }
  IntMatrix& A = s.A;

  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    check_stop(stop, "smith_normal_form");
    // Smallest nonzero entry of the trailing block becomes the pivot.
    auto place_min = [&]() -> bool {
      bool found = false;
      Integer best;
      std::size_t bi = 0, bj = 0;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j) {
          const Integer& v = A(i, j);
          if (v == 0) continue;
          Integer av = abs_value(v);
          if (!found || av < best) {
            found = true;
            best = std::move(av);
            bi = i;
            bj = j;
            if (best == 1) goto done;
          }
        }
    done:
      if (!found) return false;
      s.swap_rows(t, bi);
      s.swap_cols(t, bj);
      return true;
    };
    if (!place_min()) break;

    for (;;) {
      bool dirty = false;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (A(i, t) == 0) continue;
        Integer q = A(i, t) / A(t, t);
        if (q != 0) s.add_row(i, t, -q);
        if (A(i, t) != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (A(t, j) == 0) continue;
        Integer q = A(t, j) / A(t, t);
        if (q != 0) s.add_col(j, t, -q);
        if (A(t, j) != 0) dirty = true;
      }
      if (dirty) {
        // A smaller remainder sits in row or column t; bring it to the corner.
        std::size_t bi = t, bj = t;
        Integer best = abs_value(A(t, t));
        for (std::size_t i = t + 1; i < m; ++i)
          if (A(i, t) != 0 && abs_value(A(i, t)) < best) best = abs_value(A(i, t)), bi = i, bj = t;
        for (std::size_t j = t + 1; j < n; ++j)
          if (A(t, j) != 0 && abs_value(A(t, j)) < best) best = abs_value(A(t, j)), bi = t, bj = j;
        s.swap_rows(t, bi);
        s.swap_cols(t, bj);
        continue;
      }
      // Row and column are clear; enforce divisibility of the remaining block.
      bool divides = true;
      for (std::size_t i = t + 1; i < m && divides; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (A(i, j) % A(t, t) != 0) {
            s.add_row(t, i, 1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (A(t, t) < 0) s.negate_row(t);
  }

  SmithDecomposition out;
  out.D = std::move(s.A);
  if (s.transforms) {
    out.U = std::move(s.U);
    out.V = std::move(s.V);
  }
  if (s.inverses) {
    out.U_inverse = std::move(s.Ui);
    out.V_inverse = std::move(s.Vi);
  }
  return out;
}

Integer determinant(const IntMatrix& input) {
  if (input.rows() != input.cols()) throw Error(ErrorCode::Internal, "determinant of a non-square matrix");
  const std::size_t n = input.rows();
  if (n == 0) return 1;
  IntMatrix a = input;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t r = k + 1;
      while (r < n && a(r, k) == 0) ++r;
      if (r == n) return 0;
      a.swap_rows(k, r);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

InvariantFactors invariant_factors(const SparseMatrix& A, std::stop_token stop) {
  using Col = detail::SparseColumn<Integer>;
  const std::size_t m = A.rows(), n = A.cols();
  std::vector<Col> cols(n);
  std::vector<std::vector<std::size_t>> row_cols(m);
  for (std::size_t c = 0; c < n; ++c)
    for (const auto& e : A.column(c)) {
      cols[c].emplace_back(e.row, e.value);
      row_cols[e.row].push_back(c);
    }
  std::vector<char> row_alive(m, 1), col_alive(n, 1);
  std::size_t unit_rank = 0;

  auto entry = [](const Col& col, std::size_t row) -> const Integer* {
    auto it = std::lower_bound(col.begin(), col.end(), row,
                               [](const auto& e, std::size_t r) { return e.first < r; });
    return (it != col.end() && it->first == row) ? &it->second : nullptr;
  };

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  bool progress = true;
  std::size_t steps = 0;
  while (progress) {
    progress = false;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return cols[a].size() < cols[b].size(); });
    for (std::size_t c : order) {
      if (!col_alive[c] || cols[c].empty()) continue;
      if ((++steps & 255) == 0) check_stop(stop, "invariant_factors");
      // Unit entry whose row is least occupied.
      std::size_t best_row = m;
      std::size_t best_cost = 0;
      for (const auto& [r, v] : cols[c]) {
        if (v != 1 && v != -1) continue;
        std::size_t cost = row_cols[r].size();
        if (best_row == m || cost < best_cost) best_row = r, best_cost = cost;
      }
      if (best_row == m) continue;
      const std::size_t r = best_row;
      const Integer pivot = *entry(cols[c], r);
      auto& touched = row_cols[r];
      std::sort(touched.begin(), touched.end());
      touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
      for (std::size_t c2 : touched) {
        if (c2 == c || !col_alive[c2]) continue;
        const Integer* v = entry(cols[c2], r);
        if (!v) continue;
        const Integer factor = *v * pivot;  // pivot = ±1, so v / pivot = v * pivot
        Col merged;
        merged.reserve(cols[c2].size() + cols[c].size());
        std::size_t i = 0, j = 0;
        const Col& x = cols[c2];
        const Col& y = cols[c];
        while (i < x.size() || j < y.size()) {
          if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
            merged.push_back(x[i++]);
          } else if (i == x.size() || y[j].first < x[i].first) {
            merged.emplace_back(y[j].first, -factor * y[j].second);
            row_cols[y[j].first].push_back(c2);
            ++j;
          } else {
            Integer val = x[i].second - factor * y[j].second;
            if (val != 0) merged.emplace_back(x[i].first, std::move(val));
            ++i;
            ++j;
          }
        }
        cols[c2] = std::move(merged);
      }
      // Row r is now supported only in column c; drop both.
      row_alive[r] = 0;
      col_alive[c] = 0;
      cols[c].clear();
      touched.clear();
      ++unit_rank;
      progress = true;
    }
  }

  // Whatever survives goes to the dense reduction. Every live column has
  // zeros in eliminated rows by construction.
  std::vector<std::size_t> live_cols, live_rows;
  std::vector<long> row_index(m, -1);
  for (std::size_t c = 0; c < n; ++c)
    if (col_alive[c] && !cols[c].empty()) {
      live_cols.push_back(c);
      for (const auto& [r, v] : cols[c])
        if (row_index[r] < 0) row_index[r] = 0;
    }
  for (std::size_t r = 0; r < m; ++r)
    if (row_index[r] == 0) {
      row_index[r] = static_cast<long>(live_rows.size());
      live_rows.push_back(r);
    }
  InvariantFactors out;
  out.rank = unit_rank;
  if (!live_cols.empty()) {
    IntMatrix dense(live_rows.size(), live_cols.size());
    for (std::size_t j = 0; j < live_cols.size(); ++j)
      for (const auto& [r, v] : cols[live_cols[j]]) dense(static_cast<std::size_t>(row_index[r]), j) = v;
    auto snf = smith_normal_form(dense, {.transforms = false, .inverses = false}, stop);
    for (const auto& d : snf.diagonal()) {
      if (d == 0) continue;
      ++out.rank;
      if (d > 1) out.torsion.push_back(d);
    }
  }
  return out;
}

std::size_t rank(const SparseMatrix& A, const Ring& ring, std::stop_token stop) {
  if (A.rows() == 0 || A.cols() == 0) return 0;
  std::size_t r = 0;
  if (ring.kind() == Ring::Kind::Fp) {
    detail::ModPField f{ring.characteristic()};
    std::vector<detail::SparseColumn<std::uint64_t>> cols(A.cols());
    for (std::size_t c = 0; c < A.cols(); ++c)
      for (const auto& e : A.column(c)) {
        auto v = f.from(e.value);
        if (v) cols[c].emplace_back(e.row, v);
      }
    auto red = detail::reduce_columns(f, std::move(cols), A.rows(), false, stop);
    for (const auto& c : red.reduced) r += !c.empty();
  } else {
    detail::RationalField f;
    std::vector<detail::SparseColumn<Integer>> cols(A.cols());
    for (std::size_t c = 0; c < A.cols(); ++c)
      for (const auto& e : A.column(c)) cols[c].emplace_back(e.row, e.value);
    auto red = detail::reduce_columns(f, std::move(cols), A.rows(), false, stop);
    for (const auto& c : red.reduced) r += !c.empty();
  }
  return r;
}

namespace {

// Column-echelon reduction by unimodular column operations, processing rows
// top to bottom. Returns the number of pivot columns; afterwards B's columns
// [0, k) are in echelon form and columns [k, n) are zero. W (if given) tracks
// the same column operations.
std::size_t column_echelon(IntMatrix& B, IntMatrix* W, std::vector<std::size_t>* pivot_rows,
                           const std::stop_token& stop) {
  const std::size_t m = B.rows(), n = B.cols();
  std::size_t k = 0;
  auto add_col = [&](std::size_t t, std::size_t s, const Integer& f) {
    B.add_col_multiple(t, s, f);
    if (W) W->add_col_multiple(t, s, f);
  };
  auto swap_col = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    B.swap_cols(a, b);
    if (W) W->swap_cols(a, b);
  };
  for (std::size_t i = 0; i < m && k < n; ++i) {
    check_stop(stop, "column echelon");
    for (;;) {
      std::size_t best = n;
      for (std::size_t j = k; j < n; ++j)
        if (B(i, j) != 0 && (best == n || abs_value(B(i, j)) < abs_value(B(i, best)))) best = j;
      if (best == n) break;
      swap_col(k, best);
      bool clean = true;
      for (std::size_t j = k + 1; j < n; ++j) {
        if (B(i, j) == 0) continue;
        Integer q = B(i, j) / B(i, k);
        add_col(j, k, -q);
        if (B(i, j) != 0) clean = false;
      }
      if (clean) {
        if (pivot_rows) pivot_rows->push_back(i);
        ++k;
        break;
      }
    }
  }
  return k;
}

}  // namespace

IntMatrix integer_kernel(const IntMatrix& A, std::stop_token stop) {
  IntMatrix B = A;
  IntMatrix W = IntMatrix::identity(A.cols());
  const std::size_t k = column_echelon(B, &W, nullptr, stop);
  IntMatrix K(A.cols(), A.cols() - k);
  for (std::size_t r = 0; r < A.cols(); ++r)
    for (std::size_t j = k; j < A.cols(); ++j) K(r, j - k) = W(r, j);
  return K;
}

IntMatrix lattice_basis(const IntMatrix& generators, std::stop_token stop) {
  IntMatrix B = generators;
  const std::size_t k = column_echelon(B, nullptr, nullptr, stop);
  IntMatrix out(B.rows(), k);
  for (std::size_t r = 0; r < B.rows(); ++r)
    for (std::size_t j = 0; j < k; ++j) out(r, j) = B(r, j);
  return out;
}

InvariantFactors lattice_quotient(const IntMatrix& big, const IntMatrix& small, std::stop_token stop) {
  if (big.rows() != small.rows()) throw Error(ErrorCode::Internal, "lattice_quotient: ambient rank mismatch");
  IntMatrix B = big;
  std::vector<std::size_t> pivots;
  const std::size_t k = column_echelon(B, nullptr, &pivots, stop);
  // Coordinates of each small generator in the echelon basis.
  std::vector<Triplet> coords;
  for (std::size_t s = 0; s < small.cols(); ++s) {
    std::vector<Integer> v(small.rows());
    for (std::size_t r = 0; r < small.rows(); ++r) v[r] = small(r, s);
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t pr = pivots[j];
      if (v[pr] == 0) continue;
      if (v[pr] % B(pr, j) != 0)
        throw Error(ErrorCode::Internal, "lattice_quotient: sublattice not contained in lattice");
      Integer c = v[pr] / B(pr, j);
      for (std::size_t r = 0; r < small.rows(); ++r)
        if (B(r, j) != 0) v[r] -= c * B(r, j);
      coords.push_back({j, s, std::move(c)});
    }
    for (const auto& x : v)
      if (x != 0) throw Error(ErrorCode::Internal, "lattice_quotient: sublattice not contained in lattice");
  }
  auto f = invariant_factors(SparseMatrix::from_triplets(k, small.cols(), std::move(coords)), stop);
  InvariantFactors out;
  out.rank = k - f.rank;
  out.torsion = std::move(f.torsion);
  return out;
}

IntMatrix hconcat(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows()) throw Error(ErrorCode::Internal, "hconcat: row counts differ");
  IntMatrix out(a.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a(r, c);
    for (std::size_t c = 0; c < b.cols(); ++c) out(r, a.cols() + c) = b(r, c);
  }
  return out;
}

}  // namespace stratcoh::homalg
