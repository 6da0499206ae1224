#include "stratcoh/specseq.hpp"

#include <algorithm>
#include <climits>
#include <numeric>

#include "stratcoh/detail/column_reduction.hpp"
#include "stratcoh/error.hpp"
#include "stratcoh/linalg.hpp"
#include "stratcoh/parallel.hpp"

namespace stratcoh::specseq {

std::size_t Page::dim(int p, int q) const {
  auto it = dims.find({p, q});
  return it == dims.end() ? 0 : it->second;
}

std::size_t Page::differential_rank(int p, int q) const {
  auto it = differential_ranks.find({p, q});
  return it == differential_ranks.end() ? 0 : it->second;
}

const Page& SpectralSequence::page(int r) const {
  if (pages.empty()) throw Error(ErrorCode::Internal, "spectral sequence has no pages");
  if (r < 1) throw Error(ErrorCode::Internal, "pages start at r = 1");
  return pages[std::min<std::size_t>(static_cast<std::size_t>(r - 1), pages.size() - 1)];
}

namespace {

struct Pair {
  std::size_t source;  // basis index in degree n
  std::size_t target;  // basis index in degree n + 1
  int source_level;
  int target_level;
  std::vector<std::pair<std::size_t, Integer>> source_vector;  // V_j, basis coordinates in degree n
  std::vector<std::pair<std::size_t, Integer>> target_vector;  // R_j, basis coordinates in degree n + 1
};

struct DegreeReduction {
  std::vector<Pair> pairs;
  // Columns of d_n that reduced to zero, with their cycle vectors.
  std::vector<char> cycle;
  std::vector<std::vector<std::pair<std::size_t, Integer>>> cycle_vectors;
};

// Basis indices of one degree sorted by (level descending, index).
std::vector<std::size_t> filtration_order(const std::vector<int>& levels) {
  std::vector<std::size_t> order(levels.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return levels[a] > levels[b]; });
  return order;
}

template <class Field>
DegreeReduction reduce_degree(const Field& field, const FilteredComplex& f, int n, bool track,
                              const std::stop_token& stop) {
  using Value = typename Field::Value;
  const auto& C = f.complex;
  const std::size_t cols = C.rank(n), rows = C.rank(n + 1);
  static const std::vector<int> kNone;
  const auto& col_levels = cols ? f.levels[static_cast<std::size_t>(n - C.lo())] : kNone;
  const auto& row_levels = rows ? f.levels[static_cast<std::size_t>(n + 1 - C.lo())] : kNone;
  auto col_order = filtration_order(col_levels);
  auto row_order = filtration_order(row_levels);
  std::vector<std::size_t> row_pos(rows);
  for (std::size_t i = 0; i < rows; ++i) row_pos[row_order[i]] = i;

  const SparseMatrix d = C.differential(n);
  std::vector<detail::SparseColumn<Value>> columns(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    for (const auto& e : d.column(col_order[j])) {
      Value v = field.from(e.value);
      if (v != Value(0)) columns[j].emplace_back(row_pos[e.row], v);
    }
    std::sort(columns[j].begin(), columns[j].end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  auto red = detail::reduce_columns(field, std::move(columns), rows, track, stop);

  DegreeReduction out;
  out.cycle.assign(cols, 0);
  if (track) out.cycle_vectors.resize(cols);
  auto to_basis = [&](const detail::SparseColumn<Value>& v, const std::vector<std::size_t>& order) {
    std::vector<std::pair<std::size_t, Integer>> w;
    for (const auto& [pos, x] : v) w.emplace_back(order[pos], field.to_integer(x));
    std::sort(w.begin(), w.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return w;
  };
  for (std::size_t j = 0; j < cols; ++j) {
    const std::size_t b = col_order[j];
    if (red.reduced[j].empty()) {
      out.cycle[b] = 1;
      if (track) out.cycle_vectors[b] = to_basis(red.tracking[j], col_order);
      continue;
    }
    Pair pr;
    pr.source = b;
    pr.target = row_order[red.reduced[j].back().first];
    pr.source_level = col_levels[b];
    pr.target_level = row_levels[pr.target];
    if (track) {
      pr.source_vector = to_basis(red.tracking[j], col_order);
      pr.target_vector = to_basis(red.reduced[j], row_order);
    }
    out.pairs.push_back(std::move(pr));
  }
  return out;
}

}  // namespace

SpectralSequence pages(const FilteredComplex& f, PagesOptions options, std::stop_token stop) {
  const auto& C = f.complex;
  if (!C.ring().is_field())
    throw Error(ErrorCode::NotAField, "pages need field coefficients; use integral_filtration over Z");
  f.require_valid();

  SpectralSequence s;
  s.ring = C.ring();
  s.min_level = f.min_level();
  s.max_level = f.max_level();
  const int width = s.max_level - s.min_level;
  const bool track = options.representatives;

  const int lo = C.lo(), hi = C.hi();
  const std::size_t span = C.total_rank() ? static_cast<std::size_t>(hi - lo + 1) : 0;
  std::vector<DegreeReduction> reductions(span);
  parallel_for(span, [&](std::size_t i) {
    const int n = lo + static_cast<int>(i);
    if (C.ring().kind() == Ring::Kind::Fp)
      reductions[i] = reduce_degree(detail::ModPField{C.ring().characteristic()}, f, n, track, stop);
    else
      reductions[i] = reduce_degree(detail::RationalField{}, f, n, track, stop);
  });

  // Classes: essential cycles and both ends of pairs with a positive gap.
  struct Class {
    int p, n;
    int last_page;  // INT_MAX when permanent
    std::vector<std::pair<std::size_t, Integer>> vector;
    long partner = -1;  // index of the target class for sources
  };
  std::vector<Class> classes;
  int max_gap = 0;
  for (std::size_t i = 0; i < span; ++i) {
    const int n = lo + static_cast<int>(i);
    const auto& red = reductions[i];
    std::vector<char> is_target(C.rank(n), 0);
    if (i > 0)
      for (const auto& pr : reductions[i - 1].pairs) is_target[pr.target] = 1;
    for (std::size_t b = 0; b < C.rank(n); ++b)
      if (red.cycle[b] && !is_target[b])
        classes.push_back({f.level(n, b), n, INT_MAX, track ? red.cycle_vectors[b] : decltype(Class::vector){}, -1});
    for (const auto& pr : red.pairs) {
      const int gap = pr.target_level - pr.source_level;
      if (gap < 0) throw Error(ErrorCode::Internal, "negative persistence gap");
      if (gap == 0) continue;
      max_gap = std::max(max_gap, gap);
      classes.push_back({pr.source_level, n, gap, pr.source_vector, static_cast<long>(classes.size() + 1)});
      classes.push_back({pr.target_level, n + 1, gap, pr.target_vector, -1});
    }
  }

  int last = width + 1;
  if (options.max_page > 0 && options.max_page < last) {
    last = options.max_page;
    s.truncated = true;
  }
  s.stabilization_page = max_gap + 1;
  for (int r = 1; r <= last; ++r) {
    Page page;
    page.r = r;
    std::map<Bidegree, std::vector<std::size_t>> alive;
    for (std::size_t k = 0; k < classes.size(); ++k) {
      const auto& c = classes[k];
      if (c.last_page < r) continue;
      const Bidegree pq{c.p, c.n - c.p};
      ++page.dims[pq];
      if (track) alive[pq].push_back(k);
    }
    for (std::size_t k = 0; k < classes.size(); ++k) {
      const auto& c = classes[k];
      if (c.partner >= 0 && c.last_page == r) ++page.differential_ranks[{c.p, c.n - c.p}];
    }
    if (track) {
      for (const auto& [pq, src] : alive) {
        const Bidegree tq{pq.first + r, pq.second - r + 1};
        auto it = alive.find(tq);
        const std::size_t rows = it == alive.end() ? 0 : it->second.size();
        std::vector<Triplet> t;
        for (std::size_t col = 0; col < src.size(); ++col) {
          const auto& c = classes[src[col]];
          if (c.partner < 0 || c.last_page != r) continue;
          auto pos = std::find(it->second.begin(), it->second.end(), static_cast<std::size_t>(c.partner));
          t.push_back({static_cast<std::size_t>(pos - it->second.begin()), col, Integer(1)});
        }
        if (!t.empty()) page.differentials[pq] = SparseMatrix::from_triplets(rows, src.size(), std::move(t));
      }
    }
    s.pages.push_back(std::move(page));
  }
  if (track)
    for (const auto& c : classes) s.representatives.push_back({c.n, c.p, 1, c.last_page, c.vector});

  s.abutment = homalg::cohomology(C, stop);
  std::map<int, std::size_t> einf;
  for (const auto& c : classes)
    if (c.last_page == INT_MAX) {
      ++einf[c.n];
      ++s.abutment_graded[{c.p, c.n}];
    }
  for (int n = lo; n <= hi; ++n)
    if (einf[n] != s.abutment.rank(n))
      throw Error(ErrorCode::Internal, "E_∞ does not add up to the abutment in degree " + std::to_string(n));
  return s;
}

IntegralFiltration integral_filtration(const FilteredComplex& f, std::stop_token stop) {
  const auto& C = f.complex;
  if (!C.ring().is_integers()) throw Error(ErrorCode::RingMismatch, "integral_filtration needs Z coefficients");
  f.require_valid();
  IntegralFiltration out;
  out.abutment = homalg::cohomology(C, stop);
  const int pmin = f.min_level(), pmax = f.max_level();
  for (int n = C.lo(); n <= C.hi(); ++n) {
    const std::size_t rn = C.rank(n);
    if (!rn) continue;
    const IntMatrix dn = C.differential(n).to_dense();
    const IntMatrix boundary = C.differential(n - 1).to_dense();
    std::vector<IntMatrix> A;  // A[p - pmin] for p = pmin .. pmax + 1
    for (int p = pmin; p <= pmax + 1; ++p) {
      std::vector<std::size_t> keep;
      for (std::size_t b = 0; b < rn; ++b)
        if (f.level(n, b) >= p) keep.push_back(b);
      IntMatrix restricted(dn.rows(), keep.size());
      for (std::size_t r = 0; r < dn.rows(); ++r)
        for (std::size_t j = 0; j < keep.size(); ++j) restricted(r, j) = dn(r, keep[j]);
      IntMatrix k = homalg::integer_kernel(restricted, stop);
      IntMatrix z(rn, k.cols());
      for (std::size_t j = 0; j < keep.size(); ++j)
        for (std::size_t c = 0; c < k.cols(); ++c) z(keep[j], c) = k(j, c);
      A.push_back(homalg::lattice_basis(homalg::hconcat(z, boundary), stop));
    }
    for (int p = pmin; p <= pmax; ++p) {
      auto q = homalg::lattice_quotient(A[static_cast<std::size_t>(p - pmin)],
                                         A[static_cast<std::size_t>(p - pmin + 1)], stop);
      ModuleCell cell;
      cell.rank = q.rank;
      cell.torsion = q.torsion;
      if (!cell.is_zero()) out.graded[{p, n}] = std::move(cell);
    }
  }
  return out;
}

EulerProfile euler_profile(const SpectralSequence& s) {
  EulerProfile e;
  for (const auto& page : s.pages) {
    auto& deg = e.per_degree[page.r];
    long long total = 0;
    for (const auto& [pq, dim] : page.dims) {
      const int n = pq.first + pq.second;
      const long long v = (n % 2 == 0 ? 1 : -1) * static_cast<long long>(dim);
      deg[n] += v;
      total += v;
    }
    e.per_page[page.r] = total;
  }
  e.abutment = s.abutment.euler_characteristic();
  for (const auto& [r, chi] : e.per_page)
    if (chi != e.abutment) e.constant = false;
  return e;
}

int degeneration_page(const SpectralSequence& s) { return s.stabilization_page; }

}  // namespace stratcoh::specseq
