#pragma once

// Independent reference computations used only by the tests: dense rational
// linear algebra, the textbook Z_r / B_r page formula, and random complexes
// assembled from elementary pieces whose answers are known in advance.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <map>
#include <random>
#include <vector>

#include "stratcoh/complex.hpp"
#include "stratcoh/filtered.hpp"
#include "stratcoh/poset.hpp"
#include "stratcoh/strat.hpp"

namespace oracle {

using stratcoh::Integer;
using stratcoh::IntMatrix;
using stratcoh::SparseMatrix;
using stratcoh::Triplet;
using Rational = boost::multiprecision::cpp_rational;

struct QMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<Rational> a;
  QMatrix() = default;
  QMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}
  Rational& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

inline QMatrix to_q(const IntMatrix& m) {
  QMatrix q(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) q(i, j) = Rational(m(i, j));
  return q;
}

inline QMatrix to_q(const SparseMatrix& m) { return to_q(m.to_dense()); }

inline QMatrix multiply(const QMatrix& x, const QMatrix& y) {
  QMatrix out(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t k = 0; k < x.cols; ++k) {
      if (x(i, k) == 0) continue;
      for (std::size_t j = 0; j < y.cols; ++j) out(i, j) += x(i, k) * y(k, j);
    }
  return out;
}

// Reduced row echelon form in place; returns pivot columns.
inline std::vector<std::size_t> rref(QMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
    std::size_t p = r;
    while (p < m.rows && m(p, c) == 0) ++p;
    if (p == m.rows) continue;
    for (std::size_t j = 0; j < m.cols; ++j) std::swap(m(r, j), m(p, j));
    Rational inv = 1 / m(r, c);
    for (std::size_t j = 0; j < m.cols; ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (i == r || m(i, c) == 0) continue;
      Rational f = m(i, c);
      for (std::size_t j = 0; j < m.cols; ++j) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank(QMatrix m) { return rref(m).size(); }

// Columns spanning the null space.
inline QMatrix nullspace(QMatrix m) {
  auto pivots = rref(m);
  std::vector<char> is_pivot(m.cols, 0);
  for (auto c : pivots) is_pivot[c] = 1;
  std::vector<std::size_t> free;
  for (std::size_t c = 0; c < m.cols; ++c)
    if (!is_pivot[c]) free.push_back(c);
  QMatrix out(m.cols, free.size());
  for (std::size_t k = 0; k < free.size(); ++k) {
    out(free[k], k) = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) out(pivots[i], k) = -m(i, free[k]);
  }
  return out;
}

inline QMatrix hcat(const QMatrix& x, const QMatrix& y) {
  QMatrix out(x.rows, x.cols + y.cols);
  for (std::size_t i = 0; i < x.rows; ++i) {
    for (std::size_t j = 0; j < x.cols; ++j) out(i, j) = x(i, j);
    for (std::size_t j = 0; j < y.cols; ++j) out(i, x.cols + j) = y(i, j);
  }
  return out;
}

// Columns of `basis_in` selected by row predicate: spanning set of
// {x ∈ span(e_i : keep(i))}.
template <class Keep>
QMatrix coordinate_subspace(std::size_t n, Keep keep) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < n; ++i)
    if (keep(i)) idx.push_back(i);
  QMatrix out(n, idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) out(idx[k], k) = 1;
  return out;
}

// Z_r^p in degree n: {x ∈ F^p C^n : d x ∈ F^{p+r} C^{n+1}}, as spanning columns.
inline QMatrix cycles(const stratcoh::homalg::FilteredComplex& f, int n, int p, int r) {
  const auto& C = f.complex;
  const std::size_t rn = C.rank(n), rn1 = C.rank(n + 1);
  QMatrix Fp = coordinate_subspace(rn, [&](std::size_t i) { return f.level(n, i) >= p; });
  if (Fp.cols == 0) return Fp;
  QMatrix d = to_q(C.differential(n));
  QMatrix dx = multiply(d, Fp);
  // rows of d x lying below level p + r must vanish
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < rn1; ++i)
    if (f.level(n + 1, i) < p + r) bad.push_back(i);
  QMatrix cond(bad.size(), Fp.cols);
  for (std::size_t i = 0; i < bad.size(); ++i)
    for (std::size_t j = 0; j < Fp.cols; ++j) cond(i, j) = dx(bad[i], j);
  QMatrix k = nullspace(cond);
  return multiply(Fp, k);
}

// dim E_r^{p, n-p} = dim Z_r^p / (Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1}).
inline std::size_t page_dim(const stratcoh::homalg::FilteredComplex& f, int r, int p, int n) {
  const auto& C = f.complex;
  if (C.rank(n) == 0) return 0;
  QMatrix z = cycles(f, n, p, r);
  QMatrix z_up = cycles(f, n, p + 1, r - 1);
  QMatrix denom = z_up;
  if (C.rank(n - 1)) {
    QMatrix src = cycles(f, n - 1, p - r + 1, r - 1);
    QMatrix img = multiply(to_q(C.differential(n - 1)), src);
    denom = hcat(denom, img);
  }
  const std::size_t dz = rank(z);
  const std::size_t dd = denom.cols ? rank(denom) : 0;
  return dz - dd;
}

// ------------------------------------------------------------------ generators

struct Piece {
  int degree;       // degree of the generator (or of the source of a pair)
  int level;        // its filtration level
  bool pair;        // false: a lone cycle x; true: x ↦ m·y with y one degree up
  int target_level; // level of y (≥ level)
  long long multiplier;
};

struct KnownComplex {
  stratcoh::homalg::FilteredComplex filtered;
  std::vector<Piece> pieces;
};

// Random unimodular basis change preserving the filtration (elementary
// operations e_t += c e_s only from lower to higher-or-equal level, which is
// closed under inverses), applied as d' = G d G^{-1}.
inline KnownComplex assemble(const std::vector<Piece>& pieces, std::mt19937& rng, int lo, int hi,
                             int mixing_steps = 12) {
  std::map<int, std::vector<int>> levels;
  // place basis
  struct Slot { int degree; std::size_t index; };
  std::vector<std::pair<Slot, Slot>> arrows;
  std::vector<long long> mults;
  for (const auto& pc : pieces) {
    auto& lv = levels[pc.degree];
    Slot x{pc.degree, lv.size()};
    lv.push_back(pc.level);
    if (pc.pair) {
      auto& lv2 = levels[pc.degree + 1];
      Slot y{pc.degree + 1, lv2.size()};
      lv2.push_back(pc.target_level);
      arrows.push_back({x, y});
      mults.push_back(pc.multiplier);
    }
  }
  std::map<int, IntMatrix> d;
  for (int k = lo; k < hi; ++k) d[k] = IntMatrix(levels[k + 1].size(), levels[k].size());
  for (std::size_t a = 0; a < arrows.size(); ++a) d[arrows[a].first.degree](arrows[a].second.index, arrows[a].first.index) = mults[a];
  // mixing: coordinates change x' = G x; d_k' = G_{k+1} d_k G_k^{-1}
  std::uniform_int_distribution<int> coef(-2, 2);
  for (int k = lo; k <= hi; ++k) {
    const std::size_t n = levels[k].size();
    if (n < 2) continue;
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (int s = 0; s < mixing_steps; ++s) {
      std::size_t t = pick(rng), src = pick(rng);
      if (t == src) continue;
      // basis vector e_src ↦ e_src + c e_t is allowed when level(t) ≥ level(src);
      // in coordinates that is row_t += c row_src of G.
      if (levels[k][t] < levels[k][src]) continue;
      int c = coef(rng);
      if (!c) continue;
      // d_k' = G_{k+1} d_k G_k^{-1}: column op on d_k (col_src -= c col_t) and row op on d_{k-1}.
      if (d.count(k)) d[k].add_col_multiple(src, t, -c);
      if (d.count(k - 1)) d[k - 1].add_row_multiple(t, src, c);
    }
  }
  std::vector<std::size_t> ranks;
  std::vector<SparseMatrix> diffs;
  KnownComplex out;
  for (int k = lo; k <= hi; ++k) {
    ranks.push_back(levels[k].size());
    out.filtered.levels.push_back(levels[k]);
    if (k < hi) diffs.push_back(SparseMatrix::from_dense(d[k]));
  }
  out.filtered.complex = stratcoh::homalg::CochainComplex(stratcoh::Ring::integers(), lo, ranks, diffs);
  out.pieces = pieces;
  return out;
}

inline KnownComplex random_known(std::mt19937& rng, int lo, int hi, int max_level, bool torsion) {
  std::uniform_int_distribution<int> count(1, 6), deg(lo, hi), lev(0, max_level), kind(0, 2);
  std::uniform_int_distribution<int> mult(2, 6);
  std::vector<Piece> pieces;
  const int n = count(rng) + 2;
  for (int i = 0; i < n; ++i) {
    Piece pc{};
    pc.degree = deg(rng);
    pc.level = lev(rng);
    pc.pair = kind(rng) != 0 && pc.degree < hi;
    pc.target_level = pc.pair ? std::uniform_int_distribution<int>(pc.level, max_level)(rng) : pc.level;
    pc.multiplier = pc.pair ? (torsion && kind(rng) == 1 ? mult(rng) : (kind(rng) ? 1 : -1)) : 0;
    pieces.push_back(pc);
  }
  return assemble(pieces, rng, lo, hi);
}

// Cohomology over Z read off the pieces.
inline stratcoh::homalg::GradedModule known_cohomology(const std::vector<Piece>& pieces) {
  std::map<int, std::size_t> free;
  std::map<int, std::vector<Integer>> tors;
  for (const auto& pc : pieces) {
    if (!pc.pair) ++free[pc.degree];
    else if (pc.multiplier != 1 && pc.multiplier != -1) tors[pc.degree + 1].push_back(Integer(pc.multiplier < 0 ? -pc.multiplier : pc.multiplier));
  }
  stratcoh::homalg::GradedModule m;
  std::map<int, char> degrees;
  for (auto& [k, v] : free) degrees[k] = 1;
  for (auto& [k, v] : tors) degrees[k] = 1;
  for (auto& [k, _] : degrees) {
    stratcoh::homalg::ModuleCell c;
    c.rank = free[k];
    c.torsion = stratcoh::normalize_torsion(tors[k]);
    m.set(k, c);
  }
  return m;
}

// Dimension of E_r^{p,q} over a field of characteristic `p_char` (0 for Q).
inline std::map<std::pair<int, int>, std::size_t> known_page(const std::vector<Piece>& pieces, int r,
                                                             long long p_char) {
  std::map<std::pair<int, int>, std::size_t> dims;
  for (const auto& pc : pieces) {
    const bool dies = pc.pair && (p_char == 0 || pc.multiplier % p_char != 0);
    if (!pc.pair || !dies) {
      ++dims[{pc.level, pc.degree - pc.level}];
      if (pc.pair) ++dims[{pc.target_level, pc.degree + 1 - pc.target_level}];
      continue;
    }
    const int gap = pc.target_level - pc.level;
    if (gap >= r) {
      ++dims[{pc.level, pc.degree - pc.level}];
      ++dims[{pc.target_level, pc.degree + 1 - pc.target_level}];
    }
  }
  return dims;
}

// ---------------------------------------------------------------------- posets

// Random DAG on n labelled elements, edges only from lower to higher index.
inline stratcoh::poset::Poset random_poset(std::mt19937& rng, std::size_t n, double density) {
  std::bernoulli_distribution edge(density);
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("e" + std::to_string(i));
  std::vector<std::pair<std::size_t, std::size_t>> rel;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (edge(rng)) rel.emplace_back(i, j);
  // shuffle element order so the index order is not a linear extension
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::string> shuffled(n);
  for (std::size_t i = 0; i < n; ++i) shuffled[perm[i]] = ids[i];
  for (auto& [a, b] : rel) a = perm[a], b = perm[b];
  return stratcoh::poset::Poset::from_relations(shuffled, rel);
}

// Strictly increasing function with random jumps.
inline stratcoh::poset::IncreasingFunction random_sigma(std::mt19937& rng, const stratcoh::poset::Poset& p) {
  std::uniform_int_distribution<int> jump(1, 3), base(-2, 2);
  std::vector<int> v(p.size(), 0);
  for (auto e : p.linear_extension()) {
    if (p.lower_covers(e).empty()) v[e] = base(rng);
    for (auto a : p.lower_covers(e)) v[e] = std::max(v[e], v[a] + jump(rng));
  }
  return {v};
}

// Number of chains with k elements in the subset, by brute force over subsets.
inline std::map<std::size_t, std::size_t> brute_chain_counts(const stratcoh::poset::Poset& p,
                                                             const std::vector<std::size_t>& support) {
  std::map<std::size_t, std::size_t> out;
  const std::size_t m = support.size();
  for (std::size_t mask = 1; mask < (std::size_t(1) << m); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < m; ++i)
      if (mask >> i & 1) s.push_back(support[i]);
    bool chain = true;
    for (std::size_t i = 0; i < s.size() && chain; ++i)
      for (std::size_t j = i + 1; j < s.size(); ++j)
        if (!p.comparable(s[i], s[j])) {
          chain = false;
          break;
        }
    if (chain) ++out[s.size()];
  }
  return out;
}


// -------------------------------------------------------------- split models

// C(α) = ⊕_{γ ≥ α} V_γ with projections as restrictions, then every C(α) gets
// a random unimodular change of basis. The open stratum S_γ then has
// H_c(S_γ) = H(V_γ), which `open` records from the hidden pieces.
struct SplitModel {
  stratcoh::strat::StratifiedSpaceModel model;
  std::vector<stratcoh::homalg::GradedModule> open;
};

// `P` must have a bottom. With `weighted`, every V_γ sits at one weight and
// basis mixing stays inside a weight.
inline SplitModel split_model_on(std::mt19937& rng, const stratcoh::poset::Poset& P, int lo, int hi, bool torsion,
                                 bool weighted = false, int mixing_steps = 10) {
  using stratcoh::poset::Element;
  SplitModel out;
  auto& m = out.model;
  m.poset = P;
  const std::size_t N = P.size();
  std::vector<KnownComplex> V;
  std::vector<int> wt(N, 0);
  std::uniform_int_distribution<int> wdist(0, 2);
  for (std::size_t g = 0; g < N; ++g) {
    V.push_back(random_known(rng, lo, hi, 0, torsion));
    out.open.push_back(known_cohomology(V.back().pieces));
    if (weighted) {
      wt[g] = wdist(rng);
      for (int k : out.open.back().degrees()) out.open.back().cell(k).weights[wt[g]] = out.open.back().rank(k);
    }
  }
  // block layout: offset of V_γ inside C(α) in degree k
  std::vector<std::map<int, std::map<Element, std::size_t>>> off(N);
  std::vector<std::map<int, std::size_t>> rank(N);
  std::vector<std::map<int, std::vector<int>>> bw(N);  // basis weights
  std::vector<std::map<int, IntMatrix>> d(N);
  for (Element a = 0; a < N; ++a) {
    for (int k = lo; k <= hi; ++k) {
      std::size_t r = 0;
      for (Element g = 0; g < N; ++g)
        if (P.leq(a, g)) {
          off[a][k][g] = r;
          r += V[g].filtered.complex.rank(k);
          bw[a][k].resize(r, wt[g]);
        }
      rank[a][k] = r;
    }
    for (int k = lo; k < hi; ++k) {
      IntMatrix M(rank[a][k + 1], rank[a][k]);
      for (auto [g, o] : off[a][k]) {
        auto D = V[g].filtered.complex.differential(k).to_dense();
        const std::size_t o2 = off[a][k + 1][g];
        for (std::size_t i = 0; i < D.rows(); ++i)
          for (std::size_t j = 0; j < D.cols(); ++j) M(o2 + i, o + j) = D(i, j);
      }
      d[a][k] = M;
    }
  }
  std::map<std::pair<Element, Element>, std::map<int, IntMatrix>> R;
  for (auto [a, b] : P.covers())
    for (int k = lo; k <= hi; ++k) {
      IntMatrix M(rank[b][k], rank[a][k]);
      for (auto [g, o] : off[b][k]) {
        const std::size_t oa = off[a][k][g];
        for (std::size_t i = 0; i < V[g].filtered.complex.rank(k); ++i) M(o + i, oa + i) = 1;
      }
      R[{a, b}][k] = M;
    }
  std::uniform_int_distribution<int> coef(-2, 2);
  for (Element a = 0; a < N; ++a)
    for (int k = lo; k <= hi; ++k) {
      const std::size_t r = rank[a][k];
      if (r < 2) continue;
      std::uniform_int_distribution<std::size_t> pick(0, r - 1);
      for (int s = 0; s < mixing_steps; ++s) {
        std::size_t t = pick(rng), src = pick(rng);
        int c = coef(rng);
        if (t == src || !c || bw[a][k][t] != bw[a][k][src]) continue;
        // x' = G x with G = I + c E_{t,src}
        if (d[a].count(k)) d[a][k].add_col_multiple(src, t, -c);
        if (d[a].count(k - 1)) d[a][k - 1].add_row_multiple(t, src, c);
        for (auto b : P.upper_covers(a)) R[{a, b}][k].add_col_multiple(src, t, -c);
        for (auto g : P.lower_covers(a)) R[{g, a}][k].add_row_multiple(t, src, c);
      }
    }
  for (Element a = 0; a < N; ++a) {
    std::vector<std::size_t> ranks;
    std::vector<SparseMatrix> diffs;
    std::vector<std::vector<int>> weights;
    for (int k = lo; k <= hi; ++k) {
      ranks.push_back(rank[a][k]);
      weights.push_back(bw[a][k]);
      if (k < hi) diffs.push_back(SparseMatrix::from_dense(d[a][k]));
    }
    m.strata.emplace_back(stratcoh::Ring::integers(), lo, ranks, diffs,
                          weighted ? std::optional(weights) : std::nullopt);
  }
  for (auto& [key, blocks] : R) {
    std::map<int, SparseMatrix> sb;
    for (auto& [k, M] : blocks) sb[k] = SparseMatrix::from_dense(M);
    m.restrictions[key] = stratcoh::homalg::ChainMap(sb);
  }
  auto sig = random_sigma(rng, P);
  const int s0 = sig(*P.bottom());
  for (auto& v : sig.values) v -= s0;
  m.sigma = sig;
  return out;
}

inline SplitModel random_split_model(std::mt19937& rng, std::size_t n, double density, int lo, int hi,
                                     bool torsion, int mixing_steps = 10) {
  using stratcoh::poset::Element;
  auto base = random_poset(rng, n, density);
  std::vector<std::string> ids = base.ids();
  ids.push_back("z");
  auto rel = base.covers();
  for (Element i = 0; i < n; ++i) rel.emplace_back(n, i);
  return split_model_on(rng, stratcoh::poset::Poset::from_relations(ids, rel), lo, hi, torsion, false, mixing_steps);
}

}  // namespace oracle
