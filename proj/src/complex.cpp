#include "stratcoh/complex.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "stratcoh/error.hpp"
#include "stratcoh/linalg.hpp"
#include "stratcoh/parallel.hpp"

namespace stratcoh::homalg {

namespace {

const ModuleCell kEmptyCell{};

SparseMatrix reduce_into(const SparseMatrix& m, const Ring& ring) {
  if (ring.kind() == Ring::Kind::Fp) return m.reduced_mod(ring.characteristic());
  return m;
}

// Rows and columns selected by index lists (positions in the lists become the
// new indices).
SparseMatrix submatrix(const SparseMatrix& m, const std::vector<std::size_t>& rows,
                       const std::vector<std::size_t>& cols) {
  std::vector<long> row_pos(m.rows(), -1);
  for (std::size_t i = 0; i < rows.size(); ++i) row_pos[rows[i]] = static_cast<long>(i);
  SparseMatrix out(rows.size(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    SparseMatrix::Column col;
    for (const auto& e : m.column(cols[j]))
      if (row_pos[e.row] >= 0) col.push_back({static_cast<std::size_t>(row_pos[e.row]), e.value});
    std::sort(col.begin(), col.end(), [](const auto& a, const auto& b) { return a.row < b.row; });
    out.set_column(j, std::move(col));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- GradedModule

const ModuleCell& GradedModule::at(int degree) const {
  auto it = cells_.find(degree);
  return it == cells_.end() ? kEmptyCell : it->second;
}

void GradedModule::set(int degree, ModuleCell cell) {
  if (cell.is_zero()) cells_.erase(degree);
  else cells_[degree] = std::move(cell);
}

std::vector<int> GradedModule::degrees() const {
  std::vector<int> out;
  for (const auto& [d, c] : cells_)
    if (!c.is_zero()) out.push_back(d);
  return out;
}

bool GradedModule::has_weights() const {
  for (const auto& [d, c] : cells_)
    if (!c.weights.empty()) return true;
  return false;
}

long long GradedModule::euler_characteristic() const {
  long long chi = 0;
  for (const auto& [d, c] : cells_) chi += (d % 2 == 0 ? 1 : -1) * static_cast<long long>(c.rank);
  return chi;
}

std::map<int, long long> GradedModule::weighted_euler_characteristic() const {
  std::map<int, long long> out;
  for (const auto& [d, c] : cells_)
    for (const auto& [w, r] : c.weights) out[w] += (d % 2 == 0 ? 1 : -1) * static_cast<long long>(r);
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

std::map<int, std::size_t> GradedModule::betti() const {
  std::map<int, std::size_t> out;
  for (const auto& [d, c] : cells_)
    if (c.rank) out[d] = c.rank;
  return out;
}

std::string GradedModule::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (int d : degrees()) {
    const auto& c = at(d);
    os << (first ? "" : ", ") << "H^" << d << " = ";
    first = false;
    bool any = false;
    if (c.rank) {
      os << "R^" << c.rank;
      any = true;
    }
    for (const auto& t : c.torsion) {
      os << (any ? " + " : "") << "Z/" << t;
      any = true;
    }
  }
  if (first) os << "0";
  return os.str();
}

bool operator==(const GradedModule& a, const GradedModule& b) {
  auto da = a.degrees(), db = b.degrees();
  if (da != db) return false;
  for (int d : da)
    if (!(a.at(d) == b.at(d))) return false;
  return true;
}

// -------------------------------------------------------------- CochainComplex

CochainComplex::CochainComplex(Ring ring, int lo, std::vector<std::size_t> ranks,
                               std::vector<SparseMatrix> differentials,
                               std::optional<std::vector<std::vector<int>>> weights)
    : ring_(ring), lo_(lo), ranks_(std::move(ranks)) {
  if (differentials.size() > ranks_.size())
    throw Error(ErrorCode::InvalidComplex, "more differentials than degrees");
  diffs_.resize(ranks_.empty() ? 0 : ranks_.size() - 1);
  for (std::size_t i = 0; i < differentials.size(); ++i) {
    const std::size_t rows = i + 1 < ranks_.size() ? ranks_[i + 1] : 0;
    const auto& d = differentials[i];
    if (d.rows() != rows || d.cols() != ranks_[i]) {
      // A zero matrix of any shape at the top degree is tolerated.
      if (i + 1 == ranks_.size() && d.is_zero()) continue;
      throw Error(ErrorCode::InvalidComplex, "differential at degree " + std::to_string(lo + static_cast<int>(i)) +
                                                 " has shape " + std::to_string(d.rows()) + "x" +
                                                 std::to_string(d.cols()) + ", expected " + std::to_string(rows) +
                                                 "x" + std::to_string(ranks_[i]));
    }
    if (i + 1 < ranks_.size()) diffs_[i] = reduce_into(d, ring_);
  }
  for (std::size_t i = differentials.size(); i < diffs_.size(); ++i) diffs_[i] = SparseMatrix(ranks_[i + 1], ranks_[i]);
  set_weights(std::move(weights));
}

void CochainComplex::set_weights(std::optional<std::vector<std::vector<int>>> weights) {
  if (weights) {
    if (weights->size() != ranks_.size())
      throw Error(ErrorCode::InvalidComplex, "weight table covers " + std::to_string(weights->size()) +
                                                 " degrees, complex has " + std::to_string(ranks_.size()));
    for (std::size_t i = 0; i < ranks_.size(); ++i)
      if ((*weights)[i].size() != ranks_[i])
        throw Error(ErrorCode::InvalidComplex,
                    "weight list at degree " + std::to_string(lo_ + static_cast<int>(i)) + " has wrong length");
  }
  weights_ = std::move(weights);
}

std::size_t CochainComplex::rank(int degree) const {
  if (degree < lo_ || degree > hi()) return 0;
  return ranks_[static_cast<std::size_t>(degree - lo_)];
}

std::size_t CochainComplex::total_rank() const {
  std::size_t n = 0;
  for (auto r : ranks_) n += r;
  return n;
}

SparseMatrix CochainComplex::differential(int degree) const {
  if (degree >= lo_ && degree < hi()) return diffs_[static_cast<std::size_t>(degree - lo_)];
  return SparseMatrix(rank(degree + 1), rank(degree));
}

std::vector<int> CochainComplex::weights(int degree) const {
  if (!weights_ || degree < lo_ || degree > hi()) return {};
  return (*weights_)[static_cast<std::size_t>(degree - lo_)];
}

bool CochainComplex::is_weight_homogeneous() const {
  if (!weights_) return false;
  for (std::size_t i = 0; i < diffs_.size(); ++i) {
    const auto& src = (*weights_)[i];
    const auto& dst = (*weights_)[i + 1];
    for (std::size_t c = 0; c < diffs_[i].cols(); ++c)
      for (const auto& e : diffs_[i].column(c))
        if (src[c] != dst[e.row]) return false;
  }
  return true;
}

void CochainComplex::require_valid() const {
  for (std::size_t i = 0; i < diffs_.size(); ++i) {
    if (diffs_[i].rows() != ranks_[i + 1] || diffs_[i].cols() != ranks_[i])
      throw Error(ErrorCode::InvalidComplex, "differential shape mismatch at degree " +
                                                 std::to_string(lo_ + static_cast<int>(i)));
    if (ring_.kind() == Ring::Kind::Fp)
      for (std::size_t c = 0; c < diffs_[i].cols(); ++c)
        for (const auto& e : diffs_[i].column(c))
          if (e.value < 0 || e.value >= ring_.characteristic())
            throw Error(ErrorCode::InvalidComplex, "entry not reduced mod p");
  }
  for (std::size_t i = 0; i + 1 < diffs_.size(); ++i) {
    SparseMatrix dd = reduce_into(diffs_[i + 1] * diffs_[i], ring_);
    if (!dd.is_zero())
      throw Error(ErrorCode::InvalidComplex,
                  "d∘d ≠ 0 from degree " + std::to_string(lo_ + static_cast<int>(i)) + " to " +
                      std::to_string(lo_ + static_cast<int>(i) + 2));
  }
}

// -------------------------------------------------------------------- ChainMap

ChainMap ChainMap::identity(const CochainComplex& c) {
  std::map<int, SparseMatrix> blocks;
  for (int k = c.lo(); k <= c.hi(); ++k)
    if (c.rank(k)) blocks[k] = SparseMatrix::identity(c.rank(k));
  return ChainMap(std::move(blocks));
}

const SparseMatrix* ChainMap::find(int degree) const {
  auto it = blocks_.find(degree);
  return it == blocks_.end() ? nullptr : &it->second;
}

SparseMatrix ChainMap::block(int degree, const CochainComplex& source, const CochainComplex& target) const {
  if (const auto* b = find(degree)) return *b;
  return SparseMatrix(target.rank(degree), source.rank(degree));
}

void ChainMap::set_block(int degree, SparseMatrix m) {
  if (m.is_zero()) blocks_.erase(degree);
  else blocks_[degree] = std::move(m);
}

bool ChainMap::is_zero() const {
  return std::all_of(blocks_.begin(), blocks_.end(), [](const auto& kv) { return kv.second.is_zero(); });
}

std::optional<int> ChainMap::first_noncommuting_degree(const CochainComplex& s, const CochainComplex& t) const {
  const int lo = std::min(s.lo(), t.lo()) - 1;
  const int hi = std::max(s.hi(), t.hi());
  for (int k = lo; k <= hi; ++k) {
    SparseMatrix left = t.differential(k) * block(k, s, t);
    SparseMatrix right = block(k + 1, s, t) * s.differential(k);
    if (!reduce_into(left - right, t.ring()).is_zero()) return k;
  }
  return std::nullopt;
}

void ChainMap::require_valid(const CochainComplex& s, const CochainComplex& t) const {
  if (!(s.ring() == t.ring())) throw Error(ErrorCode::RingMismatch, "chain map between complexes over different rings");
  for (const auto& [k, b] : blocks_)
    if (b.rows() != t.rank(k) || b.cols() != s.rank(k))
      throw Error(ErrorCode::InvalidChainMap, "block at degree " + std::to_string(k) + " has shape " +
                                                  std::to_string(b.rows()) + "x" + std::to_string(b.cols()) +
                                                  ", expected " + std::to_string(t.rank(k)) + "x" +
                                                  std::to_string(s.rank(k)));
  if (auto k = first_noncommuting_degree(s, t))
    throw Error(ErrorCode::InvalidChainMap, "map does not commute with d at degree " + std::to_string(*k));
}

ChainMap ChainMap::then(const ChainMap& after) const {
  std::map<int, SparseMatrix> out;
  for (const auto& [k, b] : blocks_)
    if (const auto* a = after.find(k)) {
      SparseMatrix m = *a * b;
      if (!m.is_zero()) out[k] = std::move(m);
    }
  return ChainMap(std::move(out));
}

ChainMap ChainMap::normalized(const Ring& ring) const {
  std::map<int, SparseMatrix> out;
  for (const auto& [k, b] : blocks_) {
    SparseMatrix m = reduce_into(b, ring);
    if (!m.is_zero()) out[k] = std::move(m);
  }
  return ChainMap(std::move(out));
}

bool ChainMap::equals(const ChainMap& other, const Ring& ring) const {
  std::set<int> degrees;
  for (const auto& [k, b] : blocks_) degrees.insert(k);
  for (const auto& [k, b] : other.blocks_) degrees.insert(k);
  for (int k : degrees) {
    const auto* a = find(k);
    const auto* b = other.find(k);
    if (a && b) {
      if (a->rows() != b->rows() || a->cols() != b->cols()) return false;
      if (!reduce_into(*a - *b, ring).is_zero()) return false;
    } else if (a) {
      if (!reduce_into(*a, ring).is_zero()) return false;
    } else if (!reduce_into(*b, ring).is_zero()) {
      return false;
    }
  }
  return true;
}

// ------------------------------------------------------------------ cohomology

namespace {

GradedModule unweighted_cohomology(const CochainComplex& c, const std::stop_token& stop) {
  GradedModule out;
  if (c.total_rank() == 0) return out;
  const int lo = c.lo(), hi = c.hi();
  // d at degrees lo .. hi-1 (only these can be nonzero).
  const std::size_t count = hi > lo ? static_cast<std::size_t>(hi - lo) : 0;
  std::vector<InvariantFactors> facts(count);
  parallel_for(count, [&](std::size_t i) {
    const SparseMatrix d = c.differential(lo + static_cast<int>(i));
    if (c.ring().is_integers()) facts[i] = invariant_factors(d, stop);
    else facts[i].rank = rank(d, c.ring(), stop);
  });
  auto rank_at = [&](int k) -> std::size_t {
    if (k < lo || k >= hi) return 0;
    return facts[static_cast<std::size_t>(k - lo)].rank;
  };
  for (int k = lo; k <= hi; ++k) {
    ModuleCell cell;
    cell.rank = c.rank(k) - rank_at(k) - rank_at(k - 1);
    if (c.ring().is_integers() && k - 1 >= lo && k - 1 < hi) cell.torsion = facts[static_cast<std::size_t>(k - 1 - lo)].torsion;
    out.set(k, std::move(cell));
  }
  return out;
}

}  // namespace

GradedModule cohomology(const CochainComplex& c, std::stop_token stop) {
  if (!c.has_weights()) return unweighted_cohomology(c, stop);
  if (!c.is_weight_homogeneous()) {
    auto out = unweighted_cohomology(c, stop);
    out.weights_dropped = true;
    return out;
  }
  // Homogeneous: the complex splits as a direct sum over weights.
  std::set<int> all;
  for (int k = c.lo(); k <= c.hi(); ++k)
    for (int w : c.weights(k)) all.insert(w);
  GradedModule out;
  std::map<int, std::vector<Integer>> torsion;
  for (int w : all) {
    std::vector<std::vector<std::size_t>> idx;
    std::vector<std::size_t> ranks;
    for (int k = c.lo(); k <= c.hi(); ++k) {
      std::vector<std::size_t> sel;
      auto ws = c.weights(k);
      for (std::size_t i = 0; i < ws.size(); ++i)
        if (ws[i] == w) sel.push_back(i);
      ranks.push_back(sel.size());
      idx.push_back(std::move(sel));
    }
    std::vector<SparseMatrix> diffs;
    for (int k = c.lo(); k < c.hi(); ++k) {
      const auto i = static_cast<std::size_t>(k - c.lo());
      diffs.push_back(submatrix(c.differential(k), idx[i + 1], idx[i]));
    }
    CochainComplex part(c.ring(), c.lo(), ranks, std::move(diffs));
    auto h = unweighted_cohomology(part, stop);
    for (int k : h.degrees()) {
      auto& cell = out.cell(k);
      const auto& hc = h.at(k);
      cell.rank += hc.rank;
      if (hc.rank) cell.weights[w] += hc.rank;
      auto& t = torsion[k];
      t.insert(t.end(), hc.torsion.begin(), hc.torsion.end());
    }
  }
  for (auto& [k, t] : torsion) out.cell(k).torsion = normalize_torsion(std::move(t));
  GradedModule clean;
  for (int k : out.degrees()) clean.set(k, out.at(k));
  return clean;
}

// ---------------------------------------------------------------- constructions

CochainComplex tensor_complex(const CochainComplex& a, const CochainComplex& b) {
  if (!(a.ring() == b.ring())) throw Error(ErrorCode::RingMismatch, "tensor of complexes over different rings");
  if (a.total_rank() == 0 || b.total_rank() == 0) return CochainComplex(a.ring());
  const int lo = a.lo() + b.lo(), hi = a.hi() + b.hi();
  // offset[n][i] = start of the (i, n-i) block within degree n.
  std::vector<std::map<int, std::size_t>> offset(static_cast<std::size_t>(hi - lo + 1));
  std::vector<std::size_t> ranks(offset.size(), 0);
  for (int n = lo; n <= hi; ++n) {
    auto& off = offset[static_cast<std::size_t>(n - lo)];
    std::size_t pos = 0;
    for (int i = a.lo(); i <= a.hi(); ++i) {
      const int j = n - i;
      off[i] = pos;
      pos += a.rank(i) * b.rank(j);
    }
    ranks[static_cast<std::size_t>(n - lo)] = pos;
  }
  std::vector<SparseMatrix> diffs;
  for (int n = lo; n < hi; ++n) {
    const auto& src = offset[static_cast<std::size_t>(n - lo)];
    const auto& dst = offset[static_cast<std::size_t>(n + 1 - lo)];
    std::vector<Triplet> t;
    for (int i = a.lo(); i <= a.hi(); ++i) {
      const int j = n - i;
      const std::size_t ra = a.rank(i), rb = b.rank(j);
      if (!ra || !rb) continue;
      const std::size_t s0 = src.at(i);
      if (i + 1 <= a.hi()) {
        const SparseMatrix da = a.differential(i);
        const std::size_t t0 = dst.at(i + 1);
        for (std::size_t x = 0; x < ra; ++x)
          for (const auto& e : da.column(x))
            for (std::size_t y = 0; y < rb; ++y) t.push_back({t0 + e.row * rb + y, s0 + x * rb + y, e.value});
      }
      if (j + 1 <= b.hi()) {
        const SparseMatrix db = b.differential(j);
        const std::size_t t0 = dst.at(i);
        const std::size_t rb2 = b.rank(j + 1);
        const bool odd = (i % 2) != 0;
        for (std::size_t x = 0; x < ra; ++x)
          for (std::size_t y = 0; y < rb; ++y)
            for (const auto& e : db.column(y))
              t.push_back({t0 + x * rb2 + e.row, s0 + x * rb + y, odd ? Integer(-e.value) : e.value});
      }
    }
    diffs.push_back(SparseMatrix::from_triplets(ranks[static_cast<std::size_t>(n + 1 - lo)],
                                                ranks[static_cast<std::size_t>(n - lo)], std::move(t)));
  }
  std::optional<std::vector<std::vector<int>>> weights;
  if (a.has_weights() && b.has_weights()) {
    weights.emplace();
    for (int n = lo; n <= hi; ++n) {
      std::vector<int> w;
      for (int i = a.lo(); i <= a.hi(); ++i) {
        const int j = n - i;
        auto wa = a.weights(i), wb = b.weights(j);
        for (int x : wa)
          for (int y : wb) w.push_back(x + y);
      }
      weights->push_back(std::move(w));
    }
  }
  return CochainComplex(a.ring(), lo, std::move(ranks), std::move(diffs), std::move(weights));
}

ChainMap tensor_maps(const ChainMap& f, const CochainComplex& a, const CochainComplex& a2, const ChainMap& g,
                     const CochainComplex& b, const CochainComplex& b2) {
  std::map<int, SparseMatrix> blocks;
  if (a.total_rank() == 0 || b.total_rank() == 0) return ChainMap();
  const int lo = a.lo() + b.lo(), hi = a.hi() + b.hi();
  for (int n = lo; n <= hi; ++n) {
    std::vector<Triplet> t;
    std::size_t src = 0, rows = 0, cols = 0;
    // target offsets within degree n of a2 ⊗ b2
    std::map<int, std::size_t> dst;
    if (a2.total_rank() && b2.total_rank())
      for (int i = a2.lo(); i <= a2.hi(); ++i) {
        dst[i] = rows;
        rows += a2.rank(i) * b2.rank(n - i);
      }
    for (int i = a.lo(); i <= a.hi(); ++i) {
      const int j = n - i;
      const std::size_t ra = a.rank(i), rb = b.rank(j);
      if (ra && rb && dst.count(i)) {
        const auto* fi = f.find(i);
        const auto* gj = g.find(j);
        if (fi && gj) {
          const std::size_t rb2 = b2.rank(j);
          for (std::size_t x = 0; x < ra; ++x)
            for (const auto& ef : fi->column(x))
              for (std::size_t y = 0; y < rb; ++y)
                for (const auto& eg : gj->column(y))
                  t.push_back({dst[i] + ef.row * rb2 + eg.row, src + x * rb + y, ef.value * eg.value});
        }
      }
      src += ra * rb;
    }
    cols = src;
    auto m = SparseMatrix::from_triplets(rows, cols, std::move(t));
    if (!m.is_zero()) blocks[n] = std::move(m);
  }
  return ChainMap(std::move(blocks));
}

CochainComplex shift(const CochainComplex& c, int n) {
  std::vector<SparseMatrix> diffs;
  for (int k = c.lo(); k < c.hi(); ++k) diffs.push_back(n % 2 ? c.differential(k).negated() : c.differential(k));
  std::optional<std::vector<std::vector<int>>> weights;
  if (c.has_weights()) {
    weights.emplace();
    for (int k = c.lo(); k <= c.hi(); ++k) weights->push_back(c.weights(k));
  }
  return CochainComplex(c.ring(), c.lo() + n, c.ranks(), std::move(diffs), std::move(weights));
}

CochainComplex base_change(const CochainComplex& c, const Ring& target) {
  if (!(c.ring() == target) && !c.ring().is_integers())
    throw Error(ErrorCode::RingMismatch, "cannot change base from " + c.ring().to_string() + " to " + target.to_string());
  std::vector<SparseMatrix> diffs;
  for (int k = c.lo(); k < c.hi(); ++k) diffs.push_back(c.differential(k));
  std::optional<std::vector<std::vector<int>>> weights;
  if (c.has_weights()) {
    weights.emplace();
    for (int k = c.lo(); k <= c.hi(); ++k) weights->push_back(c.weights(k));
  }
  return CochainComplex(target, c.lo(), c.ranks(), std::move(diffs), std::move(weights));
}

CochainComplex dualize_complex(const CochainComplex& c) {
  if (c.total_rank() == 0) return CochainComplex(c.ring());
  std::vector<std::size_t> ranks(c.ranks().rbegin(), c.ranks().rend());
  std::vector<SparseMatrix> diffs;
  // New degree -k -> -k+1 is the transpose of d_{k-1}.
  for (int k = c.hi(); k > c.lo(); --k) diffs.push_back(c.differential(k - 1).transpose());
  std::optional<std::vector<std::vector<int>>> weights;
  if (c.has_weights()) {
    weights.emplace();
    for (int k = c.hi(); k >= c.lo(); --k) {
      auto w = c.weights(k);
      for (auto& x : w) x = -x;
      weights->push_back(std::move(w));
    }
  }
  return CochainComplex(c.ring(), -c.hi(), std::move(ranks), std::move(diffs), std::move(weights));
}

GradedModule borel_moore_dual(const GradedModule& hc, const Ring& ring) {
  GradedModule out;
  std::set<int> degrees;
  for (int d : hc.degrees()) {
    degrees.insert(d);
    degrees.insert(d - 1);
  }
  for (int i : degrees) {
    ModuleCell cell;
    cell.rank = hc.rank(i);
    for (const auto& [w, r] : hc.at(i).weights) cell.weights[-w] = r;
    if (ring.is_integers()) cell.torsion = hc.torsion(i + 1);
    out.set(i, std::move(cell));
  }
  out.weights_dropped = hc.weights_dropped;
  return out;
}

GradedModule negate_degrees(const GradedModule& m) {
  GradedModule out;
  for (int d : m.degrees()) out.set(-d, m.at(d));
  out.weights_dropped = m.weights_dropped;
  return out;
}

long long euler_characteristic(const CochainComplex& c) {
  long long chi = 0;
  for (int k = c.lo(); k <= c.hi(); ++k) chi += (k % 2 == 0 ? 1 : -1) * static_cast<long long>(c.rank(k));
  return chi;
}

std::map<int, long long> weighted_euler_characteristic(const CochainComplex& c) {
  std::map<int, long long> out;
  for (int k = c.lo(); k <= c.hi(); ++k)
    for (int w : c.weights(k)) out[w] += (k % 2 == 0 ? 1 : -1);
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

}  // namespace stratcoh::homalg
