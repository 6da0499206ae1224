#include "stratcoh/poset.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "stratcoh/error.hpp"

namespace stratcoh::poset {

// ----------------------------------------------------------------------- Poset

Poset Poset::from_cover_relations(std::vector<std::string> elements,
                                  const std::vector<std::pair<std::string, std::string>>& relations) {
  std::unordered_map<std::string, Element> lookup;
  for (std::size_t i = 0; i < elements.size(); ++i)
    if (!lookup.emplace(elements[i], i).second)
      throw Error(ErrorCode::DuplicateElement, "element '" + elements[i] + "' listed twice");
  std::vector<std::pair<Element, Element>> rel;
  for (const auto& [a, b] : relations) {
    auto ia = lookup.find(a), ib = lookup.find(b);
    if (ia == lookup.end()) throw Error(ErrorCode::UnknownElement, "cover refers to unknown element '" + a + "'");
    if (ib == lookup.end()) throw Error(ErrorCode::UnknownElement, "cover refers to unknown element '" + b + "'");
    rel.emplace_back(ia->second, ib->second);
  }
  return from_relations(std::move(elements), rel);
}

Poset Poset::from_relations(std::vector<std::string> elements, const std::vector<std::pair<Element, Element>>& relations) {
  Poset p;
  const std::size_t n = elements.size();
  for (std::size_t i = 0; i < n; ++i)
    if (!p.lookup_.emplace(elements[i], i).second)
      throw Error(ErrorCode::DuplicateElement, "element '" + elements[i] + "' listed twice");
  p.ids_ = std::move(elements);

  std::vector<std::vector<Element>> succ(n);
  std::vector<std::size_t> indeg(n, 0);
  for (const auto& [a, b] : relations) {
    if (a >= n || b >= n) throw Error(ErrorCode::UnknownElement, "relation index out of range");
    if (a == b) throw Error(ErrorCode::CycleDetected, "element '" + p.ids_[a] + "' covers itself");
    succ[a].push_back(b);
    ++indeg[b];
  }
  // Kahn's algorithm; smallest index first for a deterministic extension.
  std::set<Element> ready;
  for (Element e = 0; e < n; ++e)
    if (!indeg[e]) ready.insert(e);
  while (!ready.empty()) {
    Element e = *ready.begin();
    ready.erase(ready.begin());
    p.topo_.push_back(e);
    for (Element s : succ[e])
      if (--indeg[s] == 0) ready.insert(s);
  }
  if (p.topo_.size() != n) {
    std::string where;
    for (Element e = 0; e < n; ++e)
      if (indeg[e]) {
        where = p.ids_[e];
        break;
      }
    throw Error(ErrorCode::CycleDetected, "relations contain a directed cycle through '" + where + "'");
  }

  const std::size_t words = (n + 63) / 64;
  p.up_.assign(n, std::vector<std::uint64_t>(words, 0));
  for (auto it = p.topo_.rbegin(); it != p.topo_.rend(); ++it) {
    const Element e = *it;
    auto& row = p.up_[e];
    row[e >> 6] |= std::uint64_t(1) << (e & 63);
    for (Element s : succ[e])
      for (std::size_t w = 0; w < words; ++w) row[w] |= p.up_[s][w];
  }
  p.upper_.assign(n, {});
  p.lower_.assign(n, {});
  for (Element a = 0; a < n; ++a) {
    std::vector<Element> above;
    for (Element b = 0; b < n; ++b)
      if (p.less(a, b)) above.push_back(b);
    for (Element b : above) {
      bool cover = true;
      for (Element c : above)
        if (c != b && p.less(c, b)) {
          cover = false;
          break;
        }
      if (cover) {
        p.covers_.emplace_back(a, b);
        p.upper_[a].push_back(b);
        p.lower_[b].push_back(a);
      }
    }
  }
  std::sort(p.covers_.begin(), p.covers_.end());
  return p;
}

std::optional<Element> Poset::find(const std::string& id) const {
  auto it = lookup_.find(id);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

Element Poset::index(const std::string& id) const {
  auto e = find(id);
  if (!e) throw Error(ErrorCode::UnknownElement, "unknown element '" + id + "'");
  return *e;
}

std::vector<Element> Poset::minimal_elements() const {
  std::vector<Element> out;
  for (Element e = 0; e < size(); ++e)
    if (lower_[e].empty()) out.push_back(e);
  return out;
}

std::vector<Element> Poset::maximal_elements() const {
  std::vector<Element> out;
  for (Element e = 0; e < size(); ++e)
    if (upper_[e].empty()) out.push_back(e);
  return out;
}

std::optional<Element> Poset::bottom() const {
  auto m = minimal_elements();
  if (m.size() == 1) return m.front();
  return std::nullopt;
}

std::optional<Element> Poset::top() const {
  auto m = maximal_elements();
  if (m.size() == 1) return m.front();
  return std::nullopt;
}

std::vector<Element> Poset::open_interval(Element x, Element y) const {
  std::vector<Element> out;
  for (Element z : topo_)
    if (less(x, z) && less(z, y)) out.push_back(z);
  return out;
}

std::vector<Element> Poset::half_open_interval(Element x, Element y) const {
  std::vector<Element> out;
  for (Element z : topo_)
    if (less(x, z) && leq(z, y)) out.push_back(z);
  return out;
}

std::vector<Element> Poset::closed_interval(Element x, Element y) const {
  std::vector<Element> out;
  for (Element z : topo_)
    if (leq(x, z) && leq(z, y)) out.push_back(z);
  return out;
}

std::vector<Element> Poset::upset(Element x) const {
  std::vector<Element> out;
  for (Element z : topo_)
    if (leq(x, z)) out.push_back(z);
  return out;
}

std::vector<int> Poset::rank_function() const {
  std::vector<int> r(size(), 0);
  for (Element e : topo_)
    for (Element a : lower_[e]) r[e] = std::max(r[e], r[a] + 1);
  return r;
}

Poset Poset::induced(const std::vector<Element>& subset) const {
  std::vector<std::string> ids;
  for (Element e : subset) ids.push_back(ids_.at(e));
  std::vector<std::pair<Element, Element>> rel;
  for (std::size_t i = 0; i < subset.size(); ++i)
    for (std::size_t j = 0; j < subset.size(); ++j)
      if (less(subset[i], subset[j])) rel.emplace_back(i, j);
  return from_relations(std::move(ids), rel);
}

// ---------------------------------------------------------- IncreasingFunction

bool IncreasingFunction::is_increasing(const Poset& p) const {
  if (values.size() != p.size()) return false;
  for (const auto& [a, b] : p.covers())
    if (values[a] >= values[b]) return false;
  return true;
}

void IncreasingFunction::require_increasing(const Poset& p) const {
  if (values.size() != p.size())
    throw Error(ErrorCode::NotIncreasing, "function has " + std::to_string(values.size()) + " values for " +
                                              std::to_string(p.size()) + " elements");
  for (const auto& [a, b] : p.covers())
    if (values[a] >= values[b])
      throw Error(ErrorCode::NotIncreasing, "not strictly increasing on " + p.id(a) + " < " + p.id(b) + " (" +
                                                std::to_string(values[a]) + " vs " + std::to_string(values[b]) + ")");
}

IncreasingFunction default_grading(const Poset& p) { return IncreasingFunction{p.rank_function()}; }

// ---------------------------------------------------------------------- chains

std::vector<std::vector<Chain>> enumerate_chains(const Poset& p, const std::vector<Element>& support,
                                                 std::stop_token stop) {
  const std::size_t m = support.size();
  std::vector<std::vector<std::size_t>> next(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (p.less(support[i], support[j])) next[i].push_back(j);
  std::vector<std::vector<Chain>> out;
  Chain current;
  std::size_t visited = 0;
  std::function<void(std::size_t)> grow = [&](std::size_t i) {
    if ((++visited & 4095) == 0 && stop.stop_requested()) throw Error(ErrorCode::Cancelled, "chain enumeration interrupted");
    current.push_back(static_cast<std::uint32_t>(support[i]));
    if (out.size() < current.size()) out.resize(current.size());
    out[current.size() - 1].push_back(current);
    for (std::size_t j : next[i]) grow(j);
    current.pop_back();
  };
  for (std::size_t i = 0; i < m; ++i) grow(i);
  for (auto& level : out) std::sort(level.begin(), level.end());
  return out;
}

std::size_t ChainIndex::Hash::operator()(const Chain& c) const {
  std::size_t h = 1469598103934665603ull;
  for (auto x : c) {
    h ^= x + 0x9e3779b97f4a7c15ull;
    h *= 1099511628211ull;
  }
  return h;
}

ChainIndex::ChainIndex(const std::vector<std::vector<Chain>>& chains) {
  for (const auto& level : chains)
    for (std::size_t i = 0; i < level.size(); ++i) index_.emplace(level[i], i);
}

long ChainIndex::find(const Chain& c) const {
  auto it = index_.find(c);
  return it == index_.end() ? -1 : static_cast<long>(it->second);
}

namespace {

// Reduced order complex on nonempty chains grouped by length; degree -1 holds
// the empty chain.
IntervalCochainComplex build_reduced(const std::vector<std::vector<Chain>>& chains, const Ring& ring) {
  IntervalCochainComplex out;
  out.basis.push_back({Chain{}});
  for (const auto& level : chains) out.basis.push_back(level);
  ChainIndex index(chains);
  std::vector<std::size_t> ranks;
  for (const auto& b : out.basis) ranks.push_back(b.size());
  std::vector<SparseMatrix> diffs;
  for (std::size_t k = 0; k + 1 < out.basis.size(); ++k) {
    std::vector<Triplet> t;
    const auto& upper = out.basis[k + 1];
    for (std::size_t row = 0; row < upper.size(); ++row) {
      const Chain& c = upper[row];
      for (std::size_t i = 0; i < c.size(); ++i) {
        Chain smaller;
        smaller.reserve(c.size() - 1);
        for (std::size_t j = 0; j < c.size(); ++j)
          if (j != i) smaller.push_back(c[j]);
        const long col = smaller.empty() ? 0 : index.find(smaller);
        if (col < 0) throw Error(ErrorCode::Internal, "chain face missing from enumeration");
        t.push_back({row, static_cast<std::size_t>(col), Integer(i % 2 ? -1 : 1)});
      }
    }
    diffs.push_back(SparseMatrix::from_triplets(upper.size(), out.basis[k].size(), std::move(t)));
  }
  out.complex = homalg::CochainComplex(ring, -1, std::move(ranks), std::move(diffs));
  return out;
}

void require_leq(const Poset& p, Element x, Element y) {
  if (x >= p.size() || y >= p.size()) throw Error(ErrorCode::UnknownElement, "element index out of range");
  if (!p.leq(x, y)) throw Error(ErrorCode::NotComparable, "'" + p.id(x) + "' is not below '" + p.id(y) + "'");
}

}  // namespace

IntervalCochainComplex order_complex(const Poset& p, const std::vector<Element>& support, const Ring& ring,
                                     std::stop_token stop) {
  return build_reduced(enumerate_chains(p, support, stop), ring);
}

IntervalCochainComplex interval_cochain_complex(const Poset& p, Element x, Element y, const Ring& ring,
                                                std::stop_token stop) {
  require_leq(p, x, y);
  if (x == y) {
    IntervalCochainComplex out;
    out.complex = homalg::CochainComplex(ring, -2, {1}, {});
    out.basis.push_back({Chain{}});
    return out;
  }
  return order_complex(p, p.open_interval(x, y), ring, stop);
}

homalg::GradedModule reduced_interval_cohomology(const Poset& p, Element x, Element y, const Ring& ring,
                                                 std::stop_token stop) {
  return homalg::cohomology(interval_cochain_complex(p, x, y, ring, stop).complex, stop);
}

long long mobius(const Poset& p, Element x, Element y, std::stop_token stop) {
  auto h = reduced_interval_cohomology(p, x, y, Ring::integers(), stop);
  return h.euler_characteristic();
}

long long mobius_recursive(const Poset& p, Element x, Element y) {
  require_leq(p, x, y);
  auto interval = p.closed_interval(x, y);  // linear extension order
  std::map<Element, long long> mu;
  for (Element z : interval) {
    if (z == x) {
      mu[z] = 1;
      continue;
    }
    long long s = 0;
    for (const auto& [w, v] : mu)
      if (p.less(w, z)) s += v;
    mu[z] = -s;
  }
  return mu.at(y);
}

homalg::FilteredComplex half_open_filtered_complex(const Poset& p, Element x, Element y,
                                                   const IncreasingFunction& sigma, const Ring& ring) {
  auto oc = order_complex(p, p.half_open_interval(x, y), ring);
  homalg::FilteredComplex f;
  for (const auto& level : oc.basis) {
    std::vector<int> lv;
    for (const auto& c : level) lv.push_back(c.empty() ? sigma(x) : sigma(c.back()));
    f.levels.push_back(std::move(lv));
  }
  f.complex = std::move(oc.complex);
  return f;
}

specseq::SpectralSequence acyclicity_ss(const Poset& p, Element x, Element y, const IncreasingFunction& sigma,
                                        const Ring& ring, std::stop_token stop) {
  require_leq(p, x, y);
  if (x == y) throw Error(ErrorCode::NotComparable, "acyclicity_ss needs x < y");
  sigma.require_increasing(p);
  return specseq::pages(half_open_filtered_complex(p, x, y, sigma, ring), {}, stop);
}

bool is_cohen_macaulay_graded(const Poset& p, const IncreasingFunction& rho, std::stop_token stop) {
  auto b = p.bottom();
  if (!b) throw Error(ErrorCode::InvalidLattice, "Cohen–Macaulay test needs a unique minimal element");
  rho.require_increasing(p);
  if (rho(*b) != 0) throw Error(ErrorCode::NotIncreasing, "grading must vanish at the bottom element");
  for (Element beta = 0; beta < p.size(); ++beta) {
    if (beta == *b) continue;
    auto h = reduced_interval_cohomology(p, *b, beta, Ring::integers(), stop);
    for (int i : h.degrees())
      if (i < rho(beta) - 2) return false;
  }
  return true;
}

// -------------------------------------------------------------------- families

Poset boolean_lattice(int n) {
  const std::size_t count = std::size_t(1) << n;
  std::vector<std::size_t> masks(count);
  std::iota(masks.begin(), masks.end(), 0);
  std::stable_sort(masks.begin(), masks.end(),
                   [](std::size_t a, std::size_t b) { return __builtin_popcountll(a) < __builtin_popcountll(b); });
  std::vector<std::string> ids;
  std::map<std::size_t, Element> where;
  for (std::size_t m : masks) {
    std::string s = "{";
    bool first = true;
    for (int i = 0; i < n; ++i)
      if (m >> i & 1) {
        s += (first ? "" : ",") + std::to_string(i + 1);
        first = false;
      }
    where[m] = ids.size();
    ids.push_back(s + "}");
  }
  std::vector<std::pair<Element, Element>> rel;
  for (std::size_t m : masks)
    for (int i = 0; i < n; ++i)
      if (!(m >> i & 1)) rel.emplace_back(where[m], where[m | (std::size_t(1) << i)]);
  return Poset::from_relations(std::move(ids), rel);
}

std::string partition_id(const std::vector<int>& label) {
  int blocks = 0;
  for (int l : label) blocks = std::max(blocks, l + 1);
  std::string s;
  for (int b = 0; b < blocks; ++b) {
    if (b) s += '|';
    bool first = true;
    for (std::size_t i = 0; i < label.size(); ++i)
      if (label[i] == b) {
        s += (first ? "" : ",") + std::to_string(i + 1);
        first = false;
      }
  }
  return s;
}

int partition_blocks(const std::vector<int>& label) {
  int b = 0;
  for (int x : label) b = std::max(b, x + 1);
  return b;
}

std::vector<std::vector<int>> set_partitions(int n) {
  // Restricted growth strings enumerate set partitions.
  std::vector<std::vector<int>> parts;
  std::vector<int> cur(static_cast<std::size_t>(std::max(n, 0)), 0);
  std::function<void(int, int)> gen = [&](int i, int maxb) {
    if (i == n) {
      parts.push_back(cur);
      return;
    }
    for (int b = 0; b <= maxb + 1; ++b) {
      cur[static_cast<std::size_t>(i)] = b;
      gen(i + 1, std::max(maxb, b));
    }
  };
  if (n <= 0) parts.push_back({});
  else gen(1, 0);
  std::stable_sort(parts.begin(), parts.end(),
                   [](const auto& a, const auto& b) { return partition_blocks(a) > partition_blocks(b); });
  return parts;
}

Poset partition_lattice(int n) {
  const auto parts = set_partitions(n);
  auto blocks = partition_blocks;
  std::vector<std::string> ids;
  std::map<std::string, Element> where;
  for (const auto& l : parts) {
    where[partition_id(l)] = ids.size();
    ids.push_back(partition_id(l));
  }
  std::vector<std::pair<Element, Element>> rel;
  for (const auto& l : parts) {
    const int k = blocks(l);
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b) {
        std::vector<int> merged = l;
        for (auto& x : merged) {
          if (x == b) x = a;
          else if (x > b) --x;
        }
        rel.emplace_back(where[partition_id(l)], where.at(partition_id(merged)));
      }
  }
  return Poset::from_relations(std::move(ids), rel);
}

Poset chain_poset(int n) {
  std::vector<std::string> ids;
  std::vector<std::pair<Element, Element>> rel;
  for (int i = 0; i < n; ++i) {
    ids.push_back(std::to_string(i));
    if (i) rel.emplace_back(i - 1, i);
  }
  return Poset::from_relations(std::move(ids), rel);
}

Poset product(const Poset& a, const Poset& b) {
  std::vector<std::string> ids;
  for (Element i = 0; i < a.size(); ++i)
    for (Element j = 0; j < b.size(); ++j) ids.push_back(a.id(i) + "×" + b.id(j));
  std::vector<std::pair<Element, Element>> rel;
  for (Element i = 0; i < a.size(); ++i)
    for (Element j = 0; j < b.size(); ++j) {
      for (Element i2 : a.upper_covers(i)) rel.emplace_back(i * b.size() + j, i2 * b.size() + j);
      for (Element j2 : b.upper_covers(j)) rel.emplace_back(i * b.size() + j, i * b.size() + j2);
    }
  return Poset::from_relations(std::move(ids), rel);
}

}  // namespace stratcoh::poset
