#include "stratcoh/generators.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "stratcoh/error.hpp"
#include "stratcoh/parallel.hpp"

namespace stratcoh::generators {

using homalg::ChainMap;
using homalg::CochainComplex;
using poset::Element;

namespace {

// Tensor power of a formal model. Tuples of base basis vectors are ordered
// lexicographically within each total degree.
struct TensorPower {
  struct Factor {
    int degree;
    int weight;
  };
  std::vector<Factor> base;
  int k = 0;
  std::vector<int> degree;          // by tuple code
  std::vector<std::size_t> index;   // by tuple code
  CochainComplex complex;

  std::size_t code(const std::vector<std::uint32_t>& t) const {
    std::size_t c = 0;
    for (auto x : t) c = c * base.size() + x;
    return c;
  }
  std::vector<std::uint32_t> tuple(std::size_t c) const {
    std::vector<std::uint32_t> t(static_cast<std::size_t>(k));
    for (int i = k - 1; i >= 0; --i) {
      t[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(c % base.size());
      c /= base.size();
    }
    return t;
  }
  std::size_t count() const { return degree.size(); }
};

TensorPower tensor_power(const CochainComplex& M, int k) {
  TensorPower T;
  T.k = k;
  const bool weighted = M.has_weights();
  for (int d = M.lo(); d <= M.hi(); ++d) {
    const auto w = weighted ? M.weights(d) : std::vector<int>{};
    for (std::size_t i = 0; i < M.rank(d); ++i) T.base.push_back({d, weighted ? w[i] : 0});
  }
  std::size_t total = 1;
  for (int i = 0; i < k; ++i) total *= T.base.size();
  T.degree.resize(total);
  T.index.resize(total);
  std::map<int, std::size_t> ranks;
  std::map<int, std::vector<int>> weights;
  for (std::size_t c = 0; c < total; ++c) {
    const auto t = T.tuple(c);
    int deg = 0, w = 0;
    for (auto x : t) {
      deg += T.base[x].degree;
      w += T.base[x].weight;
    }
    T.degree[c] = deg;
    T.index[c] = ranks[deg]++;
    weights[deg].push_back(w);
  }
  if (ranks.empty()) {
    T.complex = CochainComplex(M.ring());
    return T;
  }
  const int lo = ranks.begin()->first, hi = ranks.rbegin()->first;
  std::vector<std::size_t> r;
  std::vector<std::vector<int>> ws;
  for (int d = lo; d <= hi; ++d) {
    r.push_back(ranks.count(d) ? ranks[d] : 0);
    ws.push_back(weights.count(d) ? weights[d] : std::vector<int>{});
  }
  std::optional<std::vector<std::vector<int>>> wopt;
  if (weighted) wopt = std::move(ws);
  T.complex = CochainComplex(M.ring(), lo, std::move(r), {}, std::move(wopt));
  return T;
}

// Degree-zero map between tensor powers given on basis tuples; `image`
// returns the target tuple and sign, or sign 0 for zero.
ChainMap tuple_map(const TensorPower& src, const TensorPower& tgt,
                   const std::function<std::pair<std::vector<std::uint32_t>, int>(const std::vector<std::uint32_t>&)>& image) {
  std::map<int, std::vector<Triplet>> t;
  for (std::size_t c = 0; c < src.count(); ++c) {
    auto [y, sign] = image(src.tuple(c));
    if (!sign) continue;
    const std::size_t cy = tgt.code(y);
    if (tgt.degree[cy] != src.degree[c]) throw Error(ErrorCode::Internal, "tensor map does not preserve degree");
    t[src.degree[c]].push_back({tgt.index[cy], src.index[c], Integer(sign)});
  }
  std::map<int, SparseMatrix> blocks;
  for (auto& [d, entries] : t)
    blocks.emplace(d, SparseMatrix::from_triplets(tgt.complex.rank(d), src.complex.rank(d), std::move(entries)));
  return ChainMap(std::move(blocks));
}

// Koszul sign of moving factor b past factor b' for every inversion of `pos`.
int koszul_sign(const TensorPower& T, const std::vector<std::uint32_t>& x, const std::vector<int>& pos) {
  int sign = 1;
  for (std::size_t a = 0; a < x.size(); ++a)
    for (std::size_t b = a + 1; b < x.size(); ++b)
      if (pos[a] > pos[b] && (T.base[x[a]].degree * T.base[x[b]].degree) % 2) sign = -sign;
  return sign;
}

std::vector<int> normalize_rgs(const std::vector<int>& label) {
  std::map<int, int> relabel;
  std::vector<int> out(label.size());
  for (std::size_t i = 0; i < label.size(); ++i) {
    auto it = relabel.find(label[i]);
    if (it == relabel.end()) it = relabel.emplace(label[i], static_cast<int>(relabel.size())).first;
    out[i] = it->second;
  }
  return out;
}

std::vector<int> join(const std::vector<int>& a, const std::vector<int>& b) {
  const std::size_t n = a.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (const auto* p : {&a, &b}) {
    std::map<int, std::size_t> first;
    for (std::size_t i = 0; i < n; ++i) {
      auto [it, fresh] = first.emplace((*p)[i], i);
      if (!fresh) parent[find(i)] = find(it->second);
    }
  }
  std::vector<int> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<int>(find(i));
  return normalize_rgs(out);
}

bool refines(const std::vector<int>& a, const std::vector<int>& b) {
  std::map<int, int> image;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto [it, fresh] = image.emplace(a[i], b[i]);
    if (!fresh && it->second != b[i]) return false;
  }
  return true;
}

std::vector<int> parse_subset(const std::string& id) {
  std::vector<int> out;
  std::string cur;
  for (char ch : id) {
    if (std::isdigit(static_cast<unsigned char>(ch))) cur += ch;
    else if (!cur.empty()) {
      out.push_back(std::stoi(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::stoi(cur));
  return out;
}

std::string subset_name(const std::vector<int>& s) {
  std::string out = "D_{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

}  // namespace

// ----------------------------------------------------------------- SNC

StratifiedSpaceModel snc_stratification(const SncComponents& c) {
  if (c.k < 0) throw Error(ErrorCode::MissingModel, "negative number of divisor components");
  StratifiedSpaceModel m;
  m.ring = c.ring;
  m.poset = poset::boolean_lattice(c.k);
  std::vector<std::vector<int>> subsets;
  for (const auto& id : m.poset.ids()) subsets.push_back(parse_subset(id));
  for (const auto& s : subsets) {
    auto it = c.models.find(s);
    if (it == c.models.end()) throw Error(ErrorCode::MissingModel, "no model for " + subset_name(s));
    m.strata.push_back(it->second);
    m.sigma.values.push_back(static_cast<int>(s.size()));
  }
  for (const auto& [a, b] : m.poset.covers()) {
    int added = 0;
    for (int x : subsets[b])
      if (!std::binary_search(subsets[a].begin(), subsets[a].end(), x)) added = x;
    auto it = c.restrictions.find({subsets[a], added});
    if (it == c.restrictions.end())
      throw Error(ErrorCode::MissingModel,
                  "no restriction " + subset_name(subsets[a]) + " → " + subset_name(subsets[b]));
    m.restrictions.emplace(std::pair{a, b}, it->second);
  }
  return m;
}

SncComponents snc_coordinate_divisors(int k, const Ring& ring) {
  SncComponents c;
  c.k = k;
  c.ring = ring;
  const SpaceModel p1 = projective_line_model(ring);
  std::vector<TensorPower> powers;
  for (int j = 0; j <= k; ++j) powers.push_back(tensor_power(p1.complex, j));
  const std::uint32_t unit = static_cast<std::uint32_t>(*p1.unit);  // P¹ starts in degree 0
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    std::vector<int> I, rest;
    for (int i = 0; i < k; ++i) (mask >> i & 1u ? I : rest).push_back(i + 1);
    const auto& src = powers[rest.size()];
    c.models.emplace(I, src.complex);
    for (std::size_t p = 0; p < rest.size(); ++p) {
      const auto& tgt = powers[rest.size() - 1];
      c.restrictions.emplace(std::pair{I, rest[p]}, tuple_map(src, tgt, [&](const std::vector<std::uint32_t>& x) {
                               if (x[p] != unit) return std::pair{std::vector<std::uint32_t>{}, 0};
                               auto y = x;
                               y.erase(y.begin() + static_cast<long>(p));
                               return std::pair{y, 1};
                             }));
    }
  }
  return c;
}

// ------------------------------------------------------ arrangements

StratifiedSpaceModel subspace_arrangement(const SubspaceArrangementSpec& spec, const Ring& ring) {
  if (spec.flats.empty()) throw Error(ErrorCode::InvalidLattice, "the arrangement has no flats");
  if (spec.flats.size() != spec.dimensions.size())
    throw Error(ErrorCode::InvalidLattice, "every flat needs exactly one dimension");
  StratifiedSpaceModel m;
  m.ring = ring;
  try {
    m.poset = poset::Poset::from_cover_relations(spec.flats, spec.covers);
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidLattice, e.what());
  }
  const auto bottom = m.poset.bottom();
  if (!bottom) throw Error(ErrorCode::InvalidLattice, "the lattice has no unique bottom (ambient space)");
  if (spec.dimensions[*bottom] != spec.ambient_dimension)
    throw Error(ErrorCode::InvalidLattice, "the bottom flat '" + spec.flats[*bottom] + "' must have the ambient dimension");
  for (std::size_t e = 0; e < spec.flats.size(); ++e)
    if (spec.dimensions[e] < 0)
      throw Error(ErrorCode::InvalidLattice, "flat '" + spec.flats[e] + "' has negative dimension");
  for (const auto& [a, b] : m.poset.covers())
    if (spec.dimensions[a] <= spec.dimensions[b])
      throw Error(ErrorCode::InvalidLattice,
                  "dimension does not drop from '" + spec.flats[a] + "' to '" + spec.flats[b] + "'");
  for (std::size_t e = 0; e < spec.flats.size(); ++e) {
    const int dim = spec.dimensions[e];
    m.strata.emplace_back(ring, 2 * dim, std::vector<std::size_t>{1}, std::vector<SparseMatrix>{},
                          std::vector<std::vector<int>>{{dim}});
    m.sigma.values.push_back(spec.ambient_dimension - dim);
  }
  for (const auto& cv : m.poset.covers()) m.restrictions.emplace(cv, ChainMap{});
  return m;
}

SubspaceArrangementSpec braid_arrangement(int n) {
  SubspaceArrangementSpec s;
  s.ambient_dimension = n;
  for (const auto& l : poset::set_partitions(n)) {
    s.flats.push_back(poset::partition_id(l));
    s.dimensions.push_back(poset::partition_blocks(l));
    const int k = poset::partition_blocks(l);
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b) {
        auto merged = l;
        for (auto& x : merged) x = x == b ? a : x;
        s.covers.emplace_back(poset::partition_id(l), poset::partition_id(normalize_rgs(merged)));
      }
  }
  return s;
}

// ------------------------------------------------- configuration spaces

SpaceModel plane_model(const Ring& ring) {
  return {CochainComplex(ring, 2, {1}, {}, std::vector<std::vector<int>>{{1}}), 2, std::nullopt};
}

SpaceModel projective_line_model(const Ring& ring) {
  return {CochainComplex(ring, 0, {1, 0, 1}, {}, std::vector<std::vector<int>>{{0}, {}, {1}}), 2, 0};
}

SpaceModel euclidean_model(int d, const Ring& ring) { return {CochainComplex(ring, d, {1}, {}), d, std::nullopt}; }

void check_hypothesis(const SpaceModel& m) {
  const auto& C = m.complex;
  if (m.dimension <= 1)
    throw Error(ErrorCode::HypothesisViolated, "the dimension of M must exceed 1, got " + std::to_string(m.dimension));
  try {
    C.require_valid();
  } catch (const Error& e) {
    throw Error(ErrorCode::HypothesisViolated, std::string("the model of M is not a complex: ") + e.what());
  }
  for (int k = C.lo(); k <= C.hi(); ++k)
    if (!C.differential(k).is_zero())
      throw Error(ErrorCode::HypothesisViolated, "the model of M must be formal (zero differential)");
  const auto h = homalg::cohomology(C);
  for (int k : h.degrees())
    if (k > m.dimension)
      throw Error(ErrorCode::HypothesisViolated, "H_c^" + std::to_string(k) + "(M) ≠ 0 above the dimension");
  if (h.rank(m.dimension) != 1 || !h.torsion(m.dimension).empty())
    throw Error(ErrorCode::HypothesisViolated, "H_c^" + std::to_string(m.dimension) + "(M) must be free of rank one");
  if (m.unit && *m.unit >= C.rank(0))
    throw Error(ErrorCode::HypothesisViolated, "the unit must be a degree-0 basis vector");
}

DiagonalPattern standard_diagonal() { return {{{{1, 2}}}}; }

DiagonalPattern k_equals(int k) {
  std::vector<int> block(static_cast<std::size_t>(std::max(k, 0)));
  std::iota(block.begin(), block.end(), 1);
  return {{{block}}};
}

void validate_pattern(const DiagonalPattern& pattern) {
  if (pattern.templates.empty()) throw Error(ErrorCode::InvalidPattern, "the pattern has no templates");
  for (std::size_t t = 0; t < pattern.templates.size(); ++t) {
    const auto& blocks = pattern.templates[t];
    const std::string tag = "template " + std::to_string(t) + ": ";
    std::set<int> seen;
    std::size_t s = 0;
    for (const auto& b : blocks) {
      if (b.size() < 2)
        throw Error(ErrorCode::InvalidPattern, tag + "a singleton block makes it a pullback of a smaller pattern");
      for (int x : b)
        if (!seen.insert(x).second) throw Error(ErrorCode::InvalidPattern, tag + "element " + std::to_string(x) + " repeats");
      s += b.size();
    }
    if (s < 2) throw Error(ErrorCode::InvalidPattern, tag + "needs at least two indices");
    if (*seen.begin() != 1 || *seen.rbegin() != static_cast<int>(s))
      throw Error(ErrorCode::InvalidPattern, tag + "indices must be 1.." + std::to_string(s));
  }
}

std::vector<std::vector<int>> pattern_partitions(const DiagonalPattern& pattern, int n) {
  validate_pattern(pattern);
  if (n < 1) throw Error(ErrorCode::HypothesisViolated, "n must be positive");
  std::set<std::vector<int>> gens;
  for (const auto& blocks : pattern.templates) {
    std::size_t s = 0;
    for (const auto& b : blocks) s += b.size();
    if (s > static_cast<std::size_t>(n)) continue;
    // All injections {1..s} → {0..n-1}.
    std::vector<int> image(s);
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    std::function<void(std::size_t)> place = [&](std::size_t i) {
      if (i == s) {
        std::vector<int> label(static_cast<std::size_t>(n));
        std::iota(label.begin(), label.end(), 0);
        for (const auto& b : blocks)
          for (int x : b) label[static_cast<std::size_t>(image[static_cast<std::size_t>(x - 1)])] = n + image[static_cast<std::size_t>(b[0] - 1)];
        gens.insert(normalize_rgs(label));
        return;
      }
      for (int v = 0; v < n; ++v) {
        if (used[static_cast<std::size_t>(v)]) continue;
        used[static_cast<std::size_t>(v)] = 1;
        image[i] = v;
        place(i + 1);
        used[static_cast<std::size_t>(v)] = 0;
      }
    };
    place(0);
  }
  std::set<std::vector<int>> closure(gens.begin(), gens.end());
  std::vector<std::vector<int>> queue(gens.begin(), gens.end());
  while (!queue.empty()) {
    auto x = std::move(queue.back());
    queue.pop_back();
    for (const auto& g : gens) {
      auto j = join(x, g);
      if (closure.insert(j).second) queue.push_back(std::move(j));
    }
  }
  std::vector<int> finest(static_cast<std::size_t>(n));
  std::iota(finest.begin(), finest.end(), 0);
  closure.insert(finest);
  std::vector<std::vector<int>> out;
  for (const auto& l : poset::set_partitions(n))
    if (closure.count(l)) out.push_back(l);
  return out;
}

StratifiedSpaceModel configuration_stratification(const SpaceModel& M, int n, const DiagonalPattern& pattern) {
  check_hypothesis(M);
  const auto parts = pattern_partitions(pattern, n);
  StratifiedSpaceModel m;
  m.ring = M.complex.ring();
  std::vector<std::string> ids;
  std::map<std::vector<int>, Element> where;
  for (const auto& l : parts) {
    where.emplace(l, ids.size());
    ids.push_back(poset::partition_id(l));
  }
  std::vector<std::pair<Element, Element>> rel;
  for (std::size_t a = 0; a < parts.size(); ++a)
    for (std::size_t b = 0; b < parts.size(); ++b)
      if (a != b && refines(parts[a], parts[b])) rel.emplace_back(a, b);
  m.poset = poset::Poset::from_relations(std::move(ids), rel);

  std::map<int, TensorPower> powers;
  auto power = [&](int k) -> const TensorPower& {
    auto it = powers.find(k);
    if (it == powers.end()) it = powers.emplace(k, tensor_power(M.complex, k)).first;
    return it->second;
  };
  for (const auto& l : parts) {
    const int k = poset::partition_blocks(l);
    m.strata.push_back(power(k).complex);
    m.sigma.values.push_back(n - k);
  }
  std::optional<std::uint32_t> unit;
  if (M.unit) {
    std::size_t below = 0;
    for (int d = M.complex.lo(); d < 0; ++d) below += M.complex.rank(d);
    unit = static_cast<std::uint32_t>(below + *M.unit);
  }

  // Merging: factor b of β lands in block f[b] of γ. Factors are grouped with
  // Koszul signs and multiplied; only the unit multiplies nontrivially.
  for (const auto& [a, b] : m.poset.covers()) {
    const auto& la = parts[a];
    const auto& lb = parts[b];
    const int ka = poset::partition_blocks(la), kb = poset::partition_blocks(lb);
    std::vector<int> f(static_cast<std::size_t>(ka));
    for (std::size_t i = 0; i < la.size(); ++i) f[static_cast<std::size_t>(la[i])] = lb[i];
    const auto& src = power(ka);
    const auto& tgt = power(kb);
    m.restrictions.emplace(std::pair{a, b}, tuple_map(src, tgt, [&](const std::vector<std::uint32_t>& x) {
                             std::vector<std::uint32_t> y(static_cast<std::size_t>(kb));
                             std::vector<int> filled(static_cast<std::size_t>(kb), 0);
                             for (std::size_t i = 0; i < x.size(); ++i) {
                               const auto j = static_cast<std::size_t>(f[i]);
                               const bool is_unit = unit && x[i] == *unit;
                               if (is_unit) {
                                 if (!filled[j]) y[j] = x[i];
                                 continue;
                               }
                               if (filled[j] == 2) return std::pair{std::vector<std::uint32_t>{}, 0};
                               y[j] = x[i];
                               filled[j] = 2;
                             }
                             for (std::size_t j = 0; j < y.size(); ++j)
                               if (!filled[j] && !unit) return std::pair{std::vector<std::uint32_t>{}, 0};
                             return std::pair{y, koszul_sign(src, x, f)};
                           }));
  }

  if (n >= 2) {
    std::vector<std::vector<int>> perms;
    std::vector<int> swap(static_cast<std::size_t>(n)), cycle(static_cast<std::size_t>(n));
    std::iota(swap.begin(), swap.end(), 0);
    std::swap(swap[0], swap[1]);
    for (int i = 0; i < n; ++i) cycle[static_cast<std::size_t>(i)] = (i + 1) % n;
    perms.push_back(swap);
    if (cycle != swap) perms.push_back(cycle);
    for (const auto& pi : perms) {
      strat::GroupGenerator g;
      for (std::size_t e = 0; e < parts.size(); ++e) {
        const auto& l = parts[e];
        std::vector<int> moved(l.size());
        for (std::size_t i = 0; i < l.size(); ++i) moved[static_cast<std::size_t>(pi[i])] = l[i];
        const auto image = normalize_rgs(moved);
        const int k = poset::partition_blocks(l);
        std::vector<int> tau(static_cast<std::size_t>(k));
        for (std::size_t i = 0; i < l.size(); ++i)
          tau[static_cast<std::size_t>(l[i])] = image[static_cast<std::size_t>(pi[i])];
        const Element target = where.at(image);
        g.strata.push_back(target);
        const auto& T = power(k);
        g.maps.push_back(tuple_map(T, T, [&](const std::vector<std::uint32_t>& x) {
          std::vector<std::uint32_t> y(x.size());
          for (std::size_t b = 0; b < x.size(); ++b) y[static_cast<std::size_t>(tau[b])] = x[b];
          return std::pair{y, koszul_sign(T, x, tau)};
        }));
      }
      m.action.push_back(std::move(g));
    }
  }
  return m;
}

// ------------------------------------------------------------ products

StratifiedSpaceModel product(const StratifiedSpaceModel& a, const StratifiedSpaceModel& b) {
  if (!(a.ring == b.ring))
    throw Error(ErrorCode::RingMismatch, "cannot multiply models over " + a.ring.to_string() + " and " +
                                             b.ring.to_string());
  StratifiedSpaceModel m;
  m.ring = a.ring;
  m.poset = poset::product(a.poset, b.poset);
  const std::size_t nb = b.poset.size();
  for (std::size_t i = 0; i < a.poset.size(); ++i)
    for (std::size_t j = 0; j < nb; ++j) {
      m.strata.push_back(homalg::tensor_complex(a.strata[i], b.strata[j]));
      m.sigma.values.push_back(a.sigma(i) + b.sigma(j));
    }
  for (const auto& [x, y] : m.poset.covers()) {
    const std::size_t i = x / nb, j = x % nb, i2 = y / nb, j2 = y % nb;
    ChainMap f;
    if (j == j2)
      f = homalg::tensor_maps(a.restrictions.at({i, i2}), a.strata[i], a.strata[i2], ChainMap::identity(b.strata[j]),
                              b.strata[j], b.strata[j]);
    else
      f = homalg::tensor_maps(ChainMap::identity(a.strata[i]), a.strata[i], a.strata[i], b.restrictions.at({j, j2}),
                              b.strata[j], b.strata[j2]);
    m.restrictions.emplace(std::pair{x, y}, std::move(f));
  }
  return m;
}

// ------------------------------------------------------------- tables

CodimProfile indecomposable_codim_profile(const DiagonalPattern& pattern, int n_max) {
  validate_pattern(pattern);
  CodimProfile prof;
  std::map<int, std::set<std::vector<int>>> members;
  auto member = [&](const std::vector<int>& l) {
    const int m = static_cast<int>(l.size());
    if (m == 0) return true;
    auto it = members.find(m);
    if (it == members.end()) {
      const auto parts = pattern_partitions(pattern, m);
      it = members.emplace(m, std::set<std::vector<int>>(parts.begin(), parts.end())).first;
    }
    return it->second.count(normalize_rgs(l)) > 0;
  };
  bool any = false;
  double constant = 0;
  for (int n = 1; n <= n_max; ++n) {
    CodimRow row;
    row.n = n;
    const auto parts = pattern_partitions(pattern, n);
    row.elements = parts.size();
    for (const auto& l : parts) {
      const int k = poset::partition_blocks(l);
      bool decomposable = false;
      // Splits T = S ⊔ S' along unions of blocks; block 0 always lies in S.
      for (std::uint32_t mask = 1; mask + 1 < (1u << k) && !decomposable; mask += 2) {
        std::vector<int> in, out;
        for (std::size_t i = 0; i < l.size(); ++i) (mask >> l[i] & 1u ? in : out).push_back(l[i]);
        decomposable = member(in) && member(out);
      }
      if (decomposable) continue;
      ++row.indecomposables;
      const int sigma = n - k;
      row.min_sigma = row.min_sigma ? std::min(*row.min_sigma, sigma) : sigma;
    }
    if (n >= 2 && row.min_sigma) {
      const double c = static_cast<double>(*row.min_sigma) / n;
      constant = any ? std::min(constant, c) : c;
      any = true;
    }
    prof.rows.push_back(row);
  }
  prof.constant = any ? constant : 0;
  prof.linear_bound = any && constant > 0;
  return prof;
}

StabilityTable stability_table(const SpaceModel& M, const DiagonalPattern& pattern, const std::vector<int>& i_values,
                               const std::vector<int>& n_values, std::stop_token stop) {
  StabilityTable t;
  t.n_values = n_values;
  t.i_values = i_values;
  t.values.assign(n_values.size(), std::vector<std::size_t>(i_values.size(), 0));
  parallel_for(n_values.size(), [&](std::size_t r) {
    const int n = n_values[r];
    const strat::ValidatedModel vm(configuration_stratification(M, n, pattern));
    const auto inv = strat::invariant_dims(vm, Ring::rationals(), {}, stop);
    for (std::size_t c = 0; c < i_values.size(); ++c) {
      auto it = inv.borel_moore.find(i_values[c] + M.dimension * n);
      t.values[r][c] = it == inv.borel_moore.end() ? 0 : it->second;
    }
  });
  for (std::size_t c = 0; c < i_values.size(); ++c) {
    if (n_values.empty()) {
      t.stable_from.push_back(0);
      t.constant_tail.push_back(false);
      continue;
    }
    std::size_t r = n_values.size() - 1;
    while (r > 0 && t.values[r - 1][c] == t.values.back()[c]) --r;
    t.stable_from.push_back(n_values[r]);
    t.constant_tail.push_back(n_values.size() >= 2 && r + 1 < n_values.size());
  }
  return t;
}

}  // namespace stratcoh::generators
