#include "stratcoh/strat.hpp"

#include <algorithm>
#include <climits>
#include <deque>
#include <set>
#include <sstream>
#include <unordered_map>

#include "stratcoh/error.hpp"
#include "stratcoh/linalg.hpp"
#include "stratcoh/parallel.hpp"

namespace stratcoh::strat {

using homalg::ChainMap;
using homalg::CochainComplex;
using homalg::FilteredComplex;
using homalg::GradedModule;
using homalg::ModuleCell;

namespace {

using CompositeMap = std::map<std::pair<Element, Element>, ChainMap>;

std::string quoted(const poset::Poset& p, Element e) { return "'" + p.id(e) + "'"; }

void check_stop(const std::stop_token& stop) {
  if (stop.stop_requested()) throw Error(ErrorCode::Cancelled, "computation interrupted");
}

// Composite restrictions R(a, c) for a ≤ c. Every lower cover b of c with
// a ≤ b gives a candidate R(b, c) ∘ R(a, b); with a report, disagreements
// are recorded as failed squares.
CompositeMap compose_restrictions(const StratifiedSpaceModel& m, ValidationReport* report) {
  const auto& P = m.poset;
  CompositeMap out;
  for (Element a = 0; a < P.size(); ++a) {
    out.emplace(std::pair{a, a}, ChainMap::identity(m.strata[a]));
    for (Element c : P.linear_extension()) {
      if (!P.less(a, c)) continue;
      std::optional<ChainMap> first;
      Element via = 0;
      for (Element b : P.lower_covers(c)) {
        if (!P.leq(a, b)) continue;
        ChainMap comp = out.at({a, b}).then(m.restrictions.at({b, c})).normalized(m.ring);
        if (!first) {
          first = std::move(comp);
          via = b;
          if (!report) break;
          continue;
        }
        if (!comp.equals(*first, m.ring))
          report->violations.push_back(
              {ErrorCode::NotValidated, "restriction square does not commute: " + quoted(P, a) + " → " +
                                            quoted(P, c) + " differs through " + quoted(P, via) + " and " +
                                            quoted(P, b)});
      }
      out.emplace(std::pair{a, c}, std::move(*first));
    }
  }
  return out;
}

void check_action(const StratifiedSpaceModel& m, ValidationReport& r) {
  const auto& P = m.poset;
  const std::size_t n = P.size();
  auto fail = [&](std::size_t gi, const std::string& msg) {
    r.violations.push_back({ErrorCode::ActionInvalid, "action generator " + std::to_string(gi) + ": " + msg});
  };
  for (std::size_t gi = 0; gi < m.action.size(); ++gi) {
    const auto& g = m.action[gi];
    if (g.strata.size() != n) {
      fail(gi, "permutes " + std::to_string(g.strata.size()) + " strata, expected " + std::to_string(n));
      continue;
    }
    std::vector<char> seen(n, 0);
    bool perm = true;
    for (Element e : g.strata) {
      if (e >= n || seen[e]) perm = false;
      if (e < n) seen[e] = 1;
    }
    if (!perm) {
      fail(gi, "is not a permutation of the strata");
      continue;
    }
    bool order_ok = true;
    for (const auto& [a, b] : P.covers()) {
      const auto& up = P.upper_covers(g.strata[a]);
      if (std::find(up.begin(), up.end(), g.strata[b]) == up.end()) {
        fail(gi, "sends the cover " + quoted(P, a) + " ⋖ " + quoted(P, b) + " to a non-cover");
        order_ok = false;
        break;
      }
    }
    if (!order_ok) continue;
    for (Element a = 0; a < n; ++a)
      if (m.sigma(g.strata[a]) != m.sigma(a)) {
        fail(gi, "does not preserve σ at " + quoted(P, a));
        order_ok = false;
        break;
      }
    if (!order_ok) continue;
    if (g.maps.size() != n) {
      fail(gi, "has " + std::to_string(g.maps.size()) + " stratum maps, expected " + std::to_string(n));
      continue;
    }
    bool maps_ok = true;
    for (Element a = 0; a < n && maps_ok; ++a) {
      try {
        g.maps[a].require_valid(m.strata[a], m.strata[g.strata[a]]);
      } catch (const Error& e) {
        fail(gi, "map on " + quoted(P, a) + ": " + e.what());
        maps_ok = false;
      }
    }
    if (!maps_ok) continue;
    for (const auto& [a, b] : P.covers()) {
      const ChainMap lhs = m.restrictions.at({a, b}).then(g.maps[b]);
      const ChainMap rhs = g.maps[a].then(m.restrictions.at({g.strata[a], g.strata[b]}));
      if (!lhs.equals(rhs, m.ring)) {
        fail(gi, "does not commute with the restriction " + quoted(P, a) + " → " + quoted(P, b));
        break;
      }
    }
  }
}

ValidationReport validate_impl(const StratifiedSpaceModel& m, CompositeMap* composites) {
  ValidationReport r;
  auto fail = [&](ErrorCode code, std::string msg) { r.violations.push_back({code, std::move(msg)}); };
  const auto& P = m.poset;
  const std::size_t n = P.size();
  if (n == 0) {
    fail(ErrorCode::NotValidated, "the poset of strata is empty");
    return r;
  }
  if (m.strata.size() != n) {
    fail(ErrorCode::NotValidated,
         "expected " + std::to_string(n) + " stratum models, got " + std::to_string(m.strata.size()));
    return r;
  }
  if (m.sigma.values.size() != n) {
    fail(ErrorCode::NotIncreasing,
         "σ has " + std::to_string(m.sigma.values.size()) + " values for " + std::to_string(n) + " strata");
    return r;
  }
  auto bottom = P.bottom();
  if (!bottom)
    fail(ErrorCode::NotValidated, "the poset has no unique minimal element (open dense stratum)");
  else if (m.sigma(*bottom) != 0)
    fail(ErrorCode::NotIncreasing,
         "σ(" + quoted(P, *bottom) + ") = " + std::to_string(m.sigma(*bottom)) + ", expected 0");
  for (const auto& [a, b] : P.covers())
    if (m.sigma(a) >= m.sigma(b))
      fail(ErrorCode::NotIncreasing, "σ is not strictly increasing on " + quoted(P, a) + " < " + quoted(P, b) +
                                         " (" + std::to_string(m.sigma(a)) + " ≥ " + std::to_string(m.sigma(b)) +
                                         ")");
  for (Element e = 0; e < n; ++e) {
    if (!(m.strata[e].ring() == m.ring)) {
      fail(ErrorCode::RingMismatch, "stratum " + quoted(P, e) + " is over " + m.strata[e].ring().to_string() +
                                        ", the model over " + m.ring.to_string());
      continue;
    }
    try {
      m.strata[e].require_valid();
    } catch (const Error& err) {
      fail(ErrorCode::InvalidComplex, "stratum " + quoted(P, e) + ": " + err.what());
    }
  }
  const std::set<std::pair<Element, Element>> cover_set(P.covers().begin(), P.covers().end());
  for (const auto& [key, f] : m.restrictions)
    if (!cover_set.count(key)) {
      const bool known = key.first < n && key.second < n;
      fail(ErrorCode::InvalidChainMap,
           known ? "restriction given on " + quoted(P, key.first) + " → " + quoted(P, key.second) +
                       ", which is not a cover"
                 : "restriction given on an unknown pair of strata");
    }
  if (!r.ok()) return r;
  for (const auto& [a, b] : P.covers()) {
    auto it = m.restrictions.find({a, b});
    if (it == m.restrictions.end()) {
      fail(ErrorCode::InvalidChainMap, "missing restriction on the cover " + quoted(P, a) + " ⋖ " + quoted(P, b));
      continue;
    }
    try {
      it->second.require_valid(m.strata[a], m.strata[b]);
    } catch (const Error& err) {
      fail(ErrorCode::InvalidChainMap, "restriction " + quoted(P, a) + " → " + quoted(P, b) + ": " + err.what());
    }
  }
  if (!r.ok()) return r;
  auto comp = compose_restrictions(m, &r);
  if (r.ok()) check_action(m, r);
  if (composites) *composites = std::move(comp);
  return r;
}

FilteredComplex over(FilteredComplex f, const Ring& ring) {
  f.complex = homalg::base_change(f.complex, ring);
  return f;
}

// Drops zero-rank degrees at both ends.
struct Trimmed {
  int lo;
  std::size_t first, last;  // inclusive index range kept; first > last when empty
};

Trimmed trim(int lo, const std::vector<std::size_t>& ranks) {
  std::size_t first = 0, last = ranks.size();
  while (first < ranks.size() && ranks[first] == 0) ++first;
  while (last > first && ranks[last - 1] == 0) --last;
  return {lo + static_cast<int>(first), first, last == 0 ? 0 : last - 1};
}

template <class T>
std::vector<T> slice(std::vector<T> v, const Trimmed& t) {
  if (t.first >= v.size() || t.first > t.last) return {};
  return std::vector<T>(std::make_move_iterator(v.begin() + static_cast<long>(t.first)),
                        std::make_move_iterator(v.begin() + static_cast<long>(t.last) + 1));
}

bool all_weighted(const ValidatedModel& s) {
  for (const auto& c : s.model().strata)
    if (!c.has_weights()) return false;
  return true;
}

GradedModule field_cohomology(const CochainComplex& c, const Ring& ring, const std::stop_token& stop) {
  return homalg::cohomology(homalg::base_change(c, ring), stop);
}

}  // namespace

std::string ValidationReport::to_string() const {
  if (ok()) return "ok";
  std::ostringstream os;
  for (const auto& v : violations) os << stratcoh::to_string(v.code) << ": " << v.message << "\n";
  return os.str();
}

ValidationReport validate(const StratifiedSpaceModel& model) { return validate_impl(model, nullptr); }

ValidatedModel::ValidatedModel(StratifiedSpaceModel model) : model_(std::move(model)) {
  auto report = validate_impl(model_, &composite_);
  if (!report.ok()) {
    const bool action_only = std::all_of(report.violations.begin(), report.violations.end(),
                                         [](const Violation& v) { return v.code == ErrorCode::ActionInvalid; });
    std::string msg = report.violations.front().message;
    if (report.violations.size() > 1) msg += " (and " + std::to_string(report.violations.size() - 1) + " more)";
    throw Error(action_only ? ErrorCode::ActionInvalid : ErrorCode::NotValidated, msg);
  }
  bottom_ = *model_.poset.bottom();
}

const ChainMap& ValidatedModel::restriction(Element a, Element b) const {
  auto it = composite_.find({a, b});
  if (it == composite_.end())
    throw Error(ErrorCode::NotComparable, "no restriction from " + quoted(model_.poset, a) + " to " +
                                              quoted(model_.poset, b));
  return it->second;
}

ValidatedModel ValidatedModel::upset(Element a) const {
  const auto& P = model_.poset;
  if (a >= P.size()) throw Error(ErrorCode::UnknownElement, "no stratum with index " + std::to_string(a));
  auto elems = P.upset(a);
  std::sort(elems.begin(), elems.end());
  std::vector<long> where(P.size(), -1);
  for (std::size_t i = 0; i < elems.size(); ++i) where[elems[i]] = static_cast<long>(i);
  ValidatedModel out;
  auto& m = out.model_;
  m.ring = model_.ring;
  m.poset = P.induced(elems);
  for (Element e : elems) {
    m.strata.push_back(model_.strata[e]);
    m.sigma.values.push_back(model_.sigma(e) - model_.sigma(a));
  }
  auto remap = [&](const CompositeMap& src, CompositeMap& dst) {
    for (const auto& [key, f] : src)
      if (where[key.first] >= 0 && where[key.second] >= 0)
        dst.emplace(std::pair<Element, Element>(where[key.first], where[key.second]), f);
  };
  remap(model_.restrictions, m.restrictions);
  remap(composite_, out.composite_);
  out.bottom_ = static_cast<Element>(where[a]);
  return out;
}

Element LComplex::top_of(std::uint32_t length, std::uint32_t chain, Element bottom) const {
  return length == 0 ? bottom : chains[length][chain].back();
}

LComplex build_resolution(const ValidatedModel& s, std::stop_token stop) {
  const auto& P = s.poset();
  const Element bottom = s.bottom();
  std::vector<Element> support;
  for (Element e : P.linear_extension())
    if (e != bottom) support.push_back(e);

  LComplex L;
  L.chains.push_back({Chain{}});
  for (auto& level : poset::enumerate_chains(P, support, stop)) L.chains.push_back(std::move(level));
  const poset::ChainIndex index(L.chains);
  const std::size_t dmax = L.chains.size() - 1;
  auto top = [&](std::size_t d, std::size_t c) { return L.top_of(static_cast<std::uint32_t>(d),
                                                                 static_cast<std::uint32_t>(c), bottom); };

  int lo = INT_MAX, hi = INT_MIN;
  for (const auto& c : s.model().strata)
    if (c.total_rank()) {
      lo = std::min(lo, c.lo());
      hi = std::max(hi, c.hi() + static_cast<int>(dmax));
    }
  if (lo == INT_MAX) {
    L.filtered.complex = CochainComplex(s.ring());
    return L;
  }
  const std::size_t span = static_cast<std::size_t>(hi - lo + 1);
  std::vector<std::size_t> ranks(span, 0);
  L.offsets.assign(span, {});
  for (std::size_t i = 0; i < span; ++i) {
    const int n = lo + static_cast<int>(i);
    auto& off = L.offsets[i];
    off.resize(dmax + 1);
    std::size_t pos = 0;
    for (std::size_t d = 0; d <= dmax; ++d) {
      off[d].resize(L.chains[d].size());
      for (std::size_t c = 0; c < L.chains[d].size(); ++c) {
        off[d][c] = pos;
        pos += s.stratum(top(d, c)).rank(n - static_cast<int>(d));
      }
    }
    ranks[i] = pos;
  }

  std::vector<SparseMatrix> diffs(span);
  parallel_for(span, [&](std::size_t i) {
    const int n = lo + static_cast<int>(i);
    if (i + 1 >= span) {
      diffs[i] = SparseMatrix(0, ranks[i]);
      return;
    }
    const auto& off = L.offsets[i];
    const auto& off1 = L.offsets[i + 1];
    std::vector<Triplet> t;
    for (std::size_t d = 0; d <= dmax; ++d) {
      const Integer sign = d % 2 ? -1 : 1;
      const int k = n - static_cast<int>(d);
      for (std::size_t c = 0; c < L.chains[d].size(); ++c) {
        const auto& C = s.stratum(top(d, c));
        if (!C.rank(k) || !C.rank(k + 1)) continue;
        const SparseMatrix dk = C.differential(k);
        for (std::size_t j = 0; j < dk.cols(); ++j)
          for (const auto& e : dk.column(j)) t.push_back({off1[d][c] + e.row, off[d][c] + j, sign * e.value});
      }
    }
    Chain smaller;
    for (std::size_t d1 = 1; d1 <= dmax; ++d1) {
      const int k = n + 1 - static_cast<int>(d1);
      for (std::size_t c1 = 0; c1 < L.chains[d1].size(); ++c1) {
        if ((c1 & 1023) == 0) check_stop(stop);
        const Chain& big = L.chains[d1][c1];
        const Element e1 = big.back();
        const std::size_t r1 = s.stratum(e1).rank(k);
        if (!r1) continue;
        const std::size_t tgt = off1[d1][c1];
        for (std::size_t pos = 0; pos < d1; ++pos) {
          smaller.assign(big.begin(), big.end());
          smaller.erase(smaller.begin() + static_cast<long>(pos));
          const long ci = index.find(smaller);
          if (ci < 0) throw Error(ErrorCode::Internal, "chain face missing from the enumeration");
          const std::size_t src = off[d1 - 1][static_cast<std::size_t>(ci)];
          const Integer sign = pos % 2 ? -1 : 1;
          if (pos + 1 < d1) {
            for (std::size_t x = 0; x < r1; ++x) t.push_back({tgt + x, src + x, sign});
            continue;
          }
          const Element e0 = top(d1 - 1, static_cast<std::size_t>(ci));
          const SparseMatrix* R = s.restriction(e0, e1).find(k);
          if (!R) continue;
          for (std::size_t j = 0; j < R->cols(); ++j)
            for (const auto& e : R->column(j)) t.push_back({tgt + e.row, src + j, sign * e.value});
        }
      }
    }
    diffs[i] = SparseMatrix::from_triplets(ranks[i + 1], ranks[i], std::move(t));
  });

  const bool weighted = all_weighted(s);
  std::vector<std::vector<int>> levels(span), weights(span);
  L.labels.assign(span, {});
  for (std::size_t i = 0; i < span; ++i) {
    const int n = lo + static_cast<int>(i);
    for (std::size_t d = 0; d <= dmax; ++d) {
      const int k = n - static_cast<int>(d);
      for (std::size_t c = 0; c < L.chains[d].size(); ++c) {
        const Element e = top(d, c);
        const auto& C = s.stratum(e);
        const std::size_t r = C.rank(k);
        if (!r) continue;
        const auto w = weighted ? C.weights(k) : std::vector<int>{};
        for (std::uint32_t x = 0; x < r; ++x) {
          L.labels[i].push_back({static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(c), k, x});
          levels[i].push_back(s.sigma(e));
          if (weighted) weights[i].push_back(w[x]);
        }
      }
    }
  }

  const Trimmed tr = trim(lo, ranks);
  std::optional<std::vector<std::vector<int>>> w;
  if (weighted) w = slice(std::move(weights), tr);
  L.filtered.complex =
      CochainComplex(s.ring(), tr.lo, slice(std::move(ranks), tr), slice(std::move(diffs), tr), std::move(w));
  L.filtered.levels = slice(std::move(levels), tr);
  L.labels = slice(std::move(L.labels), tr);
  L.offsets = slice(std::move(L.offsets), tr);
  return L;
}

FilteredComplex build_L_total(const ValidatedModel& s, std::stop_token stop) {
  return build_resolution(s, stop).filtered;
}

GradedModule open_stratum_compact_cohomology(const ValidatedModel& s, const Ring& ring, std::stop_token stop) {
  return homalg::cohomology(homalg::base_change(build_L_total(s, stop).complex, ring), stop);
}

TheoremAPage theorem_A_E1(const ValidatedModel& s, const Ring& ring, std::stop_token stop) {
  const auto& P = s.poset();
  const std::size_t n = P.size();
  std::vector<GradedModule> interval(n), stratum(n);
  parallel_for(n, [&](std::size_t b) {
    interval[b] = poset::reduced_interval_cohomology(P, s.bottom(), b, ring, stop);
    stratum[b] = field_cohomology(s.stratum(b), ring, stop);
  });
  TheoremAPage page;
  page.ring = ring;
  for (Element b = 0; b < n; ++b) {
    if (ring.is_integers())
      for (int i : interval[b].degrees())
        if (!interval[b].torsion(i).empty())
          throw Error(ErrorCode::TorsionObstruction, "H̃^" + std::to_string(i) + "(" + quoted(P, s.bottom()) +
                                                         ", " + quoted(P, b) + "; Z) has torsion");
    for (int i : interval[b].degrees()) {
      const std::size_t a = interval[b].rank(i);
      if (!a) continue;
      for (int j : stratum[b].degrees()) {
        const ModuleCell& cell = stratum[b].at(j);
        ModuleCell prod;
        prod.rank = a * cell.rank;
        for (std::size_t c = 0; c < a; ++c) prod.torsion.insert(prod.torsion.end(), cell.torsion.begin(), cell.torsion.end());
        prod.torsion = normalize_torsion(std::move(prod.torsion));
        for (const auto& [w, r] : cell.weights) prod.weights[w] = a * r;
        if (prod.is_zero()) continue;
        const int p = s.sigma(b);
        auto& acc = page.E1[{p, i + j + 2 - p}];
        acc.rank += prod.rank;
        acc.torsion.insert(acc.torsion.end(), prod.torsion.begin(), prod.torsion.end());
        for (const auto& [w, r] : prod.weights) acc.weights[w] += r;
        page.cells.push_back({b, i, j, interval[b].at(i), cell, std::move(prod)});
      }
    }
  }
  for (auto& [pq, cell] : page.E1) cell.torsion = normalize_torsion(std::move(cell.torsion));
  return page;
}

specseq::SpectralSequence theorem_A_ss(const ValidatedModel& s, const Ring& ring, specseq::PagesOptions options,
                                       std::stop_token stop) {
  if (!ring.is_field()) throw Error(ErrorCode::NotAField, "theorem_A_ss needs field coefficients");
  return specseq::pages(over(build_L_total(s, stop), ring), options, stop);
}

ClosedFiltration closed_filtration_complex(const ValidatedModel& s, Element alpha, const Ring& ring,
                                           std::stop_token stop) {
  const ValidatedModel sub = s.upset(alpha);
  const int base = s.sigma(alpha);
  const LComplex L = build_resolution(sub, stop);
  const auto& C = L.filtered.complex;
  const auto& head_complex = sub.stratum(sub.bottom());

  ClosedFiltration out;
  // Cone(A → L) with A the span of chains of length ≥ 1: degree n holds
  // L^n followed by A^(n+1); L sits at level -σ(α), A at level -σ(α_1).
  auto head = [&](int n) { return head_complex.rank(n); };
  auto a_rank = [&](int n) { return C.rank(n) - head(n); };
  const int lo = C.lo() - 1, hi = C.hi();
  std::vector<std::size_t> ranks;
  std::vector<SparseMatrix> diffs;
  std::vector<std::vector<int>> levels, weights;
  for (int n = lo; n <= hi; ++n) {
    const std::size_t rl = C.rank(n), ra = a_rank(n + 1);
    ranks.push_back(rl + ra);
    std::vector<int> lev(rl, -base), w;
    if (C.has_weights()) {
      w = C.weights(n);
      const auto wa = C.weights(n + 1);
      w.insert(w.end(), wa.begin() + static_cast<long>(head(n + 1)), wa.end());
    }
    for (std::size_t j = 0; j < ra; ++j) {
      const auto& lab = L.labels[static_cast<std::size_t>(n + 1 - C.lo())][head(n + 1) + j];
      const Element first = L.chains[lab.length][lab.chain].front();
      lev.push_back(-(sub.sigma(first) + base));
    }
    levels.push_back(std::move(lev));
    weights.push_back(std::move(w));

    std::vector<Triplet> t;
    const SparseMatrix dn = C.differential(n);
    for (std::size_t j = 0; j < dn.cols(); ++j)
      for (const auto& e : dn.column(j)) t.push_back({e.row, j, e.value});
    for (std::size_t j = 0; j < ra; ++j) t.push_back({head(n + 1) + j, rl + j, Integer(1)});
    const SparseMatrix dn1 = C.differential(n + 1);
    const std::size_t rl1 = C.rank(n + 1), h1 = head(n + 1), h2 = head(n + 2);
    for (std::size_t j = h1; j < dn1.cols(); ++j)
      for (const auto& e : dn1.column(j)) {
        if (e.row < h2) throw Error(ErrorCode::Internal, "chains of positive length do not form a subcomplex");
        t.push_back({rl1 + e.row - h2, rl + j - h1, -e.value});
      }
    diffs.push_back(SparseMatrix::from_triplets(rl1 + a_rank(n + 2), rl + ra, std::move(t)));
  }
  const Trimmed tr = trim(lo, ranks);
  std::optional<std::vector<std::vector<int>>> w;
  if (C.has_weights()) w = slice(std::move(weights), tr);
  out.filtered.complex = homalg::base_change(
      CochainComplex(s.ring(), tr.lo, slice(std::move(ranks), tr), slice(std::move(diffs), tr), std::move(w)), ring);
  out.filtered.levels = slice(std::move(levels), tr);

  for (Element b : s.poset().upset(alpha)) {
    check_stop(stop);
    out.open_strata.emplace(b, open_stratum_compact_cohomology(s.upset(b), ring, stop));
  }
  return out;
}

specseq::SpectralSequence closed_filtration_ss(const ValidatedModel& s, Element alpha, const Ring& ring,
                                               specseq::PagesOptions options, std::stop_token stop) {
  auto cf = closed_filtration_complex(s, alpha, ring, stop);
  auto ss = specseq::pages(cf.filtered, options, stop);
  std::map<specseq::Bidegree, std::size_t> expect;
  for (const auto& [b, h] : cf.open_strata) {
    const int p = -s.sigma(b);
    for (int n : h.degrees())
      if (h.rank(n)) expect[{p, n - p}] += h.rank(n);
  }
  std::map<specseq::Bidegree, std::size_t> got;
  for (const auto& [pq, dim] : ss.page(1).dims)
    if (dim) got[pq] = dim;
  if (got != expect)
    throw Error(ErrorCode::Internal, "closed-stratum E_1 disagrees with the open strata of " +
                                         quoted(s.poset(), alpha));
  return ss;
}

namespace {

struct TopCohomology {
  std::size_t m = 0;  // rank of the top cochain group
  std::size_t h = 0;  // rank of the top cohomology
  std::vector<Chain> basis;
  std::unordered_map<std::string, std::size_t> lookup;
  IntMatrix projection;  // h × m
  IntMatrix section;     // m × h
};

std::string chain_key(const Chain& c) {
  return std::string(reinterpret_cast<const char*>(c.data()), c.size() * sizeof(std::uint32_t));
}

TopCohomology top_cohomology(const poset::Poset& P, Element z, Element b, int d, const std::stop_token& stop) {
  TopCohomology out;
  const int top = d - 2;
  auto ic = poset::interval_cochain_complex(P, z, b, Ring::integers(), stop);
  const auto& C = ic.complex;
  out.m = C.rank(top);
  if (!out.m) return out;
  out.basis = ic.basis[static_cast<std::size_t>(top - C.lo())];
  for (std::size_t i = 0; i < out.basis.size(); ++i) out.lookup.emplace(chain_key(out.basis[i]), i);
  const IntMatrix M = C.differential(top - 1).to_dense();
  std::size_t r = 0;
  IntMatrix U = IntMatrix::identity(out.m), Ui = IntMatrix::identity(out.m);
  if (M.cols()) {
    auto snf = homalg::smith_normal_form(M, {true, true}, stop);
    r = snf.rank();
    for (std::size_t i = 0; i < r; ++i)
      if (abs_value(snf.D(i, i)) != 1)
        throw Error(ErrorCode::TorsionObstruction, "H̃^" + std::to_string(top) + "(" + quoted(P, z) + ", " +
                                                       quoted(P, b) + "; Z) has torsion");
    U = std::move(snf.U);
    Ui = std::move(snf.U_inverse);
  }
  out.h = out.m - r;
  out.projection = IntMatrix(out.h, out.m);
  out.section = IntMatrix(out.m, out.h);
  for (std::size_t i = 0; i < out.h; ++i)
    for (std::size_t j = 0; j < out.m; ++j) {
      out.projection(i, j) = U(r + i, j);
      out.section(j, i) = Ui(j, r + i);
    }
  return out;
}

}  // namespace

FilteredComplex K_complex(const ValidatedModel& s, const poset::IncreasingFunction& rho, const Ring& ring,
                          std::stop_token stop) {
  const auto& P = s.poset();
  const Element z = s.bottom();
  const std::size_t n = P.size();
  if (!poset::is_cohen_macaulay_graded(P, rho, stop))
    throw Error(ErrorCode::NotCohenMacaulay, "the poset is not Cohen–Macaulay for the given grading");
  for (const auto& [a, b] : P.covers())
    if (rho(b) != rho(a) + 1)
      throw Error(ErrorCode::NotCohenMacaulay, "ρ does not grade the cover " + quoted(P, a) + " ⋖ " + quoted(P, b));

  std::vector<TopCohomology> tops(n);
  parallel_for(n, [&](std::size_t b) { tops[b] = top_cohomology(P, z, b, rho(b), stop); });

  int dmax = 0, klo = INT_MAX, khi = INT_MIN;
  for (Element b = 0; b < n; ++b) {
    dmax = std::max(dmax, rho(b));
    const auto& C = s.stratum(b);
    if (C.total_rank()) {
      klo = std::min(klo, C.lo());
      khi = std::max(khi, C.hi());
    }
  }
  if (klo == INT_MAX) return homalg::trivial_filtration(CochainComplex(ring));
  const std::size_t kspan = static_cast<std::size_t>(khi - klo + 1);
  const bool weighted = all_weighted(s);

  // Column d: for each β with ρ(β) = d, h_β copies of C(β).
  std::vector<std::vector<Element>> members(static_cast<std::size_t>(dmax + 1));
  for (Element b = 0; b < n; ++b) members[static_cast<std::size_t>(rho(b))].push_back(b);
  std::vector<std::vector<std::size_t>> offset(n, std::vector<std::size_t>(kspan, 0));
  std::vector<CochainComplex> columns;
  for (std::size_t d = 0; d < members.size(); ++d) {
    std::vector<std::size_t> ranks(kspan, 0);
    std::vector<SparseMatrix> diffs;
    std::vector<std::vector<int>> weights(kspan);
    for (std::size_t ki = 0; ki < kspan; ++ki) {
      const int k = klo + static_cast<int>(ki);
      for (Element b : members[d]) {
        offset[b][ki] = ranks[ki];
        const auto& C = s.stratum(b);
        ranks[ki] += tops[b].h * C.rank(k);
        if (weighted)
          for (std::size_t t = 0; t < tops[b].h; ++t) {
            const auto w = C.weights(k);
            weights[ki].insert(weights[ki].end(), w.begin(), w.end());
          }
      }
    }
    for (std::size_t ki = 0; ki < kspan; ++ki) {
      const int k = klo + static_cast<int>(ki);
      const std::size_t rows = ki + 1 < kspan ? ranks[ki + 1] : 0;
      std::vector<Triplet> t;
      for (Element b : members[d]) {
        const auto& C = s.stratum(b);
        if (ki + 1 >= kspan || !C.rank(k) || !C.rank(k + 1)) continue;
        const SparseMatrix dk = C.differential(k);
        for (std::size_t c = 0; c < tops[b].h; ++c)
          for (std::size_t j = 0; j < dk.cols(); ++j)
            for (const auto& e : dk.column(j))
              t.push_back({offset[b][ki + 1] + c * C.rank(k + 1) + e.row, offset[b][ki] + c * C.rank(k) + j, e.value});
      }
      diffs.push_back(SparseMatrix::from_triplets(rows, ranks[ki], std::move(t)));
    }
    std::optional<std::vector<std::vector<int>>> w;
    if (weighted) w = std::move(weights);
    columns.emplace_back(s.ring(), klo, std::move(ranks), std::move(diffs), std::move(w));
  }

  std::vector<ChainMap> horizontal(columns.size() > 0 ? columns.size() - 1 : 0);
  std::vector<std::map<int, std::vector<Triplet>>> entries(horizontal.size());
  for (const auto& [b, g] : P.covers()) {
    check_stop(stop);
    const auto& Tb = tops[b];
    const auto& Tg = tops[g];
    if (!Tb.h || !Tg.h) continue;
    const int d = rho(b);
    // Induced map on top cohomology: append β to each chain of (0, β).
    IntMatrix as(Tg.m, Tb.h);
    for (std::size_t zi = 0; zi < Tb.m; ++zi) {
      Chain c = Tb.basis[zi];
      Integer sign = 1;
      if (b != z) {
        c.push_back(static_cast<std::uint32_t>(b));
        if ((d - 1) % 2) sign = -1;
      }
      auto it = Tg.lookup.find(chain_key(c));
      if (it == Tg.lookup.end()) throw Error(ErrorCode::Internal, "extended chain missing from the interval basis");
      for (std::size_t col = 0; col < Tb.h; ++col) as(it->second, col) += sign * Tb.section(zi, col);
    }
    const IntMatrix A = Tg.projection * as;  // h_γ × h_β
    const ChainMap& R = s.restriction(b, g);
    auto& out = entries[static_cast<std::size_t>(d)];
    for (std::size_t ki = 0; ki < kspan; ++ki) {
      const int k = klo + static_cast<int>(ki);
      const SparseMatrix* Rk = R.find(k);
      if (!Rk) continue;
      const std::size_t rb = s.stratum(b).rank(k), rg = s.stratum(g).rank(k);
      for (std::size_t tg = 0; tg < Tg.h; ++tg)
        for (std::size_t tb = 0; tb < Tb.h; ++tb) {
          const Integer& x = A(tg, tb);
          if (x == 0) continue;
          for (std::size_t j = 0; j < Rk->cols(); ++j)
            for (const auto& e : Rk->column(j))
              out[k].push_back({offset[g][ki] + tg * rg + e.row, offset[b][ki] + tb * rb + j, x * e.value});
        }
    }
  }
  for (std::size_t d = 0; d < horizontal.size(); ++d) {
    std::map<int, SparseMatrix> blocks;
    for (auto& [k, t] : entries[d])
      blocks.emplace(k, SparseMatrix::from_triplets(columns[d + 1].rank(k), columns[d].rank(k), std::move(t)));
    horizontal[d] = ChainMap(std::move(blocks));
  }
  return over(homalg::total_complex(columns, horizontal, 0), ring);
}

bool EulerReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const EulerCheck& c) { return c.ok(); });
}

std::vector<EulerCheck> EulerReport::failures() const {
  std::vector<EulerCheck> out;
  for (const auto& c : checks)
    if (!c.ok()) out.push_back(c);
  return out;
}

EulerReport euler_identities_check(const ValidatedModel& s, std::stop_token stop) {
  const auto& P = s.poset();
  const std::size_t n = P.size();
  const Ring field = s.ring().is_field() ? s.ring() : Ring::rationals();
  const bool weighted = all_weighted(s);
  std::vector<long long> closed(n), open(n);
  std::vector<std::map<int, long long>> wclosed(n), wopen(n);
  for (Element a = 0; a < n; ++a) {
    const auto& C = s.stratum(a);
    const auto hc = field_cohomology(C, field, stop);
    const auto L = build_L_total(s.upset(a), stop).complex;
    const auto ho = field_cohomology(L, field, stop);
    closed[a] = hc.euler_characteristic();
    open[a] = ho.euler_characteristic();
    if (weighted) {
      wclosed[a] = hc.weights_dropped ? homalg::weighted_euler_characteristic(C) : hc.weighted_euler_characteristic();
      wopen[a] = ho.weights_dropped ? homalg::weighted_euler_characteristic(L) : ho.weighted_euler_characteristic();
    }
  }
  EulerReport rep;
  for (Element a = 0; a < n; ++a) {
    rep.closed[a] = closed[a];
    rep.open[a] = open[a];
  }
  auto value = [](const std::map<int, long long>& m, int w) {
    auto it = m.find(w);
    return it == m.end() ? 0LL : it->second;
  };
  for (Element a = 0; a < n; ++a) {
    std::map<Element, long long> mu;
    for (Element c : P.linear_extension()) {
      if (!P.leq(a, c)) continue;
      if (c == a) {
        mu[c] = 1;
        continue;
      }
      long long sum = 0;
      for (const auto& [x, v] : mu)
        if (P.less(x, c)) sum += v;
      mu[c] = -sum;
    }
    EulerCheck add{"additivity", a, closed[a], 0, std::nullopt};
    EulerCheck mob{"mobius", a, open[a], 0, std::nullopt};
    std::set<int> ws;
    for (const auto& [b, m] : mu) {
      add.rhs += open[b];
      mob.rhs += m * closed[b];
      for (const auto& [w, v] : wopen[b]) ws.insert(w);
      for (const auto& [w, v] : wclosed[b]) ws.insert(w);
    }
    rep.checks.push_back(add);
    rep.checks.push_back(mob);
    for (int w : ws) {
      EulerCheck wa{"additivity", a, value(wclosed[a], w), 0, w};
      EulerCheck wm{"mobius", a, value(wopen[a], w), 0, w};
      for (const auto& [b, m] : mu) {
        wa.rhs += value(wopen[b], w);
        wm.rhs += m * value(wclosed[b], w);
      }
      rep.checks.push_back(wa);
      rep.checks.push_back(wm);
    }
  }
  return rep;
}

BorelMooreResult borel_moore_ss(const ValidatedModel& s, const Ring& ring, specseq::PagesOptions options,
                                std::stop_token stop) {
  if (!ring.is_field()) throw Error(ErrorCode::NotAField, "borel_moore_ss needs field coefficients");
  const auto f = over(build_L_total(s, stop), ring);
  BorelMooreResult out;
  out.ss = specseq::pages(homalg::dualize_filtered(f), options, stop);
  out.homology = homalg::borel_moore_dual(homalg::cohomology(f.complex, stop), ring);
  std::set<int> degrees;
  for (int i : out.homology.degrees()) degrees.insert(i);
  for (int k : out.ss.abutment.degrees()) degrees.insert(-k);
  for (int i : degrees)
    if (out.ss.abutment.rank(-i) != out.homology.rank(i))
      throw Error(ErrorCode::Internal, "dual complex disagrees with the Borel–Moore dual in degree " +
                                           std::to_string(i));
  return out;
}

namespace {

bool is_signed_permutation(const SparseMatrix& m) {
  if (m.rows() != m.cols()) return false;
  std::vector<char> hit(m.rows(), 0);
  for (std::size_t j = 0; j < m.cols(); ++j) {
    const auto& col = m.column(j);
    if (col.size() != 1 || abs_value(col[0].value) != 1 || hit[col[0].row]) return false;
    hit[col[0].row] = 1;
  }
  return true;
}

// Generator g acting on L in every degree.
std::vector<SparseMatrix> generator_on_L(const ValidatedModel& s, const LComplex& L, const poset::ChainIndex& index,
                                         const GroupGenerator& g) {
  const auto& C = L.filtered.complex;
  std::vector<SparseMatrix> out;
  Chain image;
  for (int n = C.lo(); n <= C.hi(); ++n) {
    const std::size_t i = static_cast<std::size_t>(n - C.lo());
    std::vector<Triplet> t;
    for (std::size_t b = 0; b < L.labels[i].size(); ++b) {
      const auto& lab = L.labels[i][b];
      const Chain& c = L.chains[lab.length][lab.chain];
      image.clear();
      for (auto e : c) image.push_back(static_cast<std::uint32_t>(g.strata[e]));
      const long ci = index.find(image);
      if (ci < 0) throw Error(ErrorCode::ActionInvalid, "the action does not map chains to chains");
      const Element e = L.top_of(lab.length, lab.chain, s.bottom());
      const SparseMatrix* block = g.maps[e].find(lab.k);
      if (!block) continue;
      const std::size_t base = L.offsets[i][lab.length][static_cast<std::size_t>(ci)];
      for (const auto& entry : block->column(lab.local)) t.push_back({base + entry.row, b, entry.value});
    }
    out.push_back(SparseMatrix::from_triplets(C.rank(n), C.rank(n), std::move(t)));
  }
  return out;
}

std::string matrix_key(const std::vector<SparseMatrix>& blocks) {
  std::string key;
  for (const auto& m : blocks) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      for (const auto& e : m.column(j)) key += std::to_string(e.row) + ":" + to_string(e.value) + ",";
      key += ';';
    }
    key += '|';
  }
  return key;
}

void dims_from_ranks(const CochainComplex& C, const std::vector<std::size_t>& space,
                     const std::vector<std::size_t>& out_rank, InvariantDims& res) {
  // out_rank[i] = rank of the invariant differential leaving degree lo + i.
  for (std::size_t i = 0; i < space.size(); ++i) {
    const std::size_t into = i > 0 ? out_rank[i - 1] : 0;
    const std::size_t dim = space[i] - out_rank[i] - into;
    if (dim) res.compact[C.lo() + static_cast<int>(i)] = dim;
  }
}

}  // namespace

InvariantDims invariant_dims(const ValidatedModel& s, const Ring& ring, InvariantOptions options,
                             std::stop_token stop) {
  if (ring.kind() != Ring::Kind::Q)
    throw Error(ErrorCode::NotCharZero, ring.is_integers()
                                            ? "invariants need Q: averaging divides by the group order"
                                            : "invariants need characteristic zero, got " + ring.to_string());
  const LComplex L = build_resolution(s, stop);
  const CochainComplex C = homalg::base_change(L.filtered.complex, ring);
  const poset::ChainIndex index(L.chains);
  const std::size_t span = C.total_rank() ? static_cast<std::size_t>(C.hi() - C.lo() + 1) : 0;
  std::vector<std::vector<SparseMatrix>> gens;
  for (const auto& g : s.model().action) gens.push_back(generator_on_L(s, L, index, g));

  bool monomial = !options.projector;
  for (const auto& g : gens)
    for (const auto& m : g)
      if (monomial && !is_signed_permutation(m)) monomial = false;

  InvariantDims res;
  res.monomial = monomial;
  if (monomial) {
    struct Orbits {
      std::vector<long> orbit;  // basis -> orbit id
      std::vector<int> sign;
      std::vector<std::vector<std::size_t>> members;
      std::vector<long> live;  // orbit -> invariant index or -1
      std::size_t count = 0;
    };
    std::vector<Orbits> orb(span);
    for (std::size_t i = 0; i < span; ++i) {
      const std::size_t r = C.rank(C.lo() + static_cast<int>(i));
      auto& o = orb[i];
      o.orbit.assign(r, -1);
      o.sign.assign(r, 0);
      for (std::size_t b = 0; b < r; ++b) {
        if (o.orbit[b] >= 0) continue;
        const long id = static_cast<long>(o.members.size());
        o.members.emplace_back();
        bool zero = false;
        std::deque<std::size_t> queue{b};
        o.orbit[b] = id;
        o.sign[b] = 1;
        while (!queue.empty()) {
          const std::size_t x = queue.front();
          queue.pop_front();
          o.members.back().push_back(x);
          for (const auto& g : gens) {
            const auto& e = g[i].column(x)[0];
            const int sg = o.sign[x] * (e.value > 0 ? 1 : -1);
            if (o.orbit[e.row] < 0) {
              o.orbit[e.row] = id;
              o.sign[e.row] = sg;
              queue.push_back(e.row);
            } else if (o.sign[e.row] != sg) {
              zero = true;
            }
          }
        }
        o.live.push_back(zero ? -1 : static_cast<long>(o.count++));
      }
    }
    std::vector<std::size_t> space(span), out_rank(span, 0), dual_rank(span, 0);
    for (std::size_t i = 0; i < span; ++i) space[i] = orb[i].count;
    for (std::size_t i = 0; i + 1 < span; ++i) {
      check_stop(stop);
      const int n = C.lo() + static_cast<int>(i);
      const SparseMatrix d = C.differential(n);
      const SparseMatrix dt = d.transpose();
      const auto& src = orb[i];
      const auto& tgt = orb[i + 1];
      std::vector<Triplet> t, td;
      for (std::size_t o = 0; o < src.members.size(); ++o) {
        if (src.live[o] < 0) continue;
        std::map<std::size_t, Integer> acc;
        for (std::size_t x : src.members[o])
          for (const auto& e : d.column(x)) acc[e.row] += src.sign[x] * e.value;
        for (const auto& [y, v] : acc) {
          const long oy = tgt.orbit[y];
          if (v != 0 && tgt.live[oy] >= 0 && tgt.members[oy].front() == y)
            t.push_back({static_cast<std::size_t>(tgt.live[oy]), static_cast<std::size_t>(src.live[o]), v});
        }
      }
      for (std::size_t o = 0; o < tgt.members.size(); ++o) {
        if (tgt.live[o] < 0) continue;
        std::map<std::size_t, Integer> acc;
        for (std::size_t y : tgt.members[o])
          for (const auto& e : dt.column(y)) acc[e.row] += tgt.sign[y] * e.value;
        for (const auto& [x, v] : acc) {
          const long ox = src.orbit[x];
          if (v != 0 && src.live[ox] >= 0 && src.members[ox].front() == x)
            td.push_back({static_cast<std::size_t>(src.live[ox]), static_cast<std::size_t>(tgt.live[o]), v});
        }
      }
      out_rank[i] = homalg::rank(SparseMatrix::from_triplets(tgt.count, src.count, std::move(t)), ring, stop);
      dual_rank[i] = homalg::rank(SparseMatrix::from_triplets(src.count, tgt.count, std::move(td)), ring, stop);
    }
    dims_from_ranks(C, space, out_rank, res);
    InvariantDims dual;
    dims_from_ranks(C, space, dual_rank, dual);
    res.borel_moore = dual.compact;
    return res;
  }

  // Enumerate the group on L and average.
  std::vector<SparseMatrix> identity;
  for (std::size_t i = 0; i < span; ++i) identity.push_back(SparseMatrix::identity(C.rank(C.lo() + static_cast<int>(i))));
  std::vector<std::vector<SparseMatrix>> elements{identity};
  std::unordered_map<std::string, std::size_t> seen{{matrix_key(identity), 0}};
  for (std::size_t q = 0; q < elements.size(); ++q) {
    check_stop(stop);
    for (const auto& g : gens) {
      std::vector<SparseMatrix> prod;
      for (std::size_t i = 0; i < span; ++i) prod.push_back(g[i] * elements[q][i]);
      auto key = matrix_key(prod);
      if (seen.count(key)) continue;
      if (elements.size() >= options.max_order)
        throw Error(ErrorCode::ActionInvalid, "the action does not generate a group of order ≤ " +
                                                  std::to_string(options.max_order));
      seen.emplace(std::move(key), elements.size());
      elements.push_back(std::move(prod));
    }
  }
  res.group_order = elements.size();
  std::vector<SparseMatrix> proj(span);
  for (std::size_t i = 0; i < span; ++i) {
    const std::size_t r = C.rank(C.lo() + static_cast<int>(i));
    proj[i] = SparseMatrix(r, r);
    for (const auto& g : elements) proj[i] = proj[i] + g[i];
  }
  std::vector<std::size_t> space(span), out_rank(span, 0), dual_rank(span, 0);
  for (std::size_t i = 0; i < span; ++i) space[i] = homalg::rank(proj[i], ring, stop);
  for (std::size_t i = 0; i + 1 < span; ++i) {
    const SparseMatrix d = C.differential(C.lo() + static_cast<int>(i));
    out_rank[i] = homalg::rank(d * proj[i], ring, stop);
    dual_rank[i] = homalg::rank(d.transpose() * proj[i + 1].transpose(), ring, stop);
  }
  dims_from_ranks(C, space, out_rank, res);
  InvariantDims dual;
  dims_from_ranks(C, space, dual_rank, dual);
  res.borel_moore = dual.compact;
  return res;
}

}  // namespace stratcoh::strat
