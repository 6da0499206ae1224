#pragma once

#include <cstdint>
#include <optional>
#include <stop_token>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "stratcoh/complex.hpp"
#include "stratcoh/specseq.hpp"

namespace stratcoh::poset {

using Element = std::size_t;
using Chain = std::vector<std::uint32_t>;

/// Finite poset. Elements keep their input order; the order relation is held
/// as a dense closure matrix and the cover relation is recomputed from it.
class Poset {
 public:
  Poset() = default;

  /// `relations` may be any generating set of strict relations a < b.
  /// Throws DuplicateElement, UnknownElement, CycleDetected.
  static Poset from_cover_relations(std::vector<std::string> elements,
                                    const std::vector<std::pair<std::string, std::string>>& relations);
  /// Same, with relations given as element indices.
  static Poset from_relations(std::vector<std::string> elements,
                              const std::vector<std::pair<Element, Element>>& relations);

  std::size_t size() const { return ids_.size(); }
  const std::string& id(Element e) const { return ids_.at(e); }
  const std::vector<std::string>& ids() const { return ids_; }
  std::optional<Element> find(const std::string& id) const;
  /// Throws UnknownElement.
  Element index(const std::string& id) const;

  bool leq(Element a, Element b) const { return (up_[a][b >> 6] >> (b & 63)) & 1u; }
  bool less(Element a, Element b) const { return a != b && leq(a, b); }
  bool comparable(Element a, Element b) const { return leq(a, b) || leq(b, a); }

  /// Canonical cover pairs (a, b), sorted.
  const std::vector<std::pair<Element, Element>>& covers() const { return covers_; }
  const std::vector<Element>& upper_covers(Element e) const { return upper_[e]; }
  const std::vector<Element>& lower_covers(Element e) const { return lower_[e]; }

  std::vector<Element> minimal_elements() const;
  std::vector<Element> maximal_elements() const;
  std::optional<Element> bottom() const;
  std::optional<Element> top() const;

  /// Elements of (x, y), (x, y], [x, y] in a linear extension order.
  std::vector<Element> open_interval(Element x, Element y) const;
  std::vector<Element> half_open_interval(Element x, Element y) const;
  std::vector<Element> closed_interval(Element x, Element y) const;
  /// Elements ≥ x.
  std::vector<Element> upset(Element x) const;

  /// A fixed linear extension (topological order).
  const std::vector<Element>& linear_extension() const { return topo_; }

  /// Length of the longest chain from a minimal element.
  std::vector<int> rank_function() const;

  /// Induced subposet on `subset` (in that order).
  Poset induced(const std::vector<Element>& subset) const;

  friend bool operator==(const Poset& a, const Poset& b) { return a.ids_ == b.ids_ && a.covers_ == b.covers_; }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, Element> lookup_;
  std::vector<std::vector<std::uint64_t>> up_;
  std::vector<std::pair<Element, Element>> covers_;
  std::vector<std::vector<Element>> upper_, lower_;
  std::vector<Element> topo_;
};

/// Integer function on the elements; "increasing" means x < y ⇒ f(x) < f(y).
struct IncreasingFunction {
  std::vector<int> values;
  int operator()(Element e) const { return values.at(e); }
  /// Throws NotIncreasing naming the first offending cover.
  void require_increasing(const Poset& p) const;
  bool is_increasing(const Poset& p) const;
  friend bool operator==(const IncreasingFunction&, const IncreasingFunction&) = default;
};

/// Longest-chain rank from the bottom; always strictly increasing.
IncreasingFunction default_grading(const Poset& p);

/// All chains in `support` (elements listed in a linear extension order,
/// strict order taken from `p`). chains[k] holds the chains with k+1 elements,
/// each sorted increasingly and the list sorted lexicographically by element index.
std::vector<std::vector<Chain>> enumerate_chains(const Poset& p, const std::vector<Element>& support,
                                                 std::stop_token stop = {});

/// Lookup from chain to its position within chains[k].
class ChainIndex {
 public:
  explicit ChainIndex(const std::vector<std::vector<Chain>>& chains);
  /// Position of `c` among chains of its length, or -1.
  long find(const Chain& c) const;

 private:
  struct Hash {
    std::size_t operator()(const Chain& c) const;
  };
  std::unordered_map<Chain, std::size_t, Hash> index_;
};

struct IntervalCochainComplex {
  homalg::CochainComplex complex;
  /// basis[k - complex.lo()] = chains spanning degree k (interior elements only).
  std::vector<std::vector<Chain>> basis;
};

/// C̃(x, y): the chain z_0 < … < z_d of the open interval sits in degree d,
/// the empty chain in degree -1, and x = y gives one generator in degree -2.
/// Inserting an element at 0-based slot i carries the sign (-1)^i.
IntervalCochainComplex interval_cochain_complex(const Poset& p, Element x, Element y,
                                                const Ring& ring = Ring::integers(), std::stop_token stop = {});

/// Reduced order complex of an arbitrary element set (degree -1 = empty chain).
IntervalCochainComplex order_complex(const Poset& p, const std::vector<Element>& support,
                                     const Ring& ring = Ring::integers(), std::stop_token stop = {});

homalg::GradedModule reduced_interval_cohomology(const Poset& p, Element x, Element y,
                                                 const Ring& ring = Ring::integers(), std::stop_token stop = {});

/// Σ_i (-1)^i rank H̃^i(x, y) over Z.
long long mobius(const Poset& p, Element x, Element y, std::stop_token stop = {});
/// Philip Hall recursion: 1 if x = y, else -Σ_{x ≤ z < y} μ(x, z).
long long mobius_recursive(const Poset& p, Element x, Element y);

/// Half-open interval complex C̃(N(x, y]) with the decreasing filtration
/// "σ of the top element ≥ p" (the empty chain sits at σ(x)).
homalg::FilteredComplex half_open_filtered_complex(const Poset& p, Element x, Element y,
                                                   const IncreasingFunction& sigma, const Ring& ring);

/// Spectral sequence of the half-open interval filtration. Requires x < y.
specseq::SpectralSequence acyclicity_ss(const Poset& p, Element x, Element y, const IncreasingFunction& sigma,
                                        const Ring& ring = Ring::rationals(), std::stop_token stop = {});

/// Requires a unique bottom 0̂ and ρ(0̂) = 0. True iff H̃^i(0̂, β; Z) = 0 for
/// every β > 0̂ and every i < ρ(β) - 2.
bool is_cohen_macaulay_graded(const Poset& p, const IncreasingFunction& rho, std::stop_token stop = {});

// Standard families.

/// Subsets of {1..n} ordered by inclusion; ids "{}", "{1}", "{1,2}", ...
Poset boolean_lattice(int n);
/// Set partitions of {1..n} ordered by refinement (finest at the bottom);
/// ids list blocks by their least element, e.g. "1,2|3".
Poset partition_lattice(int n);
/// Chain 0 < 1 < ... < n-1 with ids "0", "1", ...
Poset chain_poset(int n);
/// Set partitions of {1..n} as restricted growth strings (label[i] = block of
/// i+1, blocks numbered by least element), in the element order of
/// partition_lattice(n).
std::vector<std::vector<int>> set_partitions(int n);
int partition_blocks(const std::vector<int>& label);
/// "1,2|3"-style id of a partition.
std::string partition_id(const std::vector<int>& label);
/// Cartesian product with the componentwise order; ids "a×b".
Poset product(const Poset& a, const Poset& b);

}  // namespace stratcoh::poset
