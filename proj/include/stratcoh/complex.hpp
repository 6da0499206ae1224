#pragma once

#include <map>
#include <optional>
#include <stop_token>
#include <string>
#include <vector>

#include "stratcoh/matrix.hpp"
#include "stratcoh/ring.hpp"

namespace stratcoh::homalg {

/// One degree of a finitely generated graded abelian group (or vector space).
struct ModuleCell {
  std::size_t rank = 0;
  /// Invariant factors > 1, each dividing the next.
  std::vector<Integer> torsion;
  /// weight -> rank; sums to `rank` when present.
  std::map<int, std::size_t> weights;

  bool is_zero() const { return rank == 0 && torsion.empty(); }
  friend bool operator==(const ModuleCell&, const ModuleCell&) = default;
};

class GradedModule {
 public:
  /// Returns an empty cell outside the support.
  const ModuleCell& at(int degree) const;
  ModuleCell& cell(int degree) { return cells_[degree]; }
  void set(int degree, ModuleCell cell);

  std::size_t rank(int degree) const { return at(degree).rank; }
  const std::vector<Integer>& torsion(int degree) const { return at(degree).torsion; }

  /// Degrees with a nonzero cell, ascending.
  std::vector<int> degrees() const;
  bool is_zero() const { return degrees().empty(); }
  bool has_weights() const;

  /// Set when an operation could not carry weight tags through.
  bool weights_dropped = false;

  long long euler_characteristic() const;
  /// weight -> alternating rank sum over degrees.
  std::map<int, long long> weighted_euler_characteristic() const;

  /// Drops torsion and weights; what remains is the Betti table.
  std::map<int, std::size_t> betti() const;

  std::string to_string() const;

  /// Zero cells are ignored: two modules are equal iff their nonzero cells are.
  friend bool operator==(const GradedModule& a, const GradedModule& b);

 private:
  std::map<int, ModuleCell> cells_;
};

/// Bounded cochain complex of finite free modules. d_k maps degree k to k+1
/// and is stored as a rank(k+1) x rank(k) matrix acting on coordinate columns.
class CochainComplex {
 public:
  CochainComplex() : ring_(Ring::integers()) {}
  explicit CochainComplex(Ring ring) : ring_(ring) {}
  /// `differentials[i]` is d at degree lo + i; missing trailing entries are zero.
  /// Entries are normalized into the ring on construction.
  CochainComplex(Ring ring, int lo, std::vector<std::size_t> ranks, std::vector<SparseMatrix> differentials,
                 std::optional<std::vector<std::vector<int>>> weights = std::nullopt);

  const Ring& ring() const { return ring_; }
  int lo() const { return lo_; }
  /// Largest degree in the support; lo() - 1 for the zero complex.
  int hi() const { return lo_ + static_cast<int>(ranks_.size()) - 1; }
  std::size_t rank(int degree) const;
  std::size_t total_rank() const;
  /// d at `degree`; a zero matrix of the right shape outside the support.
  SparseMatrix differential(int degree) const;
  const std::vector<std::size_t>& ranks() const { return ranks_; }

  bool has_weights() const { return weights_.has_value(); }
  /// Per-basis weight tags of a degree (empty outside the support).
  std::vector<int> weights(int degree) const;
  void set_weights(std::optional<std::vector<std::vector<int>>> weights);
  /// True when every differential entry joins basis vectors of equal weight.
  bool is_weight_homogeneous() const;

  /// Throws InvalidComplex on shape errors or d∘d ≠ 0 (in the ring).
  void require_valid() const;

  friend bool operator==(const CochainComplex&, const CochainComplex&) = default;

 private:
  Ring ring_;
  int lo_ = 0;
  std::vector<std::size_t> ranks_;
  std::vector<SparseMatrix> diffs_;
  std::optional<std::vector<std::vector<int>>> weights_;
};

/// Degree-preserving map of complexes, one block per degree (absent = zero).
class ChainMap {
 public:
  ChainMap() = default;
  explicit ChainMap(std::map<int, SparseMatrix> blocks) : blocks_(std::move(blocks)) {}

  static ChainMap identity(const CochainComplex& c);

  /// Block at `degree`, or nullptr when it is zero.
  const SparseMatrix* find(int degree) const;
  SparseMatrix block(int degree, const CochainComplex& source, const CochainComplex& target) const;
  void set_block(int degree, SparseMatrix m);
  const std::map<int, SparseMatrix>& blocks() const { return blocks_; }
  bool is_zero() const;

  /// Throws InvalidChainMap naming the degree where shapes or commutation fail.
  void require_valid(const CochainComplex& source, const CochainComplex& target) const;
  /// Degree where d∘f ≠ f∘d, if any (shapes must already be right).
  std::optional<int> first_noncommuting_degree(const CochainComplex& source, const CochainComplex& target) const;

  /// (after ∘ *this), blockwise.
  ChainMap then(const ChainMap& after) const;
  /// Same maps with entries reduced into the ring.
  ChainMap normalized(const Ring& ring) const;

  /// Equality as maps into a complex over `ring` (entries compared after reduction).
  bool equals(const ChainMap& other, const Ring& ring) const;

  friend bool operator==(const ChainMap&, const ChainMap&) = default;

 private:
  std::map<int, SparseMatrix> blocks_;
};

/// Cohomology per degree. Over Z: free rank and torsion; over fields: dimensions.
/// Weight tags are carried through when the complex is weight homogeneous and
/// dropped (with the module flag set) otherwise.
GradedModule cohomology(const CochainComplex& c, std::stop_token stop = {});

/// Koszul tensor product. Basis of degree n: pairs (a, b) with |a| + |b| = n,
/// ordered by |a|, then a, then b. d(a⊗b) = da⊗b + (-1)^|a| a⊗db.
CochainComplex tensor_complex(const CochainComplex& a, const CochainComplex& b);

/// f ⊗ g for degree-zero maps f: A → A', g: B → B', in the tensor bases above.
ChainMap tensor_maps(const ChainMap& f, const CochainComplex& a, const CochainComplex& a2, const ChainMap& g,
                     const CochainComplex& b, const CochainComplex& b2);

/// Degrees move up by n: shift(C, n)^k = C^(k-n); the differential picks up (-1)^n.
CochainComplex shift(const CochainComplex& c, int n);

/// Entries reduced into the target ring. Z converts to anything; other rings
/// only to themselves.
CochainComplex base_change(const CochainComplex& c, const Ring& target);

/// Hom(C, R): degree -k has rank(k) and the differential into degree -k is
/// the transpose of d_k. Weights are negated.
CochainComplex dualize_complex(const CochainComplex& c);

/// Borel–Moore homology in homological indexing from compactly supported
/// cohomology: H_i = Hom(H_c^i) ⊕ Ext(H_c^(i+1)). Over fields this is the
/// dimension mirror.
GradedModule borel_moore_dual(const GradedModule& hc, const Ring& ring);

/// Module with degree k moved to -k.
GradedModule negate_degrees(const GradedModule& m);

/// Alternating sum of ranks of the complex itself.
long long euler_characteristic(const CochainComplex& c);
std::map<int, long long> weighted_euler_characteristic(const CochainComplex& c);

}  // namespace stratcoh::homalg
