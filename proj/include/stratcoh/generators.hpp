#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stratcoh/strat.hpp"

namespace stratcoh::generators {

using strat::StratifiedSpaceModel;

// ----------------------------------------------------------------- SNC

/// Models for the intersections D_I of k divisor components, I ⊆ {1..k}
/// (sorted), with restrictions D_I → D_{I ∪ {i}} keyed by (I, i).
struct SncComponents {
  int k = 0;
  Ring ring = Ring::integers();
  std::map<std::vector<int>, homalg::CochainComplex> models;
  std::map<std::pair<std::vector<int>, int>, homalg::ChainMap> restrictions;
};

/// Boolean-lattice stratification with σ(I) = |I|. Throws MissingModel.
StratifiedSpaceModel snc_stratification(const SncComponents& components);

/// X = (P¹)^k with D_i = {x_i = ∞}, so D_I = (P¹)^(k - |I|) and S_0 = A^k.
SncComponents snc_coordinate_divisors(int k, const Ring& ring = Ring::integers());

// ------------------------------------------------------ arrangements

/// Intersection lattice of a complex subspace arrangement: flats with their
/// complex dimensions and the cover relation. The bottom is the ambient space.
struct SubspaceArrangementSpec {
  int ambient_dimension = 0;
  std::vector<std::string> flats;
  std::vector<int> dimensions;
  std::vector<std::pair<std::string, std::string>> covers;
};

/// S̄_β = C^m modeled by rank 1 in degree 2m with weight m; restrictions are
/// zero; σ = codimension. Throws InvalidLattice.
StratifiedSpaceModel subspace_arrangement(const SubspaceArrangementSpec& spec, const Ring& ring = Ring::integers());

/// Hyperplanes x_i = x_j in C^n; the lattice is Π_n with dim β = #blocks.
SubspaceArrangementSpec braid_arrangement(int n);

// ------------------------------------------------- configuration spaces

/// Formal model of C_c(M): zero differential, top degree `dimension` with
/// H_c of rank one there. `unit` is the degree-0 basis vector representing
/// 1 when M is compact.
struct SpaceModel {
  homalg::CochainComplex complex;
  int dimension = 0;
  std::optional<std::size_t> unit;
  friend bool operator==(const SpaceModel&, const SpaceModel&) = default;
};

/// C: Z in degree 2, weight 1.
SpaceModel plane_model(const Ring& ring = Ring::integers());
/// P¹: Z in degrees 0 and 2 (weights 0 and 1), unit in degree 0.
SpaceModel projective_line_model(const Ring& ring = Ring::integers());
/// R^d: Z in degree d.
SpaceModel euclidean_model(int d, const Ring& ring = Ring::integers());

/// Throws HypothesisViolated naming the failing clause.
void check_hypothesis(const SpaceModel& m);

/// Each template is a set partition of {1..s} (its blocks, elements 1-based)
/// describing a diagonal in M^s; its pullbacks along injections {1..s} → {1..n}
/// are the forbidden loci.
struct DiagonalPattern {
  std::vector<std::vector<std::vector<int>>> templates;
  friend bool operator==(const DiagonalPattern&, const DiagonalPattern&) = default;
};

/// x_i = x_j.
DiagonalPattern standard_diagonal();
/// x_{i_1} = … = x_{i_k}.
DiagonalPattern k_equals(int k);

/// Throws InvalidPattern (singleton blocks, overlapping or missing elements,
/// |S_i| < 2).
void validate_pattern(const DiagonalPattern& pattern);

/// P_A(n): the finest partition together with the join-closure of all pattern
/// pullbacks, as restricted growth strings in the order of Π_n.
std::vector<std::vector<int>> pattern_partitions(const DiagonalPattern& pattern, int n);

/// The stratification of M^n by pattern diagonals: S̄_β = M^(#blocks), with
/// tensor-power models, restrictions that multiply merged factors (only the
/// unit acts nontrivially), σ(β) = n - #blocks, and the S_n action generated
/// by (1 2) and (1 2 … n) permuting factors with Koszul signs.
/// Throws HypothesisViolated or InvalidPattern.
StratifiedSpaceModel configuration_stratification(const SpaceModel& M, int n, const DiagonalPattern& pattern);

// ------------------------------------------------------------ products

/// Product poset, tensor product models, σ adding. The action is dropped.
/// Throws RingMismatch.
StratifiedSpaceModel product(const StratifiedSpaceModel& a, const StratifiedSpaceModel& b);

// ------------------------------------------------------------- tables

struct CodimRow {
  int n = 0;
  std::size_t elements = 0;
  std::size_t indecomposables = 0;
  /// Minimum σ over indecomposable elements (absent when there are none).
  std::optional<int> min_sigma;
};

struct CodimProfile {
  std::vector<CodimRow> rows;
  /// Largest C with min σ ≥ C·n on every row n ≥ 2 that has indecomposables.
  double constant = 0;
  bool linear_bound = false;
};

CodimProfile indecomposable_codim_profile(const DiagonalPattern& pattern, int n_max);

struct StabilityTable {
  std::vector<int> n_values;
  std::vector<int> i_values;
  /// values[row][col] = dim (H^BM_{i + d n}(F_A(M, n)))^{S_n}.
  std::vector<std::vector<std::size_t>> values;
  /// Per column: first n from which the value no longer changes.
  std::vector<int> stable_from;
  /// Per column: the last two rows agree.
  std::vector<bool> constant_tail;
};

StabilityTable stability_table(const SpaceModel& M, const DiagonalPattern& pattern, const std::vector<int>& i_values,
                               const std::vector<int>& n_values, std::stop_token stop = {});

}  // namespace stratcoh::generators
