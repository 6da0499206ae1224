#pragma once

#include <map>
#include <optional>
#include <stop_token>
#include <string>
#include <utility>
#include <vector>

#include "stratcoh/complex.hpp"
#include "stratcoh/error.hpp"
#include "stratcoh/filtered.hpp"
#include "stratcoh/poset.hpp"
#include "stratcoh/specseq.hpp"

namespace stratcoh::strat {

using poset::Chain;
using poset::Element;

/// One generator of a finite group acting on the model: a permutation of the
/// strata and, for every stratum α, a chain map C(α) → C(g·α).
struct GroupGenerator {
  std::vector<Element> strata;
  std::vector<homalg::ChainMap> maps;
  friend bool operator==(const GroupGenerator&, const GroupGenerator&) = default;
};

/// Poset of strata (unique bottom = open dense stratum), per-stratum models of
/// the compactly supported cochains of the closures, restriction maps on
/// covers, σ, and an optional group action.
struct StratifiedSpaceModel {
  Ring ring = Ring::integers();
  poset::Poset poset;
  std::vector<homalg::CochainComplex> strata;
  /// Keyed by cover pairs (α, β), α ⋖ β.
  std::map<std::pair<Element, Element>, homalg::ChainMap> restrictions;
  poset::IncreasingFunction sigma;
  std::vector<GroupGenerator> action;

  friend bool operator==(const StratifiedSpaceModel&, const StratifiedSpaceModel&) = default;
};

struct Violation {
  ErrorCode code;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

/// Checks every structural requirement and reports all violations found.
ValidationReport validate(const StratifiedSpaceModel& model);

/// A model that passed validation, with every composite restriction R(α, β)
/// (α ≤ β) precomputed. All engine operations take this type.
class ValidatedModel {
 public:
  /// Throws NotValidated (ActionInvalid when only the action is at fault),
  /// with the first violation in the message.
  explicit ValidatedModel(StratifiedSpaceModel model);

  const StratifiedSpaceModel& model() const { return model_; }
  const poset::Poset& poset() const { return model_.poset; }
  const Ring& ring() const { return model_.ring; }
  Element bottom() const { return bottom_; }
  const homalg::CochainComplex& stratum(Element a) const { return model_.strata[a]; }
  int sigma(Element a) const { return model_.sigma(a); }
  /// Composite restriction for α ≤ β (identity when α = β).
  const homalg::ChainMap& restriction(Element a, Element b) const;

  /// The closure S̄_α as a model in its own right: the upset of α with σ
  /// shifted to vanish at α. The action is dropped.
  ValidatedModel upset(Element a) const;

 private:
  ValidatedModel() = default;

  StratifiedSpaceModel model_;
  Element bottom_ = 0;
  std::map<std::pair<Element, Element>, homalg::ChainMap> composite_;
};

/// Basis label of the resolution: chain 0 < α_1 < … < α_d (stored without
/// the leading 0) and a basis vector of C(α_d) in degree k.
struct LBasis {
  std::uint32_t length;  // d
  std::uint32_t chain;   // index among chains of length d
  int k;
  std::uint32_t local;
};

struct LComplex {
  homalg::FilteredComplex filtered;
  /// chains[d] = chains of length d (chains[0] = {the empty chain}).
  std::vector<std::vector<Chain>> chains;
  /// labels[n - lo][i] describes basis vector i of total degree n.
  std::vector<std::vector<LBasis>> labels;
  /// offsets[n - lo][d][c]: first basis index of chain c (length d) in degree n.
  std::vector<std::vector<std::vector<std::size_t>>> offsets;
  Element top_of(std::uint32_t length, std::uint32_t chain, Element bottom) const;
};

/// The resolution L: column d is ⊕_{0 < α_1 < … < α_d} C(α_d), inserting an
/// element at position i ≥ 1 carries (-1)^(i-1) and uses the identity, except
/// at the end where the restriction R(α_d, w) is used; the total differential
/// on column d is δ + (-1)^d d_C. Filtered by σ(α_d) ≥ p.
LComplex build_resolution(const ValidatedModel& s, std::stop_token stop = {});
homalg::FilteredComplex build_L_total(const ValidatedModel& s, std::stop_token stop = {});

/// H_c of the open stratum: cohomology of L after base change to `ring`.
homalg::GradedModule open_stratum_compact_cohomology(const ValidatedModel& s, const Ring& ring,
                                                     std::stop_token stop = {});

struct TheoremACell {
  Element beta;
  int i;  // interval degree
  int j;  // stratum degree
  homalg::ModuleCell interval;
  homalg::ModuleCell stratum;
  homalg::ModuleCell product;
};

struct TheoremAPage {
  Ring ring = Ring::integers();
  std::vector<TheoremACell> cells;
  /// Assembled E_1^{p,q}, p = σ(β), p + q = i + j + 2.
  std::map<specseq::Bidegree, homalg::ModuleCell> E1;
};

/// E_1 from interval cohomology and stratum cohomology. Over Z every interval
/// (0, β) must have torsion-free cohomology (TorsionObstruction otherwise).
TheoremAPage theorem_A_E1(const ValidatedModel& s, const Ring& ring, std::stop_token stop = {});

specseq::SpectralSequence theorem_A_ss(const ValidatedModel& s, const Ring& ring, specseq::PagesOptions options = {},
                                       std::stop_token stop = {});

struct ClosedFiltration {
  homalg::FilteredComplex filtered;
  /// H_c(S_β) for β ≥ α, each from the resolution of its own closure.
  std::map<Element, homalg::GradedModule> open_strata;
};

/// Filtered model of C(α) whose graded pieces compute H_c(S_β), β ≥ α: the
/// cone of L_α^{≥1} → L_α, with S_β placed at level -σ(β) (differentials run
/// from closed strata towards open ones).
ClosedFiltration closed_filtration_complex(const ValidatedModel& s, Element alpha, const Ring& ring,
                                           std::stop_token stop = {});

/// The classical closed-stratum spectral sequence, E_1^{-σβ, n+σβ} = H_c^n(S_β).
/// Throws Internal if E_1 disagrees with the per-stratum open cohomology.
specseq::SpectralSequence closed_filtration_ss(const ValidatedModel& s, Element alpha, const Ring& ring,
                                               specseq::PagesOptions options = {}, std::stop_token stop = {});

/// Compressed complex K over a Cohen–Macaulay poset: column d is
/// ⊕_{ρβ = d} H̃^{d-2}(0, β) ⊗ C(β), filtered by column.
/// Throws NotCohenMacaulay or TorsionObstruction.
homalg::FilteredComplex K_complex(const ValidatedModel& s, const poset::IncreasingFunction& rho,
                                  const Ring& ring, std::stop_token stop = {});

struct EulerCheck {
  std::string identity;  // "additivity" or "mobius"
  Element alpha;
  long long lhs;
  long long rhs;
  std::optional<int> weight;
  bool ok() const { return lhs == rhs; }
};

struct EulerReport {
  /// χ_c(S̄_α) and χ_c(S_α) for every stratum.
  std::map<Element, long long> closed;
  std::map<Element, long long> open;
  std::vector<EulerCheck> checks;
  bool ok() const;
  std::vector<EulerCheck> failures() const;
};

/// Verifies χ_c(S̄_α) = Σ_{β ≥ α} χ_c(S_β) and χ_c(S_α) = Σ_{β ≥ α} μ(α, β) χ_c(S̄_β)
/// for every α, from actual cohomology, and per weight when weights are present.
EulerReport euler_identities_check(const ValidatedModel& s, std::stop_token stop = {});

struct BorelMooreResult {
  /// Spectral sequence of the dual filtered complex (cohomological indexing:
  /// H^BM_i appears in total degree -i).
  specseq::SpectralSequence ss;
  /// H^BM_i in homological indexing.
  homalg::GradedModule homology;
};

BorelMooreResult borel_moore_ss(const ValidatedModel& s, const Ring& ring, specseq::PagesOptions options = {},
                                std::stop_token stop = {});

struct InvariantDims {
  /// |G| when the group was enumerated; 0 when orbit sums made it unnecessary.
  std::size_t group_order = 0;
  /// dim (H_c^n)^G.
  std::map<int, std::size_t> compact;
  /// dim (H^BM_i)^G, homological indexing.
  std::map<int, std::size_t> borel_moore;
  /// Signed-permutation action: orbit sums were used instead of the projector.
  bool monomial = false;
};

struct InvariantOptions {
  /// Enumerate the group and use the averaging projector even when the action
  /// is by signed permutations.
  bool projector = false;
  /// Group enumeration gives up (ActionInvalid) beyond this many elements.
  std::size_t max_order = 5040;
};

/// Invariants of the group action on H_c(S_0) and H^BM(S_0) over Q. A model
/// without generators has the trivial group. Throws NotCharZero for other rings.
InvariantDims invariant_dims(const ValidatedModel& s, const Ring& ring, InvariantOptions options = {},
                             std::stop_token stop = {});

}  // namespace stratcoh::strat
