#pragma once

#include <map>
#include <optional>
#include <stop_token>
#include <utility>
#include <vector>

#include "stratcoh/filtered.hpp"

namespace stratcoh::specseq {

using homalg::FilteredComplex;
using homalg::GradedModule;
using homalg::ModuleCell;

/// (p, q) with total degree p + q.
using Bidegree = std::pair<int, int>;

struct Page {
  int r = 1;
  std::map<Bidegree, std::size_t> dims;
  /// Rank of d_r leaving (p, q).
  std::map<Bidegree, std::size_t> differential_ranks;
  /// d_r : E_r^{p,q} → E_r^{p+r,q-r+1} in the representative bases, keyed by
  /// source. Only filled when representatives were requested.
  std::map<Bidegree, SparseMatrix> differentials;

  std::size_t dim(int p, int q) const;
  std::size_t differential_rank(int p, int q) const;
};

/// A class representative: a vector in the total complex (degree, sparse
/// coordinates in the field), valid on pages first_page..last_page.
struct Representative {
  int degree = 0;
  int p = 0;
  int first_page = 1;
  /// Last page on which the class is alive; INT_MAX for permanent cycles.
  int last_page = 1;
  std::vector<std::pair<std::size_t, Integer>> vector;
};

struct SpectralSequence {
  Ring ring = Ring::rationals();
  int min_level = 0;
  int max_level = 0;
  /// pages[0] is E_1; the last page equals E_∞ unless a page cap cut it short.
  std::vector<Page> pages;
  /// Smallest r with d_r' = 0 for all r' ≥ r.
  int stabilization_page = 1;
  bool truncated = false;
  /// Cohomology of the total complex, computed independently of the pages.
  GradedModule abutment;
  /// gr^p H^n of the induced filtration, keyed (p, n).
  std::map<std::pair<int, int>, std::size_t> abutment_graded;
  /// Filled only when requested; basis of E_r^{p,q} on every page the class lives.
  std::vector<Representative> representatives;

  /// Page r (r ≥ 1); pages beyond the computed range return E_∞.
  const Page& page(int r) const;
  const Page& infinity() const { return pages.back(); }
  std::size_t dim(int r, int p, int q) const { return page(r).dim(p, q); }
};

struct PagesOptions {
  /// Stop after this page (0 = run until stabilization).
  int max_page = 0;
  bool representatives = false;
};

/// Spectral sequence of a filtered complex over Q or F_p. Throws NotAField for
/// Z input and FiltrationNotPreserved for bad filtrations. Throws Internal if
/// the pages disagree with the independently computed abutment.
SpectralSequence pages(const FilteredComplex& f, PagesOptions options = {}, std::stop_token stop = {});

struct IntegralFiltration {
  GradedModule abutment;
  /// gr^p H^n with rank and torsion, keyed (p, n).
  std::map<std::pair<int, int>, ModuleCell> graded;
};

/// Over Z: H(total) with the associated graded of the induced filtration,
/// where F^p H^n is the image of H^n(F^p).
IntegralFiltration integral_filtration(const FilteredComplex& f, std::stop_token stop = {});

struct EulerProfile {
  /// page r -> total degree n -> (-1)^n Σ_p dim E_r^{p,n-p}.
  std::map<int, std::map<int, long long>> per_degree;
  /// page r -> Σ_n (-1)^n Σ_p dim E_r^{p,n-p}.
  std::map<int, long long> per_page;
  long long abutment = 0;
  /// per_page is constant and equals the abutment's χ.
  bool constant = true;
};

EulerProfile euler_profile(const SpectralSequence& s);

/// Smallest r with all d_r' = 0 for r' ≥ r.
int degeneration_page(const SpectralSequence& s);

}  // namespace stratcoh::specseq
