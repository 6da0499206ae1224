#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>

#include "stratcoh/error.hpp"
#include "stratcoh/generators.hpp"
#include "stratcoh/strat.hpp"

using namespace stratcoh;
using namespace stratcoh::generators;
using strat::ValidatedModel;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

long long factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

long long binom(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

std::map<int, std::size_t> betti_z(const ValidatedModel& s) {
  return strat::open_stratum_compact_cohomology(s, Ring::integers()).betti();
}

SubspaceArrangementSpec punctured_line() { return {1, {"C", "0"}, {1, 0}, {{"C", "0"}}}; }

}  // namespace

TEST_CASE("configuration posets are partition lattices") {
  const long long bell[] = {1, 1, 2, 5, 15, 52, 203};
  for (int n = 1; n <= 6; ++n) {
    CAPTURE(n);
    auto m = configuration_stratification(plane_model(), n, standard_diagonal());
    CHECK(m.poset == poset::partition_lattice(n));
    CHECK(static_cast<long long>(m.poset.size()) == bell[n]);
    const auto z = *m.poset.bottom(), t = *m.poset.top();
    CHECK(poset::mobius(m.poset, z, t) == (n % 2 ? 1 : -1) * factorial(n - 1));
    CHECK(m.sigma(t) == n - 1);
    CHECK(strat::validate(m).ok());
  }
  CHECK(pattern_partitions(k_equals(3), 3).size() == 2);
  CHECK(pattern_partitions(k_equals(3), 4).size() == 6);
  CHECK(pattern_partitions(standard_diagonal(), 4).size() == 15);
}

TEST_CASE("input validation") {
  CHECK(code_of([] { check_hypothesis(euclidean_model(1)); }) == ErrorCode::HypothesisViolated);
  CHECK_NOTHROW(check_hypothesis(euclidean_model(3)));
  CHECK_NOTHROW(check_hypothesis(projective_line_model()));
  CHECK(code_of([] { configuration_stratification(euclidean_model(1), 2, standard_diagonal()); }) ==
        ErrorCode::HypothesisViolated);
  {
    // H^d of rank two
    SpaceModel bad{homalg::CochainComplex(Ring::integers(), 2, {2}, {}), 2, std::nullopt};
    CHECK(code_of([&] { check_hypothesis(bad); }) == ErrorCode::HypothesisViolated);
  }
  CHECK(code_of([] { validate_pattern({{{{1}}}}); }) == ErrorCode::InvalidPattern);
  CHECK(code_of([] { validate_pattern({{{{1, 2}, {2, 3}}}}); }) == ErrorCode::InvalidPattern);
  CHECK(code_of([] { validate_pattern({{{{1, 3}}}}); }) == ErrorCode::InvalidPattern);
  CHECK_NOTHROW(validate_pattern({{{{1, 2}, {3, 4}}}}));

  auto snc = snc_coordinate_divisors(2);
  snc.models.erase({1});
  CHECK(code_of([&] { snc_stratification(snc); }) == ErrorCode::MissingModel);

  SubspaceArrangementSpec flat{2, {"X", "L"}, {2, 2}, {{"X", "L"}}};
  CHECK(code_of([&] { subspace_arrangement(flat); }) == ErrorCode::InvalidLattice);
  SubspaceArrangementSpec two_bottoms{2, {"X", "Y", "L"}, {2, 2, 1}, {{"X", "L"}, {"Y", "L"}}};
  CHECK(code_of([&] { subspace_arrangement(two_bottoms); }) == ErrorCode::InvalidLattice);

  auto q = snc_stratification(snc_coordinate_divisors(1, Ring::rationals()));
  auto z = snc_stratification(snc_coordinate_divisors(1));
  CHECK(code_of([&] { product(q, z); }) == ErrorCode::RingMismatch);
}

TEST_CASE("arrangement complements") {
  {
    ValidatedModel s{subspace_arrangement(punctured_line())};
    CHECK(betti_z(s) == std::map<int, std::size_t>{{1, 1}, {2, 1}});
  }
  for (int n = 2; n <= 4; ++n) {
    CAPTURE(n);
    ValidatedModel arr{subspace_arrangement(braid_arrangement(n))};
    ValidatedModel conf{configuration_stratification(plane_model(), n, standard_diagonal())};
    CHECK(arr.poset() == conf.poset());
    CHECK(betti_z(arr) == betti_z(conf));
    CHECK(strat::open_stratum_compact_cohomology(arr, Ring::integers()) ==
          strat::open_stratum_compact_cohomology(conf, Ring::integers()));

    // weight w part of H_c^k is the sum of H̃^{k-2w-2}(0, β) over dim β = w
    const auto hc = strat::open_stratum_compact_cohomology(arr, Ring::integers());
    REQUIRE(hc.has_weights());
    const auto& P = arr.poset();
    std::map<std::pair<int, int>, std::size_t> expect;  // (k, w)
    std::map<int, long long> count;                     // w -> Σ μ(0, β)
    for (poset::Element b = 0; b < P.size(); ++b) {
      const int w = n - arr.sigma(b);
      auto red = poset::reduced_interval_cohomology(P, arr.bottom(), b);
      for (int i : red.degrees()) expect[{i + 2 * w + 2, w}] += red.rank(i);
      count[w] += poset::mobius(P, arr.bottom(), b);
    }
    std::map<std::pair<int, int>, std::size_t> got;
    for (int k : hc.degrees())
      for (auto [w, r] : hc.at(k).weights) got[{k, w}] += r;
    CHECK(got == expect);
    CHECK(hc.weighted_euler_characteristic() == count);

    const auto ss = strat::theorem_A_ss(arr, Ring::rationals());
    CHECK(specseq::degeneration_page(ss) == 1);
  }
}

TEST_CASE("snc coordinate divisors") {
  for (int k = 1; k <= 3; ++k) {
    CAPTURE(k);
    ValidatedModel s{snc_stratification(snc_coordinate_divisors(k))};
    CHECK(s.poset().size() == (1u << k));
    CHECK(betti_z(s) == std::map<int, std::size_t>{{2 * k, 1}});
    // column p carries C(k, p) copies of H((P¹)^(k-p))
    auto e1 = strat::theorem_A_E1(s, Ring::integers());
    std::map<int, long long> column;
    for (auto& [pq, cell] : e1.E1) column[pq.first] += static_cast<long long>(cell.rank);
    for (int p = 0; p <= k; ++p) CHECK(column[p] == binom(k, p) * (1LL << (k - p)));
  }
}

TEST_CASE("products") {
  auto a = snc_stratification(snc_coordinate_divisors(1));
  auto b = configuration_stratification(plane_model(), 2, standard_diagonal());
  auto ab = product(a, b);
  REQUIRE(strat::validate(ab).ok());
  CHECK(ab.poset.size() == a.poset.size() * b.poset.size());
  for (std::size_t i = 0; i < a.poset.size(); ++i)
    for (std::size_t j = 0; j < b.poset.size(); ++j)
      CHECK(ab.sigma(i * b.poset.size() + j) == a.sigma(i) + b.sigma(j));
  ValidatedModel sa{a}, sb{b}, sab{ab};
  std::map<int, std::size_t> kunneth;
  for (auto [i, x] : betti_z(sa))
    for (auto [j, y] : betti_z(sb)) kunneth[i + j] += x * y;
  CHECK(betti_z(sab) == kunneth);
  CHECK(ab.action.empty());
}

TEST_CASE("degeneration of formal models") {
  for (int n = 2; n <= 3; ++n) {
    ValidatedModel s{configuration_stratification(projective_line_model(), n, standard_diagonal())};
    CHECK(specseq::degeneration_page(strat::theorem_A_ss(s, Ring::rationals())) <= 2);
  }
}

TEST_CASE("indecomposable profile") {
  auto std_prof = indecomposable_codim_profile(standard_diagonal(), 6);
  REQUIRE(std_prof.rows.size() == 6);
  for (const auto& r : std_prof.rows) {
    CAPTURE(r.n);
    if (r.n < 2) continue;
    CHECK(r.indecomposables == 1);
    CHECK(r.min_sigma == r.n - 1);
  }
  CHECK(std_prof.linear_bound);
  CHECK(std_prof.constant == doctest::Approx(0.5));

  auto k3 = indecomposable_codim_profile(k_equals(3), 6);
  for (const auto& r : k3.rows) {
    CAPTURE(r.n);
    if (r.n == 2) CHECK(!r.min_sigma);
    if (r.n >= 3) CHECK(r.min_sigma == r.n - 1);
  }
  CHECK(k3.linear_bound);
  CHECK(k3.constant == doctest::Approx(2.0 / 3));
}

TEST_CASE("stability of unordered configurations in the plane") {
  auto t = stability_table(plane_model(), standard_diagonal(), {0, -1, -2}, {1, 2, 3, 4});
  for (std::size_t r = 0; r < t.n_values.size(); ++r) {
    CAPTURE(t.n_values[r]);
    CHECK(t.values[r][0] == 1);
    CHECK(t.values[r][1] == (t.n_values[r] >= 2 ? 1u : 0u));
    CHECK(t.values[r][2] == 0);
  }
  CHECK(t.stable_from == std::vector<int>{1, 2, 1});
  CHECK(t.constant_tail == std::vector<bool>{true, true, true});
}
