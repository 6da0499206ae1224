#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "stratcoh/error.hpp"
#include "stratcoh/poset.hpp"

using namespace stratcoh;
using namespace stratcoh::poset;

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

// 0 < a < c < 1, 0 < b < d < 1, plus e between 0 and 1.
Poset split_poset() {
  return Poset::from_cover_relations({"0", "a", "b", "c", "d", "e", "1"},
                                     {{"0", "a"}, {"a", "c"}, {"c", "1"}, {"0", "b"}, {"b", "d"}, {"d", "1"},
                                      {"0", "e"}, {"e", "1"}});
}

}  // namespace

TEST_CASE("construction from covers") {
  auto one = Poset::from_cover_relations({"a"}, {});
  CHECK(one.size() == 1);
  CHECK(one.leq(0, 0));
  auto two = Poset::from_cover_relations({"a", "b"}, {{"a", "b"}});
  CHECK(two.less(0, 1));
  CHECK_FALSE(two.leq(1, 0));
  CHECK(code_of([] { Poset::from_cover_relations({"a", "b"}, {{"a", "b"}, {"b", "a"}}); }) == ErrorCode::CycleDetected);
  CHECK(code_of([] { Poset::from_cover_relations({"a"}, {{"a", "z"}}); }) == ErrorCode::UnknownElement);
  CHECK(code_of([] { Poset::from_cover_relations({"a", "a"}, {}); }) == ErrorCode::DuplicateElement);
  // redundant relations are dropped from the canonical covers
  auto chain = Poset::from_cover_relations({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}, {"a", "c"}});
  CHECK(chain.covers().size() == 2);
  CHECK(chain.less(0, 2));
}

TEST_CASE("covers are exactly the relations with nothing in between") {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    auto p = oracle::random_poset(rng, 9, 0.3);
    for (Element a = 0; a < p.size(); ++a)
      for (Element b = 0; b < p.size(); ++b) {
        bool cover = p.less(a, b);
        for (Element c = 0; c < p.size() && cover; ++c)
          if (p.less(a, c) && p.less(c, b)) cover = false;
        bool listed = std::find(p.covers().begin(), p.covers().end(), std::make_pair(a, b)) != p.covers().end();
        CHECK(cover == listed);
      }
  }
}

TEST_CASE("interval complexes: degenerate cases and B_3") {
  auto two = chain_poset(2);
  auto same = interval_cochain_complex(two, 0, 0);
  CHECK(same.complex.lo() == -2);
  CHECK(same.complex.total_rank() == 1);
  auto cover = interval_cochain_complex(two, 0, 1);
  CHECK(cover.complex.lo() == -1);
  CHECK(cover.complex.total_rank() == 1);
  CHECK(code_of([&] { interval_cochain_complex(two, 1, 0); }) == ErrorCode::NotComparable);

  auto b3 = boolean_lattice(3);
  auto c = interval_cochain_complex(b3, *b3.bottom(), *b3.top());
  CHECK(c.complex.rank(-1) == 1);
  CHECK(c.complex.rank(0) == 6);
  CHECK(c.complex.rank(1) == 6);
  CHECK(c.complex.rank(2) == 0);
  auto counts = oracle::brute_chain_counts(b3, b3.open_interval(*b3.bottom(), *b3.top()));
  CHECK(counts[1] == 6);
  CHECK(counts[2] == 6);
  auto h = reduced_interval_cohomology(b3, *b3.bottom(), *b3.top());
  CHECK(h.rank(1) == 1);
  CHECK(h.degrees() == std::vector<int>{1});
  CHECK(reduced_interval_cohomology(b3, 0, 0).rank(-2) == 1);
}

TEST_CASE("d∘d = 0 and chain counts on random intervals") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    auto p = oracle::random_poset(rng, 10, 0.35);
    for (Element x = 0; x < p.size(); ++x)
      for (Element y = 0; y < p.size(); ++y) {
        if (!p.leq(x, y)) continue;
        auto c = interval_cochain_complex(p, x, y);
        CHECK_NOTHROW(c.complex.require_valid());
        if (x == y) continue;
        auto counts = oracle::brute_chain_counts(p, p.open_interval(x, y));
        for (auto [k, n] : counts) CHECK(c.complex.rank(static_cast<int>(k) - 1) == n);
      }
  }
}

TEST_CASE("partition lattices") {
  auto p3 = partition_lattice(3);
  CHECK(p3.size() == 5);
  auto h = reduced_interval_cohomology(p3, *p3.bottom(), *p3.top());
  CHECK(h.rank(0) == 2);
  CHECK(h.degrees() == std::vector<int>{0});
  CHECK(mobius_recursive(p3, *p3.bottom(), *p3.top()) == 2);
  CHECK(p3.id(*p3.bottom()) == "1|2|3");
  CHECK(p3.id(*p3.top()) == "1,2,3");
  for (int n = 3; n <= 5; ++n) {
    auto p = partition_lattice(n);
    auto hn = reduced_interval_cohomology(p, *p.bottom(), *p.top());
    CHECK(hn.degrees() == std::vector<int>{n - 3});
    CHECK(hn.rank(n - 3) == static_cast<std::size_t>(factorial(n - 1)));
    CHECK(hn.torsion(n - 3).empty());
  }
  auto p4 = partition_lattice(4);
  CHECK(mobius(p4, *p4.bottom(), *p4.top()) == -6);
}

TEST_CASE("Möbius: homological and recursive agree; sums vanish") {
  auto b3 = boolean_lattice(3);
  CHECK(mobius(b3, *b3.bottom(), *b3.top()) == -1);
  CHECK(mobius_recursive(b3, *b3.bottom(), *b3.top()) == -1);
  auto two = chain_poset(2);
  CHECK(mobius_recursive(two, 0, 1) == -1);
  CHECK(mobius(two, 0, 0) == 1);

  std::mt19937 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    auto p = oracle::random_poset(rng, 4 + trial % 7, 0.4);
    for (Element x = 0; x < p.size(); ++x)
      for (Element y = 0; y < p.size(); ++y) {
        if (!p.leq(x, y)) continue;
        CHECK(mobius(p, x, y) == mobius_recursive(p, x, y));
        if (x != y) {
          long long s = 0;
          for (Element z : p.closed_interval(x, y)) s += mobius(p, x, z);
          CHECK(s == 0);
        }
      }
  }
}

TEST_CASE("acyclicity spectral sequence") {
  auto two = chain_poset(2);
  auto sig = default_grading(two);
  auto s = acyclicity_ss(two, 0, 1, sig);
  std::size_t e1 = 0;
  for (auto [pq, d] : s.page(1).dims) e1 += d;
  CHECK(e1 == 2);
  CHECK(s.page(2).dims.empty());
  CHECK(code_of([&] { acyclicity_ss(two, 0, 0, sig); }) == ErrorCode::NotComparable);
  CHECK(code_of([&] { acyclicity_ss(two, 0, 1, IncreasingFunction{{1, 1}}); }) == ErrorCode::NotIncreasing);

  for (auto p : {boolean_lattice(3), partition_lattice(3), partition_lattice(4)}) {
    auto ss = acyclicity_ss(p, *p.bottom(), *p.top(), default_grading(p));
    CHECK(ss.infinity().dims.empty());
    CHECK(ss.abutment.is_zero());
  }

  std::mt19937 rng(51);
  for (int trial = 0; trial < 60; ++trial) {
    auto p = oracle::random_poset(rng, 8, 0.35);
    auto sigma = oracle::random_sigma(rng, p);
    for (Element x = 0; x < p.size(); ++x)
      for (Element y = 0; y < p.size(); ++y) {
        if (!p.less(x, y)) continue;
        auto ss = acyclicity_ss(p, x, y, sigma);
        CHECK(ss.infinity().dims.empty());
        CHECK(specseq::euler_profile(ss).constant);
        // E_1^{p,q} = ⊕_{σ(z) = p} H̃^{p+q-1}(x, z) over x ≤ z ≤ y
        std::map<specseq::Bidegree, std::size_t> expect;
        for (Element z : p.closed_interval(x, y)) {
          auto h = reduced_interval_cohomology(p, x, z, Ring::rationals());
          for (int i : h.degrees()) expect[{sigma(z), i + 1 - sigma(z)}] += h.rank(i);
        }
        CHECK(ss.page(1).dims == expect);
      }
  }
}

TEST_CASE("half-open intervals with a unique maximum are acyclic") {
  std::mt19937 rng(61);
  for (int trial = 0; trial < 40; ++trial) {
    auto p = oracle::random_poset(rng, 9, 0.3);
    for (Element x = 0; x < p.size(); ++x)
      for (Element y = 0; y < p.size(); ++y) {
        if (!p.less(x, y)) continue;
        auto oc = order_complex(p, p.half_open_interval(x, y));
        CHECK(homalg::cohomology(oc.complex).is_zero());
      }
  }
}

TEST_CASE("Cohen–Macaulay test") {
  for (int n = 1; n <= 5; ++n) {
    auto p = partition_lattice(n);
    CHECK(is_cohen_macaulay_graded(p, default_grading(p)));
  }
  for (int n = 0; n <= 4; ++n) {
    auto b = boolean_lattice(n);
    CHECK(is_cohen_macaulay_graded(b, default_grading(b)));
  }
  // proper part of (0, 1): two disjoint 2-chains and an isolated point
  auto bad = split_poset();
  auto rho = default_grading(bad);
  CHECK(rho(bad.index("1")) == 3);
  CHECK_FALSE(is_cohen_macaulay_graded(bad, rho));
  auto h = reduced_interval_cohomology(bad, bad.index("0"), bad.index("1"));
  CHECK(h.rank(0) == 2);
}

TEST_CASE("product of posets") {
  auto sq = product(chain_poset(2), chain_poset(2));
  CHECK(sq.size() == 4);
  CHECK(sq.covers().size() == 4);
  auto b2 = boolean_lattice(2);
  CHECK(mobius(sq, *sq.bottom(), *sq.top()) == mobius(b2, *b2.bottom(), *b2.top()));
}
