#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <random>

#include "oracles.hpp"
#include "stratcoh/error.hpp"
#include "stratcoh/generators.hpp"
#include "stratcoh/io.hpp"

using namespace stratcoh;
using namespace stratcoh::io;
using namespace stratcoh::generators;

namespace {

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code() == ErrorCode::ParseError ? std::string(e.what()) : "other: " + std::string(e.what());
  }
  return "no error";
}

strat::StratifiedSpaceModel reload(const strat::StratifiedSpaceModel& m) {
  return model_from_json(parse_document(dump(model_to_json(m))));
}

}  // namespace

TEST_CASE("models survive emit then load") {
  std::vector<strat::StratifiedSpaceModel> corpus = {
      configuration_stratification(plane_model(), 3, standard_diagonal()),
      configuration_stratification(projective_line_model(), 3, standard_diagonal()),
      configuration_stratification(euclidean_model(3), 3, k_equals(3)),
      snc_stratification(snc_coordinate_divisors(3)),
      snc_stratification(snc_coordinate_divisors(2, Ring::prime_field(5))),
      subspace_arrangement(braid_arrangement(4)),
      product(snc_stratification(snc_coordinate_divisors(1)),
              configuration_stratification(plane_model(), 2, standard_diagonal())),
  };
  std::mt19937 rng(7);
  for (int i = 0; i < 20; ++i) corpus.push_back(oracle::random_split_model(rng, 1 + i % 5, 0.4, -1, 2, true).model);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    CAPTURE(i);
    const auto back = reload(corpus[i]);
    CHECK(back == corpus[i]);
    // emission is deterministic
    CHECK(dump(model_to_json(back)) == dump(model_to_json(corpus[i])));
  }
  // identical complexes are emitted once
  auto j = model_to_json(corpus[0]);
  CHECK(j["complexes"].size() == 3);
}

TEST_CASE("other documents survive emit then load") {
  auto P = poset::partition_lattice(4);
  CHECK(poset_from_json(parse_document(dump(poset_to_json(P)))) == P);

  Integer huge = Integer(1) << 80;
  homalg::CochainComplex c(Ring::integers(), -1, {2, 1, 1},
                           {SparseMatrix::from_triplets(1, 2, {{0, 0, huge}, {0, 1, -3}}), SparseMatrix(1, 1)},
                           std::vector<std::vector<int>>{{0, 1}, {2}, {3}});
  CHECK(complex_from_json(parse_document(dump(complex_to_json(c)))) == c);

  const DiagonalPattern pat{{{{1, 2}}, {{1, 2, 3}}, {{1, 2}, {3, 4}}}};
  CHECK(pattern_from_json(parse_document(dump(pattern_to_json(pat)))) == pat);

  auto arr = braid_arrangement(3);
  auto arr2 = arrangement_from_json(parse_document(dump(arrangement_to_json(arr))));
  CHECK(arr2.flats == arr.flats);
  CHECK(arr2.dimensions == arr.dimensions);
  CHECK(arr2.covers == arr.covers);

  for (const auto& s : {plane_model(), projective_line_model(), euclidean_model(5)})
    CHECK(space_from_json(parse_document(dump(space_to_json(s)))) == s);

  auto snc = snc_coordinate_divisors(2);
  auto snc2 = snc_from_json(parse_document(dump(snc_to_json(snc))));
  CHECK(snc2.models == snc.models);
  CHECK(snc2.restrictions == snc.restrictions);
  CHECK(snc_stratification(snc2) == snc_stratification(snc));
}

TEST_CASE("diagnostics name the line or the field") {
  CHECK(error_of([] { parse_document("{\n  \"elements\": [\"a\",\n  ]\n}"); }).find("line 3, column 3") != std::string::npos);
  CHECK(error_of([] { poset_from_json(parse_document("{\"covers\": []}")); }).find("elements") != std::string::npos);
  CHECK(error_of([] { poset_from_json(parse_document("{\"elements\": [\"a\", 3]}")); }).find("elements[1]") !=
        std::string::npos);
  CHECK(error_of([] {
          complex_from_json(parse_document(R"({"lo": 0, "ranks": [1, 1], "differentials": [{"degree": 0, "entries": [[1, 0, 1]]}]})"));
        }).find("complex.differentials[0].entries[0]") != std::string::npos);
  CHECK(error_of([] {
          complex_from_json(parse_document(R"({"lo": 0, "ranks": [1], "ring": "F4"})"));
        }).find("complex.ring") != std::string::npos);

  auto j = model_to_json(snc_stratification(snc_coordinate_divisors(1)));
  auto bad = j;
  bad["restrictions"][0]["to"] = "nowhere";
  CHECK(error_of([&] { model_from_json(bad); }).find("restrictions[0].to") != std::string::npos);
  bad = j;
  bad["strata"].erase("{}");
  CHECK(error_of([&] { model_from_json(bad); }).find("strata") != std::string::npos);
  bad = j;
  bad["format"] = "something-else";
  CHECK(error_of([&] { model_from_json(bad); }).find("format") != std::string::npos);
  bad = j;
  bad["sigma"]["{1}"] = "x";
  CHECK(error_of([&] { model_from_json(bad); }).find("sigma.{1}") != std::string::npos);
  // structural problems are left to validation, not the parser
  bad = j;
  bad["sigma"]["{1}"] = 0;
  CHECK_NOTHROW(model_from_json(bad));
  CHECK(!strat::validate(model_from_json(bad)).ok());
}
