#include <algorithm>

#include "doctest.h"
#include "srnorder/search.hpp"
#include "unit/helpers.hpp"

using namespace srnorder;

namespace {

using RC = RateConstraint;
using ST = SpeciesTag;

bool contains(const std::vector<PreorderingStructure>& list, const std::vector<ST>& tags, const std::vector<RC>& rc) {
  return std::any_of(list.begin(), list.end(), [&](const PreorderingStructure& s) {
    return s.species_tags == tags && s.reaction_constraints == rc;
  });
}

}  // namespace

TEST_CASE("candidate encoding") {
  CHECK(candidate_count(1) == 3);
  CHECK(candidate_count(10) == 1048575);
  CHECK(candidate_rows(2, 1) == std::vector<SignedUnit>{{0, 1}});
  CHECK(candidate_rows(2, 2) == std::vector<SignedUnit>{{0, -1}});
  CHECK(candidate_rows(2, 3) == std::vector<SignedUnit>{{0, 1}, {0, -1}});
  CHECK(candidate_rows(2, 4 * 2 + 1) == std::vector<SignedUnit>{{0, 1}, {1, -1}});
  CandidateStream stream(2);
  std::vector<SignedUnit> rows;
  std::size_t n = 0;
  while (stream.next(rows)) ++n;
  CHECK(n == 15);
}

TEST_CASE("reversible reaction yields one structure") {
  const auto report = search(net_of("S <-> P"));
  REQUIRE(report.structures.size() == 1);
  CHECK(report.equivalence_structures.empty());
  CHECK(report.structures[0].species_tags == std::vector<ST>{ST::Geq, ST::Leq});
  CHECK(report.structures[0].reaction_constraints == std::vector<RC>{RC::LE, RC::GE});
}

TEST_CASE("SIR and reversible Michaelis-Menten yield nothing") {
  CHECK(search(load_fixture("sir").network).total() == 0);
  CHECK(search(load_fixture("rmm").network).total() == 0);
}

TEST_CASE("Michaelis-Menten contains both published structures") {
  const auto report = search(load_fixture("mm").network);
  CHECK(contains(report.structures, {ST::Geq, ST::Uncompared, ST::Uncompared, ST::Leq}, {RC::LE, RC::GE, RC::LE}));
  CHECK(contains(report.structures, {ST::Geq, ST::Leq, ST::Geq, ST::Leq}, {RC::EQ, RC::EQ, RC::LE}));
}

TEST_CASE("ergodicity network: two structures and one equivalence structure") {
  const auto report = search(load_fixture("erg").network);
  CHECK(report.structures.size() == 2);
  CHECK(report.equivalence_structures.size() == 1);
  CHECK(contains(report.structures, {ST::Eq, ST::Geq}, {RC::EQ, RC::EQ, RC::LE, RC::LE}));
  SearchOptions no_eq;
  no_eq.include_equivalence_structures = false;
  CHECK(search(load_fixture("erg").network, no_eq).equivalence_structures.empty());
}

TEST_CASE("reported structures are valid, non-trivial and not mirrors of each other") {
  for (const char* name : {"mm", "erg", "lkv", "his"}) {
    CAPTURE(name);
    const auto net = load_fixture(name).network;
    const auto c = conservation_basis(net);
    const auto report = search(net);
    std::vector<PreorderingStructure> all = report.structures;
    all.insert(all.end(), report.equivalence_structures.begin(), report.equivalence_structures.end());
    for (const auto& s : all) {
      CHECK_FALSE(s.matrix.empty());
      CHECK(s.closure.size() < 2 * net.dimension());
      CHECK(canonicalize(s.matrix, c) == s.matrix);
      const auto r = check_structure(net, s.matrix, c);
      REQUIRE(r.valid());
      CHECK(r.constraints == s.reaction_constraints);
      CHECK(closure_simple(s.matrix, c) == s.closure);
      for (const auto& t : all) CHECK_FALSE(mirror(s) == t);
    }
    for (const auto& s : all)
      for (const auto& t : all) CHECK_FALSE(dominates(s, t));
  }
}

TEST_CASE("mirror is an involution and fixes equivalence structures") {
  const auto report = search(load_fixture("erg").network);
  for (const auto& s : report.structures) CHECK(mirror(mirror(s)) == s);
  for (const auto& s : report.equivalence_structures) {
    CHECK(is_equivalence_structure(s));
    CHECK(mirror(s).species_tags == s.species_tags);
    CHECK(mirror(s).reaction_constraints == s.reaction_constraints);
  }
}

TEST_CASE("domination") {
  PreorderingStructure weak, strong;
  weak.closure = {{0, -1}};
  weak.reaction_constraints = {RC::GE, RC::Free};
  strong.closure = {{0, -1}, {1, 1}};
  strong.reaction_constraints = {RC::GE, RC::Free};
  CHECK(dominates(strong, weak));
  CHECK_FALSE(dominates(weak, strong));
  strong.reaction_constraints = {RC::EQ, RC::Free};
  CHECK_FALSE(dominates(strong, weak));
  CHECK_FALSE(dominates(weak, weak));
}

TEST_CASE("including dominated structures only adds structures") {
  const auto net = load_fixture("erg").network;
  SearchOptions all;
  all.include_dominated = true;
  const auto filtered = search(net);
  const auto unfiltered = search(net, all);
  CHECK(unfiltered.total() == filtered.stats.unfiltered_count);
  CHECK(unfiltered.total() >= filtered.total());
}

TEST_CASE("results do not depend on worker count or memoization") {
  for (const char* name : {"mm", "his"}) {
    CAPTURE(name);
    const auto net = load_fixture(name).network;
    const auto one = search(net);
    SearchOptions three;
    three.worker_count = 3;
    const auto par = search(net, three);
    CHECK(par.structures == one.structures);
    CHECK(par.equivalence_structures == one.equivalence_structures);
    CHECK(par.stats == one.stats);
    SearchOptions plain;
    plain.use_cache = false;
    const auto naive = search(net, plain);
    CHECK(naive.structures == one.structures);
    CHECK(naive.equivalence_structures == one.equivalence_structures);
    CHECK(naive.stats.lp_queries > one.stats.lp_queries);
  }
}

TEST_CASE("dimension limits") {
  CHECK_THROWS_AS(search(ReactionNetwork{}), std::invalid_argument);
  SearchOptions zero;
  zero.worker_count = 0;
  CHECK_THROWS_AS(search(net_of("S <-> P"), zero), std::invalid_argument);
}
