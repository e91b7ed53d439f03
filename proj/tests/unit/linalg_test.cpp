#include "doctest.h"
#include "srnorder/linalg.hpp"
#include "unit/helpers.hpp"

using namespace srnorder;

TEST_CASE("rref of a small matrix") {
  const auto m = RationalMatrix::from_rows({{2, 4, 2}, {1, 2, 2}, {0, 0, 1}}, 3);
  const auto r = rref(m);
  CHECK(r.pivots == std::vector<std::size_t>{0, 2});
  CHECK(r.reduced == RationalMatrix::from_rows({{1, 2, 0}, {0, 0, 1}, {0, 0, 0}}, 3));
  CHECK(rank(m) == 2);
  CHECK(rank(RationalMatrix(0, 3)) == 0);
}

TEST_CASE("normalize_row divides by the gcd and rejects zero") {
  CHECK(normalize_row(IntVector{2, -4, 6}) == IntVector{1, -2, 3});
  CHECK(normalize_row(IntVector{0, -3}) == IntVector{0, -1});
  CHECK_THROWS_AS(normalize_row(IntVector{0, 0}), std::invalid_argument);
}

TEST_CASE("primitive integer vector") {
  const std::vector<Rational> v{Rational(1, 2), Rational(-1, 3), 0};
  CHECK(primitive_integer_vector(v) == IntVector{3, -2, 0});
}

TEST_CASE("conservation basis examples") {
  CHECK(conservation_basis(net_of("S <-> P")).rows == std::vector<IntVector>{{1, 1}});
  CHECK(conservation_basis(net_of("S + I -> 2I\nI -> R")).rows == std::vector<IntVector>{{1, 1, 1}});
  CHECK(conservation_basis(load_fixture("erg").network).rows.empty());
  const auto mm = conservation_basis(load_fixture("mm").network);
  CHECK(mm.rows.size() == 2);
  CHECK(mm.s == 2);
  CHECK(same_row_space(mm.rows, {{0, 1, 1, 0}, {1, 0, 1, 1}}, 4));
  const auto his = conservation_basis(load_fixture("his").network);
  CHECK(his.rows == std::vector<IntVector>{{1, 1, 1, 0}});
}

TEST_CASE("conservation laws annihilate every reaction vector and complete the rank") {
  for (const char* name : {"rev", "sis", "sir", "mm", "rmm", "sig", "lkv", "his", "erg", "pcc"}) {
    CAPTURE(name);
    const auto net = load_fixture(name).network;
    const auto c = conservation_basis(net);
    for (const auto& row : c.rows)
      for (const auto& r : net.reactions()) CHECK(dot(row, r.xi) == 0);
    std::vector<IntVector> xis;
    for (const auto& r : net.reactions()) xis.push_back(r.xi);
    CHECK(c.s == rank(RationalMatrix::from_rows(xis, net.dimension())));
    CHECK(c.rows.size() + c.s == net.dimension());
    if (!c.rows.empty()) CHECK(rank(RationalMatrix::from_rows(c.rows, net.dimension())) == c.rows.size());
  }
}

TEST_CASE("same_row_space") {
  CHECK(same_row_space({{1, 1, 0}, {0, 1, 1}}, {{1, 2, 1}, {1, 0, -1}}, 3));
  CHECK_FALSE(same_row_space({{1, 1, 0}}, {{1, 0, 0}}, 3));
}
