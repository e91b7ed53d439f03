#include <random>

#include "doctest.h"
#include "oracles/fourier_motzkin.hpp"
#include "srnorder/feasibility.hpp"

using namespace srnorder;

namespace {

FeasibilityResult solve(const std::vector<IntVector>& d, std::size_t cols, const IntVector& b,
                        const std::vector<Sign>& signs) {
  return feasible(RationalMatrix::from_rows(d, cols), std::span<const std::int64_t>(b), signs);
}

}  // namespace

TEST_CASE("sign constraints decide feasibility") {
  const std::vector<IntVector> d{{1, -1}};
  CHECK(solve(d, 2, {1}, {Sign::NonNeg, Sign::NonNeg}).feasible);
  CHECK(solve(d, 2, {-1}, {Sign::NonNeg, Sign::NonNeg}).feasible);
  CHECK_FALSE(solve({{1, 1}}, 2, {-1}, {Sign::NonNeg, Sign::NonNeg}).feasible);
  CHECK(solve({{1, 1}}, 2, {-1}, {Sign::NonPos, Sign::NonNeg}).feasible);
  CHECK(solve({{1, 1}}, 2, {-1}, {Sign::Free, Sign::NonNeg}).feasible);
  CHECK_FALSE(solve({{1, 0}, {0, 0}}, 2, {0, 1}, {Sign::Free, Sign::Free}).feasible);
}

TEST_CASE("empty variable set is feasible only for b = 0") {
  CHECK(feasible(RationalMatrix(2, 0), std::span<const std::int64_t>(IntVector{0, 0}), {}).feasible);
  CHECK_FALSE(feasible(RationalMatrix(2, 0), std::span<const std::int64_t>(IntVector{0, 1}), {}).feasible);
}

TEST_CASE("witnesses satisfy the system exactly") {
  const std::vector<IntVector> d{{2, 1, 0}, {0, 3, -1}};
  const IntVector b{1, 2};
  const std::vector<Sign> signs{Sign::NonNeg, Sign::NonNeg, Sign::NonPos};
  const auto r = solve(d, 3, b, signs);
  REQUIRE(r.feasible);
  std::vector<Rational> rb{1, 2};
  CHECK(verify_witness(RationalMatrix::from_rows(d, 3), rb, signs, *r.witness));
}

TEST_CASE("agreement with Fourier-Motzkin on all 2x2 instances") {
  const std::vector<Sign> kinds{Sign::NonNeg, Sign::NonPos, Sign::Free};
  int checked = 0;
  for (int code = 0; code < 81; ++code) {
    std::vector<IntVector> d(2, IntVector(2));
    int c = code;
    for (auto& row : d)
      for (auto& v : row) v = c % 3 - 1, c /= 3;
    for (int bc = 0; bc < 9; ++bc) {
      const IntVector b{bc % 3 - 1, bc / 3 - 1};
      for (int sc = 0; sc < 9; ++sc) {
        const std::vector<Sign> signs{kinds[sc % 3], kinds[sc / 3]};
        const auto r = solve(d, 2, b, signs);
        REQUIRE(r.feasible == oracle::fm_feasible(d, b, signs));
        if (r.feasible) {
          std::vector<Rational> rb(b.begin(), b.end());
          CHECK(verify_witness(RationalMatrix::from_rows(d, 2), rb, signs, *r.witness));
        }
        ++checked;
      }
    }
  }
  CHECK(checked == 6561);
}

TEST_CASE("agreement with Fourier-Motzkin on random larger instances") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t rows = 1 + rng() % 4, cols = 1 + rng() % 5;
    std::vector<IntVector> d(rows, IntVector(cols));
    for (auto& row : d)
      for (auto& v : row) v = static_cast<std::int64_t>(rng() % 5) - 2;
    IntVector b(rows);
    for (auto& v : b) v = static_cast<std::int64_t>(rng() % 5) - 2;
    std::vector<Sign> signs(cols);
    for (auto& s : signs) s = static_cast<Sign>(rng() % 3);
    CHECK(solve(d, cols, b, signs).feasible == oracle::fm_feasible(d, b, signs));
  }
}

TEST_CASE("cache memoizes identical queries") {
  FeasibilityCache cache(RationalMatrix::from_rows({{1, 0}, {0, 1}}, 2));
  const std::vector<Sign> signs{Sign::NonNeg, Sign::Free};
  const IntVector b{1, -1};
  CHECK(cache.query(std::span<const std::int64_t>(b), signs).feasible);
  CHECK(cache.query(std::span<const std::int64_t>(b), signs).feasible);
  CHECK(cache.queries() == 2);
  CHECK(cache.hits() == 1);
  CHECK(cache.solves() == 1);
  const IntVector neg{-1, 0};
  CHECK_FALSE(cache.query(std::span<const std::int64_t>(neg), signs).feasible);
}

TEST_CASE("dimension mismatch is an error") {
  CHECK_THROWS_AS(solve({{1, 0}}, 2, {1, 1}, {Sign::Free, Sign::Free}), std::invalid_argument);
}
