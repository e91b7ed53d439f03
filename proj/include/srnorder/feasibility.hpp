#pragma once

#include <atomic>
#include <cstddef>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "srnorder/linalg.hpp"

namespace srnorder {

enum class Sign { NonNeg, NonPos, Free };

/// Outcome of a feasibility query for D alpha = b under per-variable sign constraints.
struct FeasibilityResult {
  bool feasible = false;
  std::optional<std::vector<Rational>> witness;  // set iff feasible
  std::size_t pivots = 0;                        // simplex pivots performed
};

/// Decides whether D alpha = b has a solution with alpha_k >= 0 (NonNeg),
/// alpha_k <= 0 (NonPos) or alpha_k unrestricted (Free).
///
/// Phase-I simplex over exact rationals with Bland's rule. NonPos columns are
/// negated and Free variables are split into a difference of two non-negative
/// variables; one artificial variable per row, feasible iff the artificial sum
/// reaches exactly zero.
FeasibilityResult feasible(const RationalMatrix& d, std::span<const Rational> b,
                           std::span<const Sign> signs);

/// Process-wide number of simplex solves performed so far (statistics only).
std::size_t feasibility_solve_count();

/// Integer right-hand side convenience overload.
FeasibilityResult feasible(const RationalMatrix& d, std::span<const std::int64_t> b,
                           std::span<const Sign> signs);

/// True when alpha satisfies D alpha = b and the sign pattern exactly.
bool verify_witness(const RationalMatrix& d, std::span<const Rational> b, std::span<const Sign> signs,
                    std::span<const Rational> alpha);

/// Memoizing front end for repeated queries against one coefficient matrix.
/// Safe for concurrent use.
class FeasibilityCache {
 public:
  explicit FeasibilityCache(RationalMatrix d) : d_(std::move(d)) {}

  FeasibilityResult query(std::span<const Rational> b, std::span<const Sign> signs);
  FeasibilityResult query(std::span<const std::int64_t> b, std::span<const Sign> signs);

  const RationalMatrix& matrix() const { return d_; }
  std::size_t queries() const { return queries_.load(); }
  std::size_t hits() const { return hits_.load(); }
  std::size_t solves() const { return queries() - hits(); }

 private:
  RationalMatrix d_;
  std::mutex mutex_;
  std::map<std::string, FeasibilityResult> memo_;
  std::atomic<std::size_t> queries_{0};
  std::atomic<std::size_t> hits_{0};
};

}  // namespace srnorder
