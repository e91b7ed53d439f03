#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "srnorder/order_check.hpp"

namespace srnorder {

struct SearchOptions {
  bool include_dominated = false;
  bool include_equivalence_structures = true;
  std::size_t worker_count = 1;
  /// Memoize closure computations across candidates. Off reproduces the
  /// per-candidate canonicalize/closure pipeline; used to audit LP savings.
  bool use_cache = true;
};

struct SearchStats {
  std::uint64_t candidates = 0;
  std::size_t distinct_closures = 0;
  std::size_t valid = 0;               // valid non-trivial closures, both orientations
  std::size_t unfiltered_count = 0;    // after mirror reduction, before domination
  std::size_t lp_queries = 0;          // simplex solves actually run
  std::size_t cache_hits = 0;

  friend bool operator==(const SearchStats&, const SearchStats&) = default;
};

struct SearchReport {
  std::vector<PreorderingStructure> structures;
  std::vector<PreorderingStructure> equivalence_structures;
  SearchStats stats;

  std::size_t total() const { return structures.size() + equivalence_structures.size(); }
};

/// Largest dimension accepted by search(); the candidate space has 4^d - 1 elements.
inline constexpr std::size_t kMaxSearchDimension = 13;

std::uint64_t candidate_count(std::size_t d);

/// Rows of candidate `index` (1 <= index < 4^d). Base-4 digit j (least
/// significant first) selects nothing, +e_j, -e_j or both for species j.
std::vector<SignedUnit> candidate_rows(std::size_t d, std::uint64_t index);

/// Iterates candidates 1, 2, ..., 4^d - 1.
class CandidateStream {
 public:
  explicit CandidateStream(std::size_t d) : d_(d), end_(candidate_count(d) + 1) {}
  bool next(std::vector<SignedUnit>& rows);
  std::uint64_t index() const { return index_; }

 private:
  std::size_t d_;
  std::uint64_t end_;
  std::uint64_t index_ = 0;
};

/// Reverses every inequality: M negated, LEQ/GEQ and LE/GE swapped.
PreorderingStructure mirror(const PreorderingStructure& s);

/// s1 concludes strictly more (closure superset) while assuming no more
/// (each constraint of s1 implied by the one of s2).
bool dominates(const PreorderingStructure& s1, const PreorderingStructure& s2);

/// All rate constraints EQ/FREE and every compared species EQ.
bool is_equivalence_structure(const PreorderingStructure& s);

/// Enumerates all preordering structures built from rows in {+-e_j}.
SearchReport search(const ReactionNetwork& net, const SearchOptions& options = {});

}  // namespace srnorder
