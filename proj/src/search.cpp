#include "srnorder/search.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <future>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace srnorder {

std::uint64_t candidate_count(std::size_t d) {
  if (d == 0 || d > 31) throw std::invalid_argument("candidate_count: unsupported dimension");
  return (std::uint64_t{1} << (2 * d)) - 1;
}

std::vector<SignedUnit> candidate_rows(std::size_t d, std::uint64_t index) {
  std::vector<SignedUnit> rows;
  for (std::size_t j = 0; j < d; ++j, index >>= 2) {
    const auto digit = index & 3u;
    if (digit & 1u) rows.push_back({j, +1});
    if (digit & 2u) rows.push_back({j, -1});
  }
  return rows;
}

bool CandidateStream::next(std::vector<SignedUnit>& rows) {
  if (index_ + 1 >= end_) return false;
  ++index_;
  rows = candidate_rows(d_, index_);
  return true;
}

PreorderingStructure mirror(const PreorderingStructure& s) {
  PreorderingStructure out;
  out.matrix = s.matrix.negated();
  for (const auto& u : s.closure) out.closure.push_back({u.species, -u.sign});
  std::sort(out.closure.begin(), out.closure.end());
  for (auto t : s.species_tags) out.species_tags.push_back(mirror(t));
  for (auto c : s.reaction_constraints) out.reaction_constraints.push_back(mirror(c));
  return out;
}

bool dominates(const PreorderingStructure& s1, const PreorderingStructure& s2) {
  if (s1.closure.size() <= s2.closure.size()) return false;
  if (!std::includes(s1.closure.begin(), s1.closure.end(), s2.closure.begin(), s2.closure.end()))
    return false;
  for (std::size_t r = 0; r < s1.reaction_constraints.size(); ++r)
    if (!implied_by(s1.reaction_constraints[r], s2.reaction_constraints.at(r))) return false;
  return true;
}

bool is_equivalence_structure(const PreorderingStructure& s) {
  for (auto c : s.reaction_constraints)
    if (c == RateConstraint::LE || c == RateConstraint::GE) return false;
  for (auto t : s.species_tags)
    if (t == SpeciesTag::Leq || t == SpeciesTag::Geq) return false;
  return true;
}

namespace {

// Signed unit rows as bits: bit 2j is +e_j, bit 2j+1 is -e_j.
using UnitMask = std::uint32_t;

std::size_t unit_bit(const SignedUnit& u) { return 2 * u.species + (u.sign > 0 ? 0 : 1); }
SignedUnit bit_unit(std::size_t bit) { return {bit / 2, bit % 2 == 0 ? +1 : -1}; }

UnitMask mask_of(const std::vector<SignedUnit>& units) {
  UnitMask m = 0;
  for (const auto& u : units) m |= UnitMask{1} << unit_bit(u);
  return m;
}

std::vector<SignedUnit> units_of(UnitMask m) {
  std::vector<SignedUnit> out;
  for (std::size_t bit = 0; bit < 32; ++bit)
    if (m & (UnitMask{1} << bit)) out.push_back(bit_unit(bit));
  std::sort(out.begin(), out.end());
  return out;
}

// Closure of (closed set K) + one unit row, memoized and computed once per key.
class ClosureJoins {
 public:
  ClosureJoins(std::size_t d, const ConservationBasis& c) : d_(d), c_(c) {}

  UnitMask base() { return compute(0, 0); }

  UnitMask join(UnitMask closed, std::size_t bit) {
    const UnitMask with = closed | (UnitMask{1} << bit);
    if (with == closed) return closed;
    const std::uint64_t key = (std::uint64_t{closed} << 6) | bit;
    auto& shard = shards_[key % shards_.size()];
    std::shared_future<UnitMask> pending;
    std::promise<UnitMask> promise;
    bool owner = false;
    {
      std::lock_guard lock(shard.mutex);
      auto it = shard.map.find(key);
      if (it == shard.map.end()) {
        pending = promise.get_future().share();
        shard.map.emplace(key, pending);
        owner = true;
      } else {
        pending = it->second;
      }
    }
    if (!owner) {
      ++hits_;
      return pending.get();
    }
    const UnitMask result = compute(with, closed);
    promise.set_value(result);
    return result;
  }

  std::size_t hits() const { return hits_.load(); }

 private:
  // Every unit implied by the generators `gens`; units in `known` are implied already.
  UnitMask compute(UnitMask gens, UnitMask known) {
    const auto gen_units = units_of(gens);
    std::vector<IntVector> rows;
    for (const auto& u : gen_units) rows.push_back(u.vector(d_));
    UnitMask out = gens | known;
    for (std::size_t bit = 0; bit < 2 * d_; ++bit) {
      if (out & (UnitMask{1} << bit)) continue;
      if (row_implied(bit_unit(bit).vector(d_), rows, c_)) out |= UnitMask{1} << bit;
    }
    return out;
  }

  struct Shard {
    std::mutex mutex;
    std::unordered_map<std::uint64_t, std::shared_future<UnitMask>> map;
  };

  std::size_t d_;
  const ConservationBasis& c_;
  std::array<Shard, 64> shards_;
  std::atomic<std::size_t> hits_{0};
};

template <class Fn>
void parallel_for(std::size_t workers, std::size_t count, Fn&& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, count == 0 ? 1 : count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(0, i);
    return;
  }
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < workers; ++w)
    threads.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) fn(w, i);
    });
  for (auto& t : threads) t.join();
}

struct Candidate {
  UnitMask closure = 0;
  std::uint64_t first_index = 0;
};

std::string tag_key(const std::vector<SpeciesTag>& tags) {
  // GEQ < LEQ < EQ < UNCOMPARED.
  std::string key;
  for (auto t : tags)
    key += t == SpeciesTag::Geq ? '0' : t == SpeciesTag::Leq ? '1' : t == SpeciesTag::Eq ? '2' : '3';
  return key;
}

}  // namespace

SearchReport search(const ReactionNetwork& net, const SearchOptions& options) {
  const std::size_t d = net.dimension();
  if (d == 0 || d > kMaxSearchDimension)
    throw std::invalid_argument("search supports 1.." + std::to_string(kMaxSearchDimension) + " species");
  if (options.worker_count == 0) throw std::invalid_argument("worker_count must be positive");

  const std::size_t solves_before = feasibility_solve_count();
  const ConservationBasis c = conservation_basis(net);
  const std::uint64_t count = candidate_count(d);
  const std::size_t workers = options.worker_count;
  const UnitMask full = (UnitMask{1} << (2 * d)) - 1;

  SearchReport report;
  report.stats.candidates = count;

  // Phase 1: closure of every candidate, keyed to the first candidate producing it.
  std::map<UnitMask, std::uint64_t> first_by_closure;
  std::vector<std::map<UnitMask, std::uint64_t>> local(workers);
  std::size_t join_hits = 0;
  if (options.use_cache) {
    ClosureJoins joins(d, c);
    const UnitMask base = joins.base();
    parallel_for(workers, count, [&](std::size_t w, std::size_t i) {
      const std::uint64_t index = i + 1;
      UnitMask k = base;
      for (const auto& u : candidate_rows(d, index)) k = joins.join(k, unit_bit(u));
      local[w].emplace(k, index);  // indices grow per worker, so the first insert is the smallest
    });
    join_hits = joins.hits();
  } else {
    parallel_for(workers, count, [&](std::size_t w, std::size_t i) {
      const std::uint64_t index = i + 1;
      std::vector<IntVector> rows;
      for (const auto& u : candidate_rows(d, index)) rows.push_back(u.vector(d));
      const PreorderMatrix canonical = canonicalize(PreorderMatrix{rows, d}, c);
      const UnitMask k = mask_of(closure_simple(canonical, c));
      local[w].emplace(k, index);
    });
  }
  for (const auto& part : local)
    for (const auto& [k, index] : part) {
      auto [it, inserted] = first_by_closure.emplace(k, index);
      if (!inserted) it->second = std::min(it->second, index);
    }
  report.stats.distinct_closures = first_by_closure.size();

  // Phase 2: hypothesis checks, one per distinct non-trivial closure.
  std::vector<Candidate> distinct;
  for (const auto& [k, index] : first_by_closure)
    if (k != 0 && k != full) distinct.push_back({k, index});
  std::sort(distinct.begin(), distinct.end(),
            [](const Candidate& a, const Candidate& b) { return a.first_index < b.first_index; });

  std::vector<std::optional<PreorderingStructure>> checked(distinct.size());
  std::atomic<std::size_t> cache_hits{0};
  parallel_for(workers, distinct.size(), [&](std::size_t, std::size_t i) {
    std::vector<IntVector> rows;
    for (const auto& u : candidate_rows(d, distinct[i].first_index)) rows.push_back(u.vector(d));
    const PreorderMatrix canonical = canonicalize(PreorderMatrix{rows, d}, c);
    if (canonical.empty()) return;
    FeasibilityCache cache(assemble_d(canonical, c));
    const CheckResult result = check_structure(net, canonical, c, options.use_cache ? &cache : nullptr);
    cache_hits += cache.hits();
    if (!result.valid()) return;
    PreorderingStructure s;
    s.matrix = canonical;
    s.closure = units_of(distinct[i].closure);
    s.species_tags = species_tags(s.closure, d);
    s.reaction_constraints = result.constraints;
    checked[i] = std::move(s);
  });

  std::vector<PreorderingStructure> valid;
  for (auto& s : checked)
    if (s) valid.push_back(std::move(*s));
  report.stats.valid = valid.size();

  // Domination is decided on the mirror-closed set so the surviving set stays mirror-closed.
  std::vector<bool> dominated(valid.size(), false);
  if (!options.include_dominated)
    for (std::size_t i = 0; i < valid.size(); ++i)
      for (std::size_t k = 0; k < valid.size() && !dominated[i]; ++k)
        dominated[i] = k != i && dominates(valid[k], valid[i]);

  for (std::size_t i = 0; i < valid.size(); ++i) {
    const auto& s = valid[i];
    const std::string key = tag_key(s.species_tags);
    const std::string mirrored = tag_key(mirror(s).species_tags);
    if (key > mirrored) continue;
    ++report.stats.unfiltered_count;
    if (dominated[i]) continue;
    if (is_equivalence_structure(s)) {
      if (options.include_equivalence_structures) report.equivalence_structures.push_back(s);
    } else {
      report.structures.push_back(s);
    }
  }

  report.stats.lp_queries = feasibility_solve_count() - solves_before;
  report.stats.cache_hits = join_hits + cache_hits.load();
  return report;
}

}  // namespace srnorder
