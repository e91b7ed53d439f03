#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "srnorder/feasibility.hpp"
#include "srnorder/linalg.hpp"
#include "srnorder/network.hpp"

namespace srnorder {

/// Integer matrix M defining x <= y iff M (x - y) <= 0 componentwise.
struct PreorderMatrix {
  std::vector<IntVector> rows;
  std::size_t cols = 0;

  std::size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }
  PreorderMatrix negated() const;

  friend bool operator==(const PreorderMatrix&, const PreorderMatrix&) = default;
};

/// Rate-constant relation between model X and model Y for one reaction.
enum class RateConstraint { Free, LE, GE, EQ };

/// How a species count in X compares to the one in Y.
enum class SpeciesTag { Leq, Geq, Eq, Uncompared };

/// Signed unit row +e_j or -e_j.
struct SignedUnit {
  std::size_t species = 0;
  int sign = 1;

  IntVector vector(std::size_t d) const;
  friend auto operator<=>(const SignedUnit&, const SignedUnit&) = default;
};

struct ABMatrices {
  // (m + 1) x d, entries 0/1; row m is the unrestricted-index row.
  std::vector<std::vector<std::uint8_t>> a;
  std::vector<std::vector<std::uint8_t>> b;
};

struct PreorderingStructure {
  PreorderMatrix matrix;                      // canonical M
  std::vector<SignedUnit> closure;            // sorted
  std::vector<SpeciesTag> species_tags;
  std::vector<RateConstraint> reaction_constraints;

  friend bool operator==(const PreorderingStructure&, const PreorderingStructure&) = default;
};

enum class Side { A, B };

struct CheckFailure {
  std::size_t reaction = 0;
  Side side = Side::A;
};

struct CheckResult {
  std::vector<RateConstraint> constraints;  // filled iff valid
  std::optional<CheckFailure> failure;
  std::size_t lp_queries = 0;

  bool valid() const { return !failure.has_value(); }
};

/// Combines the per-side outcomes: a-side yields Free or LE, b-side Free or GE.
RateConstraint combine(RateConstraint a_side, RateConstraint b_side);
RateConstraint mirror(RateConstraint c);
SpeciesTag mirror(SpeciesTag t);

/// True iff `constraint` is implied by `assumed` (Free by anything, LE by LE/EQ,
/// GE by GE/EQ, EQ only by EQ).
bool implied_by(RateConstraint constraint, RateConstraint assumed);

/// Whether kx, ky satisfy the constraint.
bool satisfies(RateConstraint c, const Rational& kx, const Rational& ky);

/// True iff row = sum of non-negative multiples of `others` plus any
/// combination of conservation laws.
bool row_implied(std::span<const std::int64_t> row, const std::vector<IntVector>& others,
                 const ConservationBasis& c);

/// Normalizes every row by its GCD, then removes rows implied by the remaining
/// ones (scanning in index order, restarting after each removal). An empty
/// result means the preorder is trivial on every compatibility class.
PreorderMatrix canonicalize(const PreorderMatrix& m, const ConservationBasis& c);

/// Signed unit rows implied by M modulo conservation laws.
std::vector<SignedUnit> closure_simple(const PreorderMatrix& m, const ConservationBasis& c);

std::vector<SpeciesTag> species_tags(const std::vector<SignedUnit>& closure, std::size_t d);

/// D = (M^T | C^T), the coefficient matrix of the A/B feasibility systems.
RationalMatrix assemble_d(const PreorderMatrix& m, const ConservationBasis& c);

/// Full A and B matrices.
ABMatrices compute_ab(const PreorderMatrix& m, const ConservationBasis& c,
                      FeasibilityCache* cache = nullptr);

/// Checks the per-reaction hypotheses for a canonical M and synthesizes the
/// weakest rate-constant constraint for every reaction. The a-side prefers
/// (M xi)^+ = 0 (no constraint), then the unrestricted A row, then the row i
/// with (M xi)^+ = e_i; the b-side mirrors this with B. Only the A/B entries
/// that a hypothesis needs are evaluated.
CheckResult check_structure(const ReactionNetwork& net, const PreorderMatrix& m,
                            const ConservationBasis& c, FeasibilityCache* cache = nullptr);

/// Assembles the structure record for a valid check.
PreorderingStructure make_structure(const PreorderMatrix& canonical, const ConservationBasis& c,
                                    std::vector<RateConstraint> constraints);

std::string to_string(RateConstraint c);
std::string to_string(SpeciesTag t);
std::string color_of(RateConstraint c);
std::string color_of(SpeciesTag t);

}  // namespace srnorder
