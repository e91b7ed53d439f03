#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace srnorder {

using Rational = mpq_class;
using IntVector = std::vector<std::int64_t>;

/// Species counts, indexed by species position.
using State = std::vector<std::int64_t>;

/// Largest stoichiometric coefficient accepted by the parser.
inline constexpr std::int64_t kMaxCoefficient = 1'000'000;

struct SpeciesId {
  std::size_t index = 0;
  std::string name;
};

/// Non-negative integer combination of species, one entry per species.
struct Complex {
  IntVector coefficients;

  bool is_zero() const;
  friend bool operator==(const Complex&, const Complex&) = default;
};

struct Reaction {
  Complex source;
  Complex product;
  IntVector xi;       // product - source
  std::string label;  // "src->prod" with terms in species order
};

/// A reaction network: species in a fixed order plus an ordered reaction list.
///
/// Construction computes reaction vectors, labels and the deduplicated list of
/// reaction vectors but does not reject structural defects; use
/// validate_network() for those. The parser rejects them up front.
class ReactionNetwork {
 public:
  ReactionNetwork() = default;
  ReactionNetwork(std::vector<std::string> species_names,
                  std::vector<std::pair<Complex, Complex>> reactions);

  std::size_t dimension() const { return species_.size(); }
  std::size_t reaction_count() const { return reactions_.size(); }

  const std::vector<SpeciesId>& species() const { return species_; }
  const std::vector<Reaction>& reactions() const { return reactions_; }
  const Reaction& reaction(std::size_t r) const { return reactions_.at(r); }
  const std::vector<IntVector>& distinct_vectors() const { return distinct_vectors_; }

  std::optional<std::size_t> species_index(std::string_view name) const;
  std::optional<std::size_t> reaction_index(std::string_view label) const;

  /// Renders a complex with this network's species names, "0" when empty.
  std::string format_complex(const Complex& c) const;

  friend bool operator==(const ReactionNetwork& a, const ReactionNetwork& b) {
    return a.species_names() == b.species_names() && a.reaction_pairs() == b.reaction_pairs();
  }

 private:
  std::vector<std::string> species_names() const;
  std::vector<std::pair<Complex, Complex>> reaction_pairs() const;

  std::vector<SpeciesId> species_;
  std::vector<Reaction> reactions_;
  std::vector<IntVector> distinct_vectors_;
};

/// Rate constants of the two compared models, one entry per reaction.
struct KineticsPair {
  std::vector<Rational> kx;
  std::vector<Rational> ky;

  friend bool operator==(const KineticsPair&, const KineticsPair&) = default;
};

struct ParsedNetwork {
  ReactionNetwork network;
  std::optional<KineticsPair> kinetics;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Parses the line-oriented network format.
///
/// One reaction per line, '#' starts a comment. Complexes are '+'-separated
/// terms of the form "<int><species>", "<species>" or "0". The arrow is "->" or
/// "<->" (expanded into the forward and the reverse reaction). A line may end
/// with "kX=<q> kY=<q>" and, for "<->", "kX2=<q> kY2=<q>" for the reverse
/// direction. Rate literals are integers, "p/q" fractions or decimals.
///
/// Kinetics are returned only when every reaction carries both constants.
ParsedNetwork parse_network(std::string_view text);

/// Parses a rate literal ("3", "2/7", "0.125") into an exact rational.
Rational parse_rational(std::string_view literal);

/// Writes the network (and kinetics, if given) back in the parser's format,
/// one "->" line per reaction.
std::string serialize_network(const ReactionNetwork& net, const KineticsPair* kinetics = nullptr);

IntVector reaction_vector(const Reaction& r);

/// Falling factorial (x)_n; 1 for n = 0.
mpz_class falling_factorial(std::int64_t x, std::int64_t n);

/// Mass-action propensity of reaction r at state x.
Rational propensity(const ReactionNetwork& net, std::span<const Rational> constants,
                    std::size_t r, const State& x);

/// Total rate of the jump x -> x + xi: sum of propensities of reactions with that vector.
Rational aggregate_rate(const ReactionNetwork& net, std::span<const Rational> constants,
                        const State& x, std::span<const std::int64_t> xi);

/// Structural diagnostics; empty for a non-redundant network.
std::vector<std::string> validate_network(const ReactionNetwork& net);

}  // namespace srnorder
