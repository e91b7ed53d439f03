#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "srnorder/linalg.hpp"
#include "srnorder/network.hpp"
#include "srnorder/order_check.hpp"
#include "srnorder/search.hpp"

namespace srnorder {

enum class Format { Text, Json, Dot };

std::optional<Format> parse_format(std::string_view name);

/// Numeric companion of the color names: 0 gray, 1 green, 2 red, 3 blue.
int numeric_tag(RateConstraint c);
int numeric_tag(SpeciesTag t);

/// "+S" / "-S" for +e_S / -e_S.
std::string unit_tag(const ReactionNetwork& net, const SignedUnit& u);

using Json = nlohmann::ordered_json;

Json network_json(const ReactionNetwork& net);
Json structure_json(const ReactionNetwork& net, const PreorderingStructure& s);
Json search_json(const ReactionNetwork& net, const SearchReport& report);

/// A search report together with the network it refers to, as read back from json.
struct SearchDocument {
  ReactionNetwork network;
  SearchReport report;
};

/// Inverse of search_json; throws std::invalid_argument on schema errors.
SearchDocument parse_search_json(std::string_view text);

std::string render_search(const ReactionNetwork& net, const SearchReport& report, Format format);

/// Outcome of `check` for one user matrix.
struct CheckReport {
  PreorderMatrix input;
  PreorderMatrix used;  // canonical form unless canonicalization was skipped
  CheckResult result;
  std::optional<PreorderingStructure> structure;  // set iff valid and `used` is non-empty
};

std::string render_check(const ReactionNetwork& net, const CheckReport& report, Format format);

std::string render_conservation(const ReactionNetwork& net, const ConservationBasis& basis);

}  // namespace srnorder
