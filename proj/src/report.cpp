#include "srnorder/report.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace srnorder {

std::optional<Format> parse_format(std::string_view name) {
  if (name == "text") return Format::Text;
  if (name == "json") return Format::Json;
  if (name == "dot") return Format::Dot;
  return std::nullopt;
}

int numeric_tag(RateConstraint c) {
  switch (c) {
    case RateConstraint::Free: return 0;
    case RateConstraint::LE: return 1;
    case RateConstraint::GE: return 2;
    case RateConstraint::EQ: return 3;
  }
  return 0;
}

int numeric_tag(SpeciesTag t) {
  switch (t) {
    case SpeciesTag::Uncompared: return 0;
    case SpeciesTag::Leq: return 1;
    case SpeciesTag::Geq: return 2;
    case SpeciesTag::Eq: return 3;
  }
  return 0;
}

std::string unit_tag(const ReactionNetwork& net, const SignedUnit& u) {
  return (u.sign > 0 ? "+" : "-") + net.species().at(u.species).name;
}

namespace {

std::optional<RateConstraint> constraint_from(std::string_view s) {
  for (auto c : {RateConstraint::Free, RateConstraint::LE, RateConstraint::GE, RateConstraint::EQ})
    if (to_string(c) == s) return c;
  return std::nullopt;
}

std::optional<SpeciesTag> species_tag_from(std::string_view s) {
  for (auto t : {SpeciesTag::Leq, SpeciesTag::Geq, SpeciesTag::Eq, SpeciesTag::Uncompared})
    if (to_string(t) == s) return t;
  return std::nullopt;
}

std::string row_text(const IntVector& row) {
  std::string out;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (j) out += ' ';
    out += std::to_string(row[j]);
  }
  return out;
}

[[noreturn]] void schema_error(const std::string& what) {
  throw std::invalid_argument("search report json: " + what);
}

void text_structure(std::ostream& out, const ReactionNetwork& net, const PreorderingStructure& s) {
  out << "  matrix:\n";
  for (const auto& row : s.matrix.rows) out << "    " << row_text(row) << '\n';
  out << "  closure:";
  for (const auto& u : s.closure) out << ' ' << unit_tag(net, u);
  out << "\n  species:\n";
  for (std::size_t j = 0; j < net.dimension(); ++j) {
    const auto t = s.species_tags[j];
    out << "    " << net.species()[j].name << ' ' << to_string(t) << ' ' << color_of(t) << ' '
        << numeric_tag(t) << '\n';
  }
  out << "  reactions:\n";
  for (std::size_t r = 0; r < net.reaction_count(); ++r) {
    const auto c = s.reaction_constraints[r];
    out << "    " << net.reaction(r).label << ' ' << to_string(c) << ' ' << color_of(c) << ' '
        << numeric_tag(c) << '\n';
  }
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + '"';
}

void dot_structure(std::ostream& out, const ReactionNetwork& net, const std::string& prefix,
                   const std::string& title, const PreorderingStructure* s) {
  out << "  subgraph " << quoted("cluster_" + prefix) << " {\n";
  out << "    label=" << quoted(title) << ";\n";
  for (std::size_t j = 0; j < net.dimension(); ++j) {
    const auto t = s ? s->species_tags[j] : SpeciesTag::Uncompared;
    out << "    " << quoted(prefix + ":species:" + net.species()[j].name) << " [label="
        << quoted(net.species()[j].name) << ", shape=ellipse, color=" << color_of(t)
        << ", fontcolor=" << color_of(t) << "];\n";
  }
  std::vector<std::string> complexes;
  auto node = [&](const Complex& c) {
    const std::string label = net.format_complex(c);
    const std::string id = prefix + ":complex:" + label;
    if (std::find(complexes.begin(), complexes.end(), label) == complexes.end()) {
      complexes.push_back(label);
      out << "    " << quoted(id) << " [label=" << quoted(label) << ", shape=box];\n";
    }
    return id;
  };
  for (std::size_t r = 0; r < net.reaction_count(); ++r) {
    const auto& rx = net.reaction(r);
    const std::string from = node(rx.source);
    const std::string to = node(rx.product);
    const auto c = s ? s->reaction_constraints[r] : RateConstraint::Free;
    out << "    " << quoted(from) << " -> " << quoted(to) << " [color=" << color_of(c)
        << ", label=" << quoted(to_string(c)) << "];\n";
  }
  out << "  }\n";
}

}  // namespace

Json network_json(const ReactionNetwork& net) {
  Json j;
  j["species"] = Json::array();
  for (const auto& s : net.species()) j["species"].push_back(s.name);
  j["reactions"] = Json::array();
  for (const auto& r : net.reactions()) j["reactions"].push_back(r.label);
  return j;
}

Json structure_json(const ReactionNetwork& net, const PreorderingStructure& s) {
  Json j;
  j["matrix"] = Json::array();
  for (const auto& row : s.matrix.rows) j["matrix"].push_back(row);
  j["closure"] = Json::array();
  for (const auto& u : s.closure) j["closure"].push_back(unit_tag(net, u));
  j["species"] = Json::object();
  for (std::size_t k = 0; k < net.dimension(); ++k)
    j["species"][net.species()[k].name] = to_string(s.species_tags[k]);
  j["reactions"] = Json::object();
  for (std::size_t r = 0; r < net.reaction_count(); ++r)
    j["reactions"][net.reaction(r).label] = to_string(s.reaction_constraints[r]);
  return j;
}

Json search_json(const ReactionNetwork& net, const SearchReport& report) {
  Json j;
  j["network"] = network_json(net);
  j["structures"] = Json::array();
  for (const auto& s : report.structures) j["structures"].push_back(structure_json(net, s));
  j["equivalence_structures"] = Json::array();
  for (const auto& s : report.equivalence_structures)
    j["equivalence_structures"].push_back(structure_json(net, s));
  const auto& st = report.stats;
  j["stats"] = {{"candidates", st.candidates},         {"distinct_closures", st.distinct_closures},
                {"valid", st.valid},                   {"unfiltered_count", st.unfiltered_count},
                {"lp_queries", st.lp_queries},         {"cache_hits", st.cache_hits}};
  return j;
}

namespace {

ReactionNetwork network_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("species") || !j.contains("reactions")) schema_error("bad network");
  std::vector<std::string> species = j.at("species").get<std::vector<std::string>>();
  std::string text;
  for (const auto& label : j.at("reactions")) text += label.get<std::string>() + "\n";
  const ReactionNetwork parsed = parse_network(text).network;
  std::vector<std::pair<Complex, Complex>> reactions;
  auto remap = [&](const Complex& c) {
    Complex out{IntVector(species.size(), 0)};
    for (std::size_t k = 0; k < c.coefficients.size(); ++k) {
      if (c.coefficients[k] == 0) continue;
      const auto it = std::find(species.begin(), species.end(), parsed.species()[k].name);
      if (it == species.end()) schema_error("reaction uses an undeclared species");
      out.coefficients[static_cast<std::size_t>(it - species.begin())] = c.coefficients[k];
    }
    return out;
  };
  for (const auto& r : parsed.reactions()) reactions.emplace_back(remap(r.source), remap(r.product));
  return ReactionNetwork(std::move(species), std::move(reactions));
}

PreorderingStructure structure_from_json(const ReactionNetwork& net, const Json& j) {
  PreorderingStructure s;
  s.matrix.cols = net.dimension();
  for (const auto& row : j.at("matrix")) {
    auto values = row.get<IntVector>();
    if (values.size() != net.dimension()) schema_error("matrix row has wrong length");
    s.matrix.rows.push_back(std::move(values));
  }
  for (const auto& tag : j.at("closure")) {
    const auto text = tag.get<std::string>();
    if (text.size() < 2 || (text[0] != '+' && text[0] != '-')) schema_error("bad closure tag " + text);
    const auto index = net.species_index(text.substr(1));
    if (!index) schema_error("unknown species in closure tag " + text);
    s.closure.push_back({*index, text[0] == '+' ? 1 : -1});
  }
  std::sort(s.closure.begin(), s.closure.end());
  s.species_tags.resize(net.dimension(), SpeciesTag::Uncompared);
  if (j.at("species").size() != net.dimension()) schema_error("species map has wrong size");
  for (const auto& [name, value] : j.at("species").items()) {
    const auto index = net.species_index(name);
    const auto tag = species_tag_from(value.get<std::string>());
    if (!index || !tag) schema_error("bad species entry " + name);
    s.species_tags[*index] = *tag;
  }
  s.reaction_constraints.resize(net.reaction_count(), RateConstraint::Free);
  if (j.at("reactions").size() != net.reaction_count()) schema_error("reaction map has wrong size");
  for (const auto& [label, value] : j.at("reactions").items()) {
    const auto index = net.reaction_index(label);
    const auto c = constraint_from(value.get<std::string>());
    if (!index || !c) schema_error("bad reaction entry " + label);
    s.reaction_constraints[*index] = *c;
  }
  return s;
}

}  // namespace

SearchDocument parse_search_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
    SearchDocument doc{network_from_json(j.at("network")), {}};
    for (const auto& s : j.at("structures")) doc.report.structures.push_back(structure_from_json(doc.network, s));
    for (const auto& s : j.at("equivalence_structures"))
      doc.report.equivalence_structures.push_back(structure_from_json(doc.network, s));
    const auto& st = j.at("stats");
    doc.report.stats.candidates = st.at("candidates").get<std::uint64_t>();
    doc.report.stats.distinct_closures = st.at("distinct_closures").get<std::size_t>();
    doc.report.stats.valid = st.at("valid").get<std::size_t>();
    doc.report.stats.unfiltered_count = st.at("unfiltered_count").get<std::size_t>();
    doc.report.stats.lp_queries = st.at("lp_queries").get<std::size_t>();
    doc.report.stats.cache_hits = st.at("cache_hits").get<std::size_t>();
    return doc;
  } catch (const Json::exception& e) {
    schema_error(e.what());
  } catch (const ParseError& e) {
    schema_error(e.what());
  }
}

std::string render_search(const ReactionNetwork& net, const SearchReport& report, Format format) {
  std::ostringstream out;
  switch (format) {
    case Format::Json:
      out << search_json(net, report).dump(2) << '\n';
      break;
    case Format::Text: {
      const auto n = report.structures.size();
      const auto e = report.equivalence_structures.size();
      out << n << (n == 1 ? " structure, " : " structures, ") << e
          << (e == 1 ? " equivalence structure\n" : " equivalence structures\n");
      for (std::size_t i = 0; i < n; ++i) {
        out << "\nstructure " << i + 1 << '\n';
        text_structure(out, net, report.structures[i]);
      }
      for (std::size_t i = 0; i < e; ++i) {
        out << "\nequivalence structure " << i + 1 << '\n';
        text_structure(out, net, report.equivalence_structures[i]);
      }
      const auto& st = report.stats;
      out << "\nstats: candidates=" << st.candidates << " distinct_closures=" << st.distinct_closures
          << " valid=" << st.valid << " unfiltered=" << st.unfiltered_count << " lp_queries=" << st.lp_queries
          << " cache_hits=" << st.cache_hits << '\n';
      break;
    }
    case Format::Dot:
      out << "digraph srn {\n";
      for (std::size_t i = 0; i < report.structures.size(); ++i)
        dot_structure(out, net, "s" + std::to_string(i + 1), "structure " + std::to_string(i + 1),
                      &report.structures[i]);
      for (std::size_t i = 0; i < report.equivalence_structures.size(); ++i)
        dot_structure(out, net, "e" + std::to_string(i + 1), "equivalence structure " + std::to_string(i + 1),
                      &report.equivalence_structures[i]);
      out << "}\n";
      break;
  }
  return out.str();
}

std::string render_check(const ReactionNetwork& net, const CheckReport& report, Format format) {
  std::ostringstream out;
  const auto& failure = report.result.failure;
  auto failure_text = [&] {
    return "reaction " + net.reaction(failure->reaction).label + " fails the " +
           (failure->side == Side::A ? "a" : "b") + "-side hypotheses";
  };
  switch (format) {
    case Format::Json: {
      Json j;
      j["network"] = network_json(net);
      j["valid"] = report.result.valid();
      j["input_matrix"] = Json::array();
      for (const auto& row : report.input.rows) j["input_matrix"].push_back(row);
      if (report.structure) {
        j["structure"] = structure_json(net, *report.structure);
      } else {
        j["matrix"] = Json::array();
        for (const auto& row : report.used.rows) j["matrix"].push_back(row);
      }
      if (failure)
        j["failure"] = {{"reaction", net.reaction(failure->reaction).label},
                        {"side", failure->side == Side::A ? "a" : "b"}};
      j["lp_queries"] = report.result.lp_queries;
      out << j.dump(2) << '\n';
      break;
    }
    case Format::Text:
      if (report.structure) {
        out << "valid\n";
        text_structure(out, net, *report.structure);
      } else {
        out << "invalid: " << failure_text() << '\n' << "  matrix:\n";
        for (const auto& row : report.used.rows) out << "    " << row_text(row) << '\n';
      }
      break;
    case Format::Dot:
      out << "digraph srn {\n";
      dot_structure(out, net, "check", report.structure ? "valid" : "invalid: " + failure_text(),
                    report.structure ? &*report.structure : nullptr);
      out << "}\n";
      break;
  }
  return out.str();
}

std::string render_conservation(const ReactionNetwork& net, const ConservationBasis& basis) {
  std::ostringstream out;
  out << "species:";
  for (const auto& s : net.species()) out << ' ' << s.name;
  out << '\n' << basis.rows.size() << (basis.rows.size() == 1 ? " conservation law\n" : " conservation laws\n");
  for (const auto& row : basis.rows) out << row_text(row) << '\n';
  return out.str();
}

}  // namespace srnorder
