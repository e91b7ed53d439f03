#include "srnorder/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "srnorder/coupling.hpp"
#include "srnorder/report.hpp"
#include "srnorder/search.hpp"

namespace srnorder {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ParsedNetwork load_network(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return parse_network(text);
  } catch (const ParseError& e) {
    throw UsageError(path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " + e.what());
  }
}

std::int64_t parse_int(const std::string& token, const std::string& what) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != token.size() || token.empty()) throw UsageError("invalid integer '" + token + "' in " + what);
  return v;
}

/// Integers separated by commas and/or whitespace.
IntVector parse_ints(const std::string& text, const std::string& what) {
  std::string spaced = text;
  for (auto& ch : spaced)
    if (ch == ',') ch = ' ';
  std::istringstream in(spaced);
  IntVector out;
  for (std::string token; in >> token;) out.push_back(parse_int(token, what));
  return out;
}

PreorderMatrix load_matrix(const std::string& path, std::size_t d) {
  std::istringstream in(read_file(path));
  PreorderMatrix m{{}, d};
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string where = path + ":" + std::to_string(line_no);
    auto row = parse_ints(line, where);
    if (row.empty()) continue;
    if (row.size() != d)
      throw UsageError(where + ": row has " + std::to_string(row.size()) + " entries, expected " + std::to_string(d));
    m.rows.push_back(std::move(row));
  }
  return m;
}

State parse_state(const std::string& text, std::size_t d, const std::string& flag) {
  auto s = parse_ints(text, flag);
  if (s.size() != d) throw UsageError(flag + " needs " + std::to_string(d) + " entries");
  for (auto v : s)
    if (v < 0) throw UsageError(flag + " entries must be non-negative");
  return s;
}

std::size_t default_workers() {
  const char* env = std::getenv("SRN_ORDER_WORKERS");
  if (env == nullptr || *env == '\0') return 1;
  const auto v = parse_int(env, "SRN_ORDER_WORKERS");
  if (v < 1) throw UsageError("SRN_ORDER_WORKERS must be positive");
  return static_cast<std::size_t>(v);
}

Format format_of(const std::string& name) {
  const auto f = parse_format(name);
  if (!f) throw UsageError("unknown format '" + name + "'");
  return *f;
}

const KineticsPair& require_kinetics(const ParsedNetwork& parsed, const std::string& path) {
  if (!parsed.kinetics) throw UsageError(path + ": every reaction needs kX= and kY= annotations");
  return *parsed.kinetics;
}

AffineRelation load_relation(const std::string& matrix_path, const std::string& offset, std::size_t d) {
  const PreorderMatrix m = load_matrix(matrix_path, d);
  if (offset.empty()) return AffineRelation::from_matrix(m);
  auto c = parse_ints(offset, "--offset");
  if (c.size() != m.size()) throw UsageError("--offset needs one entry per matrix row");
  return AffineRelation::with_offset(m, std::move(c));
}

std::string join(const IntVector& v) {
  std::string out;
  for (std::size_t j = 0; j < v.size(); ++j) out += (j ? "," : "") + std::to_string(v[j]);
  return out;
}

struct Args {
  std::string net;
  std::string matrix;
  std::string format = "text";
  std::string offset;
  std::string x0, y0, anchor;
  std::string export_path;
  bool no_canonicalize = false;
  bool include_dominated = false;
  std::size_t workers = 0;
  double t_max = 0;
  std::size_t trajectories = 1;
  std::uint64_t seed = 1;
  std::uint64_t max_events = kDefaultMaxEvents;
  std::int64_t radius = 0;
};

int cmd_check(const Args& a, std::ostream& out) {
  const auto parsed = load_network(a.net);
  const auto& net = parsed.network;
  const auto c = conservation_basis(net);
  CheckReport report;
  report.input = load_matrix(a.matrix, net.dimension());
  const Format format = format_of(a.format);
  if (a.no_canonicalize) {
    report.used = report.input;
  } else {
    try {
      report.used = canonicalize(report.input, c);
    } catch (const std::invalid_argument& e) {
      throw UsageError(a.matrix + ": " + e.what());
    }
  }
  report.result = check_structure(net, report.used, c);
  if (report.result.valid()) report.structure = make_structure(report.used, c, report.result.constraints);
  out << render_check(net, report, format);
  return report.result.valid() ? kExitOk : kExitFailure;
}

int cmd_search(const Args& a, std::ostream& out) {
  const auto parsed = load_network(a.net);
  const Format format = format_of(a.format);
  SearchOptions options;
  options.include_dominated = a.include_dominated;
  options.worker_count = a.workers == 0 ? default_workers() : a.workers;
  SearchReport report;
  try {
    report = search(parsed.network, options);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  out << render_search(parsed.network, report, format);
  return kExitOk;
}

int cmd_simulate(const Args& a, std::ostream& out, std::ostream& err) {
  const auto parsed = load_network(a.net);
  const auto& net = parsed.network;
  const auto& kinetics = require_kinetics(parsed, a.net);
  const auto rel = load_relation(a.matrix, a.offset, net.dimension());
  const State x0 = parse_state(a.x0, net.dimension(), "--x0");
  const State y0 = parse_state(a.y0, net.dimension(), "--y0");
  if (!(a.t_max >= 0)) throw UsageError("--t-max must be non-negative");
  if (!rel.contains(x0, y0)) throw UsageError("initial pair is not in the relation");

  EnsembleOptions options;
  options.trajectories = a.trajectories;
  options.seed = a.seed;
  options.t_max = a.t_max;
  options.max_events = a.max_events;
  options.checkpoints = {a.t_max};
  options.workers = default_workers();
  try {
    if (!a.export_path.empty()) {
      std::ofstream file(a.export_path);
      if (!file) throw UsageError("cannot write " + a.export_path);
      file << export_trajectory(simulate_coupled(net, kinetics, rel, x0, y0, a.t_max, a.seed, a.max_events));
    }
    const auto result = run_coupled_ensemble(net, kinetics, rel, x0, y0, options);
    out << "trajectories: " << result.trajectories << '\n'
        << "events: " << result.events << '\n'
        << "terminated: t_max=" << result.terminated_t_max << " max_events=" << result.terminated_max_events
        << " absorbed=" << result.terminated_absorbed << '\n'
        << "relation violations: " << result.relation_violations << '\n';
    out << "means at t=" << a.t_max << ":\n";
    for (const auto& [label, samples] : {std::pair{"X", &result.x_samples}, std::pair{"Y", &result.y_samples}}) {
      const auto m = moments(samples->front().states);
      out << "  " << label << ':';
      for (std::size_t j = 0; j < m.size(); ++j)
        out << ' ' << net.species()[j].name << '=' << m[j].mean << "+-" << m[j].standard_error;
      out << '\n';
    }
    return result.relation_violations == 0 ? kExitOk : kExitFailure;
  } catch (const HypothesisViolation& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

int cmd_oracle(const Args& a, std::ostream& out) {
  const auto parsed = load_network(a.net);
  const auto& net = parsed.network;
  const auto& kinetics = require_kinetics(parsed, a.net);
  const auto rel = load_relation(a.matrix, a.offset, net.dimension());
  const State anchor = parse_state(a.anchor, net.dimension(), "--anchor");
  if (a.radius < 0) throw UsageError("--radius must be non-negative");
  constexpr std::size_t kShown = 20;
  OracleReport report;
  try {
    report = oracle_check_conditions(net, kinetics, rel, a.radius, anchor, default_workers(), kShown);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  out << "states: " << report.states << '\n'
      << "related pairs: " << report.related_pairs << '\n'
      << "violations: " << report.violation_count << '\n';
  for (const auto& v : report.violations)
    out << "  (" << v.condition << ") x=(" << join(v.state.x) << ") y=(" << join(v.state.y) << ") xi=("
        << join(v.xi) << ") qX=" << v.qx.get_str() << " qY=" << v.qy.get_str() << '\n';
  if (report.violation_count > report.violations.size())
    out << "  ... " << report.violation_count - report.violations.size() << " more\n";
  return report.violation_count == 0 ? kExitOk : kExitFailure;
}

int cmd_conservation(const Args& a, std::ostream& out) {
  const auto parsed = load_network(a.net);
  out << render_conservation(parsed.network, conservation_basis(parsed.network));
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Order-preserving couplings of stochastic reaction networks", "srn-order"};
  app.require_subcommand(1);
  Args a;

  auto* check = app.add_subcommand("check", "Check one preorder matrix against the network");
  check->add_option("net", a.net, "Network file")->required();
  check->add_option("--matrix", a.matrix, "Matrix file, one integer row per line")->required();
  check->add_flag("--no-canonicalize", a.no_canonicalize, "Use the matrix exactly as given");
  check->add_option("--format", a.format, "text, json or dot");

  auto* search_cmd = app.add_subcommand("search", "Enumerate preordering structures");
  search_cmd->add_option("net", a.net, "Network file")->required();
  search_cmd->add_flag("--include-dominated", a.include_dominated, "Keep dominated structures");
  search_cmd->add_option("--workers", a.workers, "Worker threads (default: SRN_ORDER_WORKERS or 1)")
      ->check(CLI::PositiveNumber);
  search_cmd->add_option("--format", a.format, "text, json or dot");

  auto* simulate = app.add_subcommand("simulate", "Simulate the coupled chain");
  simulate->add_option("net", a.net, "Network file with kX/kY annotations")->required();
  simulate->add_option("--matrix", a.matrix, "Matrix file")->required();
  simulate->add_option("--offset", a.offset, "Offset c of the relation M(x-y) <= c");
  simulate->add_option("--x0", a.x0, "Initial X state")->required();
  simulate->add_option("--y0", a.y0, "Initial Y state")->required();
  simulate->add_option("--t-max", a.t_max, "Time horizon")->required();
  simulate->add_option("--trajectories", a.trajectories, "Number of trajectories")->required();
  simulate->add_option("--seed", a.seed, "Master seed")->required();
  simulate->add_option("--max-events", a.max_events, "Event guard per trajectory");
  simulate->add_option("--export", a.export_path, "Write the first trajectory as tab-separated records");

  auto* oracle = app.add_subcommand("oracle", "Brute-force check of the coupling conditions on a box");
  oracle->add_option("net", a.net, "Network file with kX/kY annotations")->required();
  oracle->add_option("--matrix", a.matrix, "Matrix file")->required();
  oracle->add_option("--offset", a.offset, "Offset c of the relation M(x-y) <= c");
  oracle->add_option("--anchor", a.anchor, "State fixing the compatibility class")->required();
  oracle->add_option("--radius", a.radius, "Box radius")->required();

  auto* conservation = app.add_subcommand("conservation", "Print a conservation-law basis");
  conservation->add_option("net", a.net, "Network file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*check) return cmd_check(a, out);
    if (*search_cmd) return cmd_search(a, out);
    if (*simulate) return cmd_simulate(a, out, err);
    if (*oracle) return cmd_oracle(a, out);
    return cmd_conservation(a, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitUsage;
}

}  // namespace srnorder
