#include "srnorder/network.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace srnorder {

bool Complex::is_zero() const {
  return std::all_of(coefficients.begin(), coefficients.end(),
                     [](std::int64_t c) { return c == 0; });
}

ReactionNetwork::ReactionNetwork(std::vector<std::string> species_names,
                                 std::vector<std::pair<Complex, Complex>> reactions) {
  const std::size_t d = species_names.size();
  species_.reserve(d);
  for (std::size_t i = 0; i < d; ++i) species_.push_back({i, std::move(species_names[i])});

  reactions_.reserve(reactions.size());
  for (auto& [src, prod] : reactions) {
    if (src.coefficients.size() != d || prod.coefficients.size() != d)
      throw std::invalid_argument("complex length does not match the species count");
    Reaction r;
    r.source = std::move(src);
    r.product = std::move(prod);
    r.xi.resize(d);
    for (std::size_t j = 0; j < d; ++j)
      r.xi[j] = r.product.coefficients[j] - r.source.coefficients[j];
    r.label = format_complex(r.source) + "->" + format_complex(r.product);
    if (std::find(distinct_vectors_.begin(), distinct_vectors_.end(), r.xi) ==
        distinct_vectors_.end())
      distinct_vectors_.push_back(r.xi);
    reactions_.push_back(std::move(r));
  }
}

std::optional<std::size_t> ReactionNetwork::species_index(std::string_view name) const {
  for (const auto& s : species_)
    if (s.name == name) return s.index;
  return std::nullopt;
}

std::optional<std::size_t> ReactionNetwork::reaction_index(std::string_view label) const {
  for (std::size_t r = 0; r < reactions_.size(); ++r)
    if (reactions_[r].label == label) return r;
  return std::nullopt;
}

std::string ReactionNetwork::format_complex(const Complex& c) const {
  std::string out;
  for (std::size_t j = 0; j < c.coefficients.size(); ++j) {
    const auto k = c.coefficients[j];
    if (k == 0) continue;
    if (!out.empty()) out += '+';
    if (k != 1) out += std::to_string(k);
    out += species_[j].name;
  }
  return out.empty() ? "0" : out;
}

std::vector<std::string> ReactionNetwork::species_names() const {
  std::vector<std::string> names;
  for (const auto& s : species_) names.push_back(s.name);
  return names;
}

std::vector<std::pair<Complex, Complex>> ReactionNetwork::reaction_pairs() const {
  std::vector<std::pair<Complex, Complex>> out;
  for (const auto& r : reactions_) out.emplace_back(r.source, r.product);
  return out;
}

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + message),
      line_(line),
      column_(column) {}

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_'; }
bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

struct RawTerm {
  std::int64_t coefficient;
  std::string species;
};

struct RawReaction {
  std::size_t line;
  std::vector<RawTerm> source;
  std::vector<RawTerm> product;
  std::optional<Rational> kx, ky;
};

// Cursor over a single line; columns are 1-based.
class LineScanner {
 public:
  LineScanner(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  void skip_spaces() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
  }
  bool done() {
    skip_spaces();
    return pos_ >= text_.size();
  }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  bool starts_with(std::string_view s) const { return text_.substr(pos_).starts_with(s); }
  void advance(std::size_t n) { pos_ += n; }
  std::size_t column() const { return pos_ + 1; }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(line_, column(), message);
  }

  std::vector<RawTerm> complex() {
    std::vector<RawTerm> terms;
    skip_spaces();
    if (peek() == '0' && !is_digit(peek_at(1)) && !is_name_char(peek_at(1))) {
      advance(1);
      return terms;
    }
    while (true) {
      skip_spaces();
      terms.push_back(term());
      skip_spaces();
      if (peek() != '+') break;
      advance(1);
    }
    return terms;
  }

  std::string_view rest_token() {
    skip_spaces();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !is_space(text_[pos_])) ++pos_;
    return text_.substr(start, pos_ - start);
  }

 private:
  char peek_at(std::size_t k) const { return pos_ + k < text_.size() ? text_[pos_ + k] : '\0'; }

  RawTerm term() {
    std::int64_t coefficient = 1;
    if (is_digit(peek())) {
      const std::size_t start = pos_;
      std::int64_t value = 0;
      while (is_digit(peek())) {
        value = value * 10 + (peek() - '0');
        if (value > kMaxCoefficient) {
          pos_ = start;
          fail("coefficient exceeds " + std::to_string(kMaxCoefficient));
        }
        advance(1);
      }
      if (value == 0) {
        pos_ = start;
        fail("zero coefficient");
      }
      coefficient = value;
      skip_spaces();
    }
    if (!is_name_start(peek())) fail("expected species name");
    const std::size_t start = pos_;
    while (is_name_char(peek())) advance(1);
    return {coefficient, std::string(text_.substr(start, pos_ - start))};
  }

  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

Complex to_complex(const std::vector<RawTerm>& terms, const std::map<std::string, std::size_t>& index,
                   std::size_t d) {
  Complex c;
  c.coefficients.assign(d, 0);
  for (const auto& t : terms) c.coefficients[index.at(t.species)] += t.coefficient;
  return c;
}

}  // namespace

Rational parse_rational(std::string_view literal) {
  if (literal.empty()) throw std::invalid_argument("empty rate literal");
  std::string s(literal);
  bool negative = false;
  std::size_t pos = 0;
  if (s[0] == '-' || s[0] == '+') {
    negative = s[0] == '-';
    pos = 1;
  }
  auto digits = [&](std::size_t from) {
    std::size_t p = from;
    while (p < s.size() && is_digit(s[p])) ++p;
    return p;
  };
  Rational value;
  const std::size_t slash = s.find('/');
  if (slash != std::string::npos) {
    const std::string num = s.substr(pos, slash - pos);
    const std::string den = s.substr(slash + 1);
    if (num.empty() || den.empty() || digits(pos) != slash || digits(slash + 1) != s.size())
      throw std::invalid_argument("malformed fraction '" + s + "'");
    mpz_class d(den, 10);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    value = Rational(mpz_class(num, 10), d);
    value.canonicalize();
  } else {
    std::size_t p = digits(pos);
    std::string int_part = s.substr(pos, p - pos);
    std::string frac_part;
    if (p < s.size() && s[p] == '.') {
      const std::size_t q = digits(p + 1);
      frac_part = s.substr(p + 1, q - p - 1);
      p = q;
    }
    if (int_part.empty() && frac_part.empty())
      throw std::invalid_argument("malformed number '" + s + "'");
    long exponent = 0;
    if (p < s.size() && (s[p] == 'e' || s[p] == 'E')) {
      std::size_t q = p + 1;
      bool exp_negative = false;
      if (q < s.size() && (s[q] == '-' || s[q] == '+')) exp_negative = s[q++] == '-';
      const std::size_t r = digits(q);
      if (r == q || r - q > 6) throw std::invalid_argument("malformed exponent in '" + s + "'");
      exponent = std::stol(s.substr(q, r - q));
      if (exp_negative) exponent = -exponent;
      p = r;
    }
    if (p != s.size()) throw std::invalid_argument("malformed number '" + s + "'");
    mpz_class mantissa((int_part.empty() ? "0" : int_part) + frac_part, 10);
    exponent -= static_cast<long>(frac_part.size());
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    value = exponent < 0 ? Rational(mantissa, scale) : Rational(mantissa * scale);
    value.canonicalize();
  }
  return negative ? Rational(-value) : value;
}

ParsedNetwork parse_network(std::string_view text) {
  std::vector<RawReaction> raw;
  std::vector<std::string> names;
  std::map<std::string, std::size_t> index;
  auto note_species = [&](const std::vector<RawTerm>& terms) {
    for (const auto& t : terms)
      if (index.emplace(t.species, names.size()).second) names.push_back(t.species);
  };

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    LineScanner scan(line, line_no);
    if (scan.done()) continue;

    RawReaction forward{line_no, {}, {}, {}, {}};
    forward.source = scan.complex();
    scan.skip_spaces();
    bool reversible = false;
    if (scan.starts_with("<->")) {
      reversible = true;
      scan.advance(3);
    } else if (scan.starts_with("->")) {
      scan.advance(2);
    } else {
      scan.fail("expected '->' or '<->'");
    }
    forward.product = scan.complex();
    RawReaction backward{line_no, forward.product, forward.source, {}, {}};

    while (!scan.done()) {
      const std::size_t column = scan.column();
      const std::string_view token = scan.rest_token();
      const auto eq = token.find('=');
      if (eq == std::string_view::npos) throw ParseError(line_no, column, "unexpected '" + std::string(token) + "'");
      const std::string key(token.substr(0, eq));
      Rational value;
      try {
        value = parse_rational(token.substr(eq + 1));
      } catch (const std::invalid_argument& e) {
        throw ParseError(line_no, column + eq + 1, e.what());
      }
      if (value < 0) throw ParseError(line_no, column + eq + 1, "negative rate constant for " + key);
      std::optional<Rational>* slot = nullptr;
      if (key == "kX") slot = &forward.kx;
      else if (key == "kY") slot = &forward.ky;
      else if (key == "kX2" && reversible) slot = &backward.kx;
      else if (key == "kY2" && reversible) slot = &backward.ky;
      if (slot == nullptr) throw ParseError(line_no, column, "unknown annotation '" + key + "'");
      if (slot->has_value()) throw ParseError(line_no, column, "repeated annotation '" + key + "'");
      *slot = value;
    }

    note_species(forward.source);
    note_species(forward.product);
    raw.push_back(std::move(forward));
    if (reversible) raw.push_back(std::move(backward));
  }

  const std::size_t d = names.size();
  std::vector<std::pair<Complex, Complex>> pairs;
  for (const auto& r : raw) {
    Complex src = to_complex(r.source, index, d);
    Complex prod = to_complex(r.product, index, d);
    if (src == prod) throw ParseError(r.line, 1, "reaction between identical complexes");
    for (const auto& [s, p] : pairs)
      if (s == src && p == prod) throw ParseError(r.line, 1, "duplicate reaction");
    for (std::size_t j = 0; j < d; ++j)
      if (src.coefficients[j] > kMaxCoefficient || prod.coefficients[j] > kMaxCoefficient)
        throw ParseError(r.line, 1, "coefficient exceeds " + std::to_string(kMaxCoefficient));
    pairs.emplace_back(std::move(src), std::move(prod));
  }
  if (pairs.empty()) throw ParseError(line_no, 1, "no reactions");

  ParsedNetwork out{ReactionNetwork(std::move(names), std::move(pairs)), std::nullopt};

  const bool any_rate = std::any_of(raw.begin(), raw.end(),
                                    [](const RawReaction& r) { return r.kx || r.ky; });
  if (any_rate) {
    KineticsPair k;
    for (const auto& r : raw) {
      if (!r.kx || !r.ky) throw ParseError(r.line, 1, "reaction is missing kX/kY while others have them");
      k.kx.push_back(*r.kx);
      k.ky.push_back(*r.ky);
    }
    out.kinetics = std::move(k);
  }
  return out;
}

std::string serialize_network(const ReactionNetwork& net, const KineticsPair* kinetics) {
  std::ostringstream out;
  for (std::size_t r = 0; r < net.reaction_count(); ++r) {
    const auto& rx = net.reaction(r);
    auto spaced = [&](const Complex& c) {
      std::string s = net.format_complex(c);
      std::string t;
      for (char ch : s) {
        if (ch == '+') t += " + ";
        else t += ch;
      }
      return t;
    };
    out << spaced(rx.source) << " -> " << spaced(rx.product);
    if (kinetics != nullptr)
      out << " kX=" << kinetics->kx.at(r).get_str() << " kY=" << kinetics->ky.at(r).get_str();
    out << '\n';
  }
  return out.str();
}

IntVector reaction_vector(const Reaction& r) {
  IntVector xi(r.source.coefficients.size());
  for (std::size_t j = 0; j < xi.size(); ++j)
    xi[j] = r.product.coefficients[j] - r.source.coefficients[j];
  return xi;
}

mpz_class falling_factorial(std::int64_t x, std::int64_t n) {
  mpz_class out = 1;
  for (std::int64_t k = 0; k < n; ++k) {
    const std::int64_t factor = x - k;
    if (factor == 0) return 0;
    out *= mpz_class(static_cast<long>(factor));
  }
  return out;
}

Rational propensity(const ReactionNetwork& net, std::span<const Rational> constants,
                    std::size_t r, const State& x) {
  const auto& src = net.reaction(r).source.coefficients;
  if (x.size() != src.size()) throw std::invalid_argument("state length does not match the network");
  Rational rate = constants[r];
  if (rate == 0) return rate;
  for (std::size_t j = 0; j < src.size(); ++j) {
    if (src[j] == 0) continue;
    if (x[j] < src[j]) return 0;
    rate *= falling_factorial(x[j], src[j]);
  }
  return rate;
}

Rational aggregate_rate(const ReactionNetwork& net, std::span<const Rational> constants,
                        const State& x, std::span<const std::int64_t> xi) {
  Rational total = 0;
  for (std::size_t r = 0; r < net.reaction_count(); ++r) {
    const auto& v = net.reaction(r).xi;
    if (std::equal(v.begin(), v.end(), xi.begin(), xi.end())) total += propensity(net, constants, r, x);
  }
  return total;
}

std::vector<std::string> validate_network(const ReactionNetwork& net) {
  std::vector<std::string> diagnostics;
  const std::size_t d = net.dimension();
  for (std::size_t j = 0; j < d; ++j) {
    bool used = false;
    for (const auto& r : net.reactions())
      used = used || r.source.coefficients[j] != 0 || r.product.coefficients[j] != 0;
    if (!used) diagnostics.push_back("species '" + net.species()[j].name + "' appears in no complex");
  }
  const auto& rs = net.reactions();
  for (std::size_t r = 0; r < rs.size(); ++r) {
    if (rs[r].source == rs[r].product)
      diagnostics.push_back("reaction " + rs[r].label + " has identical complexes");
    for (std::size_t q = 0; q < r; ++q)
      if (rs[q].source == rs[r].source && rs[q].product == rs[r].product)
        diagnostics.push_back("reaction " + rs[r].label + " is a duplicate");
  }
  return diagnostics;
}

}  // namespace srnorder
