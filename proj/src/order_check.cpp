#include "srnorder/order_check.hpp"

#include <algorithm>
#include <stdexcept>

namespace srnorder {

PreorderMatrix PreorderMatrix::negated() const {
  PreorderMatrix out = *this;
  for (auto& row : out.rows)
    for (auto& v : row) v = -v;
  return out;
}

IntVector SignedUnit::vector(std::size_t d) const {
  IntVector v(d, 0);
  v.at(species) = sign;
  return v;
}

RateConstraint combine(RateConstraint a_side, RateConstraint b_side) {
  const bool le = a_side == RateConstraint::LE;
  const bool ge = b_side == RateConstraint::GE;
  if (le && ge) return RateConstraint::EQ;
  if (le) return RateConstraint::LE;
  if (ge) return RateConstraint::GE;
  return RateConstraint::Free;
}

RateConstraint mirror(RateConstraint c) {
  switch (c) {
    case RateConstraint::LE: return RateConstraint::GE;
    case RateConstraint::GE: return RateConstraint::LE;
    default: return c;
  }
}

SpeciesTag mirror(SpeciesTag t) {
  switch (t) {
    case SpeciesTag::Leq: return SpeciesTag::Geq;
    case SpeciesTag::Geq: return SpeciesTag::Leq;
    default: return t;
  }
}

bool implied_by(RateConstraint constraint, RateConstraint assumed) {
  switch (constraint) {
    case RateConstraint::Free: return true;
    case RateConstraint::LE: return assumed == RateConstraint::LE || assumed == RateConstraint::EQ;
    case RateConstraint::GE: return assumed == RateConstraint::GE || assumed == RateConstraint::EQ;
    case RateConstraint::EQ: return assumed == RateConstraint::EQ;
  }
  return false;
}

bool satisfies(RateConstraint c, const Rational& kx, const Rational& ky) {
  switch (c) {
    case RateConstraint::Free: return true;
    case RateConstraint::LE: return kx <= ky;
    case RateConstraint::GE: return kx >= ky;
    case RateConstraint::EQ: return kx == ky;
  }
  return false;
}

bool row_implied(std::span<const std::int64_t> row, const std::vector<IntVector>& others,
                 const ConservationBasis& c) {
  const std::size_t d = row.size();
  RationalMatrix dm(d, others.size() + c.rows.size());
  std::vector<Sign> signs;
  for (std::size_t k = 0; k < others.size(); ++k) {
    for (std::size_t j = 0; j < d; ++j) dm(j, k) = static_cast<long>(others[k][j]);
    signs.push_back(Sign::NonNeg);
  }
  for (std::size_t k = 0; k < c.rows.size(); ++k) {
    for (std::size_t j = 0; j < d; ++j) dm(j, others.size() + k) = static_cast<long>(c.rows[k][j]);
    signs.push_back(Sign::Free);
  }
  return feasible(dm, row, signs).feasible;
}

PreorderMatrix canonicalize(const PreorderMatrix& m, const ConservationBasis& c) {
  PreorderMatrix out{{}, m.cols};
  for (const auto& row : m.rows) {
    if (row.size() != m.cols) throw std::invalid_argument("preorder matrix row has wrong length");
    out.rows.push_back(normalize_row(row));  // throws on zero rows
  }
  bool removed = true;
  while (removed) {
    removed = false;
    for (std::size_t i = 0; i < out.rows.size(); ++i) {
      std::vector<IntVector> others;
      for (std::size_t k = 0; k < out.rows.size(); ++k)
        if (k != i) others.push_back(out.rows[k]);
      if (row_implied(out.rows[i], others, c)) {
        out.rows.erase(out.rows.begin() + static_cast<std::ptrdiff_t>(i));
        removed = true;
        break;
      }
    }
  }
  return out;
}

std::vector<SignedUnit> closure_simple(const PreorderMatrix& m, const ConservationBasis& c) {
  std::vector<SignedUnit> out;
  for (std::size_t j = 0; j < m.cols; ++j)
    for (int sign : {+1, -1}) {
      const SignedUnit u{j, sign};
      if (row_implied(u.vector(m.cols), m.rows, c)) out.push_back(u);
    }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<SpeciesTag> species_tags(const std::vector<SignedUnit>& closure, std::size_t d) {
  std::vector<bool> plus(d, false), minus(d, false);
  for (const auto& u : closure) (u.sign > 0 ? plus : minus).at(u.species) = true;
  std::vector<SpeciesTag> tags(d);
  for (std::size_t j = 0; j < d; ++j)
    tags[j] = plus[j] && minus[j] ? SpeciesTag::Eq
              : plus[j]           ? SpeciesTag::Leq
              : minus[j]          ? SpeciesTag::Geq
                                  : SpeciesTag::Uncompared;
  return tags;
}

RationalMatrix assemble_d(const PreorderMatrix& m, const ConservationBasis& c) {
  const std::size_t d = m.cols;
  RationalMatrix dm(d, m.size() + c.rows.size());
  for (std::size_t k = 0; k < m.size(); ++k)
    for (std::size_t j = 0; j < d; ++j) dm(j, k) = static_cast<long>(m.rows[k][j]);
  for (std::size_t k = 0; k < c.rows.size(); ++k)
    for (std::size_t j = 0; j < d; ++j) dm(j, m.size() + k) = static_cast<long>(c.rows[k][j]);
  return dm;
}

namespace {

// Lazily evaluated A/B entries for one canonical M.
class ABOracle {
 public:
  ABOracle(const PreorderMatrix& m, const ConservationBasis& c, FeasibilityCache* shared)
      : m_(m), c_(c), d_(m.cols) {
    if (shared == nullptr) {
      own_.emplace(assemble_d(m, c));
      cache_ = &*own_;
    } else {
      cache_ = shared;
    }
  }

  // row == m_.size() is the unrestricted row.
  bool entry(Side side, std::size_t row, std::size_t j) {
    const Sign bound = side == Side::A ? Sign::NonNeg : Sign::NonPos;
    std::vector<Sign> signs(m_.size() + c_.rows.size(), Sign::Free);
    for (std::size_t k = 0; k < m_.size(); ++k)
      if (k != row) signs[k] = bound;
    IntVector e(d_, 0);
    e[j] = 1;
    ++queries_;
    return cache_->query(std::span<const std::int64_t>(e), signs).feasible;
  }

  bool covers(Side side, std::size_t row, const IntVector& source) {
    for (std::size_t j = 0; j < d_; ++j)
      if (source[j] != 0 && !entry(side, row, j)) return false;
    return true;
  }

  std::size_t queries() const { return queries_; }

 private:
  const PreorderMatrix& m_;
  const ConservationBasis& c_;
  std::size_t d_;
  std::optional<FeasibilityCache> own_;
  FeasibilityCache* cache_ = nullptr;
  std::size_t queries_ = 0;
};

}  // namespace

ABMatrices compute_ab(const PreorderMatrix& m, const ConservationBasis& c, FeasibilityCache* cache) {
  ABOracle oracle(m, c, cache);
  ABMatrices out;
  out.a.assign(m.size() + 1, std::vector<std::uint8_t>(m.cols, 0));
  out.b = out.a;
  for (std::size_t i = 0; i <= m.size(); ++i)
    for (std::size_t j = 0; j < m.cols; ++j) {
      out.a[i][j] = oracle.entry(Side::A, i, j) ? 1 : 0;
      out.b[i][j] = oracle.entry(Side::B, i, j) ? 1 : 0;
    }
  return out;
}

CheckResult check_structure(const ReactionNetwork& net, const PreorderMatrix& m,
                            const ConservationBasis& c, FeasibilityCache* cache) {
  if (m.cols != net.dimension()) throw std::invalid_argument("matrix width does not match the network");
  ABOracle oracle(m, c, cache);
  CheckResult result;
  const std::size_t rows = m.size();

  // Returns the constraint the side imposes, or nullopt when no hypothesis holds.
  auto side_outcome = [&](Side side, const std::vector<std::int64_t>& part,
                          const IntVector& source) -> std::optional<RateConstraint> {
    const RateConstraint constrained = side == Side::A ? RateConstraint::LE : RateConstraint::GE;
    std::size_t nonzero = 0, at = 0;
    for (std::size_t i = 0; i < rows; ++i)
      if (part[i] != 0) {
        ++nonzero;
        at = i;
      }
    if (nonzero == 0) return RateConstraint::Free;
    if (oracle.covers(side, rows, source)) return constrained;
    if (nonzero == 1 && part[at] == 1 && oracle.covers(side, at, source)) return constrained;
    return std::nullopt;
  };

  std::vector<std::int64_t> pos(rows), neg(rows);
  for (std::size_t r = 0; r < net.reaction_count(); ++r) {
    const auto& rx = net.reaction(r);
    for (std::size_t i = 0; i < rows; ++i) {
      const std::int64_t v = dot(m.rows[i], rx.xi);
      pos[i] = std::max<std::int64_t>(v, 0);
      neg[i] = std::max<std::int64_t>(-v, 0);
    }
    const auto a = side_outcome(Side::A, pos, rx.source.coefficients);
    if (!a) {
      result.failure = CheckFailure{r, Side::A};
      break;
    }
    const auto b = side_outcome(Side::B, neg, rx.source.coefficients);
    if (!b) {
      result.failure = CheckFailure{r, Side::B};
      break;
    }
    result.constraints.push_back(combine(*a, *b));
  }
  if (result.failure) result.constraints.clear();
  result.lp_queries = oracle.queries();
  return result;
}

PreorderingStructure make_structure(const PreorderMatrix& canonical, const ConservationBasis& c,
                                    std::vector<RateConstraint> constraints) {
  PreorderingStructure s;
  s.matrix = canonical;
  s.closure = closure_simple(canonical, c);
  s.species_tags = species_tags(s.closure, canonical.cols);
  s.reaction_constraints = std::move(constraints);
  return s;
}

std::string to_string(RateConstraint c) {
  switch (c) {
    case RateConstraint::Free: return "free";
    case RateConstraint::LE: return "le";
    case RateConstraint::GE: return "ge";
    case RateConstraint::EQ: return "eq";
  }
  return "?";
}

std::string to_string(SpeciesTag t) {
  switch (t) {
    case SpeciesTag::Leq: return "leq";
    case SpeciesTag::Geq: return "geq";
    case SpeciesTag::Eq: return "eq";
    case SpeciesTag::Uncompared: return "uncompared";
  }
  return "?";
}

std::string color_of(RateConstraint c) {
  switch (c) {
    case RateConstraint::Free: return "gray";
    case RateConstraint::LE: return "green";
    case RateConstraint::GE: return "red";
    case RateConstraint::EQ: return "blue";
  }
  return "gray";
}

std::string color_of(SpeciesTag t) {
  switch (t) {
    case SpeciesTag::Leq: return "green";
    case SpeciesTag::Geq: return "red";
    case SpeciesTag::Eq: return "blue";
    case SpeciesTag::Uncompared: return "gray";
  }
  return "gray";
}

}  // namespace srnorder
