#include "srnorder/feasibility.hpp"

#include <stdexcept>

namespace srnorder {

namespace {

std::atomic<std::size_t> g_solves{0};

// Standard-form column: original variable index and orientation (+1 / -1).
struct Column {
  std::size_t variable;
  int orientation;
};

}  // namespace

FeasibilityResult feasible(const RationalMatrix& d, std::span<const Rational> b,
                           std::span<const Sign> signs) {
  const std::size_t rows = d.rows();
  const std::size_t n = d.cols();
  ++g_solves;
  if (b.size() != rows || signs.size() != n) throw std::invalid_argument("feasibility: dimension mismatch");

  std::vector<Column> columns;
  for (std::size_t k = 0; k < n; ++k) {
    if (signs[k] != Sign::NonPos) columns.push_back({k, +1});
    if (signs[k] != Sign::NonNeg) columns.push_back({k, -1});
  }
  const std::size_t structural = columns.size();
  const std::size_t width = structural + rows;  // plus artificials; rhs stored separately

  // Tableau rows with b >= 0; artificial for row i is column structural + i.
  std::vector<std::vector<Rational>> t(rows, std::vector<Rational>(width));
  std::vector<Rational> rhs(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const bool flip = b[i] < 0;
    for (std::size_t c = 0; c < structural; ++c) {
      const Rational& v = d(i, columns[c].variable);
      if (v == 0) continue;
      t[i][c] = (columns[c].orientation > 0) != flip ? v : Rational(-v);
    }
    t[i][structural + i] = 1;
    rhs[i] = flip ? Rational(-b[i]) : b[i];
  }
  std::vector<std::size_t> basis(rows);
  for (std::size_t i = 0; i < rows; ++i) basis[i] = structural + i;

  // Reduced costs of the phase-I objective (sum of artificials).
  std::vector<Rational> cost(width);
  for (std::size_t c = 0; c < structural; ++c)
    for (std::size_t i = 0; i < rows; ++i) cost[c] -= t[i][c];

  FeasibilityResult result;
  while (true) {
    std::size_t enter = width;
    for (std::size_t c = 0; c < width; ++c)
      if (cost[c] < 0) {
        enter = c;
        break;
      }
    if (enter == width) break;

    std::size_t leave = rows;
    Rational best;
    for (std::size_t i = 0; i < rows; ++i) {
      if (t[i][enter] <= 0) continue;
      Rational ratio = rhs[i] / t[i][enter];
      if (leave == rows || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = std::move(ratio);
      }
    }
    // Phase I is bounded below by zero, so an improving column always has a pivot row.
    if (leave == rows) throw std::logic_error("feasibility: unbounded phase-I direction");

    const Rational inv = 1 / Rational(t[leave][enter]);
    for (auto& v : t[leave])
      if (v != 0) v *= inv;
    rhs[leave] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      const Rational f = t[i][enter];
      for (std::size_t c = 0; c < width; ++c)
        if (t[leave][c] != 0) t[i][c] -= f * t[leave][c];
      rhs[i] -= f * rhs[leave];
    }
    if (cost[enter] != 0) {
      const Rational f = cost[enter];
      for (std::size_t c = 0; c < width; ++c)
        if (t[leave][c] != 0) cost[c] -= f * t[leave][c];
    }
    basis[leave] = enter;
    ++result.pivots;
  }

  Rational residual = 0;
  for (std::size_t i = 0; i < rows; ++i)
    if (basis[i] >= structural) residual += rhs[i];
  if (residual != 0) return result;

  std::vector<Rational> alpha(n);
  for (std::size_t i = 0; i < rows; ++i) {
    if (basis[i] >= structural) continue;
    const auto& col = columns[basis[i]];
    if (col.orientation > 0) alpha[col.variable] += rhs[i];
    else alpha[col.variable] -= rhs[i];
  }
  result.feasible = true;
  result.witness = std::move(alpha);
  return result;
}

std::size_t feasibility_solve_count() { return g_solves.load(); }

FeasibilityResult feasible(const RationalMatrix& d, std::span<const std::int64_t> b,
                           std::span<const Sign> signs) {
  std::vector<Rational> rb;
  rb.reserve(b.size());
  for (auto v : b) rb.emplace_back(static_cast<long>(v));
  return feasible(d, rb, signs);
}

bool verify_witness(const RationalMatrix& d, std::span<const Rational> b, std::span<const Sign> signs,
                    std::span<const Rational> alpha) {
  if (alpha.size() != d.cols() || b.size() != d.rows()) return false;
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    if (signs[k] == Sign::NonNeg && alpha[k] < 0) return false;
    if (signs[k] == Sign::NonPos && alpha[k] > 0) return false;
  }
  for (std::size_t i = 0; i < d.rows(); ++i) {
    Rational s = 0;
    for (std::size_t k = 0; k < d.cols(); ++k) s += d(i, k) * alpha[k];
    if (s != b[i]) return false;
  }
  return true;
}

FeasibilityResult FeasibilityCache::query(std::span<const Rational> b, std::span<const Sign> signs) {
  std::string key;
  for (const auto& v : b) key += v.get_str() + ",";
  key += '|';
  for (auto s : signs) key += s == Sign::NonNeg ? '+' : s == Sign::NonPos ? '-' : '*';

  ++queries_;
  {
    std::lock_guard lock(mutex_);
    if (auto it = memo_.find(key); it != memo_.end()) {
      ++hits_;
      return it->second;
    }
  }
  auto result = feasible(d_, b, signs);
  std::lock_guard lock(mutex_);
  // A concurrent solve of the same key yields the same answer; keep the first.
  return memo_.emplace(std::move(key), std::move(result)).first->second;
}

FeasibilityResult FeasibilityCache::query(std::span<const std::int64_t> b, std::span<const Sign> signs) {
  std::vector<Rational> rb;
  rb.reserve(b.size());
  for (auto v : b) rb.emplace_back(static_cast<long>(v));
  return query(rb, signs);
}

}  // namespace srnorder
