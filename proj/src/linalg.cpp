#include "srnorder/linalg.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace srnorder {

RationalMatrix RationalMatrix::from_rows(const std::vector<IntVector>& rows, std::size_t cols) {
  RationalMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw std::invalid_argument("ragged integer matrix");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = static_cast<long>(rows[i][j]);
  }
  return m;
}

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::transposed() const {
  RationalMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

RrefResult rref(RationalMatrix m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t p = row;
    while (p < m.rows() && m(p, col) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
    const Rational inv = 1 / Rational(m(row, col));
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col) == 0) continue;
      const Rational f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return {std::move(m), std::move(pivots)};
}

std::size_t rank(const RationalMatrix& m) { return rref(m).pivots.size(); }

bool same_row_space(const std::vector<IntVector>& a, const std::vector<IntVector>& b, std::size_t cols) {
  const auto ra = rref(RationalMatrix::from_rows(a, cols));
  const auto rb = rref(RationalMatrix::from_rows(b, cols));
  if (ra.pivots != rb.pivots) return false;
  for (std::size_t i = 0; i < ra.pivots.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (ra.reduced(i, j) != rb.reduced(i, j)) return false;
  return true;
}

IntVector normalize_row(std::span<const std::int64_t> v) {
  std::int64_t g = 0;
  for (auto x : v) g = std::gcd(g, x);
  if (g == 0) throw std::invalid_argument("cannot normalize the zero vector");
  IntVector out(v.begin(), v.end());
  for (auto& x : out) x /= g;
  return out;
}

IntVector primitive_integer_vector(std::span<const Rational> v) {
  mpz_class lcm = 1;
  for (const auto& x : v) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den_mpz_t());
  std::vector<mpz_class> scaled;
  mpz_class g = 0;
  for (const auto& x : v) {
    mpz_class k = x.get_num() * (lcm / x.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), k.get_mpz_t());
    scaled.push_back(std::move(k));
  }
  if (g == 0) throw std::invalid_argument("cannot normalize the zero vector");
  IntVector out;
  for (auto& k : scaled) {
    k /= g;
    if (!k.fits_slong_p()) throw std::overflow_error("integer entry exceeds 64 bits");
    out.push_back(k.get_si());
  }
  return out;
}

ConservationBasis conservation_basis(const ReactionNetwork& net) {
  const std::size_t d = net.dimension();
  // Rows are reaction vectors, so the null space of this matrix is the left
  // null space of the stoichiometric matrix.
  RationalMatrix xi_rows(net.reaction_count(), d);
  for (std::size_t r = 0; r < net.reaction_count(); ++r)
    for (std::size_t j = 0; j < d; ++j) xi_rows(r, j) = static_cast<long>(net.reaction(r).xi[j]);
  const auto [reduced, pivots] = rref(std::move(xi_rows));

  ConservationBasis out;
  out.s = pivots.size();
  std::vector<bool> is_pivot(d, false);
  for (auto p : pivots) is_pivot[p] = true;
  for (std::size_t free = 0; free < d; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(d);
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -reduced(i, free);
    out.rows.push_back(primitive_integer_vector(v));
  }
  return out;
}

std::int64_t dot(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace srnorder
