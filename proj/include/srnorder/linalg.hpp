#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "srnorder/network.hpp"

namespace srnorder {

/// Dense row-major matrix of exact rationals.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}

  /// Builds a matrix from integer rows; all rows must have the same length.
  static RationalMatrix from_rows(const std::vector<IntVector>& rows, std::size_t cols);
  static RationalMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  std::span<Rational> row(std::size_t i) { return {entries_.data() + i * cols_, cols_}; }
  std::span<const Rational> row(std::size_t i) const { return {entries_.data() + i * cols_, cols_}; }

  RationalMatrix transposed() const;

  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> entries_;
};

struct RrefResult {
  RationalMatrix reduced;
  std::vector<std::size_t> pivots;
};

/// Reduced row echelon form. Pivots are chosen leftmost column first, with the
/// topmost nonzero entry at or below the current row as pivot row.
RrefResult rref(RationalMatrix m);

std::size_t rank(const RationalMatrix& m);

/// True when the two integer row sets span the same rational subspace.
bool same_row_space(const std::vector<IntVector>& a, const std::vector<IntVector>& b, std::size_t cols);

/// Divides v by the positive GCD of its entries. Throws std::invalid_argument for v = 0.
IntVector normalize_row(std::span<const std::int64_t> v);

/// Scales a nonzero rational vector to the coprime integer vector with the same direction.
IntVector primitive_integer_vector(std::span<const Rational> v);

struct ConservationBasis {
  std::vector<IntVector> rows;  // C, one conservation law per row
  std::size_t s = 0;            // dimension of the stoichiometric subspace
};

/// Integer basis of the left null space of the stoichiometric matrix.
///
/// The basis is read off the RREF of the transposed system (one vector per
/// free column, in increasing column order) and each vector is scaled to
/// coprime integers.
ConservationBasis conservation_basis(const ReactionNetwork& net);

std::int64_t dot(std::span<const std::int64_t> a, std::span<const std::int64_t> b);

}  // namespace srnorder
