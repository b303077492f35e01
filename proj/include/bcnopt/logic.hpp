#pragma once

// Canonical vectors and logical matrices in column-index form.
//
// Boolean values are identified with canonical vectors as
//
//     0 ~ delta_2^1,   1 ~ delta_2^2
//
// and a tuple of Boolean values (b_1, ..., b_n) is the semi-tensor product
// b_1 x ... x b_n. Since delta_p^i x delta_q^j = delta_{pq}^{(i-1)q + j}, the
// first variable is the MOST significant bit of the resulting index:
//
//     index = 1 + sum_j b_j * 2^(n - j)
//
// Much of the STP literature uses the opposite identification (1 ~ delta_2^1);
// files and tools produced elsewhere may need their bits complemented.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bcnopt {

// delta_dim^index, 1-based.
class CanonicalVector {
 public:
  CanonicalVector(std::size_t dim, std::size_t index);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t index() const noexcept { return index_; }

  friend bool operator==(const CanonicalVector&, const CanonicalVector&) = default;

 private:
  std::size_t dim_;
  std::size_t index_;
};

// A rows x cols matrix whose every column is a canonical vector. Column j
// (1-based) is delta_rows^{column(j)}.
class LogicalMatrix {
 public:
  LogicalMatrix(std::size_t rows, std::vector<std::size_t> col_indices);

  static LogicalMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_.size(); }
  std::size_t column(std::size_t j) const { return cols_.at(j - 1); }
  std::span<const std::size_t> columns() const noexcept { return cols_; }

  // M * delta_cols^i = Col_i(M).
  CanonicalVector apply(const CanonicalVector& v) const;

  friend bool operator==(const LogicalMatrix&, const LogicalMatrix&) = default;

 private:
  std::size_t rows_;
  std::vector<std::size_t> cols_;
};

// Index of x_1 x ... x x_n for the given bits. Throws InvalidArgument on an
// empty sequence or more than 62 bits.
CanonicalVector encode_state(const std::vector<bool>& bits);

std::vector<bool> decode_state(const CanonicalVector& v, std::size_t n);

// Allocation-free variants used on hot paths; indices are 1-based.
std::size_t encode_bits(std::span<const std::uint8_t> bits) noexcept;
void decode_bits(std::size_t index, std::span<std::uint8_t> out) noexcept;

CanonicalVector stp(const CanonicalVector& a, const CanonicalVector& b);

// Semi-tensor product A x B = (A (x) I_{s/n})(B (x) I_{s/p}), s = lcm(n, p),
// computed on column indices. Requires A.cols() to divide B.rows() or vice
// versa; throws DimensionError otherwise.
LogicalMatrix stp(const LogicalMatrix& a, const LogicalMatrix& b);

}  // namespace bcnopt
