#include "bcnopt/logic.hpp"

#include <numeric>
#include <string>

#include "bcnopt/errors.hpp"

namespace bcnopt {

CanonicalVector::CanonicalVector(std::size_t dim, std::size_t index)
    : dim_(dim), index_(index) {
  if (dim == 0 || index < 1 || index > dim) {
    throw InvalidArgument("canonical vector delta_" + std::to_string(dim) + "^" +
                          std::to_string(index) + " is out of range");
  }
}

LogicalMatrix::LogicalMatrix(std::size_t rows, std::vector<std::size_t> col_indices)
    : rows_(rows), cols_(std::move(col_indices)) {
  if (rows_ == 0 || cols_.empty()) {
    throw InvalidArgument("logical matrix must have positive dimensions");
  }
  for (std::size_t j = 0; j < cols_.size(); ++j) {
    if (cols_[j] < 1 || cols_[j] > rows_) {
      throw InvalidArgument("logical matrix column " + std::to_string(j + 1) +
                            " has row index " + std::to_string(cols_[j]) +
                            " outside [1, " + std::to_string(rows_) + "]");
    }
  }
}

LogicalMatrix LogicalMatrix::identity(std::size_t n) {
  std::vector<std::size_t> cols(n);
  std::iota(cols.begin(), cols.end(), std::size_t{1});
  return LogicalMatrix(n, std::move(cols));
}

CanonicalVector LogicalMatrix::apply(const CanonicalVector& v) const {
  if (v.dim() != cols()) {
    throw DimensionError("cannot apply a " + std::to_string(rows_) + "x" +
                         std::to_string(cols()) + " logical matrix to a vector of dimension " +
                         std::to_string(v.dim()));
  }
  return CanonicalVector(rows_, cols_[v.index() - 1]);
}

std::size_t encode_bits(std::span<const std::uint8_t> bits) noexcept {
  std::size_t index = 0;
  for (auto b : bits) index = (index << 1) | (b ? 1u : 0u);
  return index + 1;
}

void decode_bits(std::size_t index, std::span<std::uint8_t> out) noexcept {
  std::size_t value = index - 1;
  for (std::size_t j = out.size(); j-- > 0;) {
    out[j] = static_cast<std::uint8_t>(value & 1u);
    value >>= 1;
  }
}

CanonicalVector encode_state(const std::vector<bool>& bits) {
  if (bits.empty()) throw InvalidArgument("cannot encode an empty bit sequence");
  if (bits.size() > 62) throw InvalidArgument("at most 62 Boolean variables are supported");
  std::size_t index = 0;
  for (bool b : bits) index = (index << 1) | (b ? 1u : 0u);
  return CanonicalVector(std::size_t{1} << bits.size(), index + 1);
}

std::vector<bool> decode_state(const CanonicalVector& v, std::size_t n) {
  if (n == 0 || n > 62 || v.dim() != (std::size_t{1} << n)) {
    throw InvalidArgument("vector of dimension " + std::to_string(v.dim()) +
                          " does not encode " + std::to_string(n) + " Boolean variables");
  }
  std::vector<bool> bits(n);
  std::size_t value = v.index() - 1;
  for (std::size_t j = n; j-- > 0;) {
    bits[j] = (value & 1u) != 0;
    value >>= 1;
  }
  return bits;
}

CanonicalVector stp(const CanonicalVector& a, const CanonicalVector& b) {
  return CanonicalVector(a.dim() * b.dim(), (a.index() - 1) * b.dim() + b.index());
}

namespace {

// Column indices of M (x) I_k.
std::vector<std::size_t> kron_identity(std::span<const std::size_t> cols, std::size_t k) {
  std::vector<std::size_t> out;
  out.reserve(cols.size() * k);
  for (auto c : cols) {
    for (std::size_t r = 1; r <= k; ++r) out.push_back((c - 1) * k + r);
  }
  return out;
}

}  // namespace

LogicalMatrix stp(const LogicalMatrix& a, const LogicalMatrix& b) {
  const std::size_t n = a.cols();
  const std::size_t p = b.rows();
  if (n % p != 0 && p % n != 0) {
    throw DimensionError("semi-tensor product needs one of " + std::to_string(n) + " and " +
                         std::to_string(p) + " to divide the other");
  }
  const std::size_t s = std::lcm(n, p);
  const auto lifted_a = kron_identity(a.columns(), s / n);  // (rows_a * s/n) x s
  const auto lifted_b = kron_identity(b.columns(), s / p);  // s x (cols_b * s/p)
  std::vector<std::size_t> cols(lifted_b.size());
  for (std::size_t j = 0; j < lifted_b.size(); ++j) cols[j] = lifted_a[lifted_b[j] - 1];
  return LogicalMatrix(a.rows() * (s / n), std::move(cols));
}

}  // namespace bcnopt
