#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace qdioph {

/// Dense row-major matrix of 64-bit integers. All arithmetic on it is
/// overflow-checked and throws OverflowError instead of wrapping.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  IntMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows);

  static IntMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::int64_t& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  std::int64_t operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<std::int64_t> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const std::int64_t> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  void swap_rows(std::size_t a, std::size_t b);
  // row(dst) += factor * row(src)
  void add_row_multiple(std::size_t dst, std::size_t src, std::int64_t factor);
  void negate_row(std::size_t i);
  void append_row(std::span<const std::int64_t> values);

  IntMatrix transpose() const;
  std::string to_string() const;

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;
  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int64_t> data_;
};

/// Row-style Hermite normal form of the row lattice: upper echelon, positive
/// pivots, entries above each pivot reduced into [0, pivot). Zero rows are
/// dropped, so the result has rank(m) rows.
IntMatrix hermite_normal_form(IntMatrix m);

/// Rank over Q.
std::size_t rank(const IntMatrix& m);

/// det(B * B^T), exact. The square root is the covolume of the row lattice.
__int128 gram_determinant(const IntMatrix& b);

/// Basis (in Hermite normal form) of span_Q(rows) ∩ Z^N. Rows must be
/// linearly independent; throws std::invalid_argument otherwise.
IntMatrix saturate_rows(const IntMatrix& b);

}  // namespace qdioph
