#include "qdioph/intmat.hpp"

#include <stdexcept>
#include <utility>

#include "qdioph/checked.hpp"

namespace qdioph {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

void IntMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
}

void IntMatrix::add_row_multiple(std::size_t dst, std::size_t src, std::int64_t factor) {
  if (factor == 0) return;
  for (std::size_t j = 0; j < cols_; ++j) {
    (*this)(dst, j) = checked_add((*this)(dst, j), checked_mul(factor, (*this)(src, j)));
  }
}

void IntMatrix::negate_row(std::size_t i) {
  for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = checked_neg((*this)(i, j));
}

void IntMatrix::append_row(std::span<const std::int64_t> values) {
  if (rows_ == 0 && cols_ == 0) cols_ = values.size();
  if (values.size() != cols_) throw std::invalid_argument("row length mismatch");
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

std::string IntMatrix::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    s += i == 0 ? "[" : ",[";
    for (std::size_t j = 0; j < cols_; ++j) {
      if (j) s += ",";
      s += std::to_string((*this)(i, j));
    }
    s += "]";
  }
  return s + "]";
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product shape mismatch");
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        c(i, j) = checked_add(c(i, j), checked_mul(a(i, k), b(k, j)));
    }
  return c;
}

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

IntMatrix hermite_normal_form(IntMatrix m) {
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < m.cols() && pivot_row < m.rows(); ++col) {
    // Euclid on rows until only pivot_row has a nonzero entry in this column.
    for (std::size_t i = pivot_row + 1; i < m.rows(); ++i) {
      while (m(i, col) != 0) {
        const std::int64_t q = m(pivot_row, col) / m(i, col);
        m.add_row_multiple(pivot_row, i, checked_neg(q));
        m.swap_rows(pivot_row, i);
      }
    }
    if (m(pivot_row, col) == 0) continue;
    if (m(pivot_row, col) < 0) m.negate_row(pivot_row);
    const std::int64_t p = m(pivot_row, col);
    for (std::size_t i = 0; i < pivot_row; ++i) {
      m.add_row_multiple(i, pivot_row, checked_neg(floor_div(m(i, col), p)));
    }
    ++pivot_row;
  }
  IntMatrix out(pivot_row, m.cols());
  for (std::size_t i = 0; i < pivot_row; ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

std::size_t rank(const IntMatrix& m) { return hermite_normal_form(m).rows(); }

__int128 gram_determinant(const IntMatrix& b) {
  const std::size_t r = b.rows();
  std::vector<__int128> g(r * r, 0);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      __int128 s = 0;
      for (std::size_t k = 0; k < b.cols(); ++k) s += static_cast<__int128>(b(i, k)) * b(j, k);
      g[i * r + j] = s;
    }
  if (r == 0) return 1;
  // Fraction-free Bareiss elimination; every division is exact.
  __int128 prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < r; ++k) {
    if (g[k * r + k] == 0) {
      std::size_t swap_with = k + 1;
      while (swap_with < r && g[swap_with * r + k] == 0) ++swap_with;
      if (swap_with == r) return 0;
      for (std::size_t j = 0; j < r; ++j) std::swap(g[k * r + j], g[swap_with * r + j]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < r; ++i)
      for (std::size_t j = k + 1; j < r; ++j) {
        __int128 lhs, rhs, diff;
        if (__builtin_mul_overflow(g[i * r + j], g[k * r + k], &lhs) ||
            __builtin_mul_overflow(g[i * r + k], g[k * r + j], &rhs) ||
            __builtin_sub_overflow(lhs, rhs, &diff))
          throw OverflowError("Gram determinant exceeds 128-bit range");
        g[i * r + j] = diff / prev;
      }
    prev = g[k * r + k];
  }
  return sign * g[(r - 1) * r + (r - 1)];
}

IntMatrix saturate_rows(const IntMatrix& b_in) {
  IntMatrix b = b_in;
  const std::size_t r = b.rows();
  const std::size_t n = b.cols();
  // Column operations B <- B E bring B to [H | 0]; the inverse operations are
  // applied as row operations to W = V^{-1}. The first r rows of W then span
  // the saturation.
  IntMatrix w = IntMatrix::identity(n);
  auto swap_cols = [&](std::size_t c1, std::size_t c2) {
    for (std::size_t i = 0; i < r; ++i) std::swap(b(i, c1), b(i, c2));
    w.swap_rows(c1, c2);
  };
  for (std::size_t i = 0; i < r; ++i) {
    if (i >= n) throw std::invalid_argument("more rows than columns: rows are dependent");
    for (std::size_t c = i + 1; c < n; ++c) {
      while (b(i, c) != 0) {
        const std::int64_t q = b(i, i) / b(i, c);
        if (q != 0) {
          // col_i -= q * col_c ; W: row_c += q * row_i
          for (std::size_t k = 0; k < r; ++k) b(k, i) = checked_sub(b(k, i), checked_mul(q, b(k, c)));
          w.add_row_multiple(c, i, q);
        }
        swap_cols(i, c);
      }
    }
    if (b(i, i) == 0) throw std::invalid_argument("rows are linearly dependent");
  }
  IntMatrix basis(r, n);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < n; ++j) basis(i, j) = w(i, j);
  return hermite_normal_form(basis);
}

}  // namespace qdioph
