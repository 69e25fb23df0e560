#pragma once

// Dense row-major matrices over a Field, with exact row reduction.

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "msrlab/errors.hpp"
#include "msrlab/field.hpp"

namespace msrlab {

class Matrix {
 public:
  // Inline capacity covers every 4x4 matrix without touching the heap; the
  // search and repair loops live almost entirely in that regime.
  using Storage = boost::container::small_vector<Element, 16>;

  Matrix() = default;

  Matrix(const Field& field, std::size_t rows, std::size_t cols)
      : field_(field), rows_(rows), cols_(cols), data_(rows * cols, Element{0}) {}

  Matrix(const Field& field, std::size_t rows, std::size_t cols, std::span<const Element> values)
      : field_(field), rows_(rows), cols_(cols), data_(values.begin(), values.end()) {
    if (values.size() != rows * cols) throw ShapeError("entry count does not match shape");
    for (Element v : data_) {
      if (!field_.contains(v)) throw FieldError("entry " + std::to_string(v) + " is not in " + field_.describe());
    }
  }

  Matrix(const Field& field, std::size_t rows, std::size_t cols, std::initializer_list<Element> values)
      : Matrix(field, rows, cols, std::span<const Element>(values.begin(), values.size())) {}

  static Matrix from_rows(const Field& field, const std::vector<std::vector<Element>>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    std::vector<Element> flat;
    flat.reserve(rows.size() * cols);
    for (const auto& row : rows) {
      if (row.size() != cols) throw ShapeError("ragged rows");
      flat.insert(flat.end(), row.begin(), row.end());
    }
    return Matrix(field, rows.size(), cols, flat);
  }

  static Matrix identity(const Field& field, std::size_t n) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static Matrix column(const Field& field, std::span<const Element> values) {
    return Matrix(field, values.size(), 1, values);
  }

  const Field& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool is_square() const { return rows_ == cols_; }

  Element& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Element operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const Element> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<Element> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Element> values() const { return {data_.data(), data_.size()}; }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](Element v) { return v == 0; });
  }

  bool is_identity() const {
    if (!is_square()) return false;
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < cols_; ++c) {
        if ((*this)(r, c) != (r == c ? 1u : 0u)) return false;
      }
    }
    return true;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ &&
           std::equal(a.data_.begin(), a.data_.end(), b.data_.begin(), b.data_.end());
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  // Row-major lexicographic order on entries; shapes compared first.
  friend bool operator<(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_) return a.rows_ < b.rows_;
    if (a.cols_ != b.cols_) return a.cols_ < b.cols_;
    return std::lexicographical_compare(a.data_.begin(), a.data_.end(), b.data_.begin(), b.data_.end());
  }

 private:
  Field field_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Storage data_;
};

inline std::ostream& operator<<(std::ostream& os, const Matrix& m) {
  os << '[';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    os << (r ? ", [" : "[");
    for (std::size_t c = 0; c < m.cols(); ++c) os << (c ? " " : "") << m(r, c);
    os << ']';
  }
  return os << ']';
}

namespace detail {

inline void require_same_field(const Matrix& a, const Matrix& b) {
  if (a.field() != b.field()) throw FieldError("operands live in different fields");
}

// row[dst] += factor * row[src], restricted to columns >= from.
inline void axpy_row(Matrix& m, std::size_t dst, std::size_t src, Element factor, std::size_t from = 0) {
  const Field& f = m.field();
  for (std::size_t c = from; c < m.cols(); ++c) {
    const Element s = m(src, c);
    if (s != 0) m(dst, c) = f.add(m(dst, c), f.mul(factor, s));
  }
}

inline void scale_row(Matrix& m, std::size_t r, Element factor, std::size_t from = 0) {
  const Field& f = m.field();
  for (std::size_t c = from; c < m.cols(); ++c) m(r, c) = f.mul(factor, m(r, c));
}

inline void swap_rows(Matrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  auto ra = m.row(a);
  auto rb = m.row(b);
  std::swap_ranges(ra.begin(), ra.end(), rb.begin());
}

}  // namespace detail

inline Matrix mat_add(const Matrix& a, const Matrix& b) {
  detail::require_same_field(a, b);
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("addition of mismatched shapes");
  Matrix out = a;
  const Field& f = a.field();
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = f.add(a(r, c), b(r, c));
  }
  return out;
}

inline Matrix mat_sub(const Matrix& a, const Matrix& b) {
  detail::require_same_field(a, b);
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("subtraction of mismatched shapes");
  Matrix out = a;
  const Field& f = a.field();
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = f.sub(a(r, c), b(r, c));
  }
  return out;
}

inline Matrix mat_scale(Element s, const Matrix& a) {
  Matrix out = a;
  for (std::size_t r = 0; r < a.rows(); ++r) detail::scale_row(out, r, s);
  return out;
}

inline Matrix mat_mul(const Matrix& a, const Matrix& b) {
  detail::require_same_field(a, b);
  if (a.cols() != b.rows()) {
    throw ShapeError("cannot multiply " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " by " +
                     std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  const Field& f = a.field();
  Matrix out(f, a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const Element x = a(r, i);
      if (x == 0) continue;
      for (std::size_t c = 0; c < b.cols(); ++c) {
        const Element y = b(i, c);
        if (y != 0) out(r, c) = f.add(out(r, c), f.mul(x, y));
      }
    }
  }
  return out;
}

inline Matrix operator+(const Matrix& a, const Matrix& b) { return mat_add(a, b); }
inline Matrix operator-(const Matrix& a, const Matrix& b) { return mat_sub(a, b); }
inline Matrix operator*(const Matrix& a, const Matrix& b) { return mat_mul(a, b); }

inline Matrix transpose(const Matrix& a) {
  Matrix out(a.field(), a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out(c, r) = a(r, c);
  }
  return out;
}

inline Matrix vstack(const Matrix& top, const Matrix& bottom) {
  if (top.rows() == 0 && top.cols() == 0) return bottom;
  detail::require_same_field(top, bottom);
  if (top.cols() != bottom.cols()) throw ShapeError("vstack of mismatched widths");
  Matrix out(top.field(), top.rows() + bottom.rows(), top.cols());
  std::copy(top.values().begin(), top.values().end(), out.row(0).begin());
  if (bottom.rows()) std::copy(bottom.values().begin(), bottom.values().end(), out.row(top.rows()).begin());
  return out;
}

inline Matrix hstack(const Matrix& left, const Matrix& right) {
  detail::require_same_field(left, right);
  if (left.rows() != right.rows()) throw ShapeError("hstack of mismatched heights");
  Matrix out(left.field(), left.rows(), left.cols() + right.cols());
  for (std::size_t r = 0; r < left.rows(); ++r) {
    std::copy(left.row(r).begin(), left.row(r).end(), out.row(r).begin());
    std::copy(right.row(r).begin(), right.row(r).end(), out.row(r).begin() + left.cols());
  }
  return out;
}

inline Matrix submatrix(const Matrix& a, std::size_t row0, std::size_t col0, std::size_t rows, std::size_t cols) {
  if (row0 + rows > a.rows() || col0 + cols > a.cols()) throw ShapeError("submatrix out of range");
  Matrix out(a.field(), rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = a(row0 + r, col0 + c);
  }
  return out;
}

// Row-major flattening into a 1 x (rows*cols) matrix.
inline Matrix vectorize(const Matrix& a) { return Matrix(a.field(), 1, a.size(), a.values()); }

struct Echelon {
  Matrix reduced;                   // RREF; zero rows collected at the bottom
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
  std::size_t rank() const { return pivots.size(); }
};

// Reduced row-echelon form by first-nonzero pivoting. Only columns
// [0, pivot_cols) are eligible as pivots; the remaining columns ride along
// (augmented systems).
inline Echelon rref(Matrix m, std::size_t pivot_cols) {
  const Field& f = m.field();
  std::vector<std::size_t> pivots;
  std::size_t lead = 0;
  for (std::size_t c = 0; c < pivot_cols && lead < m.rows(); ++c) {
    std::size_t p = lead;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    detail::swap_rows(m, lead, p);
    const Element v = m(lead, c);
    if (v != 1) detail::scale_row(m, lead, f.inv(v), c);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == lead) continue;
      const Element x = m(r, c);
      if (x != 0) detail::axpy_row(m, r, lead, f.neg(x), c);
    }
    pivots.push_back(c);
    ++lead;
  }
  return {std::move(m), std::move(pivots)};
}

inline Echelon rref(Matrix m) {
  const std::size_t cols = m.cols();
  return rref(std::move(m), cols);
}

inline std::size_t mat_rank(const Matrix& a) { return rref(a).rank(); }

inline Matrix mat_inverse(const Matrix& a) {
  if (!a.is_square()) throw ShapeError("only square matrices are invertible");
  const std::size_t n = a.rows();
  Echelon e = rref(hstack(a, Matrix::identity(a.field(), n)), n);
  if (e.rank() < n) throw SingularError("matrix is singular");
  return submatrix(e.reduced, 0, n, n, n);
}

inline bool is_invertible(const Matrix& a) { return a.is_square() && mat_rank(a) == a.rows(); }

// Rows form a basis of the right kernel {x : A x = 0}.
inline Matrix nullspace(const Matrix& a) {
  const Echelon e = rref(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (std::size_t c : e.pivots) is_pivot[c] = true;
  const Field& f = a.field();
  Matrix basis(f, a.cols() - e.rank(), a.cols());
  std::size_t row = 0;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    basis(row, free) = 1;
    for (std::size_t i = 0; i < e.rank(); ++i) basis(row, e.pivots[i]) = f.neg(e.reduced(i, free));
    ++row;
  }
  return basis;
}

// Solves A X = B. Returns nullopt when inconsistent; when A lacks full column
// rank the free variables are set to zero.
inline std::optional<Matrix> try_solve(const Matrix& a, const Matrix& b) {
  detail::require_same_field(a, b);
  if (a.rows() != b.rows()) throw ShapeError("right-hand side height mismatch");
  const std::size_t n = a.cols();
  Echelon e = rref(hstack(a, b), n);
  for (std::size_t r = e.rank(); r < e.reduced.rows(); ++r) {
    for (std::size_t c = n; c < e.reduced.cols(); ++c) {
      if (e.reduced(r, c) != 0) return std::nullopt;
    }
  }
  Matrix x(a.field(), n, b.cols());
  for (std::size_t i = 0; i < e.rank(); ++i) {
    for (std::size_t c = 0; c < b.cols(); ++c) x(e.pivots[i], c) = e.reduced(i, n + c);
  }
  return x;
}

// Solves X S = Y for X. Returns nullopt when some row of Y is outside the row
// space of S.
inline std::optional<Matrix> try_solve_left(const Matrix& s, const Matrix& y) {
  auto xt = try_solve(transpose(s), transpose(y));
  if (!xt) return std::nullopt;
  return transpose(*xt);
}

}  // namespace msrlab
