#pragma once

// Row spaces in canonical form.
//
// A Subspace stores the reduced row-echelon basis of any generating set, so
// two subspaces are identical exactly when their stored bases are equal.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "msrlab/errors.hpp"
#include "msrlab/matrix.hpp"

namespace msrlab {

class Subspace {
 public:
  Subspace() = default;

  static Subspace zero(const Field& field, std::size_t ambient) {
    Subspace s;
    s.ambient_ = ambient;
    s.basis_ = Matrix(field, 0, ambient);
    return s;
  }

  static Subspace full(const Field& field, std::size_t ambient) {
    Subspace s;
    s.ambient_ = ambient;
    s.basis_ = Matrix::identity(field, ambient);
    s.pivots_.resize(ambient);
    for (std::size_t i = 0; i < ambient; ++i) s.pivots_[i] = i;
    return s;
  }

  static Subspace span(const Matrix& generators) {
    Echelon e = rref(generators);
    Subspace s;
    s.ambient_ = generators.cols();
    s.basis_ = submatrix(e.reduced, 0, 0, e.rank(), generators.cols());
    s.pivots_ = std::move(e.pivots);
    return s;
  }

  const Field& field() const { return basis_.field(); }
  std::size_t ambient() const { return ambient_; }
  std::size_t dim() const { return basis_.rows(); }
  const Matrix& basis() const { return basis_; }
  std::span<const std::size_t> pivots() const { return pivots_; }
  bool is_full() const { return dim() == ambient_; }

  // Membership of a 1 x ambient row vector. The RREF basis gives the unique
  // candidate coordinates directly: the vector's entries at pivot columns.
  bool contains(std::span<const Element> v) const {
    if (v.size() != ambient_) throw ShapeError("vector length does not match ambient dimension");
    const Field& f = field();
    for (std::size_t c = 0; c < ambient_; ++c) {
      Element acc = 0;
      for (std::size_t i = 0; i < dim(); ++i) {
        const Element coeff = v[pivots_[i]];
        if (coeff != 0) acc = f.add(acc, f.mul(coeff, basis_(i, c)));
      }
      if (acc != v[c]) return false;
    }
    return true;
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }
  friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }
  friend bool operator<(const Subspace& a, const Subspace& b) { return a.basis_ < b.basis_; }

 private:
  Matrix basis_;
  std::vector<std::size_t> pivots_;
  std::size_t ambient_ = 0;
};

inline Subspace span(const Matrix& generators) { return Subspace::span(generators); }

namespace detail {

inline void require_compatible(const Subspace& a, const Subspace& b) {
  if (a.field() != b.field()) throw ShapeError("subspaces live over different fields");
  if (a.ambient() != b.ambient()) throw ShapeError("subspaces live in different ambient spaces");
}

}  // namespace detail

inline Subspace sum(const Subspace& a, const Subspace& b) {
  detail::require_compatible(a, b);
  return span(vstack(a.basis(), b.basis()));
}

// Zassenhaus: reduce [[A, A], [B, 0]]; rows whose left half vanishes carry a
// basis of the intersection in their right half.
inline Subspace intersect(const Subspace& a, const Subspace& b) {
  detail::require_compatible(a, b);
  const std::size_t l = a.ambient();
  const Field& f = a.field();
  Matrix block(f, a.dim() + b.dim(), 2 * l);
  for (std::size_t r = 0; r < a.dim(); ++r) {
    for (std::size_t c = 0; c < l; ++c) {
      block(r, c) = a.basis()(r, c);
      block(r, l + c) = a.basis()(r, c);
    }
  }
  for (std::size_t r = 0; r < b.dim(); ++r) {
    for (std::size_t c = 0; c < l; ++c) block(a.dim() + r, c) = b.basis()(r, c);
  }
  Echelon e = rref(std::move(block));
  std::size_t left_rank = 0;
  while (left_rank < e.rank() && e.pivots[left_rank] < l) ++left_rank;
  return span(submatrix(e.reduced, left_rank, l, e.rank() - left_rank, l));
}

enum class Relation { equal, a_in_b, b_in_a, incomparable };

inline const char* to_string(Relation r) {
  switch (r) {
    case Relation::equal: return "equal";
    case Relation::a_in_b: return "a_in_b";
    case Relation::b_in_a: return "b_in_a";
    case Relation::incomparable: return "incomparable";
  }
  return "?";
}

inline Relation compare(const Subspace& a, const Subspace& b) {
  detail::require_compatible(a, b);
  if (a == b) return Relation::equal;
  const std::size_t joint = sum(a, b).dim();
  if (joint == b.dim()) return Relation::a_in_b;
  if (joint == a.dim()) return Relation::b_in_a;
  return Relation::incomparable;
}

inline bool is_subspace_of(const Subspace& a, const Subspace& b) {
  const Relation r = compare(a, b);
  return r == Relation::equal || r == Relation::a_in_b;
}

inline bool is_direct_sum(std::span<const Subspace> parts) {
  if (parts.empty()) throw ShapeError("direct-sum test needs at least one part");
  std::size_t total = 0;
  Matrix stacked;
  for (const Subspace& p : parts) {
    detail::require_compatible(parts.front(), p);
    total += p.dim();
    stacked = vstack(stacked, p.basis());
  }
  if (total > parts.front().ambient()) return false;
  return mat_rank(stacked) == total;
}

// Row space of basis * c.
inline Subspace apply(const Subspace& s, const Matrix& c) {
  if (!c.is_square() || c.rows() != s.ambient()) throw ShapeError("operator must be ambient x ambient");
  if (c.field() != s.field()) throw ShapeError("operator lives over a different field");
  return span(mat_mul(s.basis(), c));
}

// P with basis * c = P * basis. Throws NotInvariant when the image leaves s.
inline Matrix invariance_witness(const Subspace& s, const Matrix& c) {
  if (!c.is_square() || c.rows() != s.ambient()) throw ShapeError("operator must be ambient x ambient");
  if (c.field() != s.field()) throw ShapeError("operator lives over a different field");
  const Matrix image = mat_mul(s.basis(), c);
  Matrix p(s.field(), s.dim(), s.dim());
  for (std::size_t r = 0; r < s.dim(); ++r) {
    if (!s.contains(image.row(r))) throw NotInvariant("image row " + std::to_string(r) + " leaves the subspace");
    for (std::size_t i = 0; i < s.dim(); ++i) p(r, i) = image(r, s.pivots()[i]);
  }
  return p;
}

}  // namespace msrlab
