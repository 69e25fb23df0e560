#pragma once

// Executable linear-independence certificates for a concrete (code, scheme)
// pair: the encoding-matrix family, the partition products Delta, spanning
// thresholds, and dimension profiles of sums of repair subspaces.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "msrlab/bounds.hpp"
#include "msrlab/code.hpp"
#include "msrlab/errors.hpp"
#include "msrlab/matrix.hpp"
#include "msrlab/repair.hpp"
#include "msrlab/subspace.hpp"

namespace msrlab {

namespace detail {

// Row-reduced basis grown one vector at a time.
class IncrementalBasis {
 public:
  IncrementalBasis(const Field& field, std::size_t width) : field_(field), width_(width) {}

  // Returns false when v already lies in the span.
  bool insert(std::span<const Element> v) {
    std::vector<Element> w(v.begin(), v.end());
    for (std::size_t b = 0; b < rows_.size(); ++b) {
      const Element x = w[pivots_[b]];
      if (x == 0) continue;
      const Element factor = field_.neg(x);
      for (std::size_t c = pivots_[b]; c < width_; ++c) w[c] = field_.add(w[c], field_.mul(factor, rows_[b][c]));
    }
    std::size_t pivot = 0;
    while (pivot < width_ && w[pivot] == 0) ++pivot;
    if (pivot == width_) return false;
    const Element inv = field_.inv(w[pivot]);
    for (std::size_t c = pivot; c < width_; ++c) w[c] = field_.mul(inv, w[c]);
    // Keep earlier rows reduced at the new pivot so later reductions stay one pass.
    for (auto& row : rows_) {
      const Element x = row[pivot];
      if (x == 0) continue;
      const Element factor = field_.neg(x);
      for (std::size_t c = pivot; c < width_; ++c) row[c] = field_.add(row[c], field_.mul(factor, w[c]));
    }
    rows_.push_back(std::move(w));
    pivots_.push_back(pivot);
    return true;
  }

  std::size_t rank() const { return rows_.size(); }

 private:
  Field field_;
  std::size_t width_;
  std::vector<std::vector<Element>> rows_;
  std::vector<std::size_t> pivots_;
};

inline void require_normalized(const Code& code) {
  if (!code.normalized()) throw ParamError("certificate requires a normalized code (C_{1,j} = I)");
}

inline Subspace sum_of_spans(const RepairScheme& scheme, std::span<const std::size_t> nodes) {
  const CodeParams& p = scheme.params();
  Matrix stacked(p.field, 0, p.l);
  for (std::size_t i : nodes) stacked = vstack(stacked, scheme.constant_matrix(i));
  return span(stacked);
}

}  // namespace detail

struct IndependenceReport {
  std::size_t rank = 0;
  std::size_t expected = 0;  // k(r-1) + 1
  bool ok = false;
};

// Rank of {I} together with every C_{u,i}, u >= 1, as vectors of F^(l^2).
inline IndependenceReport encoding_independence(const Code& code) {
  detail::require_normalized(code);
  const CodeParams& p = code.params();
  Matrix family = vectorize(Matrix::identity(p.field, p.l));
  for (std::size_t u = 1; u < p.r; ++u) {
    for (std::size_t i = 0; i < p.k; ++i) family = vstack(family, vectorize(code.at(u, i)));
  }
  IndependenceReport report;
  report.rank = mat_rank(family);
  report.expected = p.k * (p.r - 1) + 1;
  report.ok = report.rank == report.expected;
  return report;
}

// Blocks of systematic indices (0-based). Only the first block may be
// non-standard, i.e. have repair subspaces that fail to span F^l.
struct Partition {
  std::vector<std::vector<std::size_t>> blocks;
  std::vector<bool> standard;

  std::size_t size() const { return blocks.size(); }
  bool all_standard() const {
    for (bool s : standard) {
      if (!s) return false;
    }
    return true;
  }

  void validate(std::size_t k) const {
    if (blocks.size() != standard.size()) throw ShapeError("partition flags do not match blocks");
    std::vector<bool> seen(k, false);
    std::size_t covered = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (blocks[b].empty()) throw ShapeError("partition block is empty");
      if (!standard[b] && b != 0) throw ShapeError("only the first block may be non-standard");
      for (std::size_t i : blocks[b]) {
        if (i >= k) throw ShapeError("partition index out of range");
        if (seen[i]) throw ShapeError("partition blocks overlap");
        seen[i] = true;
        ++covered;
      }
    }
    if (covered != k) throw ShapeError("partition does not cover every systematic node");
  }

  friend bool operator==(const Partition&, const Partition&) = default;
};

// I for u = 0, otherwise the entrywise sum of C_{u,j} over j in block.
inline Matrix gamma(const Code& code, std::span<const std::size_t> block, std::size_t u) {
  const CodeParams& p = code.params();
  if (u >= p.r) throw RangeError("parity index " + std::to_string(u) + " out of range");
  if (u == 0) return Matrix::identity(p.field, p.l);
  Matrix acc(p.field, p.l, p.l);
  for (std::size_t j : block) {
    if (j >= p.k) throw RangeError("block index out of range");
    acc = mat_add(acc, code.at(u, j));
  }
  return acc;
}

// Gamma(block_1, word_1) * ... * Gamma(block_p, word_p), left to right.
inline Matrix delta(const Code& code, const Partition& partition, std::span<const std::size_t> word) {
  if (word.size() != partition.size()) throw ShapeError("word length must equal the number of blocks");
  Matrix acc = Matrix::identity(code.params().field, code.params().l);
  for (std::size_t b = 0; b < word.size(); ++b) acc = mat_mul(acc, gamma(code, partition.blocks[b], word[b]));
  return acc;
}

struct DeltaFamilyReport {
  std::size_t count = 0;  // r^p
  bool nonzero_ok = true;
  std::optional<std::vector<std::size_t>> first_zero_word;
  std::size_t rank = 0;
  bool independent_ok = true;
  std::optional<std::vector<std::size_t>> first_dependent_word;
  bool fits_matrix_space = true;  // count <= l^2, implied by independence
};

inline constexpr std::size_t kDeltaFamilyCap = 1'000'000;

inline DeltaFamilyReport delta_family_certificate(const Code& code, const RepairScheme& scheme,
                                                  const Partition& partition,
                                                  std::size_t cap = kDeltaFamilyCap) {
  detail::require_normalized(code);
  const CodeParams& p = code.params();
  partition.validate(p.k);
  for (std::size_t b = 0; b < partition.size(); ++b) {
    if (partition.standard[b] && !detail::sum_of_spans(scheme, partition.blocks[b]).is_full()) {
      throw NonSpanningBlock("block " + std::to_string(b + 1) + " is flagged standard but does not span F^l");
    }
  }

  DeltaFamilyReport report;
  std::size_t count = 1;
  for (std::size_t b = 0; b < partition.size(); ++b) {
    if (count > cap / p.r) throw FamilyTooLarge("r^p exceeds the family cap of " + std::to_string(cap));
    count *= p.r;
  }
  report.count = count;

  std::vector<std::vector<Matrix>> gammas(partition.size());
  for (std::size_t b = 0; b < partition.size(); ++b) {
    for (std::size_t u = 0; u < p.r; ++u) gammas[b].push_back(gamma(code, partition.blocks[b], u));
  }

  detail::IncrementalBasis basis(p.field, p.l * p.l);
  std::vector<std::size_t> word(partition.size(), 0);
  for (std::size_t n = 0; n < count; ++n) {
    Matrix d = Matrix::identity(p.field, p.l);
    for (std::size_t b = 0; b < word.size(); ++b) d = mat_mul(d, gammas[b][word[b]]);
    if (d.is_zero() && report.nonzero_ok) {
      report.nonzero_ok = false;
      report.first_zero_word = word;
    }
    if (!basis.insert(d.values()) && report.independent_ok) {
      report.independent_ok = false;
      report.first_dependent_word = word;
    }
    for (std::size_t b = word.size(); b-- > 0;) {
      if (++word[b] < p.r) break;
      word[b] = 0;
    }
  }
  report.rank = basis.rank();
  report.fits_matrix_space = count <= p.l * p.l;
  return report;
}

struct SpanningReport {
  std::optional<std::size_t> lambda_every;   // every m-subset spans F^l
  std::optional<std::size_t> lambda_exists;  // some m-subset spans F^l
};

inline SpanningReport min_spanning_size(const RepairScheme& scheme, std::size_t l) {
  const CodeParams& p = scheme.params();
  if (l != p.l) throw ShapeError("ambient dimension does not match the scheme");
  SpanningReport report;
  for (std::size_t m = 1; m <= p.k; ++m) {
    bool any = false;
    bool every = true;
    auto subset = detail::first_combination(m);
    do {
      const bool spans = detail::sum_of_spans(scheme, subset).is_full();
      any = any || spans;
      every = every && spans;
    } while (detail::next_combination(subset, p.k));
    if (any && !report.lambda_exists) report.lambda_exists = m;
    if (every) {
      report.lambda_every = m;
      break;
    }
  }
  return report;
}

// Contiguous blocks packed from the highest index down: a block closes as
// soon as its subspaces span F^l, and any leftover low indices form the
// leading non-standard block.
inline std::optional<Partition> find_partition(const RepairScheme& scheme, std::size_t l) {
  const CodeParams& p = scheme.params();
  if (l != p.l) throw ShapeError("ambient dimension does not match the scheme");
  std::vector<std::vector<std::size_t>> closed;
  std::vector<std::size_t> open;
  Subspace acc = Subspace::zero(p.field, p.l);
  for (std::size_t i = p.k; i-- > 0;) {
    open.insert(open.begin(), i);
    acc = sum(acc, span(scheme.constant_matrix(i)));
    if (acc.is_full()) {
      closed.insert(closed.begin(), std::move(open));
      open.clear();
      acc = Subspace::zero(p.field, p.l);
    }
  }
  if (closed.empty()) return std::nullopt;
  Partition partition;
  if (!open.empty()) {
    partition.blocks.push_back(std::move(open));
    partition.standard.push_back(false);
  }
  for (auto& block : closed) {
    partition.blocks.push_back(std::move(block));
    partition.standard.push_back(true);
  }
  return partition;
}

struct DimProfile {
  std::size_t dim = 0;
  Rational bound_thm3;
  Rational bound_eq29;
  bool exact = false;  // |F| <= t, so dim must equal bound_thm3
  bool ok = false;
};

inline DimProfile dim_profile(const RepairScheme& scheme, std::span<const std::size_t> subset, std::size_t l,
                              std::size_t r) {
  if (subset.empty()) throw ShapeError("dimension profile needs a nonempty subset");
  const CodeParams& p = scheme.params();
  if (l != p.l || r != p.r) throw ShapeError("(l, r) does not match the scheme");
  for (std::size_t i : subset) {
    if (i >= p.k) throw RangeError("subset index out of range");
  }
  DimProfile profile;
  profile.dim = detail::sum_of_spans(scheme, subset).dim();
  const DimBounds b = dim_lower_bound(static_cast<std::int64_t>(subset.size()), static_cast<std::int64_t>(l),
                                      static_cast<std::int64_t>(r));
  profile.bound_thm3 = b.thm3;
  profile.bound_eq29 = b.eq29;
  profile.exact = b.exact;
  const Rational dim(static_cast<std::int64_t>(profile.dim));
  const bool thm3_ok = b.exact ? dim == b.thm3 : dim >= b.thm3;
  profile.ok = thm3_ok && BigInt(static_cast<std::int64_t>(profile.dim)) >= ceil_rational(b.eq29);
  return profile;
}

}  // namespace msrlab
