#pragma once

// Systematic {n = k + r, k, l} array codes.
//
// Node indices are 0-based throughout the library: nodes [0, k) are
// systematic, node k + u holds parity u for u in [0, r). Parity row 0 is the
// one normalized to the identity.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "msrlab/errors.hpp"
#include "msrlab/matrix.hpp"

namespace msrlab {

struct CodeParams {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t r = 0;
  std::size_t l = 0;
  Field field;

  static CodeParams make(const Field& field, std::size_t n, std::size_t k, std::size_t l) {
    if (k < 1 || l < 1) throw ParamError("k and l must be positive");
    if (n <= k) throw ParamError("n must exceed k");
    CodeParams p{n, k, n - k, l, field};
    if (p.l % p.r != 0) throw ParamError("r = " + std::to_string(p.r) + " does not divide l = " + std::to_string(l));
    return p;
  }

  std::size_t beta() const { return l / r; }
  std::size_t alpha() const { return l; }
  std::size_t file_size() const { return k * l; }
  std::size_t d() const { return n - 1; }

  friend bool operator==(const CodeParams&, const CodeParams&) = default;
};

class Code {
 public:
  Code() = default;

  // enc holds C_{u,j} in row-major (u, j) order, r*k matrices of order l.
  Code(const CodeParams& params, std::vector<Matrix> enc) : params_(params), enc_(std::move(enc)) {
    if (enc_.size() != params_.r * params_.k) throw ShapeError("expected r*k encoding matrices");
    for (std::size_t u = 0; u < params_.r; ++u) {
      for (std::size_t j = 0; j < params_.k; ++j) {
        const Matrix& c = at(u, j);
        if (c.field() != params_.field) throw FieldError("encoding matrix over the wrong field");
        if (c.rows() != params_.l || c.cols() != params_.l) throw ShapeError("encoding matrices must be l x l");
        if (!is_invertible(c)) {
          throw SingularError("C u=" + std::to_string(u + 1) + " j=" + std::to_string(j + 1) + " is not invertible");
        }
      }
    }
  }

  const CodeParams& params() const { return params_; }
  const Matrix& at(std::size_t u, std::size_t j) const { return enc_[u * params_.k + j]; }
  std::span<const Matrix> matrices() const { return enc_; }

  bool normalized() const {
    for (std::size_t j = 0; j < params_.k; ++j) {
      if (!at(0, j).is_identity()) return false;
    }
    return true;
  }

  friend bool operator==(const Code& a, const Code& b) { return a.params_ == b.params_ && a.enc_ == b.enc_; }

 private:
  CodeParams params_;
  std::vector<Matrix> enc_;
};

namespace detail {

inline void require_columns(const CodeParams& p, std::span<const Matrix> vs, std::size_t count, const char* what) {
  if (vs.size() != count) throw ShapeError(std::string(what) + ": wrong number of vectors");
  for (const Matrix& v : vs) {
    if (v.field() != p.field) throw ShapeError(std::string(what) + ": vector over the wrong field");
    if (v.rows() != p.l || v.cols() != 1) throw ShapeError(std::string(what) + ": vectors must be l x 1");
  }
}

// Lexicographic successor of a sorted s-subset of [0, n).
inline bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
  const std::size_t s = c.size();
  for (std::size_t i = s; i-- > 0;) {
    if (c[i] < n - s + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < s; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

inline std::vector<std::size_t> first_combination(std::size_t s) {
  std::vector<std::size_t> c(s);
  for (std::size_t i = 0; i < s; ++i) c[i] = i;
  return c;
}

}  // namespace detail

// Parity contents W_{k+u} = sum_j C_{u,j} W_j for every u.
inline std::vector<Matrix> encode(const Code& code, std::span<const Matrix> data) {
  const CodeParams& p = code.params();
  detail::require_columns(p, data, p.k, "encode");
  std::vector<Matrix> parity;
  parity.reserve(p.r);
  for (std::size_t u = 0; u < p.r; ++u) {
    Matrix acc(p.field, p.l, 1);
    for (std::size_t j = 0; j < p.k; ++j) acc = mat_add(acc, mat_mul(code.at(u, j), data[j]));
    parity.push_back(std::move(acc));
  }
  return parity;
}

// All n node contents: data followed by parities.
inline std::vector<Matrix> node_contents(const Code& code, std::span<const Matrix> data) {
  std::vector<Matrix> all(data.begin(), data.end());
  for (Matrix& p : encode(code, data)) all.push_back(std::move(p));
  return all;
}

struct MdsWitness {
  std::vector<std::size_t> parity_rows;  // U, 0-based parity indices
  std::vector<std::size_t> columns;      // J, 0-based systematic indices
};

struct MdsReport {
  bool ok = true;
  std::optional<MdsWitness> witness;
};

inline Matrix block_matrix(const Code& code, std::span<const std::size_t> rows, std::span<const std::size_t> cols) {
  const CodeParams& p = code.params();
  const std::size_t l = p.l;
  Matrix block(p.field, rows.size() * l, cols.size() * l);
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < cols.size(); ++b) {
      const Matrix& c = code.at(rows[a], cols[b]);
      for (std::size_t x = 0; x < l; ++x) {
        for (std::size_t y = 0; y < l; ++y) block(a * l + x, b * l + y) = c(x, y);
      }
    }
  }
  return block;
}

// Every s x s block selection (s parity rows, s systematic columns), for every
// s in [1, min(r, k)], must be invertible. Selections are visited by s, then
// U, then J, each lexicographically; the first failure is the witness.
inline MdsReport mds_check(const Code& code) {
  const CodeParams& p = code.params();
  const std::size_t smax = std::min(p.r, p.k);
  for (std::size_t s = 1; s <= smax; ++s) {
    auto rows = detail::first_combination(s);
    do {
      auto cols = detail::first_combination(s);
      do {
        const Matrix block = block_matrix(code, rows, cols);
        if (mat_rank(block) != block.rows()) return {false, MdsWitness{rows, cols}};
      } while (detail::next_combination(cols, p.k));
    } while (detail::next_combination(rows, p.r));
  }
  return {};
}

// Recovers W_0..W_{k-1} from any k surviving nodes. stored[i] is the content
// of node survivors[i].
inline std::vector<Matrix> erasure_decode(const Code& code, std::span<const std::size_t> survivors,
                                          std::span<const Matrix> stored) {
  const CodeParams& p = code.params();
  if (survivors.size() != p.k) throw ShapeError("erasure decoding needs exactly k survivors");
  detail::require_columns(p, stored, p.k, "erasure_decode");
  std::vector<bool> seen(p.n, false);
  for (std::size_t v : survivors) {
    if (v >= p.n) throw ShapeError("survivor index out of range");
    if (seen[v]) throw ShapeError("duplicate survivor index");
    seen[v] = true;
  }
  const std::size_t l = p.l;
  Matrix system(p.field, p.k * l, p.k * l);
  Matrix rhs(p.field, p.k * l, 1);
  for (std::size_t s = 0; s < p.k; ++s) {
    const std::size_t v = survivors[s];
    for (std::size_t x = 0; x < l; ++x) {
      rhs(s * l + x, 0) = stored[s](x, 0);
      if (v < p.k) {
        system(s * l + x, v * l + x) = 1;
        continue;
      }
      for (std::size_t j = 0; j < p.k; ++j) {
        const Matrix& c = code.at(v - p.k, j);
        for (std::size_t y = 0; y < l; ++y) system(s * l + x, j * l + y) = c(x, y);
      }
    }
  }
  Echelon e = rref(hstack(system, rhs), p.k * l);
  if (e.rank() < p.k * l) throw SingularSystem("survivor set is not information-complete");
  std::vector<Matrix> data;
  data.reserve(p.k);
  for (std::size_t j = 0; j < p.k; ++j) {
    Matrix w(p.field, l, 1);
    for (std::size_t x = 0; x < l; ++x) w(x, 0) = e.reduced(j * l + x, p.k * l);
    data.push_back(std::move(w));
  }
  return data;
}

// Equivalent code with C'_{0,j} = I and C'_{u,j} = C_{u,j} C_{0,j}^{-1},
// matching the data change of basis W'_j = C_{0,j} W_j.
inline Code normalize(const Code& code) {
  if (code.normalized()) return code;
  const CodeParams& p = code.params();
  std::vector<Matrix> inverses;
  inverses.reserve(p.k);
  for (std::size_t j = 0; j < p.k; ++j) inverses.push_back(mat_inverse(code.at(0, j)));
  std::vector<Matrix> enc;
  enc.reserve(p.r * p.k);
  for (std::size_t u = 0; u < p.r; ++u) {
    for (std::size_t j = 0; j < p.k; ++j) {
      enc.push_back(u == 0 ? Matrix::identity(p.field, p.l) : mat_mul(code.at(u, j), inverses[j]));
    }
  }
  return Code(p, std::move(enc));
}

}  // namespace msrlab
