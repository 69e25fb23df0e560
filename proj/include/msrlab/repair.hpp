#pragma once

// Repair schemes for systematic nodes and the interference-alignment checks.
//
// In constant mode every helper of node i projects through the same repair
// matrix S_i; in per-helper mode helper v uses S_{i,v}. Each repair matrix is
// (l/r) x l with full row rank.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "msrlab/code.hpp"
#include "msrlab/errors.hpp"
#include "msrlab/matrix.hpp"
#include "msrlab/subspace.hpp"

namespace msrlab {

enum class SchemeMode { constant, per_helper };

class RepairScheme {
 public:
  RepairScheme() = default;

  static RepairScheme constant(const CodeParams& params, std::vector<Matrix> s) {
    if (s.size() != params.k) throw ShapeError("constant scheme needs one repair matrix per systematic node");
    RepairScheme scheme;
    scheme.mode_ = SchemeMode::constant;
    scheme.params_ = params;
    for (std::size_t i = 0; i < s.size(); ++i) scheme.check(s[i], "S i=" + std::to_string(i + 1));
    scheme.matrices_ = std::move(s);
    return scheme;
  }

  // s[i][v] for v in [0, n); the entry v == i is ignored.
  static RepairScheme per_helper(const CodeParams& params, std::vector<std::vector<Matrix>> s) {
    if (s.size() != params.k) throw ShapeError("per-helper scheme needs one row per systematic node");
    RepairScheme scheme;
    scheme.mode_ = SchemeMode::per_helper;
    scheme.params_ = params;
    for (std::size_t i = 0; i < params.k; ++i) {
      if (s[i].size() != params.n) throw ShapeError("per-helper scheme needs n entries per node");
      for (std::size_t v = 0; v < params.n; ++v) {
        if (v == i) continue;
        scheme.check(s[i][v], "S i=" + std::to_string(i + 1) + " v=" + std::to_string(v + 1));
        scheme.matrices_.push_back(s[i][v]);
      }
    }
    return scheme;
  }

  SchemeMode mode() const { return mode_; }
  const CodeParams& params() const { return params_; }

  // Repair matrix used by helper v when node i is repaired.
  const Matrix& helper(std::size_t i, std::size_t v) const {
    if (i >= params_.k || v >= params_.n || v == i) throw RangeError("no repair matrix for that (node, helper)");
    if (mode_ == SchemeMode::constant) return matrices_[i];
    return matrices_[i * (params_.n - 1) + (v < i ? v : v - 1)];
  }

  const Matrix& constant_matrix(std::size_t i) const {
    if (mode_ != SchemeMode::constant) throw ShapeError("scheme is not in constant mode");
    return matrices_.at(i);
  }

  // The same scheme written with S_{i,v} := S_i.
  RepairScheme as_per_helper() const {
    if (mode_ == SchemeMode::per_helper) return *this;
    std::vector<std::vector<Matrix>> s(params_.k, std::vector<Matrix>(params_.n));
    for (std::size_t i = 0; i < params_.k; ++i) {
      for (std::size_t v = 0; v < params_.n; ++v) {
        if (v != i) s[i][v] = matrices_[i];
      }
    }
    return per_helper(params_, std::move(s));
  }

  friend bool operator==(const RepairScheme& a, const RepairScheme& b) {
    return a.mode_ == b.mode_ && a.params_ == b.params_ && a.matrices_ == b.matrices_;
  }

 private:
  void check(const Matrix& m, const std::string& label) const {
    if (m.field() != params_.field) throw FieldError(label + " is over the wrong field");
    if (m.rows() != params_.beta() || m.cols() != params_.l) throw ShapeError(label + " must be (l/r) x l");
    if (mat_rank(m) != params_.beta()) throw ShapeError(label + " does not have full row rank");
  }

  SchemeMode mode_ = SchemeMode::constant;
  CodeParams params_;
  std::vector<Matrix> matrices_;
};

struct Violation {
  enum class Kind { alignment, span };
  Kind kind = Kind::alignment;
  std::size_t node = 0;    // i, the node under repair
  std::size_t parity = 0;  // u (alignment only)
  std::size_t column = 0;  // j (alignment only)

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct SchemeReport {
  bool ok = true;
  std::vector<Violation> violations;  // ordered by node, then (u, j); span last
};

// Constant mode checks S_i C_{u,j} ~ S_i for j != i and that the r subspaces
// S_i C_{u,i} form a direct sum equal to F^l. When the code is normalized the
// u = 0 alignment conditions are vacuous and skipped. Per-helper mode checks
// S_{i,j} ~ S_{i,k+u} C_{u,j} for j != i, every u, and the spanning of the
// S_{i,k+u} C_{u,i}.
inline SchemeReport verify_scheme(const Code& code, const RepairScheme& scheme) {
  const CodeParams& p = code.params();
  if (!(scheme.params() == p)) throw ShapeError("scheme parameters do not match the code");
  SchemeReport report;
  const bool constant = scheme.mode() == SchemeMode::constant;
  const std::size_t u_first = (constant && code.normalized()) ? 1 : 0;
  for (std::size_t i = 0; i < p.k; ++i) {
    for (std::size_t u = u_first; u < p.r; ++u) {
      const Subspace through_parity = span(scheme.helper(i, p.k + u));
      for (std::size_t j = 0; j < p.k; ++j) {
        if (j == i) continue;
        const Subspace target = span(scheme.helper(i, j));
        if (apply(through_parity, code.at(u, j)) != target) {
          report.violations.push_back({Violation::Kind::alignment, i, u, j});
        }
      }
    }
    std::vector<Subspace> parts;
    parts.reserve(p.r);
    std::size_t total = 0;
    for (std::size_t u = 0; u < p.r; ++u) {
      parts.push_back(apply(span(scheme.helper(i, p.k + u)), code.at(u, i)));
      total += parts.back().dim();
    }
    if (total != p.l || !is_direct_sum(parts)) report.violations.push_back({Violation::Kind::span, i, 0, 0});
  }
  report.ok = report.violations.empty();
  return report;
}

struct RepairResult {
  Matrix content;
  std::size_t downloaded_symbols = 0;
};

// Rebuilds systematic node i from (l/r)-symbol projections of the other n-1
// nodes. Each parity projection S_{i,k+u} W_{k+u} is cleaned of the terms
// S_{i,k+u} C_{u,j} W_j = P_{u,j} (S_{i,j} W_j), j != i, and the r cleaned
// blocks S_{i,k+u} C_{u,i} W_i stack into an invertible l x l system.
inline RepairResult repair_node(const Code& code, const RepairScheme& scheme, std::size_t i,
                                std::span<const Matrix> contents) {
  const CodeParams& p = code.params();
  if (!(scheme.params() == p)) throw ShapeError("scheme parameters do not match the code");
  if (i >= p.k) throw RangeError("only systematic nodes can be repaired");
  detail::require_columns(p, contents, p.n, "repair_node");

  RepairResult result;
  std::vector<Matrix> received(p.n);
  for (std::size_t v = 0; v < p.n; ++v) {
    if (v == i) continue;
    received[v] = mat_mul(scheme.helper(i, v), contents[v]);
    result.downloaded_symbols += received[v].rows();
  }

  Matrix stack;
  Matrix rhs;
  for (std::size_t u = 0; u < p.r; ++u) {
    const Matrix& s_parity = scheme.helper(i, p.k + u);
    Matrix cleaned = received[p.k + u];
    for (std::size_t j = 0; j < p.k; ++j) {
      if (j == i) continue;
      auto witness = try_solve_left(scheme.helper(i, j), mat_mul(s_parity, code.at(u, j)));
      if (!witness) {
        throw SchemeInvalid("no alignment witness for i=" + std::to_string(i + 1) + " u=" + std::to_string(u + 1) +
                            " j=" + std::to_string(j + 1));
      }
      cleaned = mat_sub(cleaned, mat_mul(*witness, received[j]));
    }
    stack = vstack(stack, mat_mul(s_parity, code.at(u, i)));
    rhs = vstack(rhs, cleaned);
  }
  Echelon e = rref(hstack(stack, rhs), p.l);
  if (e.rank() < p.l) throw SingularStack("stacked repair system is singular for node " + std::to_string(i + 1));
  result.content = submatrix(e.reduced, 0, p.l, p.l, 1);
  return result;
}

}  // namespace msrlab
