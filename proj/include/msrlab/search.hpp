#pragma once

// Search for (code, repair scheme) pairs satisfying the constant-subspace
// alignment conditions at tiny parameters.
//
// Candidates are canonical: codes are normalized (C_{0,j} = I) and each S_i
// is stored as the RREF basis of its row space. Other symmetries (node
// relabelling, simultaneous change of basis) are left in place, so a valid
// code shows up once per labelling.
//
// Exhaustive mode works in two phases. Phase 1 tabulates, independently of
// any code, every per-node pair (C_{1..r-1,i}, S_i) whose subspaces
// S_i, S_i C_{1,i}, ..., S_i C_{r-1,i} form a direct sum equal to F^l. Phase 2
// assigns pairs to nodes 0..k-1 by backtracking, requiring the cross
// conditions S_a C_{u,b} = S_a and the MDS blocks that involve the newest
// column. Random mode samples S_i uniformly and then each C_{u,j} uniformly
// from the linear space of matrices that leave every S_i, i != j, invariant.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "msrlab/bounds.hpp"
#include "msrlab/code.hpp"
#include "msrlab/errors.hpp"
#include "msrlab/matrix.hpp"
#include "msrlab/parallel.hpp"
#include "msrlab/repair.hpp"
#include "msrlab/subspace.hpp"

namespace msrlab {

enum class SearchMode { exhaustive, random };

inline constexpr std::uint64_t kExhaustiveCap = 1'000'000'000;

struct SearchConfig {
  Field field;
  std::size_t l = 0;
  std::size_t r = 0;
  std::size_t k = 0;
  SearchMode mode = SearchMode::exhaustive;
  std::uint64_t seed = 0;
  std::uint64_t budget = 0;  // random mode: number of candidates drawn
  std::size_t shards = 1;    // worker count; never affects the output
  std::uint64_t cap = kExhaustiveCap;
  std::ostream* progress = nullptr;

  CodeParams params() const { return CodeParams::make(field, k + r, k, l); }
};

// Found pairs, stored flat: per node j, the entries of C_{1..r-1,j} followed
// by the entries of S_j.
class SearchResult {
 public:
  SearchResult() = default;
  explicit SearchResult(const CodeParams& params)
      : params_(params), stride_(params.k * ((params.r - 1) * params.l * params.l + params.beta() * params.l)) {}

  const CodeParams& params() const { return params_; }
  std::size_t size() const { return stride_ ? entries_.size() / stride_ : 0; }
  bool empty() const { return size() == 0; }

  std::uint64_t examined = 0;
  std::uint64_t estimate = 0;  // exhaustive: canonical candidate estimate; random: budget
  SearchMode mode = SearchMode::exhaustive;

  std::span<const Element> encoding(std::size_t index) const { return {entries_.data() + index * stride_, stride_}; }

  Code code(std::size_t index) const {
    const CodeParams& p = params_;
    const auto enc = encoding(index);
    const std::size_t node_stride = stride_ / p.k;
    std::vector<Matrix> matrices(p.r * p.k);
    for (std::size_t j = 0; j < p.k; ++j) {
      matrices[j] = Matrix::identity(p.field, p.l);
      for (std::size_t u = 1; u < p.r; ++u) {
        matrices[u * p.k + j] = Matrix(p.field, p.l, p.l, enc.subspan(j * node_stride + (u - 1) * p.l * p.l, p.l * p.l));
      }
    }
    return Code(p, std::move(matrices));
  }

  RepairScheme scheme(std::size_t index) const {
    const CodeParams& p = params_;
    const auto enc = encoding(index);
    const std::size_t node_stride = stride_ / p.k;
    const std::size_t offset = (p.r - 1) * p.l * p.l;
    std::vector<Matrix> s;
    for (std::size_t i = 0; i < p.k; ++i) {
      s.emplace_back(p.field, p.beta(), p.l, enc.subspan(i * node_stride + offset, p.beta() * p.l));
    }
    return RepairScheme::constant(p, std::move(s));
  }

  void append(std::span<const Element> encoding) { entries_.insert(entries_.end(), encoding.begin(), encoding.end()); }
  void append(const SearchResult& other) { entries_.insert(entries_.end(), other.entries_.begin(), other.entries_.end()); }

 private:
  CodeParams params_;
  std::size_t stride_ = 0;
  std::vector<Element> entries_;
};

namespace detail {

inline std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

inline std::uint64_t sat_pow(std::uint64_t base, std::size_t e) {
  std::uint64_t acc = 1;
  for (std::size_t i = 0; i < e; ++i) acc = sat_mul(acc, base);
  return acc;
}

inline std::uint64_t gl_order(std::uint64_t q, std::size_t l) {
  std::uint64_t acc = 1;
  const std::uint64_t ql = sat_pow(q, l);
  for (std::size_t i = 0; i < l; ++i) acc = sat_mul(acc, ql - sat_pow(q, i));
  return acc;
}

// Number of d-dimensional subspaces of F_q^l (Gaussian binomial).
inline std::uint64_t grassmannian_size(std::uint64_t q, std::size_t l, std::size_t d) {
  BigInt num = 1;
  BigInt den = 1;
  for (std::size_t i = 0; i < d; ++i) {
    num *= BigInt(sat_pow(q, l - i)) - 1;
    den *= BigInt(sat_pow(q, i + 1)) - 1;
  }
  const BigInt v = num / den;
  return v > std::numeric_limits<std::uint64_t>::max() ? std::numeric_limits<std::uint64_t>::max()
                                                        : static_cast<std::uint64_t>(v);
}

inline constexpr std::uint64_t kRawMatrixLimit = 50'000'000;
inline constexpr std::uint64_t kPhaseOneLimit = 50'000'000;
inline constexpr std::size_t kCompatLimit = 20'000;

inline std::vector<Matrix> enumerate_gl(const Field& f, std::size_t l) {
  const std::uint64_t q = f.order();
  const std::uint64_t total = sat_pow(q, l * l);
  if (total > kRawMatrixLimit) throw TooLarge("enumerating q^(l^2) = " + std::to_string(total) + " matrices");
  std::vector<Matrix> out;
  std::vector<Element> digits(l * l, 0);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t x = code;
    for (std::size_t i = l * l; i-- > 0;) {
      digits[i] = static_cast<Element>(x % q);
      x /= q;
    }
    Matrix m(f, l, l, digits);
    if (is_invertible(m)) out.push_back(std::move(m));
  }
  return out;
}

// Every d-dimensional subspace of F^l, sorted by canonical basis.
inline std::vector<Subspace> enumerate_subspaces(const Field& f, std::size_t l, std::size_t d) {
  std::vector<Subspace> out;
  const std::uint64_t q = f.order();
  auto pivots = first_combination(d);
  do {
    std::vector<std::pair<std::size_t, std::size_t>> free_slots;
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t c = pivots[i] + 1; c < l; ++c) {
        if (std::find(pivots.begin(), pivots.end(), c) == pivots.end()) free_slots.emplace_back(i, c);
      }
    }
    const std::uint64_t fills = sat_pow(q, free_slots.size());
    for (std::uint64_t code = 0; code < fills; ++code) {
      Matrix basis(f, d, l);
      for (std::size_t i = 0; i < d; ++i) basis(i, pivots[i]) = 1;
      std::uint64_t x = code;
      for (const auto& [row, col] : free_slots) {
        basis(row, col) = static_cast<Element>(x % q);
        x /= q;
      }
      out.push_back(span(basis));
    }
  } while (next_combination(pivots, l));
  std::sort(out.begin(), out.end());
  return out;
}

struct PairTables {
  std::vector<Matrix> gl;
  std::vector<Subspace> subspaces;
  std::vector<std::uint8_t> fixes;  // fixes[s * gl.size() + g]: S_s C_g = S_s
  std::vector<std::uint8_t> diff_invertible;  // r = 2 only: C_h - C_g invertible
  struct Pair {
    std::vector<std::uint32_t> ops;  // gl indices of C_{1..r-1}
    std::uint32_t sub = 0;
  };
  std::vector<Pair> pairs;
  std::vector<std::vector<std::uint32_t>> compat;  // empty when too large to tabulate
  std::size_t max_degree = 0;

  bool fixed(std::uint32_t s, std::uint32_t g) const { return fixes[static_cast<std::size_t>(s) * gl.size() + g] != 0; }

  bool compatible(std::uint32_t a, std::uint32_t b) const {
    const Pair& pa = pairs[a];
    const Pair& pb = pairs[b];
    for (std::size_t u = 0; u < pa.ops.size(); ++u) {
      if (!fixed(pa.sub, pb.ops[u]) || !fixed(pb.sub, pa.ops[u])) return false;
    }
    return true;
  }
};

inline std::shared_ptr<const PairTables> build_pair_tables(const Field& f, std::size_t l, std::size_t r) {
  auto t = std::make_shared<PairTables>();
  const std::size_t beta = l / r;
  const std::uint64_t gl_count = gl_order(f.order(), l);
  const std::uint64_t sub_count = grassmannian_size(f.order(), l, beta);
  const std::uint64_t raw = sat_mul(sat_pow(gl_count, r - 1), sub_count);
  if (raw > kPhaseOneLimit) throw TooLarge("phase-1 pair space has " + std::to_string(raw) + " candidates");

  t->gl = enumerate_gl(f, l);
  t->subspaces = enumerate_subspaces(f, l, beta);
  const std::size_t G = t->gl.size();
  t->fixes.assign(t->subspaces.size() * G, 0);
  for (std::size_t s = 0; s < t->subspaces.size(); ++s) {
    for (std::size_t g = 0; g < G; ++g) t->fixes[s * G + g] = apply(t->subspaces[s], t->gl[g]) == t->subspaces[s];
  }
  if (r == 2 && G * G <= 4'000'000) {
    t->diff_invertible.assign(G * G, 0);
    for (std::size_t g = 0; g < G; ++g) {
      for (std::size_t h = 0; h < G; ++h) t->diff_invertible[g * G + h] = is_invertible(mat_sub(t->gl[h], t->gl[g]));
    }
  }

  std::vector<std::uint32_t> ops(r - 1, 0);
  const std::uint64_t tuples = sat_pow(G, r - 1);
  for (std::uint64_t code = 0; code < tuples; ++code) {
    std::uint64_t x = code;
    for (std::size_t u = r - 1; u-- > 0;) {
      ops[u] = static_cast<std::uint32_t>(x % G);
      x /= G;
    }
    for (std::size_t s = 0; s < t->subspaces.size(); ++s) {
      bool fixed_any = false;
      for (std::uint32_t g : ops) fixed_any = fixed_any || t->fixed(static_cast<std::uint32_t>(s), g);
      if (fixed_any) continue;
      std::vector<Subspace> parts{t->subspaces[s]};
      for (std::uint32_t g : ops) parts.push_back(apply(t->subspaces[s], t->gl[g]));
      if (is_direct_sum(parts)) t->pairs.push_back({ops, static_cast<std::uint32_t>(s)});
    }
  }

  if (t->pairs.size() <= kCompatLimit) {
    const std::size_t P = t->pairs.size();
    t->compat.assign(P, {});
    for (std::uint32_t a = 0; a < P; ++a) {
      for (std::uint32_t b = 0; b < P; ++b) {
        if (a != b && t->compatible(a, b)) t->compat[a].push_back(b);
      }
      t->max_degree = std::max(t->max_degree, t->compat[a].size());
    }
  }
  return t;
}

class Backtracker {
 public:
  Backtracker(const PairTables& tables, const CodeParams& params) : t_(tables), p_(params), chosen_(params.k) {}

  std::uint64_t examined = 0;

  void run_root(std::uint32_t root, SearchResult& out) {
    chosen_[0] = root;
    ++examined;
    extend(1, out);
  }

 private:
  bool mds_with_last(std::size_t m) const {
    if (!t_.diff_invertible.empty()) {
      const std::size_t G = t_.gl.size();
      const std::uint32_t h = t_.pairs[chosen_[m]].ops[0];
      for (std::size_t a = 0; a < m; ++a) {
        if (!t_.diff_invertible[t_.pairs[chosen_[a]].ops[0] * G + h]) return false;
      }
      return true;
    }
    const std::size_t l = p_.l;
    const std::size_t smax = std::min(p_.r, m + 1);
    for (std::size_t s = 2; s <= smax; ++s) {
      auto rows = first_combination(s);
      do {
        auto others = first_combination(s - 1);
        do {
          std::vector<std::size_t> cols(others);
          cols.push_back(m);
          Matrix block(p_.field, s * l, s * l);
          for (std::size_t a = 0; a < s; ++a) {
            for (std::size_t b = 0; b < s; ++b) {
              const std::size_t u = rows[a];
              const Matrix& c = u == 0 ? identity() : t_.gl[t_.pairs[chosen_[cols[b]]].ops[u - 1]];
              for (std::size_t x = 0; x < l; ++x) {
                for (std::size_t y = 0; y < l; ++y) block(a * l + x, b * l + y) = c(x, y);
              }
            }
          }
          if (mat_rank(block) != s * l) return false;
        } while (next_combination(others, m));
      } while (next_combination(rows, p_.r));
    }
    return true;
  }

  const Matrix& identity() const {
    if (identity_.rows() != p_.l) identity_ = Matrix::identity(p_.field, p_.l);
    return identity_;
  }

  void emit(SearchResult& out) const {
    std::vector<Element> enc;
    for (std::size_t j = 0; j < p_.k; ++j) {
      const auto& pair = t_.pairs[chosen_[j]];
      for (std::uint32_t g : pair.ops) {
        const auto v = t_.gl[g].values();
        enc.insert(enc.end(), v.begin(), v.end());
      }
      const auto v = t_.subspaces[pair.sub].basis().values();
      enc.insert(enc.end(), v.begin(), v.end());
    }
    out.append(enc);
  }

  bool admissible(std::uint32_t cand, std::size_t m) {
    ++examined;
    for (std::size_t a = 0; a < m; ++a) {
      if (!t_.compatible(chosen_[a], cand)) return false;
    }
    chosen_[m] = cand;
    return mds_with_last(m);
  }

  void extend(std::size_t m, SearchResult& out) {
    if (m == p_.k) {
      emit(out);
      return;
    }
    if (!t_.compat.empty()) {
      for (std::uint32_t cand : t_.compat[chosen_[0]]) {
        if (admissible(cand, m)) extend(m + 1, out);
      }
      return;
    }
    for (std::uint32_t cand = 0; cand < t_.pairs.size(); ++cand) {
      if (admissible(cand, m)) extend(m + 1, out);
    }
  }

  const PairTables& t_;
  const CodeParams& p_;
  std::vector<std::uint32_t> chosen_;
  mutable Matrix identity_;
};

// Counter-based generator: the stream for a candidate depends only on
// (seed, counter), so results do not depend on how counters are sharded.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // Uniform in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    for (;;) {
      const std::uint64_t x = next();
      if (x < limit) return x % bound;
    }
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t candidate_key(std::uint64_t seed, std::uint64_t counter) {
  SplitMix64 a(seed);
  SplitMix64 b(a.next() ^ counter);
  return b.next();
}

// Basis (as rows of length l^2) of {C : S_i C within S_i for every i in others}.
inline Matrix invariant_operator_space(std::span<const Subspace> fixed, std::size_t l, const Field& f) {
  Matrix constraints(f, 0, l * l);
  for (const Subspace& s : fixed) {
    const Matrix kernel = nullspace(s.basis());  // rows n with S n^T = 0
    for (std::size_t a = 0; a < s.dim(); ++a) {
      for (std::size_t b = 0; b < kernel.rows(); ++b) {
        Matrix row(f, 1, l * l);
        for (std::size_t x = 0; x < l; ++x) {
          for (std::size_t y = 0; y < l; ++y) row(0, x * l + y) = f.mul(s.basis()(a, x), kernel(b, y));
        }
        constraints = vstack(constraints, row);
      }
    }
  }
  if (constraints.rows() == 0) return Matrix::identity(f, l * l);
  return nullspace(constraints);
}

inline std::optional<std::vector<Element>> sample_candidate(const CodeParams& p, std::uint64_t key) {
  SplitMix64 rng(key);
  const Field& f = p.field;
  const std::size_t beta = p.beta();
  std::vector<Subspace> subs;
  for (std::size_t i = 0; i < p.k; ++i) {
    for (int attempt = 0;; ++attempt) {
      if (attempt == 64) return std::nullopt;
      Matrix s(f, beta, p.l);
      for (std::size_t x = 0; x < beta; ++x) {
        for (std::size_t y = 0; y < p.l; ++y) s(x, y) = static_cast<Element>(rng.below(f.order()));
      }
      Subspace sp = span(s);
      if (sp.dim() == beta) {
        subs.push_back(std::move(sp));
        break;
      }
    }
  }
  std::vector<Element> enc;
  for (std::size_t j = 0; j < p.k; ++j) {
    std::vector<Subspace> others;
    for (std::size_t i = 0; i < p.k; ++i) {
      if (i != j) others.push_back(subs[i]);
    }
    const Matrix space = invariant_operator_space(others, p.l, f);
    if (space.rows() == 0) return std::nullopt;
    for (std::size_t u = 1; u < p.r; ++u) {
      std::optional<Matrix> pick;
      for (int attempt = 0; attempt < 16 && !pick; ++attempt) {
        Matrix c(f, p.l, p.l);
        for (std::size_t b = 0; b < space.rows(); ++b) {
          const Element coeff = static_cast<Element>(rng.below(f.order()));
          if (coeff == 0) continue;
          for (std::size_t e = 0; e < p.l * p.l; ++e) {
            c(e / p.l, e % p.l) = f.add(c(e / p.l, e % p.l), f.mul(coeff, space(b, e)));
          }
        }
        if (is_invertible(c)) pick = std::move(c);
      }
      if (!pick) return std::nullopt;
      const auto v = pick->values();
      enc.insert(enc.end(), v.begin(), v.end());
    }
    const auto v = subs[j].basis().values();
    enc.insert(enc.end(), v.begin(), v.end());
  }
  return enc;
}

inline bool candidate_valid(const SearchResult& holder, std::size_t index) {
  const Code code = holder.code(index);
  return mds_check(code).ok && verify_scheme(code, holder.scheme(index)).ok;
}

}  // namespace detail

// Phase-2 size estimate for exhaustive mode: P * D^(k-1), where P counts
// phase-1 pairs and D is the largest number of pairs cross-compatible with
// any single pair; this bounds the number of leaves of the pruned search
// tree. Without a compatibility table it falls back to P^k.
inline std::uint64_t exhaustive_estimate(const detail::PairTables& t, std::size_t k) {
  const std::uint64_t P = t.pairs.size();
  if (t.compat.empty()) return detail::sat_pow(P, k);
  return detail::sat_mul(P, detail::sat_pow(t.max_degree, k - 1));
}

inline SearchResult search_codes(const SearchConfig& cfg) {
  const CodeParams params = cfg.params();
  SearchResult result(params);
  result.mode = cfg.mode;
  const std::size_t workers = std::max<std::size_t>(1, cfg.shards);

  if (cfg.mode == SearchMode::exhaustive) {
    const auto tables = detail::build_pair_tables(cfg.field, cfg.l, cfg.r);
    result.estimate = exhaustive_estimate(*tables, cfg.k);
    if (result.estimate > cfg.cap) {
      throw TooLarge("exhaustive estimate " + std::to_string(result.estimate) + " exceeds cap " +
                     std::to_string(cfg.cap));
    }
    const std::size_t roots = tables->pairs.size();
    std::vector<SearchResult> per_root(roots, SearchResult(params));
    std::vector<std::uint64_t> examined(roots, 0);
    std::atomic<std::size_t> done{0};
    std::mutex progress_mu;
    parallel_for(roots, workers, [&](std::size_t root) {
      detail::Backtracker bt(*tables, params);
      bt.run_root(static_cast<std::uint32_t>(root), per_root[root]);
      examined[root] = bt.examined;
      const std::size_t finished = ++done;
      if (cfg.progress && (finished % std::max<std::size_t>(1, roots / 10) == 0 || finished == roots)) {
        std::lock_guard<std::mutex> lock(progress_mu);
        *cfg.progress << "search: " << finished << "/" << roots << " roots\n";
      }
    });
    for (std::size_t root = 0; root < roots; ++root) {
      result.append(per_root[root]);
      result.examined += examined[root];
    }
  } else {
    result.estimate = cfg.budget;
    std::vector<std::optional<std::vector<Element>>> hits(cfg.budget);
    parallel_for(cfg.budget, workers, [&](std::size_t counter) {
      auto enc = detail::sample_candidate(params, detail::candidate_key(cfg.seed, counter));
      if (!enc) return;
      SearchResult probe(params);
      probe.append(*enc);
      if (detail::candidate_valid(probe, 0)) hits[counter] = std::move(enc);
    });
    std::vector<std::vector<Element>> found;
    for (auto& hit : hits) {
      if (hit) found.push_back(std::move(*hit));
    }
    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end()), found.end());
    for (const auto& enc : found) result.append(enc);
    result.examined = cfg.budget;
    if (cfg.progress) *cfg.progress << "search: " << cfg.budget << " random candidates drawn\n";
  }

  // Every emitted pair is re-verified against the independent checkers.
  for (std::size_t i = 0; i < result.size(); ++i) {
    if (!detail::candidate_valid(result, i)) throw Error("search emitted an invalid candidate");
  }
  return result;
}

struct FeasibilityEntry {
  std::size_t k = 0;
  std::size_t found = 0;
  std::uint64_t examined = 0;
  bool exhaustive = false;       // only exhaustive rows support nonexistence claims
  bool beyond_quadratic = false;  // k exceeds (l^2 - 1)/(r - 1)
};

struct FeasibilityReport {
  std::size_t k_star = 0;  // largest k with a found instance; a field-relative lower bound
  std::vector<FeasibilityEntry> per_k;
};

inline FeasibilityReport max_feasible_k(const Field& field, std::size_t l, std::size_t r, std::size_t k_cap,
                                        std::uint64_t budget, std::uint64_t seed, std::size_t shards = 1,
                                        std::uint64_t cap = kExhaustiveCap) {
  if (r < 1 || l % r != 0) throw ParamError("r must divide l");
  FeasibilityReport report;
  const std::size_t quadratic = r >= 2 ? (l * l - 1) / (r - 1) : std::numeric_limits<std::size_t>::max();
  for (std::size_t k = 1; k <= k_cap; ++k) {
    SearchConfig cfg;
    cfg.field = field;
    cfg.l = l;
    cfg.r = r;
    cfg.k = k;
    cfg.seed = seed;
    cfg.budget = budget;
    cfg.shards = shards;
    cfg.cap = cap;
    SearchResult res;
    try {
      res = search_codes(cfg);
    } catch (const TooLarge&) {
      cfg.mode = SearchMode::random;
      res = search_codes(cfg);
    }
    FeasibilityEntry e;
    e.k = k;
    e.found = res.size();
    e.examined = res.examined;
    e.exhaustive = cfg.mode == SearchMode::exhaustive;
    e.beyond_quadratic = k > quadratic;
    if (e.found > 0) report.k_star = k;
    report.per_k.push_back(e);
  }
  return report;
}

}  // namespace msrlab
