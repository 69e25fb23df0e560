#pragma once

// Valid (code, scheme) pairs produced by the search module. The exhaustive
// sets are the complete populations at l = r = 2; the random sets add l = 4
// pairs so that multi-block partitions occur.

#include <string>
#include <vector>

#include "msrlab/search.hpp"

namespace fixtures {

struct FixtureSet {
  std::string label;
  msrlab::SearchResult result;
};

inline std::vector<FixtureSet> build(const std::vector<msrlab::SearchConfig>& configs) {
  std::vector<FixtureSet> sets;
  for (const auto& cfg : configs) {
    const auto p = cfg.params();
    sets.push_back({p.field.describe() + " l=" + std::to_string(p.l) + " r=" + std::to_string(p.r) +
                        " k=" + std::to_string(p.k),
                    msrlab::search_codes(cfg)});
  }
  return sets;
}

inline msrlab::SearchConfig exhaustive_config(std::uint32_t q, std::size_t l, std::size_t r, std::size_t k) {
  msrlab::SearchConfig cfg;
  cfg.field = msrlab::Field(q);
  cfg.l = l;
  cfg.r = r;
  cfg.k = k;
  cfg.shards = msrlab::default_threads();
  return cfg;
}

inline msrlab::SearchConfig random_config(std::uint32_t q, std::size_t l, std::size_t r, std::size_t k,
                                          std::uint64_t budget, std::uint64_t seed) {
  msrlab::SearchConfig cfg = exhaustive_config(q, l, r, k);
  cfg.mode = msrlab::SearchMode::random;
  cfg.budget = budget;
  cfg.seed = seed;
  return cfg;
}

// GF(2), GF(3), GF(5) with l = r = 2 and k = 1..3, every canonical pair.
inline const std::vector<FixtureSet>& exhaustive_sets() {
  static const std::vector<FixtureSet> sets = [] {
    std::vector<msrlab::SearchConfig> configs;
    for (std::uint32_t q : {2u, 3u, 5u}) {
      for (std::size_t k = 1; k <= 3; ++k) configs.push_back(exhaustive_config(q, 2, 2, k));
    }
    return build(configs);
  }();
  return sets;
}

// l = 4, r = 2 over GF(5) and GF(7), k = 2..5, sampled.
inline const std::vector<FixtureSet>& random_sets(std::uint64_t budget = 4000) {
  static const std::vector<FixtureSet> sets = [budget] {
    std::vector<msrlab::SearchConfig> configs;
    for (std::uint32_t q : {5u, 7u}) {
      for (std::size_t k = 2; k <= 5; ++k) configs.push_back(random_config(q, 4, 2, k, budget, 2024 + k));
    }
    return build(configs);
  }();
  return sets;
}

inline std::vector<const FixtureSet*> all_sets() {
  std::vector<const FixtureSet*> out;
  for (const auto& s : exhaustive_sets()) out.push_back(&s);
  for (const auto& s : random_sets()) out.push_back(&s);
  return out;
}

}  // namespace fixtures
