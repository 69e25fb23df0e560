#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "msrlab/search.hpp"
#include "random_objects.hpp"

using msrlab::Code;
using msrlab::CodeParams;
using msrlab::Element;
using msrlab::Field;
using msrlab::Matrix;
using msrlab::RepairScheme;
using msrlab::SearchConfig;
using msrlab::SearchMode;

namespace {

std::vector<std::vector<Element>> encodings(const msrlab::SearchResult& r) {
  std::vector<std::vector<Element>> out;
  for (std::size_t i = 0; i < r.size(); ++i) out.emplace_back(r.encoding(i).begin(), r.encoding(i).end());
  return out;
}

// Every normalized code with C_{2,j} in GL(2, q) and one-dimensional S_i in
// reduced form, checked directly; l = r = 2.
std::set<std::vector<Element>> brute_force(std::uint32_t q, std::size_t k) {
  const Field f(q);
  std::vector<Matrix> gl;
  std::vector<Element> e(4, 0);
  while (true) {
    const Matrix m(f, 2, 2, e);
    if (is_invertible(m)) gl.push_back(m);
    std::size_t pos = 0;
    while (pos < 4 && ++e[pos] == q) e[pos++] = 0;
    if (pos == 4) break;
  }
  std::vector<Matrix> lines = {Matrix(f, 1, 2, {0, 1})};
  for (Element a = 0; a < q; ++a) lines.push_back(Matrix(f, 1, 2, {1, a}));

  const CodeParams p = CodeParams::make(f, k + 2, k, 2);
  const std::size_t per_node = gl.size() * lines.size();
  std::set<std::vector<Element>> found;
  std::vector<std::size_t> choice(k, 0);
  while (true) {
    std::vector<Matrix> enc(k, Matrix::identity(f, 2));
    std::vector<Matrix> s;
    std::vector<Element> flat;
    for (std::size_t j = 0; j < k; ++j) {
      const Matrix& c = gl[choice[j] / lines.size()];
      const Matrix& line = lines[choice[j] % lines.size()];
      enc.push_back(c);
      s.push_back(line);
      flat.insert(flat.end(), c.values().begin(), c.values().end());
      flat.insert(flat.end(), line.values().begin(), line.values().end());
    }
    const Code code(p, enc);
    if (msrlab::mds_check(code).ok && verify_scheme(code, RepairScheme::constant(p, s)).ok) found.insert(flat);
    std::size_t pos = 0;
    while (pos < k && ++choice[pos] == per_node) choice[pos++] = 0;
    if (pos == k) break;
  }
  return found;
}

}  // namespace

TEST(Search, SwapWitnessIsFound) {
  const auto r = msrlab::search_codes(fixtures::exhaustive_config(2, 2, 2, 1));
  ASSERT_FALSE(r.empty());
  const std::vector<Element> swap_witness = {0, 1, 1, 0, 1, 0};
  const auto enc = encodings(r);
  EXPECT_NE(std::find(enc.begin(), enc.end(), swap_witness), enc.end());
}

TEST(Search, MatchesBruteForce) {
  for (auto [q, k] : std::vector<std::pair<std::uint32_t, std::size_t>>{{2, 1}, {2, 2}, {2, 3}, {2, 4}, {3, 1}, {3, 2}}) {
    const auto r = msrlab::search_codes(fixtures::exhaustive_config(q, 2, 2, k));
    const auto enc = encodings(r);
    const auto oracle = brute_force(q, k);
    EXPECT_EQ(std::set(enc.begin(), enc.end()), oracle) << "q=" << q << " k=" << k;
    EXPECT_EQ(enc.size(), oracle.size());
  }
}

TEST(Search, KnownPopulationSizes) {
  const std::map<std::pair<std::uint32_t, std::size_t>, std::size_t> expected = {
      {{2, 1}, 12}, {{2, 2}, 6}, {{2, 3}, 0}, {{2, 4}, 0}, {{3, 1}, 144}, {{3, 2}, 672}, {{3, 3}, 48}, {{3, 4}, 0}};
  for (const auto& [key, count] : expected) {
    EXPECT_EQ(msrlab::search_codes(fixtures::exhaustive_config(key.first, 2, 2, key.second)).size(), count)
        << "q=" << key.first << " k=" << key.second;
  }
}

TEST(Search, OutputIsSortedAndShardIndependent) {
  SearchConfig one = fixtures::exhaustive_config(3, 2, 2, 2);
  one.shards = 1;
  SearchConfig many = one;
  many.shards = 3;
  const auto a = encodings(msrlab::search_codes(one));
  const auto b = encodings(msrlab::search_codes(many));
  EXPECT_EQ(a, b);
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));

  SearchConfig rnd = fixtures::random_config(5, 4, 2, 3, 600, 99);
  rnd.shards = 1;
  SearchConfig rnd4 = rnd;
  rnd4.shards = 4;
  const auto c = encodings(msrlab::search_codes(rnd));
  EXPECT_EQ(c, encodings(msrlab::search_codes(rnd4)));
  EXPECT_TRUE(std::is_sorted(c.begin(), c.end()));
  EXPECT_FALSE(c.empty());
  rnd.seed = 100;
  EXPECT_NE(c, encodings(msrlab::search_codes(rnd)));
}

TEST(Search, EmittedPairsAreCanonicalAndValid) {
  for (const auto* set : fixtures::all_sets()) {
    const auto& r = set->result;
    for (std::size_t i = 0; i < r.size(); i += std::max<std::size_t>(1, r.size() / 100)) {
      const Code code = r.code(i);
      const RepairScheme scheme = r.scheme(i);
      EXPECT_TRUE(code.normalized());
      EXPECT_TRUE(msrlab::mds_check(code).ok) << set->label;
      EXPECT_TRUE(verify_scheme(code, scheme).ok) << set->label;
      for (std::size_t j = 0; j < code.params().k; ++j) {
        EXPECT_EQ(msrlab::span(scheme.constant_matrix(j)).basis(), scheme.constant_matrix(j));
      }
    }
  }
}

// Disguise a found pair (row-basis change of S_i, un-normalize the code) and
// canonicalize it back: the result is valid and equal to the original.
TEST(Search, CanonicalizationPreservesValidity) {
  std::mt19937_64 rng(67);
  const auto& r = fixtures::random_sets()[1].result;  // GF(5), l = 4, k = 3
  ASSERT_FALSE(r.empty());
  for (std::size_t i = 0; i < r.size(); i += std::max<std::size_t>(1, r.size() / 40)) {
    const Code code = r.code(i);
    const RepairScheme scheme = r.scheme(i);
    const CodeParams& p = code.params();
    std::vector<Matrix> basis, enc;
    for (std::size_t j = 0; j < p.k; ++j) basis.push_back(gen::invertible(p.field, p.l, rng));
    for (std::size_t u = 0; u < p.r; ++u) {
      for (std::size_t j = 0; j < p.k; ++j) enc.push_back(code.at(u, j) * basis[j]);
    }
    const Code disguised(p, enc);
    std::vector<Matrix> rows;
    for (std::size_t j = 0; j < p.k; ++j) {
      rows.push_back(gen::invertible(p.field, p.beta(), rng) * scheme.constant_matrix(j));
    }
    const Code back = msrlab::normalize(disguised);
    std::vector<Matrix> canon;
    for (const auto& s : rows) canon.push_back(msrlab::span(s).basis());
    const RepairScheme canon_scheme = RepairScheme::constant(p, canon);
    EXPECT_EQ(back, code);
    EXPECT_EQ(canon_scheme, scheme);
    EXPECT_TRUE(verify_scheme(back, canon_scheme).ok);
    EXPECT_TRUE(verify_scheme(back, RepairScheme::constant(p, rows)).ok);
  }
}

TEST(Search, TooLarge) {
  EXPECT_THROW(msrlab::search_codes(fixtures::exhaustive_config(5, 2, 2, 4)), msrlab::TooLarge);
  SearchConfig small = fixtures::exhaustive_config(3, 2, 2, 2);
  small.cap = 10;
  EXPECT_THROW(msrlab::search_codes(small), msrlab::TooLarge);
}

TEST(MaxFeasibleK, BinaryScalar) {
  const auto report = msrlab::max_feasible_k(Field(2), 2, 2, 4, 1000, 1);
  EXPECT_LE(report.k_star, 3u);
  ASSERT_EQ(report.per_k.size(), 4u);
  EXPECT_TRUE(report.per_k[3].exhaustive);
  EXPECT_EQ(report.per_k[3].found, 0u);
  EXPECT_EQ(report.per_k[0].found, 12u);
}

TEST(MaxFeasibleK, LengthOneAlwaysFound) {
  for (std::uint32_t q : {2u, 3u, 5u}) {
    for (std::size_t l : {2u, 3u}) EXPECT_EQ(msrlab::max_feasible_k(Field(q), l, l, 1, 1000, 1).k_star, 1u);
  }
}

TEST(MaxFeasibleK, Ternary) {
  const auto report = msrlab::max_feasible_k(Field(3), 2, 2, 4, 1000, 1);
  EXPECT_EQ(report.k_star, 3u);
  const std::vector<std::size_t> counts = {144, 672, 48, 0};
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_TRUE(report.per_k[k].exhaustive);
    EXPECT_EQ(report.per_k[k].found, counts[k]);
  }
  EXPECT_THROW(msrlab::max_feasible_k(Field(3), 3, 2, 1, 10, 1), msrlab::ParamError);
}
