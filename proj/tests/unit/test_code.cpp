#include <gtest/gtest.h>

#include <random>
#include <set>

#include "msrlab/code.hpp"
#include "random_objects.hpp"

using msrlab::Code;
using msrlab::CodeParams;
using msrlab::Element;
using msrlab::Field;
using msrlab::Matrix;

namespace {

// Blocks a*I of order r, so that r divides l.
Code scalar_code(const Field& f, std::size_t k, std::size_t r, std::initializer_list<Element> grid) {
  const CodeParams p = CodeParams::make(f, k + r, k, r);
  std::vector<Matrix> enc;
  for (Element e : grid) {
    Matrix m(f, r, r);
    for (std::size_t x = 0; x < r; ++x) m(x, x) = e;
    enc.push_back(std::move(m));
  }
  return Code(p, std::move(enc));
}

// Decodable from every k-subset, checked with erasure_decode on random data.
bool decodes_everywhere(const Code& code, std::mt19937_64& rng) {
  const CodeParams& p = code.params();
  const auto data = gen::data(p, rng);
  const auto stored = msrlab::node_contents(code, data);
  auto survivors = msrlab::detail::first_combination(p.k);
  do {
    std::vector<Matrix> kept;
    for (std::size_t v : survivors) kept.push_back(stored[v]);
    try {
      if (msrlab::erasure_decode(code, survivors, kept) != data) return false;
    } catch (const msrlab::SingularSystem&) {
      return false;
    }
  } while (msrlab::detail::next_combination(survivors, p.n));
  return true;
}

// Injectivity of data -> (contents of every k-subset), by enumerating all data.
bool injective_everywhere(const Code& code) {
  const CodeParams& p = code.params();
  const std::size_t symbols = p.k * p.l;
  const std::uint32_t q = p.field.order();
  auto survivors = msrlab::detail::first_combination(p.k);
  do {
    std::set<std::vector<Element>> images;
    std::vector<Element> flat(symbols, 0);
    while (true) {
      std::vector<Matrix> data;
      for (std::size_t j = 0; j < p.k; ++j) {
        data.emplace_back(p.field, p.l, 1, std::span<const Element>(flat.data() + j * p.l, p.l));
      }
      const auto stored = msrlab::node_contents(code, data);
      std::vector<Element> image;
      for (std::size_t v : survivors) image.insert(image.end(), stored[v].values().begin(), stored[v].values().end());
      if (!images.insert(image).second) return false;
      std::size_t pos = 0;
      while (pos < flat.size() && ++flat[pos] == q) flat[pos++] = 0;
      if (pos == flat.size()) break;
    }
  } while (msrlab::detail::next_combination(survivors, p.n));
  return true;
}

}  // namespace

TEST(CodeParams, Derived) {
  const CodeParams p = CodeParams::make(Field(5), 6, 4, 4);
  EXPECT_EQ(p.r, 2u);
  EXPECT_EQ(p.beta(), 2u);
  EXPECT_EQ(p.alpha(), 4u);
  EXPECT_EQ(p.file_size(), 16u);
  EXPECT_EQ(p.d(), 5u);
  EXPECT_THROW(CodeParams::make(Field(5), 5, 2, 4), msrlab::ParamError);
  EXPECT_THROW(CodeParams::make(Field(5), 2, 2, 4), msrlab::ParamError);
}

TEST(Code, LoadRejectsSingularMatrices) {
  const Field f(5);
  const CodeParams p = CodeParams::make(f, 2, 1, 2);
  EXPECT_THROW(Code(p, {Matrix(f, 2, 2, {1, 1, 1, 1})}), msrlab::SingularError);
  EXPECT_THROW(Code(p, {}), msrlab::ShapeError);
}

TEST(Code, EncodeExamples) {
  const Field f(5);
  const Code code(CodeParams::make(f, 2, 1, 2), {Matrix::identity(f, 2)});
  const auto parity = msrlab::encode(code, std::vector<Matrix>{Matrix(f, 2, 1, {1, 2})});
  ASSERT_EQ(parity.size(), 1u);
  EXPECT_EQ(parity[0], Matrix(f, 2, 1, {1, 2}));

  std::mt19937_64 rng(31);
  const CodeParams p = CodeParams::make(f, 5, 3, 2);
  const Code c = gen::code(p, rng);
  std::vector<Matrix> zero(3, Matrix(f, 2, 1));
  for (const auto& w : msrlab::encode(c, zero)) EXPECT_TRUE(w.is_zero());
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = gen::data(p, rng), b = gen::data(p, rng);
    std::vector<Matrix> ab;
    for (std::size_t j = 0; j < 3; ++j) ab.push_back(a[j] + b[j]);
    const auto ea = msrlab::encode(c, a), eb = msrlab::encode(c, b), eab = msrlab::encode(c, ab);
    for (std::size_t u = 0; u < p.r; ++u) EXPECT_EQ(eab[u], ea[u] + eb[u]);
  }
  EXPECT_THROW(msrlab::encode(c, std::vector<Matrix>(2, Matrix(f, 2, 1))), msrlab::ShapeError);
}

TEST(Code, MdsExamples) {
  const Field f(5);
  const Code good = scalar_code(f, 2, 2, {1, 1, 1, 2});
  EXPECT_TRUE(msrlab::mds_check(good).ok);
  EXPECT_TRUE(injective_everywhere(good));

  const Code bad = scalar_code(f, 2, 2, {1, 1, 2, 2});
  const auto report = msrlab::mds_check(bad);
  ASSERT_FALSE(report.ok);
  EXPECT_EQ(report.witness->parity_rows, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(report.witness->columns, (std::vector<std::size_t>{0, 1}));

  std::mt19937_64 rng(37);
  const Code k1 = gen::code(CodeParams::make(f, 3, 1, 2), rng);
  EXPECT_TRUE(msrlab::mds_check(k1).ok);
}

TEST(Code, ErasureDecodeExamples) {
  const Field f(5);
  const Code good = scalar_code(f, 2, 2, {1, 1, 1, 2});
  for (Element a = 0; a < 5; ++a) {
    for (Element b = 0; b < 5; ++b) {
      const std::vector<Matrix> data = {Matrix(f, 2, 1, {a, b}), Matrix(f, 2, 1, {b, a})};
      const auto stored = msrlab::node_contents(good, data);
      auto survivors = msrlab::detail::first_combination(2);
      do {
        const std::vector<Matrix> kept = {stored[survivors[0]], stored[survivors[1]]};
        ASSERT_EQ(msrlab::erasure_decode(good, survivors, kept), data);
      } while (msrlab::detail::next_combination(survivors, 4));
    }
  }

  const Code bad = scalar_code(f, 2, 2, {1, 1, 2, 2});
  const std::vector<Matrix> data = {Matrix(f, 2, 1, {1, 4}), Matrix(f, 2, 1, {3, 0})};
  const auto stored = msrlab::node_contents(bad, data);
  const std::vector<std::size_t> clash = {2, 3};
  EXPECT_THROW(msrlab::erasure_decode(bad, clash, std::vector<Matrix>{stored[2], stored[3]}), msrlab::SingularSystem);
  const std::vector<std::size_t> systematic = {0, 1};
  EXPECT_EQ(msrlab::erasure_decode(bad, systematic, std::vector<Matrix>{stored[0], stored[1]}), data);
}

TEST(Code, MdsAgreesWithDecodeAndInjectivity) {
  std::mt19937_64 rng(41);
  for (std::uint32_t q : {2u, 3u}) {
    const Field f(q);
    for (int trial = 0; trial < 150; ++trial) {
      const std::size_t k = 1 + trial % 3;
      const std::size_t r = 1 + (trial / 3) % 2;
      const Code code = gen::code(CodeParams::make(f, k + r, k, 2), rng, trial % 2 == 0);
      const bool mds = msrlab::mds_check(code).ok;
      ASSERT_EQ(mds, decodes_everywhere(code, rng));
      if (q == 2 || k <= 2) {
        ASSERT_EQ(mds, injective_everywhere(code));
      }
    }
  }
}

TEST(Code, Normalize) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const Field f(trial % 2 ? 3 : 7);
    const CodeParams p = CodeParams::make(f, 5, 3, 2);
    const Code code = gen::code(p, rng);
    const Code norm = msrlab::normalize(code);
    EXPECT_TRUE(norm.normalized());
    EXPECT_EQ(msrlab::normalize(norm), norm);
    EXPECT_EQ(msrlab::mds_check(code).ok, msrlab::mds_check(norm).ok);

    // W'_j = C_{1,j} W_j gives the same parities.
    const auto data = gen::data(p, rng);
    std::vector<Matrix> moved;
    for (std::size_t j = 0; j < p.k; ++j) moved.push_back(code.at(0, j) * data[j]);
    EXPECT_EQ(msrlab::encode(norm, moved), msrlab::encode(code, data));
  }
}
