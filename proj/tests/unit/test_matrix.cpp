#include <gtest/gtest.h>

#include <random>

#include "msrlab/matrix.hpp"
#include "oracles.hpp"
#include "random_objects.hpp"

using msrlab::Element;
using msrlab::Field;
using msrlab::Matrix;

TEST(Matrix, MultiplyExamples) {
  const Field f5(5), f2(2);
  EXPECT_EQ(Matrix(f5, 2, 2, {1, 1, 0, 1}) * Matrix(f5, 2, 2, {1, 1, 0, 1}), Matrix(f5, 2, 2, {1, 2, 0, 1}));
  EXPECT_EQ(Matrix(f2, 2, 2, {1, 1, 0, 1}) * Matrix(f2, 2, 2, {1, 1, 0, 1}), Matrix::identity(f2, 2));
  std::mt19937_64 rng(1);
  const Matrix a = gen::matrix(f5, 3, 4, rng);
  EXPECT_EQ(a * Matrix::identity(f5, 4), a);
}

TEST(Matrix, MultiplyErrors) {
  const Field f5(5), f7(7);
  EXPECT_THROW(mat_mul(Matrix(f5, 2, 3), Matrix(f5, 2, 3)), msrlab::ShapeError);
  EXPECT_THROW(mat_mul(Matrix(f5, 2, 2), Matrix(f7, 2, 2)), msrlab::FieldError);
  EXPECT_THROW(Matrix(f5, 1, 2, {1, 5}), msrlab::FieldError);
}

TEST(Matrix, RankExamples) {
  const Field f5(5), f3(3);
  EXPECT_EQ(mat_rank(Matrix::identity(f5, 4)), 4u);
  EXPECT_EQ(mat_rank(Matrix(f5, 2, 2, {1, 2, 2, 4})), 1u);
  EXPECT_EQ(mat_rank(Matrix(f3, 2, 2, {1, 2, 2, 1})), 1u);
  EXPECT_EQ(mat_rank(Matrix(f5, 0, 3)), 0u);
}

TEST(Matrix, InverseExamples) {
  const Field f5(5), f2(2);
  const Matrix swap(f5, 2, 2, {0, 1, 1, 0});
  EXPECT_EQ(mat_inverse(swap), swap);
  const Matrix shear(f2, 2, 2, {1, 1, 0, 1});
  EXPECT_EQ(mat_inverse(shear), shear);
  EXPECT_THROW(mat_inverse(Matrix(f5, 2, 2, {1, 1, 1, 1})), msrlab::SingularError);
  EXPECT_THROW(mat_inverse(Matrix(f5, 2, 3)), msrlab::ShapeError);
}

TEST(Matrix, InverseIsTwoSided) {
  std::mt19937_64 rng(3);
  for (std::uint32_t p : {2u, 3u, 7u}) {
    const Field f(p);
    for (int trial = 0; trial < 500; ++trial) {
      const Matrix a = gen::matrix(f, 4, 4, rng);
      if (!is_invertible(a)) {
        EXPECT_THROW(mat_inverse(a), msrlab::SingularError);
        continue;
      }
      const Matrix b = mat_inverse(a);
      EXPECT_EQ(a * b, Matrix::identity(f, 4));
      EXPECT_EQ(b * a, Matrix::identity(f, 4));
    }
  }
}

TEST(Matrix, Vectorize) {
  const Field f5(5);
  EXPECT_EQ(vectorize(Matrix(f5, 2, 2, {1, 2, 3, 4})), Matrix(f5, 1, 4, {1, 2, 3, 4}));
  EXPECT_TRUE(vectorize(Matrix(f5, 3, 3)).is_zero());
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix a = gen::matrix(f5, 3, 3, rng), b = gen::matrix(f5, 3, 3, rng);
    EXPECT_EQ(vectorize(a + b), vectorize(a) + vectorize(b));
    EXPECT_EQ(vectorize(mat_scale(3, a)), mat_scale(3, vectorize(a)));
  }
}

// rank(A) = log_q |row space of A| for every matrix up to 3x3 over GF(2), GF(3).
TEST(Matrix, RankMatchesRowSpaceEnumeration) {
  for (std::uint32_t q : {2u, 3u}) {
    const Field f(q);
    const oracle::NaiveField ref{q, 1, 0};
    for (std::size_t rows = 1; rows <= 3; ++rows) {
      for (std::size_t cols = 1; cols <= 3; ++cols) {
        std::vector<Element> entries(rows * cols, 0);
        while (true) {
          const Matrix m(f, rows, cols, entries);
          std::vector<oracle::Vec> vrows;
          for (std::size_t r = 0; r < rows; ++r) vrows.emplace_back(entries.begin() + r * cols, entries.begin() + (r + 1) * cols);
          const auto members = oracle::enumerate_span(ref, vrows, cols);
          ASSERT_EQ(mat_rank(m), oracle::log_q(members.size(), q)) << m;
          std::size_t pos = 0;
          while (pos < entries.size() && ++entries[pos] == q) entries[pos++] = 0;
          if (pos == entries.size()) break;
        }
      }
    }
  }
}

TEST(Matrix, RrefIsCanonical) {
  const Field f7(7);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix a = gen::matrix(f7, 3, 5, rng);
    const Matrix mix = gen::matrix(f7, 3, 3, rng);
    if (!is_invertible(mix)) continue;
    // Row operations do not change the reduced form.
    EXPECT_EQ(rref(a).reduced, rref(mix * a).reduced);
  }
}

TEST(Matrix, SolversAndNullspace) {
  const Field f5(5);
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix a = gen::matrix(f5, 3, 4, rng);
    const Matrix ns = nullspace(a);
    EXPECT_EQ(ns.rows() + mat_rank(a), 4u);
    if (ns.rows()) {
      EXPECT_TRUE((a * transpose(ns)).is_zero());
    }

    const Matrix x = gen::matrix(f5, 4, 2, rng);
    const auto solved = try_solve(a, a * x);
    ASSERT_TRUE(solved.has_value());
    EXPECT_EQ(a * *solved, a * x);

    const Matrix s = gen::matrix(f5, 2, 4, rng);
    const Matrix left = gen::matrix(f5, 3, 2, rng);
    const auto xl = try_solve_left(s, left * s);
    ASSERT_TRUE(xl.has_value());
    EXPECT_EQ(*xl * s, left * s);
  }
  // x + y = 1 and x + y = 2 is inconsistent.
  EXPECT_FALSE(try_solve(Matrix(f5, 2, 2, {1, 1, 1, 1}), Matrix(f5, 2, 1, {1, 2})).has_value());
}

TEST(Matrix, Stacking) {
  const Field f3(3);
  const Matrix a(f3, 1, 2, {1, 2}), b(f3, 1, 2, {2, 0});
  EXPECT_EQ(vstack(a, b), Matrix(f3, 2, 2, {1, 2, 2, 0}));
  EXPECT_EQ(hstack(a, b), Matrix(f3, 1, 4, {1, 2, 2, 0}));
  EXPECT_EQ(vstack(Matrix(), a), a);
  EXPECT_THROW(vstack(a, Matrix(f3, 1, 3)), msrlab::ShapeError);
  EXPECT_EQ(submatrix(Matrix(f3, 2, 2, {1, 2, 2, 0}), 1, 0, 1, 2), b);
}
