#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "msrlab/field.hpp"
#include "oracles.hpp"

using msrlab::Element;
using msrlab::Field;

namespace {

std::vector<Field> configured_fields() {
  std::vector<Field> fields;
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) fields.emplace_back(p);
  for (unsigned m = 2; m <= 8; ++m) fields.push_back(Field::binary(m, Field::default_binary_modulus(m)));
  return fields;
}

oracle::NaiveField naive(const Field& f) { return {f.characteristic(), f.degree(), f.modulus()}; }

}  // namespace

TEST(Field, InverseExamples) {
  EXPECT_EQ(msrlab::field_inverse(2, Field(5)), 3u);
  const Field gf4(2, 2, 0b111);
  EXPECT_EQ(msrlab::field_inverse(2, gf4), 3u);
  EXPECT_THROW(msrlab::field_inverse(0, Field(5)), msrlab::DivisionByZero);
}

TEST(Field, RejectsBadDescriptors) {
  EXPECT_THROW(Field(4), msrlab::FieldError);
  EXPECT_THROW(Field(1), msrlab::FieldError);
  EXPECT_THROW(Field(2, 2, 0b101), msrlab::FieldError);  // x^2 + 1 = (x + 1)^2
  EXPECT_THROW(Field(2, 3, 0b111), msrlab::FieldError);  // wrong degree
  EXPECT_THROW(Field(3, 2, 0b111), msrlab::FieldError);  // odd extension
  EXPECT_THROW(Field(5, 1, 7), msrlab::FieldError);
  EXPECT_NO_THROW(Field(2147483647));
}

TEST(Field, DefaultModuli) {
  EXPECT_EQ(Field::default_binary_modulus(2), 0x7u);
  EXPECT_EQ(Field::default_binary_modulus(3), 0xbu);
  EXPECT_EQ(Field::default_binary_modulus(4), 0x13u);
  EXPECT_EQ(Field::default_binary_modulus(8), 0x11bu);
}

TEST(Field, AxiomsOnRandomTriples) {
  std::mt19937_64 rng(7);
  for (const Field& f : configured_fields()) {
    std::uniform_int_distribution<Element> pick(0, f.order() - 1);
    for (int trial = 0; trial < 10000; ++trial) {
      const Element a = pick(rng), b = pick(rng), c = pick(rng);
      ASSERT_EQ(f.add(f.add(a, b), c), f.add(a, f.add(b, c))) << f.describe();
      ASSERT_EQ(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c))) << f.describe();
      ASSERT_EQ(f.add(a, b), f.add(b, a));
      ASSERT_EQ(f.mul(a, b), f.mul(b, a));
      ASSERT_EQ(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c))) << f.describe();
      ASSERT_EQ(f.add(a, f.neg(a)), 0u);
      ASSERT_EQ(f.sub(f.add(a, b), b), a);
      if (a != 0) {
        ASSERT_EQ(f.mul(a, f.inv(a)), 1u) << f.describe();
        ASSERT_EQ(f.mul(f.div(b, a), a), b);
      }
    }
  }
}

TEST(Field, MultiplicationMatchesSchoolbook) {
  for (const Field& f : configured_fields()) {
    const auto ref = naive(f);
    for (Element a = 0; a < f.order(); ++a) {
      for (Element b = 0; b < f.order(); ++b) ASSERT_EQ(f.mul(a, b), ref.mul(a, b)) << f.describe();
    }
  }
}

TEST(Field, Fermat) {
  for (const Field& f : configured_fields()) {
    for (Element x = 1; x < f.order(); ++x) ASSERT_EQ(f.pow(x, f.order() - 1), 1u) << f.describe() << " x=" << x;
  }
}

TEST(Field, LargePrimeArithmetic) {
  const Field f(2147483647);
  const Element a = 2147483646;
  EXPECT_EQ(f.mul(a, a), 1u);
  EXPECT_EQ(f.mul(f.inv(123456789), 123456789), 1u);
}

TEST(Field, EqualityIsByDescriptor) {
  EXPECT_EQ(Field(5), Field(5));
  EXPECT_NE(Field(5), Field(7));
  EXPECT_NE(Field(2, 4, 0x13), Field(2, 4, 0x19));
}
