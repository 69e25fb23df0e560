#pragma once

// Exact arithmetic over GF(p) (p prime, p < 2^31) and GF(2^m) (m <= 16).
//
// Elements are canonical integers in [0, q). For GF(2^m) an element packs
// the polynomial coefficients, bit i holding the coefficient of x^i, and the
// modulus uses the same packing including its leading term (x^2+x+1 = 0x7).

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "msrlab/errors.hpp"

namespace msrlab {

using Element = std::uint32_t;

namespace detail {

inline bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  if (p % 2 == 0) return p == 2;
  for (std::uint64_t d = 3; d * d <= p; d += 2) {
    if (p % d == 0) return false;
  }
  return true;
}

inline int poly_degree(std::uint32_t a) {
  int d = -1;
  while (a) {
    ++d;
    a >>= 1;
  }
  return d;
}

// Remainder of a carry-less division a mod b over GF(2).
inline std::uint32_t poly_mod(std::uint32_t a, std::uint32_t b) {
  const int db = poly_degree(b);
  for (int da = poly_degree(a); da >= db; da = poly_degree(a)) {
    a ^= b << (da - db);
  }
  return a;
}

inline std::uint32_t poly_mulmod(std::uint32_t a, std::uint32_t b, std::uint32_t modulus, unsigned m) {
  std::uint32_t acc = 0;
  while (b) {
    if (b & 1u) acc ^= a;
    b >>= 1;
    a <<= 1;
    if (a & (1u << m)) a ^= modulus;
  }
  return acc;
}

inline bool poly_irreducible(std::uint32_t f) {
  const int d = poly_degree(f);
  if (d < 1) return false;
  for (std::uint32_t g = 2; poly_degree(g) <= d / 2; ++g) {
    if (poly_mod(f, g) == 0) return false;
  }
  return true;
}

struct BinaryTables {
  std::vector<std::uint32_t> exp;  // length 2(q-1), exp[i] = g^i
  std::vector<std::uint32_t> log;  // length q, log[0] unused
};

inline const BinaryTables* binary_tables(unsigned m, std::uint32_t modulus) {
  // Tables are interned for the process lifetime so Field stays a trivially
  // copyable value.
  static std::mutex mu;
  static auto* registry = new std::map<std::pair<unsigned, std::uint32_t>, std::unique_ptr<BinaryTables>>();
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = (*registry)[{m, modulus}];
  if (slot) return slot.get();

  const std::uint32_t q = 1u << m;
  const std::uint32_t order = q - 1;
  auto tables = std::make_unique<BinaryTables>();
  tables->exp.assign(2 * static_cast<std::size_t>(order), 0);
  tables->log.assign(q, 0);
  for (std::uint32_t g = (m == 1 ? 1 : 2); g < q; ++g) {
    std::uint32_t x = 1;
    std::uint32_t i = 0;
    for (; i < order; ++i) {
      tables->exp[i] = x;
      x = poly_mulmod(x, g, modulus, m);
      if (x == 1) break;
    }
    if (i + 1 == order) break;
  }
  for (std::uint32_t i = 0; i < order; ++i) {
    tables->exp[i + order] = tables->exp[i];
    tables->log[tables->exp[i]] = i;
  }
  slot = std::move(tables);
  return slot.get();
}

}  // namespace detail

class Field {
 public:
  // GF(2).
  Field() : Field(2) {}

  // GF(p^m). The modulus is required iff m > 1; only p = 2 supports m > 1.
  explicit Field(std::uint64_t p, unsigned m = 1, std::uint32_t modulus = 0) {
    if (!detail::is_prime(p)) throw FieldError("characteristic " + std::to_string(p) + " is not prime");
    if (m < 1) throw FieldError("degree must be >= 1");
    if (m == 1) {
      if (p >= (1ull << 31)) throw FieldError("prime fields are limited to p < 2^31");
      if (modulus != 0) throw FieldError("modulus given for a prime field");
      p_ = static_cast<std::uint32_t>(p);
      m_ = 1;
      order_ = p_;
      return;
    }
    if (p != 2) throw FieldError("extension fields are only supported for p = 2");
    if (m > 16) throw FieldError("GF(2^m) is limited to m <= 16");
    if (detail::poly_degree(modulus) != static_cast<int>(m)) {
      throw FieldError("modulus degree does not match m = " + std::to_string(m));
    }
    if (!detail::poly_irreducible(modulus)) throw FieldError("modulus is reducible over GF(2)");
    p_ = 2;
    m_ = m;
    modulus_ = modulus;
    order_ = 1u << m;
    tables_ = detail::binary_tables(m, modulus);
  }

  static Field prime(std::uint32_t p) { return Field(p); }

  static Field binary(unsigned m, std::uint32_t modulus) { return Field(2, m, modulus); }

  // Lexicographically smallest irreducible polynomial of degree m over GF(2).
  static std::uint32_t default_binary_modulus(unsigned m) {
    if (m < 1 || m > 16) throw FieldError("GF(2^m) is limited to 1 <= m <= 16");
    for (std::uint32_t f = 1u << m; f < (2u << m); ++f) {
      if (detail::poly_irreducible(f)) return f;
    }
    throw FieldError("no irreducible polynomial found");
  }

  std::uint32_t characteristic() const { return p_; }
  unsigned degree() const { return m_; }
  std::uint32_t modulus() const { return modulus_; }
  std::uint32_t order() const { return order_; }
  bool is_binary() const { return p_ == 2; }

  bool contains(std::uint64_t x) const { return x < order_; }

  Element add(Element a, Element b) const {
    if (is_binary()) return a ^ b;
    const std::uint64_t s = static_cast<std::uint64_t>(a) + b;
    return static_cast<Element>(s >= p_ ? s - p_ : s);
  }

  Element neg(Element a) const {
    if (is_binary() || a == 0) return a;
    return p_ - a;
  }

  Element sub(Element a, Element b) const { return add(a, neg(b)); }

  Element mul(Element a, Element b) const {
    if (a == 0 || b == 0) return 0;
    if (tables_) return tables_->exp[tables_->log[a] + tables_->log[b]];
    return static_cast<Element>(static_cast<std::uint64_t>(a) * b % p_);
  }

  Element pow(Element a, std::uint64_t e) const {
    Element result = 1;
    while (e) {
      if (e & 1u) result = mul(result, a);
      a = mul(a, a);
      e >>= 1;
    }
    return result;
  }

  Element inv(Element a) const {
    if (a == 0) throw DivisionByZero("zero has no multiplicative inverse");
    if (tables_) return tables_->exp[(order_ - 1) - tables_->log[a]];
    return pow(a, p_ - 2);
  }

  Element div(Element a, Element b) const { return mul(a, inv(b)); }

  std::string describe() const {
    if (m_ == 1) return "GF(" + std::to_string(p_) + ")";
    return "GF(2^" + std::to_string(m_) + ")";
  }

  friend bool operator==(const Field& a, const Field& b) {
    return a.p_ == b.p_ && a.m_ == b.m_ && a.modulus_ == b.modulus_;
  }
  friend bool operator!=(const Field& a, const Field& b) { return !(a == b); }

 private:
  std::uint32_t p_ = 2;
  unsigned m_ = 1;
  std::uint32_t modulus_ = 0;
  std::uint32_t order_ = 2;
  const detail::BinaryTables* tables_ = nullptr;
};

// Free-function spelling used throughout the rest of the library.
inline Element field_inverse(Element x, const Field& f) { return f.inv(x); }

}  // namespace msrlab
