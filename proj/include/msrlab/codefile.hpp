#pragma once

// Text serialization of codes and repair schemes.
//
//   msrcode v1
//   field p=<int> m=<int> [modulus=0x<hex>]
//   params n=<int> k=<int> l=<int>
//   C u=<u> j=<j>          for u in 1..r, j in 1..k (u outer)
//   <l lines of l element literals>
//   S i=<i>                optional, for i in 1..k
//   <l/r lines of l literals>
//
// '#' starts a comment. Indices in the file are 1-based. Per-helper schemes
// use "S i=<i> v=<v>" blocks for every helper v != i, ordered by (i, v).
// Element literals are decimal; extension-field elements may also be written
// as 0x-prefixed coefficient packings.

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "msrlab/code.hpp"
#include "msrlab/errors.hpp"
#include "msrlab/repair.hpp"

namespace msrlab {

// A well-formed file whose C_{u,j} (0-based here) is singular. Callers that
// report MDS violations treat this as the 1x1 block witness ({u}, {j}).
class SingularEntry : public SingularError {
 public:
  SingularEntry(std::size_t u, std::size_t j)
      : SingularError("C u=" + std::to_string(u + 1) + " j=" + std::to_string(j + 1) + " is not invertible"),
        u(u),
        j(j) {}
  std::size_t u;
  std::size_t j;
};

struct CodeFile {
  Code code;
  std::optional<RepairScheme> scheme;
  bool normalized_on_load = false;
  std::vector<std::string> notices;
};

namespace detail {

struct Line {
  std::size_t number = 0;
  std::vector<std::string> tokens;
};

inline std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    ++number;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    std::istringstream in{std::string(raw)};
    Line line{number, {}};
    for (std::string tok; in >> tok;) line.tokens.push_back(tok);
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    pos = end + 1;
  }
  return lines;
}

[[noreturn]] inline void parse_fail(std::size_t line, const std::string& what) {
  throw ParseError("line " + std::to_string(line) + ": " + what);
}

inline std::uint64_t parse_uint(const std::string& s, std::size_t line, bool allow_hex) {
  if (s.empty()) parse_fail(line, "empty number");
  int base = 10;
  std::string digits = s;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    if (!allow_hex) parse_fail(line, "hex literal not allowed here: " + s);
    base = 16;
    digits = s.substr(2);
  }
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    if (digits.empty() || digits[0] == '-' || digits[0] == '+') throw std::invalid_argument("sign");
    v = std::stoull(digits, &used, base);
  } catch (const std::exception&) {
    parse_fail(line, "bad number: " + s);
  }
  if (used != digits.size()) parse_fail(line, "bad number: " + s);
  return v;
}

// Parses "key=value" tokens after the keyword; every expected key must be present.
inline std::map<std::string, std::string> parse_keys(const Line& line, std::size_t first) {
  std::map<std::string, std::string> kv;
  for (std::size_t i = first; i < line.tokens.size(); ++i) {
    const auto& tok = line.tokens[i];
    auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0) parse_fail(line.number, "expected key=value, got " + tok);
    if (!kv.emplace(tok.substr(0, eq), tok.substr(eq + 1)).second) parse_fail(line.number, "duplicate key");
  }
  return kv;
}

inline std::uint64_t require_key(const std::map<std::string, std::string>& kv, const std::string& key,
                                 std::size_t line, bool allow_hex = false) {
  auto it = kv.find(key);
  if (it == kv.end()) parse_fail(line, "missing " + key + "=");
  return parse_uint(it->second, line, allow_hex);
}

class LineCursor {
 public:
  explicit LineCursor(std::vector<Line> lines) : lines_(std::move(lines)) {}
  bool done() const { return pos_ == lines_.size(); }
  const Line& peek() const { return lines_[pos_]; }
  const Line& next(const char* expecting) {
    if (done()) throw ParseError(std::string("unexpected end of file, expected ") + expecting);
    return lines_[pos_++];
  }

 private:
  std::vector<Line> lines_;
  std::size_t pos_ = 0;
};

inline Matrix read_matrix_rows(LineCursor& cur, const Field& f, std::size_t rows, std::size_t cols) {
  std::vector<Element> values;
  values.reserve(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const Line& line = cur.next("matrix row");
    if (line.tokens.size() != cols) {
      parse_fail(line.number, "expected " + std::to_string(cols) + " entries, got " + std::to_string(line.tokens.size()));
    }
    for (const auto& tok : line.tokens) {
      const std::uint64_t v = parse_uint(tok, line.number, f.degree() > 1);
      if (!f.contains(v)) parse_fail(line.number, "element " + tok + " is not in " + f.describe());
      values.push_back(static_cast<Element>(v));
    }
  }
  return Matrix(f, rows, cols, values);
}

inline void expect_block(const Line& line, const char* keyword, const std::map<std::string, std::size_t>& want) {
  if (line.tokens.empty() || line.tokens[0] != keyword) parse_fail(line.number, std::string("expected '") + keyword + "' block");
  const auto kv = parse_keys(line, 1);
  if (kv.size() != want.size()) parse_fail(line.number, "unexpected keys in block header");
  for (const auto& [key, value] : want) {
    if (require_key(kv, key, line.number) != value) {
      parse_fail(line.number, "block out of order: expected " + key + "=" + std::to_string(value));
    }
  }
}

}  // namespace detail

inline CodeFile parse_code_file(std::string_view text) {
  detail::LineCursor cur(detail::tokenize(text));

  const detail::Line& header = cur.next("header");
  if (header.tokens != std::vector<std::string>{"msrcode", "v1"}) detail::parse_fail(header.number, "expected 'msrcode v1'");

  const detail::Line& field_line = cur.next("field line");
  if (field_line.tokens.empty() || field_line.tokens[0] != "field") detail::parse_fail(field_line.number, "expected 'field'");
  const auto fkv = detail::parse_keys(field_line, 1);
  const std::uint64_t p = detail::require_key(fkv, "p", field_line.number);
  const std::uint64_t m = detail::require_key(fkv, "m", field_line.number);
  std::uint64_t modulus = 0;
  if (m > 1) {
    modulus = detail::require_key(fkv, "modulus", field_line.number, true);
  } else if (fkv.count("modulus")) {
    detail::parse_fail(field_line.number, "modulus given for a prime field");
  }
  if (fkv.size() != (m > 1 ? 3u : 2u)) detail::parse_fail(field_line.number, "unexpected keys in field line");
  Field field;
  try {
    field = Field(p, static_cast<unsigned>(m), static_cast<std::uint32_t>(modulus));
  } catch (const FieldError& e) {
    detail::parse_fail(field_line.number, e.what());
  }

  const detail::Line& params_line = cur.next("params line");
  if (params_line.tokens.empty() || params_line.tokens[0] != "params") detail::parse_fail(params_line.number, "expected 'params'");
  const auto pkv = detail::parse_keys(params_line, 1);
  if (pkv.size() != 3) detail::parse_fail(params_line.number, "params takes exactly n, k, l");
  CodeParams params;
  try {
    params = CodeParams::make(field, detail::require_key(pkv, "n", params_line.number),
                              detail::require_key(pkv, "k", params_line.number),
                              detail::require_key(pkv, "l", params_line.number));
  } catch (const ParamError& e) {
    detail::parse_fail(params_line.number, e.what());
  }

  std::vector<Matrix> enc;
  for (std::size_t u = 0; u < params.r; ++u) {
    for (std::size_t j = 0; j < params.k; ++j) {
      detail::expect_block(cur.next("C block"), "C", {{"u", u + 1}, {"j", j + 1}});
      enc.push_back(detail::read_matrix_rows(cur, field, params.l, params.l));
      if (!is_invertible(enc.back())) throw SingularEntry(u, j);
    }
  }
  CodeFile out;
  out.code = Code(params, std::move(enc));

  std::optional<RepairScheme> scheme;
  if (!cur.done()) {
    const detail::Line& first = cur.peek();
    const bool per_helper = first.tokens.size() == 3;
    if (!per_helper) {
      std::vector<Matrix> s;
      for (std::size_t i = 0; i < params.k; ++i) {
        detail::expect_block(cur.next("S block"), "S", {{"i", i + 1}});
        s.push_back(detail::read_matrix_rows(cur, field, params.beta(), params.l));
      }
      scheme = RepairScheme::constant(params, std::move(s));
    } else {
      std::vector<std::vector<Matrix>> s(params.k, std::vector<Matrix>(params.n));
      for (std::size_t i = 0; i < params.k; ++i) {
        for (std::size_t v = 0; v < params.n; ++v) {
          if (v == i) continue;
          detail::expect_block(cur.next("S block"), "S", {{"i", i + 1}, {"v", v + 1}});
          s[i][v] = detail::read_matrix_rows(cur, field, params.beta(), params.l);
        }
      }
      scheme = RepairScheme::per_helper(params, std::move(s));
    }
    if (!cur.done()) detail::parse_fail(cur.peek().number, "trailing content after the last block");
  }

  if (!out.code.normalized()) {
    // W'_j = C_{1,j} W_j, so a systematic helper j now sends S C_{1,j}^{-1} W'_j.
    const Code original = out.code;
    out.code = normalize(original);
    out.normalized_on_load = true;
    out.notices.push_back("code was not normalized (C u=1 != I); normalized on load");
    if (scheme) {
      std::vector<std::vector<Matrix>> s(params.k, std::vector<Matrix>(params.n));
      for (std::size_t i = 0; i < params.k; ++i) {
        for (std::size_t v = 0; v < params.n; ++v) {
          if (v == i) continue;
          s[i][v] = v < params.k ? mat_mul(scheme->helper(i, v), mat_inverse(original.at(0, v))) : scheme->helper(i, v);
        }
      }
      scheme = RepairScheme::per_helper(params, std::move(s));
      out.notices.push_back("repair scheme rewritten in per-helper form for the normalized code");
    }
  }
  out.scheme = std::move(scheme);
  return out;
}

namespace detail {

inline void write_rows(std::ostringstream& os, const Matrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) os << (c ? " " : "") << m(r, c);
    os << '\n';
  }
}

}  // namespace detail

inline std::string write_code_file(const Code& code, const RepairScheme* scheme = nullptr) {
  const CodeParams& p = code.params();
  std::ostringstream os;
  os << "msrcode v1\n";
  os << "field p=" << p.field.characteristic() << " m=" << p.field.degree();
  if (p.field.degree() > 1) os << " modulus=0x" << std::hex << p.field.modulus() << std::dec;
  os << '\n';
  os << "params n=" << p.n << " k=" << p.k << " l=" << p.l << '\n';
  for (std::size_t u = 0; u < p.r; ++u) {
    for (std::size_t j = 0; j < p.k; ++j) {
      os << "C u=" << u + 1 << " j=" << j + 1 << '\n';
      detail::write_rows(os, code.at(u, j));
    }
  }
  if (scheme) {
    for (std::size_t i = 0; i < p.k; ++i) {
      if (scheme->mode() == SchemeMode::constant) {
        os << "S i=" << i + 1 << '\n';
        detail::write_rows(os, scheme->constant_matrix(i));
        continue;
      }
      for (std::size_t v = 0; v < p.n; ++v) {
        if (v == i) continue;
        os << "S i=" << i + 1 << " v=" << v + 1 << '\n';
        detail::write_rows(os, scheme->helper(i, v));
      }
    }
  }
  return os.str();
}

inline std::string write_code_file(const CodeFile& file) {
  return write_code_file(file.code, file.scheme ? &*file.scheme : nullptr);
}

inline CodeFile read_code_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_code_file(buf.str());
}

}  // namespace msrlab
