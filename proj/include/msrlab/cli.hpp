#pragma once

// Command-line front end. dispatch() takes the arguments after the program
// name and returns the process exit code:
//   0 success, 1 property violation, 2 malformed input or flags,
//   3 internal consistency failure.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "msrlab/bounds.hpp"
#include "msrlab/certificates.hpp"
#include "msrlab/code.hpp"
#include "msrlab/codefile.hpp"
#include "msrlab/errors.hpp"
#include "msrlab/parallel.hpp"
#include "msrlab/repair.hpp"
#include "msrlab/search.hpp"

namespace msrlab::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kViolation = 1, kMalformed = 2, kInternal = 3 };

namespace detail {

// Thrown for flag combinations CLI11 cannot express.
class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(what) {}
};

inline std::string fixed(double x, int digits = 1) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << x;
  return os.str();
}

inline std::string to_string(const BigInt& x) { return x.str(); }

inline std::string to_string(const Rational& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

template <typename Range>
std::string one_based(const Range& idx) {
  std::string s = "{";
  bool first = true;
  for (std::size_t i : idx) {
    s += (first ? "" : ",") + std::to_string(i + 1);
    first = false;
  }
  return s + "}";
}

template <typename Range>
Json one_based_json(const Range& idx) {
  Json a = Json::array();
  for (std::size_t i : idx) a.push_back(i + 1);
  return a;
}

inline Json params_json(const CodeParams& p) {
  Json j;
  j["field"] = p.field.describe();
  j["n"] = p.n;
  j["k"] = p.k;
  j["r"] = p.r;
  j["l"] = p.l;
  j["beta"] = p.beta();
  return j;
}

inline std::string params_text(const CodeParams& p) {
  return "n=" + std::to_string(p.n) + " k=" + std::to_string(p.k) + " r=" + std::to_string(p.r) +
         " l=" + std::to_string(p.l) + " over " + p.field.describe();
}

inline Json violation_json(const Violation& v) {
  Json j;
  if (v.kind == Violation::Kind::alignment) {
    j["kind"] = "alignment";
    j["i"] = v.node + 1;
    j["u"] = v.parity + 1;
    j["j"] = v.column + 1;
  } else {
    j["kind"] = "span";
    j["i"] = v.node + 1;
  }
  return j;
}

inline std::string violation_text(const Violation& v) {
  if (v.kind == Violation::Kind::alignment) {
    return "alignment i=" + std::to_string(v.node + 1) + " u=" + std::to_string(v.parity + 1) +
           " j=" + std::to_string(v.column + 1);
  }
  return "span i=" + std::to_string(v.node + 1);
}

// Ranges "a:b" or "a:b:step", inclusive.
inline std::vector<std::int64_t> parse_range(const std::string& spec, const char* flag) {
  std::vector<std::int64_t> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ':');) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string(flag) + ": bad range '" + spec + "'");
    }
  }
  if (parts.size() == 1) parts = {parts[0], parts[0], 1};
  if (parts.size() == 2) parts.push_back(1);
  if (parts.size() != 3 || parts[2] < 1 || parts[0] > parts[1] || parts[0] < 1) {
    throw UsageError(std::string(flag) + ": expected a:b or a:b:step with 1 <= a <= b, step >= 1");
  }
  std::vector<std::int64_t> values;
  for (std::int64_t v = parts[0]; v <= parts[1]; v += parts[2]) values.push_back(v);
  return values;
}

// k*l element literals, W_1 first, '#' comments allowed.
inline std::vector<Matrix> read_data_file(const std::string& path, const CodeParams& p) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open data file " + path);
  std::vector<Element> values;
  for (std::string line; std::getline(in, line);) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    for (std::string tok; ls >> tok;) {
      const std::uint64_t v = msrlab::detail::parse_uint(tok, 0, p.field.degree() > 1);
      if (!p.field.contains(v)) throw ParseError("data element " + tok + " is not in " + p.field.describe());
      values.push_back(static_cast<Element>(v));
    }
  }
  if (values.size() != p.k * p.l) {
    throw ParseError("data file must hold k*l = " + std::to_string(p.k * p.l) + " elements, got " +
                     std::to_string(values.size()));
  }
  std::vector<Matrix> data;
  for (std::size_t j = 0; j < p.k; ++j) {
    data.emplace_back(p.field, p.l, 1, std::span<const Element>(values.data() + j * p.l, p.l));
  }
  return data;
}

inline std::vector<Matrix> random_data(const CodeParams& p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Element> pick(0, p.field.order() - 1);
  std::vector<Matrix> data;
  for (std::size_t j = 0; j < p.k; ++j) {
    Matrix w(p.field, p.l, 1);
    for (std::size_t x = 0; x < p.l; ++x) w(x, 0) = pick(rng);
    data.push_back(std::move(w));
  }
  return data;
}

struct Output {
  std::ostream& out;
  std::ostream& err;
  bool json = false;

  void emit(const Json& report, const std::string& text) const {
    if (json) {
      out << report.dump(2) << '\n';
    } else {
      out << text;
    }
  }
};

inline void add_notices(const CodeFile& file, Json& report, std::ostream& err) {
  report["normalized_on_load"] = file.normalized_on_load;
  for (const auto& n : file.notices) err << "notice: " << n << '\n';
}

struct VerifyOutcome {
  Json report;
  std::string text;
  bool ok = false;
};

inline VerifyOutcome run_verify(const CodeFile& file) {
  VerifyOutcome v;
  const CodeParams& p = file.code.params();
  std::ostringstream text;
  v.report["params"] = params_json(p);
  text << "code: " << params_text(p) << '\n';

  const MdsReport mds = mds_check(file.code);
  v.report["mds"]["ok"] = mds.ok;
  if (mds.witness) {
    v.report["mds"]["witness"] = {{"U", one_based_json(mds.witness->parity_rows)},
                                  {"J", one_based_json(mds.witness->columns)}};
    text << "mds: FAIL at U=" << one_based(mds.witness->parity_rows) << " J=" << one_based(mds.witness->columns)
         << '\n';
  } else {
    v.report["mds"]["witness"] = nullptr;
    text << "mds: ok\n";
  }

  bool scheme_ok = true;
  if (file.scheme) {
    const SchemeReport sr = verify_scheme(file.code, *file.scheme);
    scheme_ok = sr.ok;
    v.report["scheme"]["present"] = true;
    v.report["scheme"]["mode"] = file.scheme->mode() == SchemeMode::constant ? "constant" : "per_helper";
    v.report["scheme"]["ok"] = sr.ok;
    Json list = Json::array();
    for (const auto& viol : sr.violations) list.push_back(violation_json(viol));
    v.report["scheme"]["violations"] = list;
    text << "scheme: " << (sr.ok ? "ok" : "FAIL") << '\n';
    for (const auto& viol : sr.violations) text << "  " << violation_text(viol) << '\n';
  } else {
    v.report["scheme"]["present"] = false;
    text << "scheme: absent\n";
  }
  v.ok = mds.ok && scheme_ok;
  v.report["ok"] = v.ok;
  text << "result: " << (v.ok ? "ok" : "VIOLATION") << '\n';
  v.text = text.str();
  return v;
}

inline int singular_entry_report(const SingularEntry& e, const std::string& command, const Output& o) {
  Json report;
  report["command"] = command;
  report["mds"]["ok"] = false;
  report["mds"]["witness"] = {{"U", Json::array({e.u + 1})}, {"J", Json::array({e.j + 1})}};
  report["ok"] = false;
  o.emit(report, "mds: FAIL at U={" + std::to_string(e.u + 1) + "} J={" + std::to_string(e.j + 1) +
                     "} (C u=" + std::to_string(e.u + 1) + " j=" + std::to_string(e.j + 1) +
                     " is singular)\nresult: VIOLATION\n");
  return kViolation;
}

inline int cmd_verify(const std::string& path, const Output& o) {
  CodeFile file;
  try {
    file = read_code_file(path);
  } catch (const SingularEntry& e) {
    return singular_entry_report(e, "verify", o);
  }
  VerifyOutcome v = run_verify(file);
  Json report;
  report["command"] = "verify";
  add_notices(file, report, o.err);
  report.update(v.report);
  o.emit(report, v.text);
  return v.ok ? kOk : kViolation;
}

inline int cmd_repair(const std::string& path, std::size_t node, const std::string& data_spec,
                      std::optional<std::uint64_t> seed, const Output& o) {
  CodeFile file;
  try {
    file = read_code_file(path);
  } catch (const SingularEntry& e) {
    return singular_entry_report(e, "repair", o);
  }
  const CodeParams& p = file.code.params();
  if (!file.scheme) throw UsageError("repair needs a file with a repair scheme (S blocks)");
  if (node < 1 || node > p.k) throw UsageError("--node must be a systematic node in 1.." + std::to_string(p.k));

  std::vector<Matrix> data;
  if (data_spec == "random") {
    if (!seed) throw UsageError("--data random requires --seed");
    data = random_data(p, *seed);
  } else {
    data = read_data_file(data_spec, p);
  }

  VerifyOutcome v = run_verify(file);
  Json report;
  report["command"] = "repair";
  add_notices(file, report, o.err);
  if (!v.ok) {
    report.update(v.report);
    o.emit(report, v.text + "repair: not attempted, the pair is not valid\n");
    return kViolation;
  }

  // For a file normalized on load the data is read in the normalized basis.
  const std::vector<Matrix> contents = node_contents(file.code, data);
  RepairResult rr;
  try {
    rr = repair_node(file.code, *file.scheme, node - 1, contents);
  } catch (const SingularStack& e) {
    throw Error(std::string("internal: ") + e.what() + " after a passing verify");
  } catch (const SchemeInvalid& e) {
    throw Error(std::string("internal: ") + e.what() + " after a passing verify");
  }
  const bool exact = rr.content == contents[node - 1];
  const std::size_t expected = (p.n - 1) * p.beta();

  Json content = Json::array();
  for (std::size_t x = 0; x < p.l; ++x) content.push_back(rr.content(x, 0));
  report["params"] = params_json(p);
  report["node"] = node;
  report["reconstruction"] = content;
  report["exact"] = exact;
  report["downloaded_symbols"] = rr.downloaded_symbols;
  report["optimal_symbols"] = expected;
  report["ok"] = exact && rr.downloaded_symbols == expected;

  std::ostringstream text;
  text << "code: " << params_text(p) << '\n';
  text << "node " << node << " reconstruction:";
  for (std::size_t x = 0; x < p.l; ++x) text << ' ' << rr.content(x, 0);
  text << '\n';
  text << "exact: " << (exact ? "yes" : "NO") << '\n';
  text << "downloaded symbols: " << rr.downloaded_symbols << " (optimal " << expected << ")\n";
  o.emit(report, text.str());
  if (!exact || rr.downloaded_symbols != expected) return kInternal;
  return kOk;
}

// A per-helper scheme whose helpers all share one row space per failed node,
// rewritten with those row spaces as constant repair matrices.
inline std::optional<RepairScheme> constant_form(const RepairScheme& scheme) {
  const CodeParams& p = scheme.params();
  std::vector<Matrix> s;
  for (std::size_t i = 0; i < p.k; ++i) {
    const Subspace common = span(scheme.helper(i, p.k));
    for (std::size_t v = 0; v < p.n; ++v) {
      if (v != i && span(scheme.helper(i, v)) != common) return std::nullopt;
    }
    s.push_back(common.basis());
  }
  return RepairScheme::constant(p, std::move(s));
}

inline int cmd_certify(const std::string& path, const Output& o) {
  CodeFile file;
  try {
    file = read_code_file(path);
  } catch (const SingularEntry& e) {
    return singular_entry_report(e, "certify", o);
  }
  const CodeParams& p = file.code.params();
  if (!file.scheme) throw UsageError("certify needs a file with a repair scheme (S blocks)");
  if (file.scheme->mode() != SchemeMode::constant) {
    auto folded = constant_form(*file.scheme);
    if (!folded) throw UsageError("certify needs repair subspaces that are the same for every helper");
    file.scheme = std::move(folded);
  }

  Json report;
  report["command"] = "certify";
  add_notices(file, report, o.err);
  VerifyOutcome v = run_verify(file);
  if (!v.ok) {
    report.update(v.report);
    o.emit(report, v.text + "certificates: not evaluated, the pair is not valid\n");
    return kViolation;
  }
  report["params"] = params_json(p);
  std::ostringstream text;
  text << "code: " << params_text(p) << '\n';
  bool ok = true;

  const IndependenceReport ind = encoding_independence(file.code);
  report["independence"] = {{"rank", ind.rank}, {"expected", ind.expected}, {"ok", ind.ok}};
  text << "encoding independence: rank " << ind.rank << " of " << ind.expected << (ind.ok ? " ok" : " FAIL")
       << '\n';
  ok = ok && ind.ok;

  const SpanningReport sp = min_spanning_size(*file.scheme, p.l);
  report["spanning"]["lambda_every"] = sp.lambda_every ? Json(*sp.lambda_every) : Json(nullptr);
  report["spanning"]["lambda_exists"] = sp.lambda_exists ? Json(*sp.lambda_exists) : Json(nullptr);
  text << "spanning: every " << (sp.lambda_every ? std::to_string(*sp.lambda_every) : "-") << ", exists "
       << (sp.lambda_exists ? std::to_string(*sp.lambda_exists) : "-") << '\n';

  const auto partition = find_partition(*file.scheme, p.l);
  if (!partition) {
    report["partition"] = nullptr;
    text << "partition: none (no block of subspaces spans F^l)\n";
  } else {
    Json blocks = Json::array();
    text << "partition:";
    for (std::size_t b = 0; b < partition->size(); ++b) {
      blocks.push_back({{"nodes", one_based_json(partition->blocks[b])}, {"standard", bool(partition->standard[b])}});
      text << ' ' << one_based(partition->blocks[b]) << (partition->standard[b] ? "" : "*");
    }
    text << (partition->all_standard() ? "" : "  (* non-standard)") << '\n';
    report["partition"]["blocks"] = blocks;

    try {
      const DeltaFamilyReport d = delta_family_certificate(file.code, *file.scheme, *partition);
      Json dj;
      dj["count"] = d.count;
      dj["nonzero_ok"] = d.nonzero_ok;
      dj["rank"] = d.rank;
      dj["independent_ok"] = d.independent_ok;
      dj["fits_matrix_space"] = d.fits_matrix_space;
      report["delta_family"] = dj;
      text << "delta family: " << d.count << " products, rank " << d.rank << ", nonzero "
           << (d.nonzero_ok ? "ok" : "FAIL") << ", independent " << (d.independent_ok ? "ok" : "FAIL")
           << ", r^p <= l^2 " << (d.fits_matrix_space ? "ok" : "FAIL") << '\n';
      ok = ok && d.nonzero_ok && d.independent_ok && d.fits_matrix_space;
    } catch (const FamilyTooLarge& e) {
      report["delta_family"] = {{"skipped", e.what()}};
      text << "delta family: skipped (" << e.what() << ")\n";
    }
  }

  constexpr std::size_t kMaxProfileNodes = 16;
  if (p.k <= kMaxProfileNodes) {
    Json profiles = Json::array();
    std::size_t failures = 0;
    std::size_t total = 0;
    for (std::size_t m = 1; m <= p.k; ++m) {
      auto subset = msrlab::detail::first_combination(m);
      do {
        const DimProfile dp = dim_profile(*file.scheme, subset, p.l, p.r);
        ++total;
        if (!dp.ok) ++failures;
        profiles.push_back({{"subset", one_based_json(subset)},
                            {"dim", dp.dim},
                            {"bound_thm3", to_string(dp.bound_thm3)},
                            {"bound_eq29", to_string(dp.bound_eq29)},
                            {"exact", dp.exact},
                            {"ok", dp.ok}});
        if (p.k <= 4 || !dp.ok) {
          text << "  dim " << one_based(subset) << " = " << dp.dim << "  (thm3 " << (dp.exact ? "= " : ">= ")
               << to_string(dp.bound_thm3) << ", eq29 >= " << to_string(dp.bound_eq29) << ")"
               << (dp.ok ? "" : "  FAIL") << '\n';
        }
      } while (msrlab::detail::next_combination(subset, p.k));
    }
    report["dim_profiles"] = profiles;
    text << "dimension profiles: " << total - failures << "/" << total << " ok\n";
    ok = ok && failures == 0;
  } else {
    report["dim_profiles"] = nullptr;
    text << "dimension profiles: skipped (k > " << kMaxProfileNodes << ")\n";
  }

  report["ok"] = ok;
  text << "result: " << (ok ? "ok" : "VIOLATION") << '\n';
  o.emit(report, text.str());
  return ok ? kOk : kViolation;
}

inline Json bounds_json(const BoundReport& b, bool compare) {
  Json j;
  j["l"] = b.l;
  j["r"] = b.r;
  j["t"] = b.t;
  j["lambda_exact"] = b.lambda_exact;
  j["lambda_estimate"] = b.lambda_estimate;
  j["lambda_real"] = b.lambda_real;
  j["quadratic"] = to_string(b.quadratic);
  j["quadratic_floor"] = b.quadratic_floor;
  j["rlog_real"] = b.rlog_real;
  j["rlog_floor"] = b.rlog_floor;
  if (compare) {
    j["prior"]["tamo"] = to_string(b.prior_tamo);
    j["prior"]["goparaju_quadratic"] = b.prior_goparaju_quadratic;
    j["prior"]["goparaju_lambda"] = b.prior_goparaju_lambda;
    j["prior"]["goparaju_lambda_real"] = b.prior_goparaju_lambda_real;
    j["prior"]["goparaju_log_real"] = b.prior_goparaju_log_real;
    j["prior"]["goparaju_log_floor"] = b.prior_goparaju_log_floor;
  }
  return j;
}

inline int cmd_bounds(std::int64_t l, std::int64_t r, bool compare, const Output& o) {
  const BoundReport b = evaluate_bounds(l, r);
  Json report;
  report["command"] = "bounds";
  report.update(bounds_json(b, compare));
  std::ostringstream text;
  text << "l=" << b.l << " r=" << b.r << " t=" << b.t << '\n';
  text << "lambda: " << b.lambda_estimate << (b.lambda_exact ? " (exact)" : "") << ", real " << fixed(b.lambda_real, 3)
       << '\n';
  text << "quadratic bound: k <= " << to_string(b.quadratic) << " (floor " << b.quadratic_floor << ")\n";
  text << "log bound: k <= " << fixed(b.rlog_real) << " (integer " << b.rlog_floor << ")\n";
  if (compare) {
    text << "prior l*C(l,l/r): " << to_string(b.prior_tamo) << '\n';
    text << "prior quadratic: k <= " << b.prior_goparaju_quadratic << '\n';
    text << "prior log bound: k <= " << fixed(b.prior_goparaju_log_real) << " (integer " << b.prior_goparaju_log_floor
         << ", lambda " << b.prior_goparaju_lambda << ")\n";
  }
  o.emit(report, text.str());
  return kOk;
}

inline int cmd_table(const std::string& l_spec, const std::string& r_spec, const std::string& format,
                     const Output& o) {
  const auto ls = parse_range(l_spec, "--l");
  const auto rs = parse_range(r_spec, "--r");
  constexpr std::size_t kMaxRows = 100'000;
  if (ls.size() * rs.size() > kMaxRows) throw UsageError("table would exceed " + std::to_string(kMaxRows) + " rows");

  const std::vector<std::string> header = {"l",         "r",          "t",         "lambda",
                                           "quadratic", "rlog_real",  "rlog",      "prior_quadratic",
                                           "prior_log_real", "prior_log"};
  std::vector<std::vector<std::string>> rows;
  Json list = Json::array();
  for (std::int64_t r : rs) {
    if (r < 2) continue;
    for (std::int64_t l : ls) {
      if (l % r != 0) continue;
      const BoundReport b = evaluate_bounds(l, r);
      rows.push_back({std::to_string(l), std::to_string(r), std::to_string(b.t), std::to_string(b.lambda_estimate),
                      std::to_string(b.quadratic_floor), fixed(b.rlog_real, 3), std::to_string(b.rlog_floor),
                      std::to_string(b.prior_goparaju_quadratic), fixed(b.prior_goparaju_log_real, 3),
                      std::to_string(b.prior_goparaju_log_floor)});
      list.push_back(bounds_json(b, true));
    }
  }

  std::ostringstream text;
  if (format == "csv") {
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t c = 0; c < cells.size(); ++c) text << (c ? "," : "") << cells[c];
      text << '\n';
    };
    line(header);
    for (const auto& row : rows) line(row);
  } else {
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    auto line = [&](const std::vector<std::string>& cells) {
      text << '|';
      for (std::size_t c = 0; c < cells.size(); ++c) text << ' ' << std::setw(static_cast<int>(width[c])) << cells[c] << " |";
      text << '\n';
    };
    line(header);
    text << '|';
    for (std::size_t c = 0; c < header.size(); ++c) text << std::string(width[c] + 1, '-') << ":|";
    text << '\n';
    for (const auto& row : rows) line(row);
  }
  Json report;
  report["command"] = "table";
  report["rows"] = list;
  o.emit(report, text.str());
  return kOk;
}

struct SearchFlags {
  std::uint64_t q = 0;
  unsigned m = 1;
  std::optional<std::string> modulus;
  std::size_t l = 0;
  std::size_t r = 0;
  std::size_t k = 0;
  bool exhaustive = false;
  std::optional<std::uint64_t> budget;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> shards;
  std::optional<std::string> emit;
};

inline int cmd_search(const SearchFlags& f, const Output& o) {
  if (f.exhaustive == f.budget.has_value()) throw UsageError("give exactly one of --exhaustive or --budget");
  if (f.budget && !f.seed) throw UsageError("--budget requires --seed");
  if (f.exhaustive && f.seed) throw UsageError("--seed only applies to --budget searches");
  std::uint32_t modulus = 0;
  if (f.m > 1) {
    modulus = f.modulus ? static_cast<std::uint32_t>(msrlab::detail::parse_uint(*f.modulus, 0, true))
                        : Field::default_binary_modulus(f.m);
  } else if (f.modulus) {
    throw UsageError("--modulus only applies with --m > 1");
  }
  SearchConfig cfg;
  cfg.field = Field(f.q, f.m, modulus);
  cfg.l = f.l;
  cfg.r = f.r;
  cfg.k = f.k;
  if (cfg.r < 1 || cfg.k < 1 || cfg.l < 1) throw UsageError("--l, --r and --k must be positive");
  cfg.mode = f.exhaustive ? SearchMode::exhaustive : SearchMode::random;
  cfg.budget = f.budget.value_or(0);
  cfg.seed = f.seed.value_or(0);
  cfg.shards = f.shards.value_or(default_threads());
  if (cfg.shards < 1) throw UsageError("--shards must be positive");
  cfg.progress = &o.err;

  const SearchResult result = search_codes(cfg);
  const CodeParams p = cfg.params();

  std::vector<std::string> written;
  if (f.emit) {
    namespace fs = std::filesystem;
    const fs::path dir(*f.emit);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw UsageError("cannot create " + dir.string() + ": " + ec.message());
    const int digits = static_cast<int>(std::to_string(std::max<std::size_t>(1, result.size())).size());
    for (std::size_t i = 0; i < result.size(); ++i) {
      std::ostringstream name;
      name << "gf" << p.field.order() << "_l" << p.l << "_r" << p.r << "_k" << p.k << '_' << std::setw(digits)
           << std::setfill('0') << i + 1 << ".msr";
      const fs::path target = dir / name.str();
      std::ofstream out(target, std::ios::binary);
      const RepairScheme scheme = result.scheme(i);
      out << write_code_file(result.code(i), &scheme);
      if (!out) throw Error("failed writing " + target.string());
      written.push_back(target.string());
    }
  }

  Json report;
  report["command"] = "search";
  report["params"] = params_json(p);
  report["mode"] = f.exhaustive ? "exhaustive" : "random";
  if (!f.exhaustive) report["seed"] = cfg.seed;
  report["estimate"] = result.estimate;
  report["examined"] = result.examined;
  report["found"] = result.size();
  report["supports_nonexistence"] = f.exhaustive;
  if (f.emit) report["emitted"] = written;

  std::ostringstream text;
  text << "search: " << params_text(p) << ", " << (f.exhaustive ? "exhaustive" : "random") << '\n';
  text << "estimate: " << result.estimate << "  examined: " << result.examined << '\n';
  text << "found: " << result.size() << '\n';
  if (!f.exhaustive && result.empty()) text << "note: a random search finding nothing is not a nonexistence proof\n";
  if (f.emit) text << "wrote " << written.size() << " files to " << *f.emit << '\n';
  o.emit(report, text.str());
  return kOk;
}

}  // namespace detail

inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-field lab for linear MSR codes", "msrlab"};
  app.require_subcommand(1);
  app.fallthrough();
  bool json = false;
  app.add_flag("--json", json, "Emit the report as JSON");

  std::string file;
  auto* verify = app.add_subcommand("verify", "Check the MDS property and the repair scheme");
  verify->add_option("file", file, "Code file")->required();

  std::size_t node = 0;
  std::string data_spec;
  std::optional<std::uint64_t> seed;
  auto* repair = app.add_subcommand("repair", "Repair one systematic node");
  repair->add_option("file", file, "Code file")->required();
  repair->add_option("--node", node, "Systematic node to repair (1-based)")->required();
  repair->add_option("--data", data_spec, "Data file with k*l elements, or 'random'")->required();
  repair->add_option("--seed", seed, "Seed for --data random");

  auto* certify = app.add_subcommand("certify", "Run the linear-independence certificates");
  certify->add_option("file", file, "Code file")->required();

  std::int64_t bl = 0;
  std::int64_t br = 0;
  bool compare = false;
  auto* bounds = app.add_subcommand("bounds", "Upper bounds on k for given (l, r)");
  bounds->add_option("--l", bl, "Sub-packetization")->required();
  bounds->add_option("--r", br, "Number of parities")->required();
  bounds->add_flag("--compare", compare, "Include the earlier bounds");

  std::string l_spec;
  std::string r_spec;
  std::string format = "md";
  auto* table = app.add_subcommand("table", "Bound table over a grid of (l, r)");
  table->add_option("--l", l_spec, "l range a:b[:step]")->required();
  table->add_option("--r", r_spec, "r range a:b[:step]")->required();
  table->add_option("--format", format, "csv or md")->check(CLI::IsMember({"csv", "md"}));

  detail::SearchFlags sf;
  auto* search = app.add_subcommand("search", "Search for valid (code, scheme) pairs");
  search->add_option("--q", sf.q, "Field characteristic")->required();
  search->add_option("--m", sf.m, "Extension degree");
  search->add_option("--modulus", sf.modulus, "Reduction polynomial (hex) for m > 1");
  search->add_option("--l", sf.l, "Sub-packetization")->required();
  search->add_option("--r", sf.r, "Number of parities")->required();
  search->add_option("--k", sf.k, "Number of systematic nodes")->required();
  search->add_flag("--exhaustive", sf.exhaustive, "Enumerate every canonical candidate");
  search->add_option("--budget", sf.budget, "Random candidates to draw");
  search->add_option("--seed", sf.seed, "Random seed");
  search->add_option("--shards", sf.shards, "Worker threads");
  search->add_option("--emit", sf.emit, "Directory for found pairs");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kMalformed;
  }

  const detail::Output o{out, err, json};
  try {
    if (*verify) return detail::cmd_verify(file, o);
    if (*repair) return detail::cmd_repair(file, node, data_spec, seed, o);
    if (*certify) return detail::cmd_certify(file, o);
    if (*bounds) return detail::cmd_bounds(bl, br, compare, o);
    if (*table) return detail::cmd_table(l_spec, r_spec, format, o);
    if (*search) return detail::cmd_search(sf, o);
  } catch (const detail::UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kMalformed;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kMalformed;
  } catch (const ParamError& e) {
    err << "error: " << e.what() << '\n';
    return kMalformed;
  } catch (const FieldError& e) {
    err << "error: " << e.what() << '\n';
    return kMalformed;
  } catch (const ShapeError& e) {
    err << "error: " << e.what() << '\n';
    return kMalformed;
  } catch (const RangeError& e) {
    err << "error: " << e.what() << '\n';
    return kMalformed;
  } catch (const TooLarge& e) {
    err << "error: " << e.what() << '\n';
    return kMalformed;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}

}  // namespace msrlab::cli
