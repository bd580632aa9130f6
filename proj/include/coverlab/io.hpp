#pragma once

// JSON files. Every big integer is a decimal string; order is preserved.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coverlab/certify.hpp"
#include "coverlab/construct.hpp"
#include "coverlab/covers.hpp"
#include "coverlab/mersenne.hpp"

namespace coverlab::io {

using json = nlohmann::ordered_json;

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("write failed for " + path);
}

/// Parses JSON text; syntax errors carry "source:line:column".
inline json parse_json(const std::string& text, const std::string& source = "<input>") {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
  }
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

// --- field access with a path for error messages --------------------------

inline const json& field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw ParseError(path + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(path + ": missing field \"" + key + "\"");
  return *it;
}

inline const json& array_field(const json& j, const char* key, const std::string& path) {
  const json& a = field(j, key, path);
  if (!a.is_array()) throw ParseError(path + "." + key + ": expected an array");
  return a;
}

inline std::string string_field(const json& j, const char* key, const std::string& path) {
  const json& s = field(j, key, path);
  if (!s.is_string()) throw ParseError(path + "." + key + ": expected a string");
  return s.get<std::string>();
}

inline Natural decimal(const json& j, const std::string& path) {
  if (!j.is_string()) throw ParseError(path + ": expected a decimal string");
  try {
    return parse_natural(j.get<std::string>());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline Natural decimal_field(const json& j, const char* key, const std::string& path) {
  return decimal(field(j, key, path), path + "." + key);
}

inline std::vector<Natural> decimal_list(const json& a, const std::string& path) {
  if (!a.is_array()) throw ParseError(path + ": expected an array");
  std::vector<Natural> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(decimal(a[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

inline json decimal_list_json(const std::vector<Natural>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_decimal(x));
  return a;
}

template <class T, class F>
T load_file(const std::string& path, F&& from_json) {
  return from_json(parse_json(read_text(path), path), path);
}

// --- covers ----------------------------------------------------------------

inline CoveringSystem cover_from_json(const json& j, const std::string& path = "$") {
  CoveringSystem s;
  s.label = string_field(j, "label", path);
  const json& classes = array_field(j, "classes", path);
  if (classes.empty()) throw ParseError(path + ".classes: empty class list");
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const std::string p = path + ".classes[" + std::to_string(i) + "]";
    ResidueClass c{decimal_field(classes[i], "a", p), decimal_field(classes[i], "n", p)};
    if (c.n < 1) throw ParseError(p + ".n: modulus must be >= 1");
    s.classes.push_back(std::move(c));
  }
  return s;
}

inline json cover_to_json(const CoveringSystem& s) {
  json classes = json::array();
  for (const auto& c : s.classes) classes.push_back({{"a", to_decimal(c.a)}, {"n", to_decimal(c.n)}});
  return {{"label", s.label}, {"classes", classes}};
}

inline CoveringSystem load_cover(const std::string& path) {
  return load_file<CoveringSystem>(path, [](const json& j, const std::string& p) { return cover_from_json(j, p); });
}

inline void store_cover(const CoveringSystem& s, const std::string& path) {
  write_text(path, dump(cover_to_json(s)));
}

// --- prime tables ----------------------------------------------------------

inline PrimeTable prime_table_from_json(const json& j, const std::string& path = "$") {
  PrimeTable t;
  const json& entries = array_field(j, "entries", path);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string p = path + ".entries[" + std::to_string(i) + "]";
    PrimeTableEntry e;
    e.n = decimal_field(entries[i], "n", p);
    e.primes = decimal_list(array_field(entries[i], "primes", p), p + ".primes");
    t.entries.push_back(std::move(e));
  }
  t.omitted = decimal_list(array_field(j, "omitted", path), path + ".omitted");
  return t;
}

inline json prime_table_to_json(const PrimeTable& t) {
  json entries = json::array();
  for (const auto& e : t.entries) entries.push_back({{"n", to_decimal(e.n)}, {"primes", decimal_list_json(e.primes)}});
  return {{"entries", entries}, {"omitted", decimal_list_json(t.omitted)}};
}

inline PrimeTable load_prime_table(const std::string& path) {
  return load_file<PrimeTable>(path, [](const json& j, const std::string& p) { return prime_table_from_json(j, p); });
}

inline json errata_to_json(const std::vector<Erratum>& errata) {
  json a = json::array();
  for (const auto& e : errata) {
    a.push_back({{"n", to_decimal(e.n)},
                 {"claimed", to_decimal(e.claimed)},
                 {"reason", e.reason},
                 {"replacement", e.replacement ? json(to_decimal(*e.replacement)) : json(nullptr)},
                 {"replacement_verified", e.replacement_verified}});
  }
  return {{"errata", a}};
}

// --- x^2 - u_n construction data -------------------------------------------

inline Theorem13Data theorem13_from_json(const json& j, const std::string& path = "$") {
  Theorem13Data d;
  d.label = string_field(j, "label", path);
  d.odd_cover = cover_from_json(field(j, "odd_cover", path), path + ".odd_cover");
  d.primes = decimal_list(array_field(j, "primes", path), path + ".primes");
  d.residues = decimal_list(array_field(j, "residues", path), path + ".residues");
  d.expected_a = decimal_field(j, "expected_a", path);
  d.expected_M = decimal_field(j, "expected_M", path);
  if (d.primes.size() != d.residues.size()) throw ParseError(path + ": primes and residues differ in length");
  if (d.primes.size() != d.odd_cover.classes.size() + 1) {
    throw ParseError(path + ": need one more prime than odd cover classes");
  }
  return d;
}

inline json theorem13_to_json(const Theorem13Data& d) {
  return {{"label", d.label},
          {"odd_cover", cover_to_json(d.odd_cover)},
          {"primes", decimal_list_json(d.primes)},
          {"residues", decimal_list_json(d.residues)},
          {"expected_a", to_decimal(d.expected_a)},
          {"expected_M", to_decimal(d.expected_M)}};
}

inline Theorem13Data load_theorem13(const std::string& path) {
  return load_file<Theorem13Data>(path, [](const json& j, const std::string& p) { return theorem13_from_json(j, p); });
}

// --- x^m - 2^n instances ---------------------------------------------------

inline std::vector<std::optional<Natural>> optional_list(const json& a, const std::string& path) {
  if (!a.is_array()) throw ParseError(path + ": expected an array");
  std::vector<std::optional<Natural>> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_null()) {
      out.emplace_back(std::nullopt);
    } else {
      out.emplace_back(decimal(a[i], path + "[" + std::to_string(i) + "]"));
    }
  }
  return out;
}

inline json optional_list_json(const std::vector<std::optional<Natural>>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x ? json(to_decimal(*x)) : json(nullptr));
  return a;
}

inline Theorem12Instance theorem12_from_json(const json& j, const std::string& path = "$") {
  Theorem12Instance inst;
  inst.label = string_field(j, "label", path);
  inst.cover = cover_from_json(field(j, "cover", path), path + ".cover");
  inst.primes = optional_list(array_field(j, "primes", path), path + ".primes");
  inst.companions = optional_list(array_field(j, "companions", path), path + ".companions");
  inst.m = decimal_field(j, "m", path);
  inst.bound = decimal_field(j, "bound", path);
  return inst;
}

inline json theorem12_to_json(const Theorem12Instance& inst) {
  return {{"label", inst.label},
          {"cover", cover_to_json(inst.cover)},
          {"primes", optional_list_json(inst.primes)},
          {"companions", optional_list_json(inst.companions)},
          {"m", to_decimal(inst.m)},
          {"bound", to_decimal(inst.bound)}};
}

inline Theorem12Instance load_theorem12(const std::string& path) {
  return load_file<Theorem12Instance>(path,
                                      [](const json& j, const std::string& p) { return theorem12_from_json(j, p); });
}

// --- exclusion cases and certificates --------------------------------------

inline ExclusionCase case_from_json(const json& j, const std::string& path = "$") {
  ExclusionCase c;
  c.label = string_field(j, "label", path);
  c.r = decimal_field(j, "r", path);
  c.m = decimal_field(j, "m", path);
  c.p = decimal_field(j, "p", path);
  const json& aux = array_field(j, "aux", path);
  for (std::size_t i = 0; i < aux.size(); ++i) {
    const std::string p = path + ".aux[" + std::to_string(i) + "]";
    c.aux.push_back(AuxResidue{decimal_field(aux[i], "q", p), decimal_field(aux[i], "x_mod_q", p)});
  }
  return c;
}

inline json case_to_json(const ExclusionCase& c) {
  json aux = json::array();
  for (const auto& a : c.aux) aux.push_back({{"q", to_decimal(a.q)}, {"x_mod_q", to_decimal(a.x_mod_q)}});
  return {{"label", c.label}, {"r", to_decimal(c.r)}, {"m", to_decimal(c.m)}, {"p", to_decimal(c.p)}, {"aux", aux}};
}

inline ExclusionCase load_case(const std::string& path) {
  return load_file<ExclusionCase>(path, [](const json& j, const std::string& p) { return case_from_json(j, p); });
}

inline json certificate_to_json(const CertificateReport& r) {
  json evidence = json::array();
  for (const auto& e : r.evidence) {
    evidence.push_back({{"q", std::to_string(e.q)}, {"period", std::to_string(e.period)}, {"order", std::to_string(e.order)}});
  }
  json cx = nullptr;
  if (r.counterexample) {
    cx = {{"n_residue", std::to_string(r.counterexample->n_residue)},
          {"sign", r.counterexample->sign > 0 ? "+" : "-"},
          {"b_residue", std::to_string(r.counterexample->b_residue)}};
  }
  return {{"label", r.label},
          {"valid", r.valid},
          {"combinations", std::to_string(r.combinations)},
          {"n_period", std::to_string(r.n_period)},
          {"b_period", std::to_string(r.b_period)},
          {"counterexample", cx},
          {"evidence", evidence}};
}

inline CertificateReport certificate_from_json(const json& j, const std::string& path = "$") {
  CertificateReport r;
  r.label = string_field(j, "label", path);
  const json& valid = field(j, "valid", path);
  if (!valid.is_boolean()) throw ParseError(path + ".valid: expected a boolean");
  r.valid = valid.get<bool>();
  r.combinations = to_u64(decimal_field(j, "combinations", path));
  r.n_period = to_u64(decimal_field(j, "n_period", path));
  r.b_period = to_u64(decimal_field(j, "b_period", path));
  const json& cx = field(j, "counterexample", path);
  if (!cx.is_null()) {
    const std::string p = path + ".counterexample";
    const std::string sign = string_field(cx, "sign", p);
    if (sign != "+" && sign != "-") throw ParseError(p + ".sign: expected \"+\" or \"-\"");
    r.counterexample = Counterexample{to_u64(decimal_field(cx, "n_residue", p)), sign == "+" ? 1 : -1,
                                      to_u64(decimal_field(cx, "b_residue", p))};
  }
  const json& evidence = array_field(j, "evidence", path);
  for (std::size_t i = 0; i < evidence.size(); ++i) {
    const std::string p = path + ".evidence[" + std::to_string(i) + "]";
    r.evidence.push_back(AuxEvidence{to_u64(decimal_field(evidence[i], "q", p)),
                                     to_u64(decimal_field(evidence[i], "period", p)),
                                     to_u64(decimal_field(evidence[i], "order", p))});
  }
  return r;
}

}  // namespace coverlab::io
