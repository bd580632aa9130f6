#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coverlab/arith.hpp"
#include "coverlab/residue_class.hpp"

namespace coverlab {

struct CoveringSystem {
  std::string label;
  std::vector<ResidueClass> classes;

  std::vector<Natural> moduli() const {
    std::vector<Natural> out;
    out.reserve(classes.size());
    for (const auto& c : classes) out.push_back(c.n);
    return out;
  }

  friend bool operator==(const CoveringSystem&, const CoveringSystem&) = default;
};

struct CoverReport {
  bool is_cover = false;
  Natural lcm;
  std::optional<Natural> uncovered_witness;  // least uncovered residue in [0, lcm)
  std::uint64_t min_multiplicity = 0;
  std::uint64_t max_multiplicity = 0;
  std::map<Natural, std::size_t> modulus_multiplicities;
};

inline constexpr std::uint64_t kDefaultEnumerationBudget = 100'000'000;

/// Occurrence count of each distinct (normalized) modulus.
inline std::map<Natural, std::size_t> modulus_multiplicity(const CoveringSystem& s) {
  std::map<Natural, std::size_t> out;
  for (const auto& c : s.classes) ++out[normalize(c).n];
  return out;
}

/// Sieves one full period [0, lcm) and records how many classes hit each
/// residue. A system covers Z iff it covers every residue of that period.
inline CoverReport verify_cover(const CoveringSystem& s,
                                std::uint64_t enumeration_budget = kDefaultEnumerationBudget) {
  if (s.classes.empty()) throw PreconditionError("covering system \"" + s.label + "\" has no classes");
  CoverReport report;
  report.lcm = lcm_list(s.moduli());
  if (report.lcm > from_u64(enumeration_budget)) {
    throw BudgetExceeded("lcm " + to_decimal(report.lcm) + " of \"" + s.label +
                         "\" exceeds the enumeration budget " + std::to_string(enumeration_budget));
  }
  const std::uint64_t period = to_u64(report.lcm);

  // Hit counts saturate at 65535; only the extremes are reported.
  std::vector<std::uint16_t> hits(period, 0);
  for (const auto& raw : s.classes) {
    ResidueClass c = normalize(raw);
    const std::uint64_t step = to_u64(c.n);
    for (std::uint64_t x = to_u64(c.a); x < period; x += step) {
      if (hits[x] != std::numeric_limits<std::uint16_t>::max()) ++hits[x];
    }
  }
  auto [lo, hi] = std::minmax_element(hits.begin(), hits.end());
  report.min_multiplicity = *lo;
  report.max_multiplicity = *hi;
  auto gap = std::find(hits.begin(), hits.end(), std::uint16_t{0});
  if (gap != hits.end()) report.uncovered_witness = from_u64(static_cast<std::uint64_t>(gap - hits.begin()));
  report.is_cover = !report.uncovered_witness.has_value();
  report.modulus_multiplicities = modulus_multiplicity(s);
  return report;
}

/// {1(2)} ∪ {2b(2m) : b(m) in odd_cover}. If the input covers Z then so does
/// the output, and every doubled modulus is ≡ 2 (mod 4).
inline CoveringSystem build_doubled_cover(const CoveringSystem& odd_cover) {
  CoveringSystem out;
  out.label = odd_cover.label.empty() ? "doubled" : odd_cover.label + " (doubled)";
  out.classes.push_back(ResidueClass{1, 2});
  for (std::size_t i = 0; i < odd_cover.classes.size(); ++i) {
    ResidueClass c = normalize(odd_cover.classes[i]);
    if (mpz_even_p(c.n.get_mpz_t())) {
      throw PreconditionError("class #" + std::to_string(i) + " has even modulus " + to_decimal(c.n));
    }
    out.classes.push_back(ResidueClass{2 * c.a, 2 * c.n});
  }
  return out;
}

}  // namespace coverlab
