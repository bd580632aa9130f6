#pragma once

// Primitive prime divisors of 2^n - 1 and verification of a cover's prime
// table. Orders and valuations are always computed modulo p, p^2, ...;
// 2^n - 1 itself is never built for the table checks.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "coverlab/arith.hpp"
#include "coverlab/covers.hpp"

namespace coverlab {

struct PrimitiveDivisorWitness {
  Natural n;
  Natural p;
  unsigned long alpha = 1;  // exact power of p dividing 2^n - 1
};

struct PrimitiveSearch {
  std::vector<PrimitiveDivisorWitness> witnesses;  // ascending by p
  bool complete = true;  // every primitive prime divisor was found
};

struct PrimeTableEntry {
  Natural n;
  std::vector<Natural> primes;

  friend bool operator==(const PrimeTableEntry&, const PrimeTableEntry&) = default;
};

/// Claimed primitive prime divisors per modulus, plus the moduli whose primes
/// are deliberately left out.
struct PrimeTable {
  std::vector<PrimeTableEntry> entries;
  std::vector<Natural> omitted;

  friend bool operator==(const PrimeTable&, const PrimeTable&) = default;
};

/// True iff the multiplicative order of 2 modulo the prime p is exactly n.
inline bool is_primitive_divisor(const Natural& p, const Natural& n, const Factorization& n_factors) {
  if (!is_probable_prime(p)) throw PreconditionError(to_decimal(p) + " is not prime");
  if (!n_factors.complete) throw PreconditionError("factorization of " + to_decimal(n) + " is incomplete");
  if (p == 2) return false;
  auto order = order_dividing(2, p, n, n_factors);
  return order && *order == n;
}

/// Φ_n(2) = ∏_{d | n} (2^{n/d} - 1)^{μ(d)}. Every primitive prime divisor of
/// 2^n - 1 divides it.
inline Natural cyclotomic_at_two(const Natural& n) {
  if (n < 1) throw PreconditionError("cyclotomic index must be >= 1");
  Factorization nf = factor(n);
  if (!nf.complete) throw PreconditionError("cannot factor index " + to_decimal(n));
  std::vector<Natural> radical_primes = nf.primes();
  Natural numerator = 1, denominator = 1;
  const std::size_t k = radical_primes.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    Natural d = 1;
    int parity = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if (mask & (std::size_t{1} << i)) {
        d *= radical_primes[i];
        parity ^= 1;
      }
    }
    Natural e = n / d;
    Natural term;
    mpz_ui_pow_ui(term.get_mpz_t(), 2, mpz_get_ui(e.get_mpz_t()));
    term -= 1;
    (parity ? denominator : numerator) *= term;
  }
  Natural out;
  mpz_divexact(out.get_mpz_t(), numerator.get_mpz_t(), denominator.get_mpz_t());
  return out;
}

/// Largest alpha with 2^n ≡ 1 (mod p^alpha), lifting the modulus one power of
/// p at a time. Zero when p does not divide 2^n - 1.
inline unsigned long mersenne_valuation(const Natural& p, const Natural& n) {
  if (p < 2) throw PreconditionError("mersenne_valuation requires a prime p");
  if (p == 2) return 0;
  unsigned long alpha = 0;
  Natural modulus = p;
  while (mod_pow(2, n, modulus) == 1) {
    ++alpha;
    modulus *= p;
  }
  return alpha;
}

/// Factors Φ_n(2) within the budget and keeps the primes of order exactly n.
inline PrimitiveSearch find_primitive_divisors(const Natural& n, const FactorBudget& budget = {}) {
  if (n < 2) throw PreconditionError("find_primitive_divisors requires n >= 2");
  if (!mpz_fits_ulong_p(n.get_mpz_t())) throw PreconditionError("exponent too large");
  Factorization nf = factor(n);
  Factorization cf = factor(cyclotomic_at_two(n), budget);
  PrimitiveSearch out;
  for (const auto& pp : cf.factors) {
    if (pp.prime == 2) continue;
    auto order = order_dividing(2, pp.prime, n, nf);
    if (order && *order == n) {
      out.witnesses.push_back(PrimitiveDivisorWitness{n, pp.prime, mersenne_valuation(pp.prime, n)});
    }
  }
  out.complete = cf.complete;
  return out;
}

inline PrimitiveSearch find_primitive_divisors(std::uint64_t n, const FactorBudget& budget = {}) {
  return find_primitive_divisors(from_u64(n), budget);
}

/// 2^(p-1) ≡ 1 (mod p^2) for an odd prime p.
inline bool wieferich_test(const Natural& p) {
  if (p < 3 || mpz_even_p(p.get_mpz_t())) throw PreconditionError("wieferich_test requires an odd prime");
  if (!is_probable_prime(p)) throw PreconditionError(to_decimal(p) + " is not prime");
  return mod_pow(2, p - 1, p * p) == 1;
}

// ---------------------------------------------------------------------------
// Prime table verification

struct PrimeCheck {
  Natural n;
  Natural p;
  bool prime = false;
  bool above_five = false;
  bool primitive = false;
  bool distinct = false;

  bool ok() const { return prime && above_five && primitive && distinct; }
};

struct MultiplicityCheck {
  Natural n;
  std::size_t listed = 0;
  std::size_t multiplicity = 0;
  bool omitted = false;  // listed in the table's omitted set instead of entries

  bool ok() const { return omitted ? (listed == 0 && multiplicity == 1) : listed == multiplicity; }
};

/// A claimed prime that failed verification, with the replacement found by
/// find_primitive_divisors (if any).
struct Erratum {
  Natural n;
  Natural claimed;
  std::string reason;
  std::optional<Natural> replacement;
  bool replacement_verified = false;
};

struct Theorem11Report {
  std::vector<PrimeCheck> primes;
  std::vector<MultiplicityCheck> multiplicities;
  std::vector<Natural> omitted_expected;     // cover moduli without table entries
  std::vector<Natural> unknown_exponents;    // table exponents that are not cover moduli
  bool omitted_match = false;
  std::vector<Erratum> errata;

  /// Failures not accounted for by a verified erratum.
  std::size_t unexplained_failures() const {
    std::size_t count = 0;
    for (const auto& pc : primes) {
      if (pc.ok()) continue;
      auto it = std::find_if(errata.begin(), errata.end(), [&](const Erratum& e) {
        return e.n == pc.n && e.claimed == pc.p && e.replacement_verified;
      });
      if (it == errata.end()) ++count;
    }
    for (const auto& mc : multiplicities) count += mc.ok() ? 0 : 1;
    count += unknown_exponents.size();
    count += omitted_match ? 0 : 1;
    return count;
  }

  bool passed() const { return unexplained_failures() == 0; }
};

struct Theorem11Options {
  FactorBudget errata_budget{};
  bool search_errata = true;
};

/// Checks a prime table against a cover: per-modulus counts equal
/// multiplicities, every listed p is prime, > 5 and primitive for its n, all
/// listed primes are distinct, and the omitted exponents are exactly the cover
/// moduli without entries (each of multiplicity 1). Failing primes become
/// errata; each erratum gets a replacement discovered by
/// find_primitive_divisors and re-verified.
inline Theorem11Report verify_theorem11(const CoveringSystem& cover, const PrimeTable& table,
                                        const Theorem11Options& options = {}) {
  Theorem11Report report;
  const auto mult = modulus_multiplicity(cover);

  std::map<Natural, std::size_t> seen;
  for (const auto& e : table.entries) {
    for (const auto& p : e.primes) ++seen[p];
  }

  std::set<Natural> listed_exponents;
  for (const auto& e : table.entries) {
    listed_exponents.insert(e.n);
    if (!mult.contains(e.n)) report.unknown_exponents.push_back(e.n);
    Factorization nf = factor(e.n);
    for (const auto& p : e.primes) {
      PrimeCheck pc{e.n, p};
      pc.prime = is_probable_prime(p);
      pc.above_five = p > 5;
      pc.primitive = pc.prime && is_primitive_divisor(p, e.n, nf);
      pc.distinct = seen[p] == 1;
      report.primes.push_back(pc);
    }
  }

  std::set<Natural> omitted(table.omitted.begin(), table.omitted.end());
  for (const auto& [n, count] : mult) {
    MultiplicityCheck mc{n, 0, count, omitted.contains(n)};
    for (const auto& e : table.entries) {
      if (e.n == n) mc.listed += e.primes.size();
    }
    report.multiplicities.push_back(mc);
    if (!listed_exponents.contains(n)) report.omitted_expected.push_back(n);
  }
  std::vector<Natural> omitted_sorted(omitted.begin(), omitted.end());
  report.omitted_match = omitted_sorted == report.omitted_expected &&
                         omitted.size() == table.omitted.size();

  if (!options.search_errata) return report;
  for (const auto& pc : report.primes) {
    if (pc.ok()) continue;
    Erratum err{pc.n, pc.p, {}, std::nullopt, false};
    if (!pc.prime) {
      err.reason = "not prime";
    } else if (!pc.primitive) {
      err.reason = "order of 2 is not n";
    } else if (!pc.above_five) {
      err.reason = "not greater than 5";
    } else {
      err.reason = "duplicate prime";
    }
    PrimitiveSearch found = find_primitive_divisors(pc.n, options.errata_budget);
    for (const auto& w : found.witnesses) {
      if (seen.contains(w.p) || w.p <= 5) continue;
      err.replacement = w.p;
      err.replacement_verified = is_probable_prime(w.p) && is_primitive_divisor(w.p, pc.n, factor(pc.n));
      seen[w.p] = 1;
      break;
    }
    report.errata.push_back(err);
  }
  return report;
}

}  // namespace coverlab
