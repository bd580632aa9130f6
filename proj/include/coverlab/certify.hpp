#pragma once

// Exclusion certificates: along n ≡ r (mod m), x^2 - u_n = ±p^b is ruled out
// by showing that every (n, sign, b) fails modulo some auxiliary prime q whose
// residue x mod q is fixed by the construction.

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "coverlab/arith.hpp"
#include "coverlab/construct.hpp"
#include "coverlab/lucas.hpp"

namespace coverlab {

struct AuxResidue {
  Natural q;
  Natural x_mod_q;

  friend bool operator==(const AuxResidue&, const AuxResidue&) = default;
};

struct ExclusionCase {
  std::string label;
  Natural r;  // n ≡ r (mod m)
  Natural m;
  Natural p;
  std::vector<AuxResidue> aux;

  friend bool operator==(const ExclusionCase&, const ExclusionCase&) = default;
};

struct Counterexample {
  std::uint64_t n_residue = 0;  // modulo n_period
  int sign = 1;
  std::uint64_t b_residue = 0;  // modulo b_period

  friend bool operator==(const Counterexample&, const Counterexample&) = default;
};

struct AuxEvidence {
  std::uint64_t q = 0;
  std::uint64_t period = 0;  // period of u modulo q
  std::uint64_t order = 0;   // multiplicative order of p modulo q

  friend bool operator==(const AuxEvidence&, const AuxEvidence&) = default;
};

struct CertificateReport {
  std::string label;
  bool valid = false;
  std::uint64_t combinations = 0;
  std::uint64_t n_period = 0;
  std::uint64_t b_period = 0;
  std::optional<Counterexample> counterexample;
  std::vector<AuxEvidence> evidence;

  friend bool operator==(const CertificateReport&, const CertificateReport&) = default;
};

inline constexpr std::uint64_t kDefaultCombinationBudget = 1'000'000'000;

inline std::vector<Natural> default_aux_pool() { return {11, 19, 29, 31, 71, 181}; }

/// Exhausts n over one period of the progression (lcm of m and the u-periods
/// mod q), sign in {+, -} and b over the lcm of the orders of p mod q.
inline CertificateReport check_exclusion(const ExclusionCase& c,
                                         std::uint64_t budget = kDefaultCombinationBudget) {
  if (c.m < 1) throw PreconditionError("progression modulus must be >= 1");
  if (c.p < 2) throw PreconditionError("target must be >= 2");
  if (!fits_u64(c.m)) throw PreconditionError("progression modulus too large");

  struct Aux {
    std::uint64_t q, period, order;
    std::vector<std::uint64_t> lhs;  // (x^2 - u_n) mod q, indexed by n mod period
    std::vector<std::uint64_t> pw;   // p^b mod q, indexed by b mod order
  };
  std::vector<Aux> aux;
  CertificateReport report;
  report.label = c.label;

  const std::uint64_t m = to_u64(c.m);
  Natural n_period = c.m;
  Natural b_period = 1;
  for (const auto& a : c.aux) {
    if (a.q < 2 || !is_probable_prime(a.q)) throw PreconditionError(to_decimal(a.q) + " is not prime");
    if (a.q > (1u << 28)) throw PreconditionError("auxiliary prime " + to_decimal(a.q) + " is too large");
    if (floor_mod(c.p, a.q) == 0) {
      throw PreconditionError("auxiliary prime " + to_decimal(a.q) + " divides " + to_decimal(c.p));
    }
    Aux x;
    x.q = to_u64(a.q);
    x.period = period_mod(kHalfTripleFibonacci, x.q).period;
    const Natural qm1 = a.q - 1;
    x.order = to_u64(*order_dividing(floor_mod(c.p, a.q), a.q, qm1, factor(qm1)));
    const std::uint64_t xq = to_u64(floor_mod(a.x_mod_q, a.q));
    const std::uint64_t x2 = xq * xq % x.q;
    std::uint64_t u0 = 0, u1 = 1;
    for (std::uint64_t i = 0; i < x.period; ++i) {
      x.lhs.push_back((x2 + x.q - u0) % x.q);
      std::uint64_t next = (4 * u1 + u0) % x.q;
      u0 = u1;
      u1 = next;
    }
    const std::uint64_t pq = to_u64(floor_mod(c.p, a.q));
    std::uint64_t acc = 1;
    for (std::uint64_t i = 0; i < x.order; ++i) {
      x.pw.push_back(acc);
      acc = acc * pq % x.q;
    }
    n_period = lcm(n_period, from_u64(x.period));
    b_period = lcm(b_period, from_u64(x.order));
    report.evidence.push_back(AuxEvidence{x.q, x.period, x.order});
    aux.push_back(std::move(x));
  }

  const Natural total = (n_period / c.m) * 2 * b_period;
  if (total > from_u64(budget)) {
    throw BudgetExceeded("case \"" + c.label + "\" needs " + to_decimal(total) +
                         " combinations, budget is " + std::to_string(budget));
  }
  report.n_period = to_u64(n_period);
  report.b_period = to_u64(b_period);
  report.combinations = to_u64(total);

  const std::uint64_t r = to_u64(floor_mod(c.r, c.m));
  for (std::uint64_t n = r; n < report.n_period; n += m) {
    for (int sign : {1, -1}) {
      for (std::uint64_t b = 0; b < report.b_period; ++b) {
        bool excluded = false;
        for (const auto& x : aux) {
          std::uint64_t rhs = x.pw[b % x.order];
          if (sign < 0) rhs = (x.q - rhs) % x.q;
          if (x.lhs[n % x.period] != rhs) {
            excluded = true;
            break;
          }
        }
        if (!excluded) {
          report.counterexample = Counterexample{n, sign, b};
          return report;
        }
      }
    }
  }
  report.valid = true;
  return report;
}

/// One case per class of the doubled cover: n ≡ 1 (mod 2) against p_0, and
/// n ≡ 2b_t (mod 2m_t) against p_t. Each case uses every pool prime that is
/// one of the construction's moduli and does not divide p_t.
inline std::vector<ExclusionCase> build_cases(const Theorem13Data& data,
                                              const std::vector<Natural>& pool = default_aux_pool()) {
  std::vector<AuxResidue> known;
  for (const auto& q : pool) {
    bool found = false;
    for (std::size_t t = 0; t < data.primes.size(); ++t) {
      if (data.primes[t] == q) {
        known.push_back(AuxResidue{q, floor_mod(data.residues[t], q)});
        found = true;
      }
    }
    if (!found) throw PreconditionError("auxiliary prime " + to_decimal(q) + " is not a construction modulus");
  }
  const CoveringSystem doubled = build_doubled_cover(data.odd_cover);
  std::vector<ExclusionCase> cases;
  for (std::size_t t = 0; t < doubled.classes.size() && t < data.primes.size(); ++t) {
    ResidueClass cls = normalize(doubled.classes[t]);
    ExclusionCase c;
    c.r = cls.a;
    c.m = cls.n;
    c.p = data.primes[t];
    c.label = "n = " + to_decimal(c.r) + " (mod " + to_decimal(c.m) + "), p = " + to_decimal(c.p);
    for (const auto& a : known) {
      if (floor_mod(c.p, a.q) != 0) c.aux.push_back(a);
    }
    cases.push_back(std::move(c));
  }
  return cases;
}

inline std::vector<CertificateReport> certify_all_cases(const Theorem13Data& data,
                                                        const std::vector<Natural>& pool = default_aux_pool(),
                                                        std::uint64_t budget = kDefaultCombinationBudget) {
  std::vector<CertificateReport> out;
  for (const auto& c : build_cases(data, pool)) out.push_back(check_exclusion(c, budget));
  return out;
}

inline bool nonzero_guard(const Theorem13Data& data) {
  return nonzero_guard(crt_combine(data.prime_classes()));
}

}  // namespace coverlab
