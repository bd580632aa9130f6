#pragma once

// Arbitrary-precision number theory primitives shared by every module.
//
// All functions are pure: they depend only on their arguments, and values
// may be shared read-only between threads.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coverlab/errors.hpp"
#include "coverlab/natural.hpp"
#include "coverlab/residue_class.hpp"

namespace coverlab {

struct PrimePower {
  Natural prime;
  unsigned exponent = 1;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// value = (product of prime^exponent) * cofactor. `complete` holds exactly
/// when the cofactor is 1; otherwise the cofactor is composite or unresolved.
struct Factorization {
  std::vector<PrimePower> factors;  // ascending by prime
  Natural cofactor{1};
  bool complete = true;

  Natural value() const {
    Natural v = cofactor;
    for (const auto& f : factors) {
      Natural pk;
      mpz_pow_ui(pk.get_mpz_t(), f.prime.get_mpz_t(), f.exponent);
      v *= pk;
    }
    return v;
  }

  std::vector<Natural> primes() const {
    std::vector<Natural> out;
    out.reserve(factors.size());
    for (const auto& f : factors) out.push_back(f.prime);
    return out;
  }
};

struct FactorBudget {
  std::uint64_t trial_bound = 1'000'000;
  std::uint64_t rho_iterations = 10'000'000;  // per attempt
  unsigned rho_attempts = 8;                  // each with its own polynomial offset
};

inline Natural gcd(const Natural& a, const Natural& b) {
  Natural g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Natural lcm(const Natural& a, const Natural& b) {
  Natural l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

inline Natural lcm_list(std::span<const Natural> ns) {
  if (ns.empty()) throw PreconditionError("lcm of an empty list is undefined");
  Natural acc = 1;
  for (const auto& n : ns) {
    if (sgn(n) <= 0) throw PreconditionError("lcm inputs must be >= 1, got " + to_decimal(n));
    acc = lcm(acc, n);
  }
  return acc;
}

inline Natural mod_pow(const Integer& base, const Natural& exp, const Natural& m) {
  if (m < 2) throw PreconditionError("mod_pow modulus must be >= 2, got " + to_decimal(m));
  if (sgn(exp) < 0) throw PreconditionError("mod_pow exponent must be >= 0");
  Natural r;
  Natural b = floor_mod(base, m);
  mpz_powm(r.get_mpz_t(), b.get_mpz_t(), exp.get_mpz_t(), m.get_mpz_t());
  return r;
}

/// Inverse of a modulo m; throws if gcd(a, m) != 1.
inline Natural inverse_mod(const Integer& a, const Natural& m) {
  Natural inv;
  Natural reduced = floor_mod(a, m);
  if (m == 1) return 0;
  if (mpz_invert(inv.get_mpz_t(), reduced.get_mpz_t(), m.get_mpz_t()) == 0) {
    throw PreconditionError(to_decimal(a) + " is not invertible modulo " + to_decimal(m));
  }
  return inv;
}

/// Multiplicative order of a modulo m, given that it divides n and a complete
/// factorization of n. The order is found by stripping prime factors from n
/// while the congruence a^d ≡ 1 persists. Returns nullopt when a^n ≢ 1.
inline std::optional<Natural> order_dividing(const Natural& a, const Natural& m, const Natural& n,
                                             const Factorization& n_factors) {
  if (gcd(floor_mod(a, m), m) != 1) {
    throw PreconditionError("order_dividing: gcd(" + to_decimal(a) + ", " + to_decimal(m) + ") != 1");
  }
  if (!n_factors.complete || n_factors.value() != n) {
    throw PreconditionError("order_dividing: exponent factorization is incomplete or does not match " +
                            to_decimal(n));
  }
  if (mod_pow(a, n, m) != 1) return std::nullopt;
  Natural d = n;
  for (const auto& pp : n_factors.factors) {
    for (unsigned i = 0; i < pp.exponent; ++i) {
      Natural candidate = d / pp.prime;
      if (mod_pow(a, candidate, m) != 1) break;
      d = candidate;
    }
  }
  return d;
}

/// Intersection of residue classes with arbitrary (not necessarily coprime)
/// moduli. The result has modulus lcm(n_i) and representative in [0, M).
/// An empty input yields 0(1).
inline ResidueClass crt_combine(std::span<const ResidueClass> classes) {
  Natural r = 0;
  Natural m = 1;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    ResidueClass c = normalize(classes[i]);
    Natural g = gcd(m, c.n);
    Integer diff = c.a - r;
    if (!mpz_divisible_p(diff.get_mpz_t(), g.get_mpz_t())) {
      // Pairwise consistency is equivalent to joint consistency, so some
      // earlier class conflicts with this one on its own.
      for (std::size_t j = 0; j < i; ++j) {
        ResidueClass other = normalize(classes[j]);
        Natural gj = gcd(other.n, c.n);
        Integer dj = c.a - other.a;
        if (!mpz_divisible_p(dj.get_mpz_t(), gj.get_mpz_t())) {
          std::string msg = "inconsistent residue classes #" + std::to_string(j) + " " +
                            to_decimal(other.a) + "(" + to_decimal(other.n) + ") and #" +
                            std::to_string(i) + " " + to_decimal(c.a) + "(" + to_decimal(c.n) + ")";
          throw CrtConflict(j, i, msg);
        }
      }
      throw CrtConflict(i, i, "inconsistent residue classes");  // unreachable for valid input
    }
    Natural step = c.n / g;
    Natural t = floor_mod(Integer(diff / g) * inverse_mod(m / g, step), step);
    r += m * t;
    m *= step;
    r = floor_mod(r, m);
  }
  return ResidueClass{r, m};
}

inline ResidueClass crt_combine(std::initializer_list<ResidueClass> classes) {
  return crt_combine(std::span<const ResidueClass>(classes.begin(), classes.size()));
}

namespace detail {

// One strong-probable-prime round for odd n > 3 with n - 1 = d * 2^s.
inline bool strong_probable_prime_round(const Natural& n, const Natural& n_minus_1, const Natural& d,
                                        unsigned long s, const Natural& base) {
  Natural x;
  mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  if (x == 1 || x == n_minus_1) return true;
  for (unsigned long i = 1; i < s; ++i) {
    mpz_powm_ui(x.get_mpz_t(), x.get_mpz_t(), 2, n.get_mpz_t());
    if (x == n_minus_1) return true;
    if (x == 1) return false;
  }
  return false;
}

inline constexpr std::array<unsigned, 25> kSmallPrimes = {2,  3,  5,  7,  11, 13, 17, 19, 23,
                                                          29, 31, 37, 41, 43, 47, 53, 59, 61,
                                                          67, 71, 73, 79, 83, 89, 97};

}  // namespace detail

inline constexpr unsigned kDefaultPrimalityRounds = 40;
inline constexpr unsigned long kPrimalitySeed = 0x00C0FE11ul;

/// Miller–Rabin. Deterministic below 2^64 (bases 2..37 are a complete witness
/// set up to 3.3e24). Above 2^64, `rounds` bases drawn from a fixed-seed
/// Mersenne Twister: no false negatives, false positives with probability at
/// most 4^-rounds.
inline bool is_probable_prime(const Natural& n, unsigned rounds = kDefaultPrimalityRounds) {
  if (n < 2) return false;
  for (unsigned p : detail::kSmallPrimes) {
    if (n == p) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
  }
  Natural n_minus_1 = n - 1;
  Natural d = n_minus_1;
  unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);

  if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 64) {
    for (unsigned p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
      if (!detail::strong_probable_prime_round(n, n_minus_1, d, s, Natural(p))) return false;
    }
    return true;
  }
  gmp_randclass rng(gmp_randinit_mt);
  rng.seed(kPrimalitySeed);
  Natural span = n - 3;  // bases in [2, n - 2]
  for (unsigned i = 0; i < rounds; ++i) {
    Natural base = rng.get_z_range(span) + 2;
    if (!detail::strong_probable_prime_round(n, n_minus_1, d, s, base)) return false;
  }
  return true;
}

namespace detail {

// Brent's variant of Pollard rho with batched gcds. Returns a nontrivial
// divisor of the odd composite n, or nullopt when the iteration cap is hit.
inline std::optional<Natural> brent_rho(const Natural& n, unsigned long offset, std::uint64_t cap) {
  constexpr std::uint64_t kBatch = 128;
  mpz_class y = 2, x, ys, q = 1, g = 1, diff, c = offset;
  std::uint64_t r = 1;
  std::uint64_t used = 0;
  auto step = [&](mpz_class& v) {
    mpz_mul(v.get_mpz_t(), v.get_mpz_t(), v.get_mpz_t());
    mpz_add(v.get_mpz_t(), v.get_mpz_t(), c.get_mpz_t());
    mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
  };
  while (g == 1) {
    x = y;
    for (std::uint64_t i = 0; i < r; ++i) step(y);
    used += r;
    std::uint64_t k = 0;
    while (k < r && g == 1) {
      ys = y;
      std::uint64_t lim = std::min(kBatch, r - k);
      for (std::uint64_t i = 0; i < lim; ++i) {
        step(y);
        mpz_sub(diff.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
        mpz_abs(diff.get_mpz_t(), diff.get_mpz_t());
        mpz_mul(q.get_mpz_t(), q.get_mpz_t(), diff.get_mpz_t());
        mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      }
      mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      k += lim;
      used += lim;
    }
    r *= 2;
    if (used > cap && g == 1) return std::nullopt;
  }
  if (g == n) {
    // The batch overshot; replay it one step at a time.
    do {
      step(ys);
      mpz_sub(diff.get_mpz_t(), x.get_mpz_t(), ys.get_mpz_t());
      mpz_abs(diff.get_mpz_t(), diff.get_mpz_t());
      mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
    } while (g == 1);
  }
  if (g == n) return std::nullopt;
  return g;
}

}  // namespace detail

/// Trial division up to `budget.trial_bound`, then Brent–Pollard rho on any
/// composite remainder. Every reported prime passes is_probable_prime; when
/// the budget runs out the unresolved part is left in `cofactor`.
inline Factorization factor(const Natural& n, const FactorBudget& budget = {}) {
  if (n < 1) throw PreconditionError("factor requires n >= 1");
  std::map<Natural, unsigned> found;
  Natural rem = n;

  auto strip = [&](unsigned long d) {
    while (mpz_divisible_ui_p(rem.get_mpz_t(), d)) {
      mpz_divexact_ui(rem.get_mpz_t(), rem.get_mpz_t(), d);
      ++found[Natural(d)];
    }
  };
  // d*d must stay below 2^64 for the square test below.
  const std::uint64_t bound = std::min<std::uint64_t>(budget.trial_bound, 0xFFFFFFFFull);
  auto square_exceeds_rem = [&](std::uint64_t d) {
    if (mpz_sizeinbase(rem.get_mpz_t(), 2) > 64) return false;
    return d * d > to_u64(rem);
  };
  strip(2);
  strip(3);
  bool exhausted_trial = false;
  // Wheel over 6k ± 1; composite divisors never divide once their primes are gone.
  for (std::uint64_t d = 5;; d += 6) {
    if (square_exceeds_rem(d)) break;
    if (d > bound) {
      exhausted_trial = true;
      break;
    }
    strip(static_cast<unsigned long>(d));
    if (d + 2 <= bound) strip(static_cast<unsigned long>(d + 2));
  }

  Natural cofactor = 1;
  std::vector<Natural> pending;
  if (rem > 1) {
    if (!exhausted_trial) {
      ++found[rem];  // no divisor up to sqrt(rem)
    } else {
      pending.push_back(rem);
    }
  }
  while (!pending.empty()) {
    Natural m = pending.back();
    pending.pop_back();
    if (m == 1) continue;
    if (is_probable_prime(m)) {
      ++found[m];
      continue;
    }
    if (mpz_perfect_square_p(m.get_mpz_t())) {
      Natural root;
      mpz_sqrt(root.get_mpz_t(), m.get_mpz_t());
      pending.push_back(root);
      pending.push_back(root);
      continue;
    }
    std::optional<Natural> split;
    for (unsigned attempt = 0; attempt < budget.rho_attempts && !split; ++attempt) {
      split = detail::brent_rho(m, 1 + attempt, budget.rho_iterations);
    }
    if (!split) {
      cofactor *= m;
      continue;
    }
    pending.push_back(*split);
    pending.push_back(m / *split);
  }

  Factorization out;
  for (const auto& [p, e] : found) out.factors.push_back(PrimePower{p, e});
  out.cofactor = cofactor;
  out.complete = (cofactor == 1);
  return out;
}

inline Factorization factor(std::uint64_t n, const FactorBudget& budget = {}) {
  return factor(from_u64(n), budget);
}

/// Largest alpha with p^alpha | n.
inline unsigned long valuation(const Natural& p, const Natural& n) {
  if (p < 2) throw PreconditionError("valuation base must be >= 2");
  if (n < 1) throw PreconditionError("valuation argument must be >= 1");
  Natural rest;
  return mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
}

/// Jacobi symbol (a | n) for odd n >= 3.
inline int jacobi(const Integer& a, const Natural& n) {
  if (n < 3 || mpz_even_p(n.get_mpz_t())) {
    throw PreconditionError("jacobi requires an odd modulus >= 3, got " + to_decimal(n));
  }
  return mpz_jacobi(a.get_mpz_t(), n.get_mpz_t());
}

/// All positive divisors of a completely factored number, ascending.
inline std::vector<Natural> divisors(const Factorization& f) {
  if (!f.complete) throw PreconditionError("divisors requires a complete factorization");
  std::vector<Natural> out{1};
  for (const auto& pp : f.factors) {
    std::size_t base = out.size();
    Natural pk = 1;
    for (unsigned e = 1; e <= pp.exponent; ++e) {
      pk *= pp.prime;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace coverlab
