#pragma once

// Second-order Lucas sequences U_0 = 0, U_1 = 1, U_{n+1} = c U_n + U_{n-1}.
// c = 1 is Fibonacci; c = 4 gives u_n = F_{3n} / 2.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coverlab/arith.hpp"

namespace coverlab {

struct LucasSpec {
  std::uint64_t c = 4;
};

inline constexpr LucasSpec kFibonacci{1};
inline constexpr LucasSpec kHalfTripleFibonacci{4};  // u_n = F_{3n}/2

struct SequencePeriod {
  std::uint64_t modulus = 0;
  std::uint64_t period = 0;
};

/// Exact U_n by plain iteration.
inline Natural u_term(LucasSpec spec, std::uint64_t n) {
  Natural prev = 0, cur = 1;
  if (n == 0) return prev;
  for (std::uint64_t i = 1; i < n; ++i) {
    Natural next = spec.c * cur + prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

/// U_n mod m in O(log n) steps using
///   U_{2k} = U_k (2 U_{k+1} - c U_k),  U_{2k+1} = U_{k+1}^2 + U_k^2.
inline Natural u_term_mod(LucasSpec spec, const Natural& n, const Natural& m) {
  if (m < 2) throw PreconditionError("u_term_mod modulus must be >= 2");
  Natural uk = 0, uk1 = 1;  // (U_k, U_{k+1}) with k built from the top bits of n
  const Natural c = from_u64(spec.c);
  for (long bit = static_cast<long>(mpz_sizeinbase(n.get_mpz_t(), 2)) - 1; bit >= 0; --bit) {
    Natural even = floor_mod(uk * (2 * uk1 - c * uk), m);
    Natural odd = floor_mod(uk1 * uk1 + uk * uk, m);
    if (mpz_tstbit(n.get_mpz_t(), static_cast<mp_bitcnt_t>(bit))) {
      uk = odd;
      uk1 = floor_mod(c * odd + even, m);
    } else {
      uk = even;
      uk1 = odd;
    }
  }
  return uk;
}

inline Natural u_term_mod(LucasSpec spec, std::uint64_t n, const Natural& m) {
  return u_term_mod(spec, from_u64(n), m);
}

/// Least π > 0 with (U_π, U_{π+1}) ≡ (0, 1) (mod m), by walking the pair state.
inline SequencePeriod period_mod(LucasSpec spec, std::uint64_t m) {
  if (m < 2) throw PreconditionError("period_mod modulus must be >= 2");
  if (m > (1ull << 28)) throw PreconditionError("period_mod modulus too large: " + std::to_string(m));
  const std::uint64_t limit = 6 * m * m;
  const std::uint64_t c = spec.c % m;
  std::uint64_t x = 0, y = 1;
  for (std::uint64_t k = 1; k <= limit; ++k) {
    std::uint64_t next = (c * y + x) % m;
    x = y;
    y = next;
    if (x == 0 && y == 1) return SequencePeriod{m, k};
  }
  throw BudgetExceeded("period_mod: no period found within 6*m^2 steps for m = " + std::to_string(m));
}

/// Least n > 0 with p | U_n, searching n <= search_bound.
inline std::optional<std::uint64_t> rank_of_apparition(LucasSpec spec, const Natural& p,
                                                       std::uint64_t search_bound) {
  if (p < 2) throw PreconditionError("rank_of_apparition requires p >= 2");
  Natural prev = 0, cur = 1;
  const Natural c = floor_mod(from_u64(spec.c), p);
  for (std::uint64_t n = 1; n <= search_bound; ++n) {
    if (sgn(cur) == 0) return n;
    Natural next = floor_mod(c * cur + prev, p);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return std::nullopt;
}

inline bool is_primitive_divisor_u(LucasSpec spec, const Natural& p, std::uint64_t n) {
  auto rank = rank_of_apparition(spec, p, n);
  return rank && *rank == n;
}

inline Natural fibonacci(std::uint64_t n) { return u_term(kFibonacci, n); }

/// 2 u_n = F_{3n}.
inline bool check_u_identity(std::uint64_t n) {
  return 2 * u_term(kHalfTripleFibonacci, n) == fibonacci(3 * n);
}

/// For n ≡ 2 (mod 4) and a primitive prime divisor p of U_n, checks
/// U_{n+1} ≡ 1 (mod p) and U_{kn+r} ≡ U_r (mod p) for all k <= k_max, r < n.
/// Throws PreconditionError naming the violated hypothesis.
inline bool lemma41_check(LucasSpec spec, std::uint64_t n, const Natural& p, std::uint64_t k_max) {
  if (n % 4 != 2) {
    throw PreconditionError("periodicity check requires n ≡ 2 (mod 4), got n = " + std::to_string(n));
  }
  if (!is_probable_prime(p)) throw PreconditionError(to_decimal(p) + " is not prime");
  auto rank = rank_of_apparition(spec, p, n);
  if (!rank) throw PreconditionError(to_decimal(p) + " does not divide U_" + std::to_string(n));
  if (*rank != n) {
    throw PreconditionError(to_decimal(p) + " already divides U_" + std::to_string(*rank) +
                            ", so it is not primitive for U_" + std::to_string(n));
  }

  // Residues U_0 .. U_{(k_max+1) n} mod p by iteration.
  const std::uint64_t total = std::max<std::uint64_t>((k_max + 1) * n, n + 1);
  std::vector<Natural> residues;
  residues.reserve(total + 1);
  residues.emplace_back(0);
  residues.emplace_back(1);
  const Natural c = floor_mod(from_u64(spec.c), p);
  while (residues.size() <= total) {
    const std::size_t i = residues.size();
    residues.push_back(floor_mod(c * residues[i - 1] + residues[i - 2], p));
  }
  if (residues[n + 1] != 1) return false;
  for (std::uint64_t k = 0; k <= k_max; ++k) {
    for (std::uint64_t r = 0; r < n; ++r) {
      if (residues[k * n + r] != residues[r]) return false;
    }
  }
  return true;
}

}  // namespace coverlab
