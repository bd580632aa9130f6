#pragma once

// CRT constructions: the Erdős class avoiding 2^n + p, the class a(M) for
// x^2 - F_{3n}/2, and the generic builder for x^m - 2^n over an odd cover.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "coverlab/arith.hpp"
#include "coverlab/covers.hpp"
#include "coverlab/lucas.hpp"
#include "coverlab/mersenne.hpp"

namespace coverlab {

/// Erdős's cover {0(2), 0(3), 1(4), 3(8), 7(12), 23(24)}.
inline CoveringSystem erdos_cover() {
  return CoveringSystem{"A0", {{0, 2}, {0, 3}, {1, 4}, {3, 8}, {7, 12}, {23, 24}}};
}

/// Primitive prime divisors of 2^n - 1 for the moduli of erdos_cover(), in order.
inline std::vector<Natural> erdos_primes() { return {3, 7, 5, 17, 13, 241}; }

/// x ≡ 2^{a_s} (mod p_s) for each class of erdos_cover(), together with
/// x ≡ 1 (mod 2) and x ≡ 3 (mod 31).
inline std::vector<ResidueClass> erdos_congruences() {
  std::vector<ResidueClass> out{{1, 2}, {3, 31}};
  const auto cover = erdos_cover();
  const auto primes = erdos_primes();
  for (std::size_t s = 0; s < cover.classes.size(); ++s) {
    out.push_back(ResidueClass{mod_pow(2, cover.classes[s].a, primes[s]), primes[s]});
  }
  return out;
}

inline ResidueClass build_erdos_class() {
  const auto congruences = erdos_congruences();
  return crt_combine(congruences);
}

/// Least b >= 0 with m0 * b ≡ a_s (mod n_s).
inline Natural solve_b(const Natural& m0, const Natural& a_s, const Natural& n_s) {
  if (n_s < 1) throw PreconditionError("solve_b modulus must be >= 1");
  if (gcd(floor_mod(m0, n_s), n_s) != 1) {
    throw PreconditionError("solve_b: gcd(" + to_decimal(m0) + ", " + to_decimal(n_s) + ") != 1");
  }
  if (n_s == 1) return 0;
  return floor_mod(a_s * inverse_mod(m0, n_s), n_s);
}

namespace detail {

// Square root of a quadratic residue a modulo an odd prime p.
inline Natural tonelli_shanks(const Natural& a_in, const Natural& p) {
  Natural a = floor_mod(a_in, p);
  if (a == 0) return 0;
  if (mpz_legendre(a.get_mpz_t(), p.get_mpz_t()) != 1) {
    throw PreconditionError(to_decimal(a) + " is not a square modulo " + to_decimal(p));
  }
  if (mpz_tstbit(p.get_mpz_t(), 1)) {  // p ≡ 3 (mod 4)
    return mod_pow(a, (p + 1) / 4, p);
  }
  Natural q = p - 1;
  unsigned long s = mpz_scan1(q.get_mpz_t(), 0);
  mpz_fdiv_q_2exp(q.get_mpz_t(), q.get_mpz_t(), s);
  Natural z = 2;
  while (mpz_legendre(z.get_mpz_t(), p.get_mpz_t()) != -1) ++z;

  Natural c = mod_pow(z, q, p);
  Natural x = mod_pow(a, (q + 1) / 2, p);
  Natural t = mod_pow(a, q, p);
  unsigned long m = s;
  while (t != 1) {
    unsigned long i = 0;
    Natural t2 = t;
    while (t2 != 1) {
      t2 = floor_mod(t2 * t2, p);
      ++i;
    }
    Natural b = mod_pow(c, Natural(1) << static_cast<mp_bitcnt_t>(m - i - 1), p);
    x = floor_mod(x * b, p);
    c = floor_mod(b * b, p);
    t = floor_mod(t * c, p);
    m = i;
  }
  return x;
}

// Square root of a unit modulo p^e: Tonelli–Shanks, then Hensel lifting.
inline Natural sqrt_mod_prime_power(const Natural& a, const Natural& p, unsigned long e) {
  Natural x = tonelli_shanks(a, p);
  Natural modulus = p;
  for (unsigned long j = 2; j <= e; ++j) {
    modulus *= p;
    Natural residual = floor_mod(x * x - a, modulus);
    x = floor_mod(x - residual * inverse_mod(2 * x, modulus), modulus);
  }
  return x;
}

inline Natural prime_power(const Natural& p, unsigned long e) {
  Natural out;
  mpz_pow_ui(out.get_mpz_t(), p.get_mpz_t(), e);
  return out;
}

// a is a k-th power residue modulo p^e (cyclic unit group of order phi).
inline bool power_residue(const Natural& k, const Natural& a, const Natural& pe, const Natural& phi) {
  return mod_pow(a, phi / gcd(k, phi), pe) == 1;
}

}  // namespace detail

/// x with x^k ≡ a (mod p^e), for k a power of two and p an odd prime.
/// Square roots are taken k = 2^α times; at each step the root that is still
/// a suitable power residue is kept.
inline Natural pow_root_mod_prime_power(const Natural& k, const Natural& a, const Natural& p,
                                        unsigned long e) {
  if (k < 1 || mpz_popcount(k.get_mpz_t()) != 1) {
    throw PreconditionError("root degree must be a power of two, got " + to_decimal(k));
  }
  if (p < 3 || mpz_even_p(p.get_mpz_t()) || !is_probable_prime(p)) {
    throw PreconditionError(to_decimal(p) + " is not an odd prime");
  }
  if (e < 1) throw PreconditionError("prime power exponent must be >= 1");
  const Natural pe = detail::prime_power(p, e);
  if (k == 1) return floor_mod(a, pe);
  const Natural phi = detail::prime_power(p, e - 1) * (p - 1);
  if (!detail::power_residue(k, a, pe, phi)) {
    throw PreconditionError(to_decimal(a) + " has no " + to_decimal(k) + "-th root modulo " +
                            to_decimal(p) + "^" + std::to_string(e));
  }
  Natural degree = k;
  Natural value = floor_mod(a, pe);
  while (degree > 1) {
    Natural r = detail::sqrt_mod_prime_power(value, p, e);
    degree /= 2;
    if (!detail::power_residue(degree, r, pe, phi)) r = pe - r;
    value = r;
  }
  if (mod_pow(value, k, pe) == floor_mod(a, pe)) return value;
  if (pe <= 10'000'000) {
    const Natural target = floor_mod(a, pe);
    for (Natural x = 1; x < pe; ++x) {
      if (mod_pow(x, k, pe) == target) return x;
    }
  }
  throw Error("root extraction failed modulo " + to_decimal(pe));
}

// ---------------------------------------------------------------------------
// x^2 - u_n with u_n = F_{3n}/2

/// Odd cover b_t(m_t) (t = 1..24) with primes p_0..p_24 and residues
/// r_0..r_24; p_0 pairs with the leading class 1(2) of the doubled cover.
struct Theorem13Data {
  std::string label;
  CoveringSystem odd_cover;
  std::vector<Natural> primes;
  std::vector<Natural> residues;
  Natural expected_a;
  Natural expected_M;

  std::vector<ResidueClass> prime_classes() const {
    std::vector<ResidueClass> out;
    for (std::size_t t = 0; t < primes.size() && t < residues.size(); ++t) {
      out.push_back(ResidueClass{residues[t], primes[t]});
    }
    return out;
  }

  /// Index of u that x^2 must match modulo p_t: 1 for t = 0, else 2 b_t.
  std::uint64_t target_index(std::size_t t) const {
    return t == 0 ? 1 : 2 * to_u64(normalize(odd_cover.classes[t - 1]).a);
  }

  /// Rank of apparition p_t must have: 2 for t = 0, else 2 m_t.
  std::uint64_t target_rank(std::size_t t) const {
    return t == 0 ? 2 : 2 * to_u64(odd_cover.classes[t - 1].n);
  }
};

struct CheckRow {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct Theorem13Result {
  ResidueClass cls;
  std::vector<CheckRow> rows;

  bool passed() const {
    return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.ok; });
  }
};

/// |x| > 2 for every member of the class, i.e. min(a, M - a) > 2.
inline bool nonzero_guard(const ResidueClass& cls) {
  ResidueClass c = normalize(cls);
  Natural other = c.n - c.a;
  return std::min(c.a, other) > 2;
}

inline Theorem13Result build_theorem13(const Theorem13Data& data) {
  Theorem13Result out;
  auto add = [&](std::string name, bool ok, std::string detail = {}) {
    out.rows.push_back(CheckRow{std::move(name), ok, std::move(detail)});
  };
  const std::size_t count = data.primes.size();
  if (count != data.residues.size() || count != data.odd_cover.classes.size() + 1) {
    throw PreconditionError("expected one prime and residue per doubled-cover class");
  }

  std::set<Natural> distinct(data.primes.begin(), data.primes.end());
  add("moduli are distinct", distinct.size() == count);
  Natural product = 1;
  for (std::size_t t = 0; t < count; ++t) {
    const auto& p = data.primes[t];
    const std::string tag = "t=" + std::to_string(t) + " p=" + to_decimal(p);
    add(tag + " prime", is_probable_prime(p));
    product *= p;

    const std::uint64_t rank_wanted = data.target_rank(t);
    auto rank = rank_of_apparition(kHalfTripleFibonacci, p, rank_wanted);
    add(tag + " rank of apparition " + std::to_string(rank_wanted),
        rank && *rank == rank_wanted && rank_wanted % 4 == 2,
        rank ? "rank " + std::to_string(*rank) : "rank > " + std::to_string(rank_wanted));

    const std::uint64_t idx = data.target_index(t);
    const Natural target = u_term_mod(kHalfTripleFibonacci, idx, p);
    const Natural r = data.residues[t];
    add(tag + " residue^2 ≡ u_" + std::to_string(idx), floor_mod(r * r - target, p) == 0);
  }

  out.cls = crt_combine(data.prime_classes());
  add("a matches", out.cls.a == data.expected_a, to_decimal(out.cls.a));
  add("M matches", out.cls.n == data.expected_M, to_decimal(out.cls.n));
  add("M = product of primes", out.cls.n == product);
  for (std::size_t t = 0; t < count; ++t) {
    const auto& p = data.primes[t];
    const std::uint64_t idx = data.target_index(t);
    const Natural target = u_term_mod(kHalfTripleFibonacci, idx, p);
    add("t=" + std::to_string(t) + " a^2 ≡ u_" + std::to_string(idx) + " (mod " + to_decimal(p) + ")",
        floor_mod(out.cls.a * out.cls.a - target, p) == 0);
  }
  add("|x| > 2 for every member", nonzero_guard(out.cls));
  return out;
}

// ---------------------------------------------------------------------------
// x^m - 2^n over an odd cover

/// One instance of the x^m - 2^n construction. `primes[s]` is a primitive
/// prime divisor of 2^{n_s} - 1 and `companions[s]` a prime in which 2 has
/// order p_s^2. A single exponent m is fixed per instance.
struct Theorem12Instance {
  std::string label;
  CoveringSystem cover;
  std::vector<std::optional<Natural>> primes;
  std::vector<std::optional<Natural>> companions;
  Natural m = 1;
  Natural bound = 1;  // N, with m <= N
};

struct Theorem12Derivation {
  unsigned long L = 0;
  unsigned long two_adic = 0;  // m = 2^two_adic * m0
  Natural m0;
  std::vector<unsigned long> valuations;  // alpha_s
  std::vector<Natural> x_roots;           // x_s^{2^two_adic} ≡ 2 (mod p_s^{alpha_s+2})
  std::vector<std::optional<Natural>> y_roots;  // y_s^{2^two_adic} ≡ 2 (mod q_s)
  std::vector<Natural> exponents;         // b_s
  std::vector<ResidueClass> constraints;
  ResidueClass result;
};

struct Theorem12Options {
  // When false, classes without a companion prime simply omit the q_s
  // constraint; the result then only supports the mod p_s^{alpha_s} part.
  bool require_companions = true;
};

inline Theorem12Derivation derive_theorem12(const Theorem12Instance& inst,
                                            const Theorem12Options& options = {}) {
  const std::size_t k = inst.cover.classes.size();
  if (k == 0) throw PreconditionError("instance has an empty cover");
  if (inst.primes.size() != k || inst.companions.size() != k) {
    throw PreconditionError("instance needs one prime and one companion slot per class");
  }
  if (inst.m < 1 || inst.bound < inst.m) throw PreconditionError("need 1 <= m <= N");

  std::vector<std::size_t> missing_p, missing_q;
  for (std::size_t s = 0; s < k; ++s) {
    if (!inst.primes[s]) missing_p.push_back(s);
    if (!inst.companions[s]) missing_q.push_back(s);
  }
  auto list = [](const std::vector<std::size_t>& v) {
    std::string out;
    for (std::size_t i : v) out += (out.empty() ? "" : ", ") + std::to_string(i);
    return out;
  };
  if (!missing_p.empty()) {
    throw MissingDataError(missing_p, "missing p_s for classes " + list(missing_p));
  }
  if (options.require_companions && !missing_q.empty()) {
    throw MissingDataError(missing_q, "missing q_s for classes " + list(missing_q));
  }

  Theorem12Derivation d;
  d.m0 = inst.m;
  d.two_adic = mpz_scan1(inst.m.get_mpz_t(), 0);
  mpz_fdiv_q_2exp(d.m0.get_mpz_t(), d.m0.get_mpz_t(), d.two_adic);
  const Natural root_degree = Natural(1) << static_cast<mp_bitcnt_t>(d.two_adic);

  std::set<Natural> used;
  Natural threshold = 16 * inst.bound;
  for (std::size_t s = 0; s < k; ++s) {
    const ResidueClass cls = normalize(inst.cover.classes[s]);
    const Natural& p = *inst.primes[s];
    if (p == 2 || !is_primitive_divisor(p, cls.n, factor(cls.n))) {
      throw PreconditionError("class " + std::to_string(s) + ": " + to_decimal(p) +
                              " is not a primitive prime divisor of 2^" + to_decimal(cls.n) + " - 1");
    }
    if (!used.insert(p).second) throw PreconditionError("repeated prime " + to_decimal(p));
    if (const auto& q = inst.companions[s]) {
      const Natural p2 = p * p;
      if (!is_probable_prime(*q) || *q == 2) throw PreconditionError(to_decimal(*q) + " is not an odd prime");
      auto order = order_dividing(2, *q, p2, factor(p2));
      if (!order || *order != p2) {
        throw PreconditionError("class " + std::to_string(s) + ": order of 2 modulo " + to_decimal(*q) +
                                " is not " + to_decimal(p2));
      }
      if (!used.insert(*q).second) throw PreconditionError("repeated prime " + to_decimal(*q));
    }
    const unsigned long alpha = mersenne_valuation(p, cls.n);
    d.valuations.push_back(alpha);
    threshold = std::max(threshold, detail::prime_power(p, alpha + 1));
  }

  d.L = 1;
  while (detail::prime_power(2, d.L) - 1 <= threshold) ++d.L;

  const Natural two_l = detail::prime_power(2, d.L);
  d.constraints.push_back(ResidueClass{1 + 3 * two_l, two_l * two_l});
  for (std::size_t s = 0; s < k; ++s) {
    const ResidueClass cls = normalize(inst.cover.classes[s]);
    const Natural& p = *inst.primes[s];
    const unsigned long e = d.valuations[s] + 2;
    const Natural b = solve_b(d.m0, cls.a, cls.n);
    const Natural x = pow_root_mod_prime_power(root_degree, 2, p, e);
    const Natural pe = detail::prime_power(p, e);
    d.exponents.push_back(b);
    d.x_roots.push_back(x);
    d.constraints.push_back(ResidueClass{mod_pow(x, b, pe), pe});
    if (const auto& q = inst.companions[s]) {
      const Natural y = pow_root_mod_prime_power(root_degree, 2, *q, 1);
      d.y_roots.emplace_back(y);
      d.constraints.push_back(ResidueClass{mod_pow(y, b, *q), *q});
    } else {
      d.y_roots.emplace_back(std::nullopt);
    }
  }
  d.result = crt_combine(d.constraints);
  return d;
}

inline ResidueClass build_theorem12(const Theorem12Instance& inst, const Theorem12Options& options = {}) {
  return derive_theorem12(inst, options).result;
}

// ---------------------------------------------------------------------------
// Divisibility mechanics: x^m - 2^n ≡ 0 (mod p_s^{alpha_s})

struct MechanicsRow {
  std::uint64_t n = 0;
  std::optional<std::size_t> class_index;  // first covering class containing n
  Natural prime;
  unsigned long alpha = 0;
  bool divides = false;       // p_s^{alpha_s} | x^m - 2^n
  bool magnitude_ok = false;  // |x^m - 2^n| > p_s^{alpha_s} for the explicit member x

  bool ok() const { return class_index.has_value() && divides && magnitude_ok; }
};

struct MechanicsReport {
  Natural member;  // the explicit class member used for magnitudes
  std::vector<MechanicsRow> rows;

  std::size_t failures() const {
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [](const MechanicsRow& r) { return !r.ok(); }));
  }
  bool passed() const { return failures() == 0; }
};

/// For each n in [n_first, n_last], picks a covering class s with
/// n ≡ a_s (mod n_s) and confirms x^m ≡ 2^n (mod p_s^{alpha_s}) by modular
/// exponentiation. The magnitude test uses the least positive member x.
inline MechanicsReport check_divisibility_mechanics(const ResidueClass& x_class, const CoveringSystem& cover,
                                                    const std::vector<Natural>& primes, const Natural& m,
                                                    std::uint64_t n_first, std::uint64_t n_last) {
  if (primes.size() != cover.classes.size()) throw PreconditionError("one prime per class required");
  const ResidueClass xc = normalize(x_class);
  MechanicsReport report;
  report.member = xc.a == 0 ? xc.n : xc.a;
  if (!mpz_fits_ulong_p(m.get_mpz_t()) ||
      mpz_sizeinbase(report.member.get_mpz_t(), 2) * mpz_get_ui(m.get_mpz_t()) > (1ul << 24)) {
    throw BudgetExceeded("x^m is too large to compare magnitudes exactly");
  }
  Natural x_pow;
  mpz_pow_ui(x_pow.get_mpz_t(), report.member.get_mpz_t(), mpz_get_ui(m.get_mpz_t()));

  std::vector<unsigned long> alphas;
  std::vector<Natural> prime_powers;
  for (std::size_t s = 0; s < cover.classes.size(); ++s) {
    alphas.push_back(mersenne_valuation(primes[s], cover.classes[s].n));
    prime_powers.push_back(detail::prime_power(primes[s], alphas.back()));
  }

  for (std::uint64_t n = n_first; n <= n_last; ++n) {
    MechanicsRow row;
    row.n = n;
    const Natural nn = from_u64(n);
    for (std::size_t s = 0; s < cover.classes.size(); ++s) {
      if (cover.classes[s].contains(nn)) {
        row.class_index = s;
        break;
      }
    }
    if (row.class_index) {
      const std::size_t s = *row.class_index;
      row.prime = primes[s];
      row.alpha = alphas[s];
      const Natural& pa = prime_powers[s];
      row.divides = alphas[s] >= 1 && (pa == 1 || mod_pow(xc.a, m, pa) == mod_pow(2, nn, pa));
      Natural diff = x_pow - detail::prime_power(2, n);
      row.magnitude_ok = abs(diff) > pa;
    }
    report.rows.push_back(std::move(row));
    if (n == n_last) break;
  }
  return report;
}

}  // namespace coverlab
