#include <gtest/gtest.h>

#include "coverlab/lucas.hpp"
#include "oracles.hpp"

using namespace coverlab;

TEST(UTerm, Examples) {
  EXPECT_EQ(u_term(kHalfTripleFibonacci, 5), 305);
  EXPECT_EQ(u_term(kHalfTripleFibonacci, 10), 416020);
  EXPECT_EQ(u_term(kHalfTripleFibonacci, 22), Natural("13888945017644"));
  EXPECT_EQ(u_term(kHalfTripleFibonacci, 0), 0);
  EXPECT_EQ(u_term(kHalfTripleFibonacci, 3), 17);
  EXPECT_EQ(u_term(kHalfTripleFibonacci, 6), 1292);
}

TEST(UTermMod, Examples) {
  EXPECT_EQ(u_term_mod(kHalfTripleFibonacci, 8, 31), 27);
  EXPECT_EQ(u_term_mod(kHalfTripleFibonacci, 4, 11), 6);
  EXPECT_EQ(u_term_mod(LucasSpec{7}, 0, 13), 0);
  EXPECT_THROW(u_term_mod(kHalfTripleFibonacci, 4, 1), PreconditionError);
  // 900 - u_22 ≡ 14 (mod 71)
  EXPECT_EQ(floor_mod(900 - u_term_mod(kHalfTripleFibonacci, 22, 71), 71), 14);
}

TEST(UTermMod, AgreesWithExactTerms) {
  for (std::uint64_t c : {1ull, 4ull}) {
    std::vector<Natural> exact;
    for (std::uint64_t n = 0; n <= 500; ++n) exact.push_back(u_term(LucasSpec{c}, n));
    for (std::uint64_t m = 2; m <= 200; ++m) {
      for (std::uint64_t n = 0; n <= 500; ++n) {
        ASSERT_EQ(u_term_mod(LucasSpec{c}, n, from_u64(m)), floor_mod(exact[n], from_u64(m)))
            << "c=" << c << " n=" << n << " m=" << m;
      }
    }
  }
}

TEST(UTermMod, HugeIndex) {
  Natural n = Natural(1) << 200;
  // period of u mod 31 is 10, and 2^200 ≡ 6 (mod 10)
  EXPECT_EQ(u_term_mod(kHalfTripleFibonacci, n, 31), u_term_mod(kHalfTripleFibonacci, 6, 31));
}

TEST(PeriodMod, Examples) {
  EXPECT_EQ(period_mod(kFibonacci, 10).period, 60u);
  EXPECT_EQ(period_mod(kHalfTripleFibonacci, 2).period, 2u);
  EXPECT_EQ(period_mod(kHalfTripleFibonacci, 31).period % 10, 0u);
  EXPECT_THROW(period_mod(kHalfTripleFibonacci, 1), PreconditionError);
}

TEST(PeriodMod, Periodicity) {
  for (std::uint64_t c : {1ull, 4ull}) {
    for (std::uint64_t m = 2; m <= 200; ++m) {
      const std::uint64_t pi = period_mod(LucasSpec{c}, m).period;
      for (std::uint64_t n = 0; n <= 3 * pi; ++n) {
        ASSERT_EQ(oracle::lucas_mod(c, n + pi, m), oracle::lucas_mod(c, n, m)) << c << " " << m;
      }
      // minimality
      for (std::uint64_t k = 1; k < pi; ++k) {
        ASSERT_FALSE(oracle::lucas_mod(c, k, m) == 0 && oracle::lucas_mod(c, k + 1, m) == 1 % m);
      }
    }
  }
}

TEST(RankOfApparition, Examples) {
  EXPECT_EQ(rank_of_apparition(kHalfTripleFibonacci, 19, 1000), 6u);
  EXPECT_EQ(rank_of_apparition(kHalfTripleFibonacci, 29, 1000), 14u);
  EXPECT_EQ(rank_of_apparition(kHalfTripleFibonacci, 2, 10), 2u);
  EXPECT_EQ(rank_of_apparition(kHalfTripleFibonacci, 5779, 10), std::nullopt);
}

TEST(RankOfApparition, PrimitiveDivisorU) {
  EXPECT_TRUE(is_primitive_divisor_u(kHalfTripleFibonacci, 5779, 18));
  EXPECT_TRUE(is_primitive_divisor_u(kHalfTripleFibonacci, 19, 6));
  EXPECT_FALSE(is_primitive_divisor_u(kHalfTripleFibonacci, 17, 6));
}

TEST(RankOfApparition, DivisibilityLadder) {
  for (std::uint64_t p : oracle::primes_below(100)) {
    for (std::uint64_t c : {1ull, 4ull}) {
      auto rank = rank_of_apparition(LucasSpec{c}, from_u64(p), 1000);
      ASSERT_TRUE(rank) << p;
      for (std::uint64_t n = 1; n <= 300; ++n) {
        EXPECT_EQ(oracle::lucas_mod(c, n, p) == 0, n % *rank == 0) << "p=" << p << " n=" << n;
      }
    }
  }
}

TEST(Fibonacci, Examples) {
  EXPECT_EQ(fibonacci(12), 144);
  EXPECT_EQ(fibonacci(6), 8);
  for (std::uint64_t n = 0; n <= 200; ++n) EXPECT_TRUE(check_u_identity(n)) << n;
}

TEST(LucasPeriodicity, Examples) {
  EXPECT_TRUE(lemma41_check(kFibonacci, 10, 11, 5));
  EXPECT_TRUE(lemma41_check(kHalfTripleFibonacci, 10, 31, 5));
  EXPECT_THROW(lemma41_check(kHalfTripleFibonacci, 4, 3, 5), PreconditionError);
  EXPECT_THROW(lemma41_check(kHalfTripleFibonacci, 10, 15, 5), PreconditionError);
  // 17 | u_3 divides u_6 but is not primitive for 6
  EXPECT_THROW(lemma41_check(kHalfTripleFibonacci, 6, 17, 5), PreconditionError);
  // 7 never divides u_10
  EXPECT_THROW(lemma41_check(kHalfTripleFibonacci, 10, 7, 5), PreconditionError);
}

TEST(LucasPeriodicity, PropertySuite) {
  const auto primes = oracle::primes_below(1'000'000);
  std::size_t checked = 0;
  for (std::uint64_t c = 1; c <= 6; ++c) {
    for (std::uint64_t n : {2ull, 6ull, 10ull, 14ull}) {
      const Natural un = u_term(LucasSpec{c}, n);
      for (std::uint64_t p : primes) {
        if (!mpz_divisible_ui_p(un.get_mpz_t(), p)) continue;
        if (!is_primitive_divisor_u(LucasSpec{c}, from_u64(p), n)) continue;
        EXPECT_TRUE(lemma41_check(LucasSpec{c}, n, from_u64(p), 5)) << "c=" << c << " n=" << n << " p=" << p;
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 20u);
}
