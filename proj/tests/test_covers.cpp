#include <gtest/gtest.h>

#include <random>

#include "coverlab/covers.hpp"
#include "coverlab/io.hpp"
#include "oracles.hpp"

using namespace coverlab;

namespace {

std::string asset(const std::string& name) { return std::string(COVERLAB_ASSET_DIR) + "/" + name; }

// Direct membership: does some class contain x?
bool covered(const CoveringSystem& s, std::uint64_t x) {
  for (const auto& c : s.classes) {
    if (c.contains(from_u64(x))) return true;
  }
  return false;
}

}  // namespace

TEST(Normalize, Examples) {
  EXPECT_EQ(normalize({583939, 675675}), (ResidueClass{583939, 675675}));
  EXPECT_EQ(normalize({7, 3}), (ResidueClass{1, 3}));
  EXPECT_EQ(normalize({0, 1}), (ResidueClass{0, 1}));
  EXPECT_EQ(normalize({-1, 5}), (ResidueClass{4, 5}));
  EXPECT_THROW(normalize({1, 0}), PreconditionError);
}

TEST(Normalize, IdempotentAndPreservesMembership) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    ResidueClass c{Integer(static_cast<long>(rng() % 2000)) - 1000, 1 + rng() % 50};
    ResidueClass n1 = normalize(c);
    EXPECT_EQ(normalize(n1), n1);
    for (long x = -60; x < 60; ++x) EXPECT_EQ(c.contains(x), n1.contains(x));
  }
}

TEST(VerifyCover, ErdosCover) {
  CoveringSystem a0{"A0", {{0, 2}, {0, 3}, {1, 4}, {3, 8}, {7, 12}, {23, 24}}};
  CoverReport r = verify_cover(a0);
  EXPECT_TRUE(r.is_cover);
  EXPECT_EQ(r.lcm, 24);
  EXPECT_FALSE(r.uncovered_witness);
  EXPECT_GE(r.min_multiplicity, 1u);
}

TEST(VerifyCover, A1Asset) {
  CoveringSystem a1 = io::load_cover(asset("A1.json"));
  ASSERT_EQ(a1.classes.size(), 173u);
  CoverReport r = verify_cover(a1);
  EXPECT_TRUE(r.is_cover);
  EXPECT_EQ(r.lcm, 675675);
  EXPECT_EQ(r.modulus_multiplicities.at(11), 2u);
  EXPECT_EQ(r.modulus_multiplicities.at(675675), 1u);
  EXPECT_EQ(a1.classes.back(), (ResidueClass{583939, 675675}));
  for (const auto& c : a1.classes) EXPECT_TRUE(mpz_odd_p(c.n.get_mpz_t()));
}

TEST(VerifyCover, NonCoverWitness) {
  CoverReport r = verify_cover(CoveringSystem{"x", {{0, 3}, {1, 3}}});
  EXPECT_FALSE(r.is_cover);
  EXPECT_EQ(r.uncovered_witness, Natural(2));
  EXPECT_EQ(r.min_multiplicity, 0u);
}

TEST(VerifyCover, Errors) {
  EXPECT_THROW(verify_cover(CoveringSystem{"empty", {}}), PreconditionError);
  CoveringSystem big{"big", {{0, 1000003}, {0, 1000033}}};
  try {
    verify_cover(big, 1000);
    FAIL();
  } catch (const BudgetExceeded& e) {
    EXPECT_NE(std::string(e.what()).find("1000036000099"), std::string::npos);
  }
}

TEST(VerifyCover, AgreesWithDirectMembership) {
  const std::vector<std::uint64_t> kDivisors{1, 2, 3, 4, 5, 6, 8, 9, 10, 12, 15, 16, 18, 20, 24};
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 400; ++trial) {
    CoveringSystem s{"random", {}};
    const int k = 1 + static_cast<int>(rng() % 7);
    for (int i = 0; i < k; ++i) {
      std::uint64_t n = kDivisors[rng() % kDivisors.size()];
      s.classes.push_back(ResidueClass{from_u64(rng() % 100), from_u64(n)});
    }
    CoverReport r = verify_cover(s);
    ASSERT_LE(r.lcm, 720);
    std::optional<std::uint64_t> first_gap;
    std::uint64_t lo = UINT64_MAX, hi = 0;
    for (std::uint64_t x = 0; x < to_u64(r.lcm); ++x) {
      std::uint64_t hits = 0;
      for (const auto& c : s.classes) hits += c.contains(from_u64(x)) ? 1 : 0;
      if (!hits && !first_gap) first_gap = x;
      lo = std::min(lo, hits);
      hi = std::max(hi, hits);
    }
    EXPECT_EQ(r.is_cover, !first_gap.has_value());
    if (first_gap) {
      EXPECT_EQ(r.uncovered_witness, from_u64(*first_gap));
    }
    EXPECT_EQ(r.min_multiplicity, lo);
    EXPECT_EQ(r.max_multiplicity, hi);
  }
}

TEST(ModulusMultiplicity, Examples) {
  auto m = modulus_multiplicity(CoveringSystem{"x", {{0, 2}, {1, 2}}});
  EXPECT_EQ(m.size(), 1u);
  EXPECT_EQ(m.at(2), 2u);
}

TEST(DoubledCover, Examples) {
  CoveringSystem one = build_doubled_cover(CoveringSystem{"u", {{0, 1}}});
  EXPECT_EQ(one.classes, (std::vector<ResidueClass>{{1, 2}, {0, 2}}));

  CoveringSystem partial = build_doubled_cover(CoveringSystem{"p", {{1, 3}}});
  EXPECT_EQ(partial.classes, (std::vector<ResidueClass>{{1, 2}, {2, 6}}));
  CoverReport r = verify_cover(partial);
  EXPECT_FALSE(r.is_cover);
  EXPECT_EQ(r.uncovered_witness, Natural(0));

  EXPECT_THROW(build_doubled_cover(CoveringSystem{"e", {{0, 4}}}), PreconditionError);
}

TEST(DoubledCover, CoverB) {
  CoveringSystem odd = io::load_cover(asset("B_odd.json"));
  ASSERT_EQ(odd.classes.size(), 24u);
  EXPECT_TRUE(verify_cover(odd).is_cover);
  CoveringSystem b = build_doubled_cover(odd);
  ASSERT_EQ(b.classes.size(), 25u);
  CoverReport r = verify_cover(b);
  EXPECT_TRUE(r.is_cover);
  EXPECT_EQ(r.lcm, 630);
  for (std::size_t i = 1; i < b.classes.size(); ++i) EXPECT_EQ(floor_mod(b.classes[i].n, 4), 2);
}

TEST(DoubledCover, MembershipMatchesDefinition) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    CoveringSystem odd{"odd", {}};
    for (int i = 0; i < 4; ++i) {
      std::uint64_t n = 2 * (rng() % 8) + 1;
      odd.classes.push_back(ResidueClass{from_u64(rng() % n), from_u64(n)});
    }
    CoveringSystem b = build_doubled_cover(odd);
    std::uint64_t period = to_u64(lcm_list(b.moduli()));
    for (std::uint64_t x = 0; x < period; ++x) {
      bool expected = (x % 2 == 1) || covered(odd, x / 2);
      ASSERT_EQ(covered(b, x), expected) << x;
    }
  }
}
