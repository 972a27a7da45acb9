#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "photonfilter/subset.hpp"

using namespace pf;

TEST_CASE("rank examples") {
  CHECK(subset_rank(SubsetIndex::from_members(4, {})) == 1);
  CHECK(subset_rank(SubsetIndex::from_members(4, {1})) == 2);
  CHECK(subset_rank(SubsetIndex::from_members(4, {2, 3, 4})) == 15);
  CHECK(subset_rank(SubsetIndex::from_members(4, {1, 2, 3, 4})) == 16);
  CHECK(subset_rank(SubsetIndex::from_members(2, {1, 2})) == 4);
}

TEST_CASE("enumeration is the inverse of ranking, n <= 6") {
  for (int n = 0; n <= 6; ++n) {
    const auto subs = enumerate_subsets(n);
    REQUIRE(static_cast<int>(subs.size()) == 1 << n);
    for (int m = 1; m <= static_cast<int>(subs.size()); ++m) {
      CHECK(subset_rank(subs[m - 1]) == m);
      CHECK(subs[m - 1].n == n);
    }
    // Size-then-lexicographic order: sizes never decrease, ties ordered by members.
    for (std::size_t i = 1; i < subs.size(); ++i) {
      const int ka = subs[i - 1].k(), kb = subs[i].k();
      CHECK(ka <= kb);
      if (ka == kb) CHECK(subs[i - 1].members() < subs[i].members());
    }
  }
}

TEST_CASE("members round-trip through bitmask") {
  const SubsetIndex s = SubsetIndex::from_members(5, {2, 3, 5});
  CHECK(s.bits == 0b10110u);
  CHECK(s.k() == 3);
  CHECK(s.members() == std::vector<int>{2, 3, 5});
}

TEST_CASE("from_members validates input") {
  CHECK_THROWS_AS(SubsetIndex::from_members(3, {0}), std::invalid_argument);
  CHECK_THROWS_AS(SubsetIndex::from_members(3, {4}), std::invalid_argument);
  CHECK_THROWS_AS(SubsetIndex::from_members(3, {2, 2}), std::invalid_argument);
}

TEST_CASE("complement") {
  CHECK(complement_bits(4, 0b0101u) == 0b1010u);
  CHECK(complement_bits(3, 0u) == 0b111u);
  CHECK(complement_bits(0, 0u) == 0u);
}
