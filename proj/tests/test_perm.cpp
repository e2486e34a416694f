#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/perm.hpp"

using namespace dlab;

TEST_CASE("cycle types") {
  CHECK(Perm::from_one_line({1, 2, 3}).cycle_type() == Partition{1, 1, 1});
  CHECK(Perm::from_one_line({2, 1, 3}).cycle_type() == Partition{2, 1});
  // orbit 1 -> 2 -> 3 -> 1
  CHECK(Perm::from_one_line({2, 3, 1}).cycle_type() == Partition{3});
}

TEST_CASE("composition convention and inverse") {
  // (p*q)(i) = p(q(i))
  Perm p = Perm::from_one_line({2, 3, 1});
  Perm q = Perm::from_one_line({2, 1, 3});
  Perm pq = p.compose(q);
  CHECK(pq.one_line() == std::vector<int>{3, 2, 1});
  CHECK(p.compose(p.inverse()).is_identity());
  CHECK(p.inverse().compose(p).is_identity());
}

TEST_CASE("transitivity") {
  Perm id2 = Perm::from_one_line({1, 2});
  Perm sw = Perm::from_one_line({2, 1});
  CHECK_FALSE(is_transitive({id2, id2}));
  CHECK(is_transitive({id2, sw}));
  Perm a = Perm::from_cycles(4, {{1, 2}, {3, 4}});
  Perm b = Perm::from_cycles(4, {{1, 3}, {2, 4}});
  CHECK(is_transitive({a, b}));
  CHECK_THROWS_AS(is_transitive({id2, Perm::from_one_line({1, 2, 3})}), Error);
}

TEST_CASE("genus of a pair") {
  Perm id1 = Perm::from_one_line({1});
  CHECK(genus_of_pair({id1, id1}) == 0);
  Perm c3 = Perm::from_one_line({2, 3, 1});
  CHECK(genus_of_pair({c3, c3}) == 1);
  Perm sw = Perm::from_one_line({2, 1});
  CHECK(genus_of_pair({sw, sw}) == 0);
  Perm id2 = Perm::from_one_line({1, 2});
  CHECK_THROWS_AS(genus_of_pair({id2, id2}), Error);
}

TEST_CASE("conjugacy classes") {
  auto c1 = conjugacy_classes(1);
  REQUIRE(c1.size() == 1);
  CHECK(c1[0].second == 1);

  auto c2 = conjugacy_classes(2);
  REQUIRE(c2.size() == 2);
  for (const auto& [t, n] : c2) CHECK(n == 1);

  auto c3 = conjugacy_classes(3);
  REQUIRE(c3.size() == 3);
  Int total = 0;
  for (const auto& [t, n] : c3) {
    total += n;
    if (t == Partition{3}) CHECK(n == 2);
    if (t == Partition{2, 1}) CHECK(n == 3);
    if (t == Partition{1, 1, 1}) CHECK(n == 1);
  }
  CHECK(total == 6);
}

TEST_CASE("class sizes sum to d! up to d = 9") {
  for (int d = 1; d <= 9; ++d) {
    Int total = 0;
    for (const auto& [t, n] : conjugacy_classes(d)) total += n;
    CHECK(total == factorial(d));
  }
}

TEST_CASE("cycle type is conjugation invariant") {
  // p = (123)(45), conjugate by a few pi in S_5
  Perm p = Perm::from_cycles(5, {{1, 2, 3}, {4, 5}});
  std::vector<int> images{3, 5, 1, 2, 4};
  Perm pi = Perm::from_one_line(images);
  Perm conj = pi.compose(p).compose(pi.inverse());
  CHECK(conj.cycle_type() == p.cycle_type());
}

TEST_CASE("swapping the pair preserves genus") {
  Perm a = Perm::from_cycles(4, {{1, 2, 3, 4}});
  Perm b = Perm::from_cycles(4, {{1, 3}});
  if (is_transitive({a, b})) CHECK(genus_of_pair({a, b}) == genus_of_pair({b, a}));
  // euler characteristic parity for every transitive pair at d = 4
  auto parts = partitions_of(4);
  for (const auto& t0 : parts) {
    Perm s0 = class_representative(t0);
    std::vector<int> img{1, 2, 3, 4};
    do {
      Perm s1 = Perm::from_one_line(img);
      if (!is_transitive({s0, s1})) continue;
      int chi = s0.cycle_count() + s1.cycle_count() + s0.compose(s1).cycle_count() - 4;
      CHECK((2 - chi) % 2 == 0);
      CHECK(chi <= 2);
      CHECK(genus_of_pair({s0, s1}) == genus_of_pair({s1, s0}));
    } while (std::next_permutation(img.begin(), img.end()));
  }
}
